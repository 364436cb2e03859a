#include "eco/cpg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "eco/errors.hpp"

namespace eco {

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Token {
    enum Kind { Ident, Keyword, Number, String, CharLit, Punct, End } kind = End;
    std::string text;
    int line = 0;
    int col = 0;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {
        "alignas", "alignof", "auto", "bool", "break", "case", "catch", "char",
        "class", "const", "constexpr", "continue", "default", "delete", "do",
        "double", "else", "enum", "explicit", "extern", "false", "float", "for",
        "friend", "goto", "if", "inline", "int", "long", "mutable", "namespace",
        "new", "noexcept", "nullptr", "operator", "private", "protected",
        "public", "register", "return", "short", "signed", "sizeof", "static",
        "struct", "switch", "template", "this", "throw", "true", "try",
        "typedef", "typename", "union", "unsigned", "using", "virtual", "void",
        "volatile", "while"};
    return kw;
}

const std::set<std::string>& type_keywords() {
    static const std::set<std::string> kw = {
        "auto", "bool", "char", "const", "constexpr", "double", "extern",
        "float", "inline", "int", "long", "register", "short", "signed",
        "static", "unsigned", "void", "volatile"};
    return kw;
}

const std::set<std::string>& std_type_names() {
    static const std::set<std::string> t = {
        "array", "bitset", "deque", "list", "map", "multimap", "multiset",
        "pair", "priority_queue", "queue", "set", "size_t", "stack", "string",
        "stringstream", "istringstream", "ostringstream", "tuple",
        "unordered_map", "unordered_set", "vector"};
    return t;
}

const std::set<std::string>& container_type_names() {
    static const std::set<std::string> t = {
        "array", "bitset", "deque", "list", "map", "multimap", "multiset",
        "priority_queue", "queue", "set", "stack", "string", "unordered_map",
        "unordered_set", "vector"};
    return t;
}

// Identifiers that name stream objects or manipulators, never variables.
const std::set<std::string>& ignored_idents() {
    static const std::set<std::string> t = {"std",  "cin",  "cout", "cerr",
                                            "clog", "endl", "ends", "flush"};
    return t;
}

const std::set<std::string>& assign_ops() {
    static const std::set<std::string> t = {"=",  "+=", "-=",  "*=",  "/=",
                                            "%=", "&=", "|=",  "^=",  "<<=",
                                            ">>="};
    return t;
}

bool is_multi_punct(const std::string& s) {
    static const std::set<std::string> t = {
        "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
        "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=",
        "->*", "...", ".*"};
    return t.count(s) > 0;
}

class Lexer {
public:
    Lexer(const std::string& text, bool strict) : text_(text), strict_(strict) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                at_line_start_ = true;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (c == '#' && at_line_start_) {
                skip_preprocessor();
                continue;
            }
            at_line_start_ = false;
            if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                skip_block_comment();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(lex_ident());
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                out.push_back(lex_number());
                continue;
            }
            if (c == '"') {
                out.push_back(lex_string('"', Token::String));
                continue;
            }
            if (c == '\'') {
                out.push_back(lex_string('\'', Token::CharLit));
                continue;
            }
            out.push_back(lex_punct());
        }
        out.push_back({Token::End, "", line_, col_});
        return out;
    }

private:
    char peek(size_t off) const {
        return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
    }
    void advance() {
        ++pos_;
        ++col_;
    }

    void skip_preprocessor() {
        while (pos_ < text_.size()) {
            if (text_[pos_] == '\\' && peek(1) == '\n') {
                pos_ += 2;
                ++line_;
                col_ = 1;
                continue;
            }
            if (text_[pos_] == '\n') break;
            advance();
        }
    }

    void skip_block_comment() {
        pos_ += 2;
        col_ += 2;
        while (pos_ < text_.size()) {
            if (text_[pos_] == '*' && peek(1) == '/') {
                pos_ += 2;
                col_ += 2;
                return;
            }
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else {
                advance();
            }
        }
        if (strict_) throw ParseError("unterminated comment", line_, col_);
    }

    Token lex_ident() {
        Token t{Token::Ident, "", line_, col_};
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
            t.text += text_[pos_];
            advance();
        }
        if (keywords().count(t.text)) t.kind = Token::Keyword;
        return t;
    }

    Token lex_number() {
        Token t{Token::Number, "", line_, col_};
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '.' ||
                ((text_[pos_] == '+' || text_[pos_] == '-') && !t.text.empty() &&
                 (t.text.back() == 'e' || t.text.back() == 'E')))) {
            t.text += text_[pos_];
            advance();
        }
        return t;
    }

    Token lex_string(char quote, Token::Kind kind) {
        Token t{kind, "", line_, col_};
        t.text += quote;
        advance();
        while (pos_ < text_.size() && text_[pos_] != quote) {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                t.text += text_[pos_];
                advance();
            }
            if (text_[pos_] == '\n') {
                if (strict_) throw ParseError("unterminated literal", line_, col_);
                return t;
            }
            t.text += text_[pos_];
            advance();
        }
        if (pos_ < text_.size()) {
            t.text += quote;
            advance();
        } else if (strict_) {
            throw ParseError("unterminated literal", line_, col_);
        }
        return t;
    }

    Token lex_punct() {
        Token t{Token::Punct, "", line_, col_};
        for (size_t len = 3; len >= 2; --len) {
            if (pos_ + len <= text_.size()) {
                std::string s = text_.substr(pos_, len);
                if (is_multi_punct(s)) {
                    t.text = s;
                    pos_ += len;
                    col_ += static_cast<int>(len);
                    return t;
                }
            }
        }
        t.text = text_[pos_];
        advance();
        return t;
    }

    const std::string& text_;
    bool strict_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    bool at_line_start_ = true;
};

}  // namespace

// ---------------------------------------------------------------------------
// Builder

class CpgBuilder {
public:
    CpgBuilder(const SourceUnit& src, const ParseOptions& opts)
        : src_(src), strict_(opts.strict) {}

    CodePropertyGraph build() {
        g_.line_count_ = src_.line_count;
        toks_ = Lexer(src_.text, strict_).run();
        n_ = toks_.size() - 1;  // exclude End
        parse_translation_unit();
        finalize();
        return std::move(g_);
    }

private:
    struct StmtRecord {
        LoopStatement stmt;
        bool active = false;
    };

    struct Context {
        int method = -1;
        std::vector<int> loop_stack;
        LoopStatement* current = nullptr;
    };

    const Token& tok(size_t i) const { return i < toks_.size() ? toks_[i] : toks_.back(); }
    bool is_punct(size_t i, const char* s) const {
        return tok(i).kind == Token::Punct && tok(i).text == s;
    }
    bool is_kw(size_t i, const char* s) const {
        return tok(i).kind == Token::Keyword && tok(i).text == s;
    }

    [[noreturn]] void fail(const std::string& msg, size_t i) const {
        throw ParseError(msg, tok(i).line, tok(i).col);
    }

    void warn(const std::string& msg, size_t i) {
        g_.warnings_.push_back("line " + std::to_string(tok(i).line) + ": " + msg);
    }

    // Matching bracket for toks_[open]; returns index of the closer, or n_ on
    // failure (after throwing in strict mode).
    size_t match(size_t open) {
        const std::string& o = tok(open).text;
        std::string c = o == "(" ? ")" : o == "[" ? "]" : "}";
        int depth = 0;
        for (size_t i = open; i < n_; ++i) {
            if (tok(i).kind != Token::Punct) continue;
            if (tok(i).text == o) ++depth;
            else if (tok(i).text == c && --depth == 0) return i;
        }
        if (strict_) fail("unmatched '" + o + "'", open);
        warn("unmatched '" + o + "', skipping rest of region", open);
        return n_;
    }

    // End of a generic statement starting at i: index of the terminating ';'
    // at bracket depth zero (or n_ if none).
    size_t statement_end(size_t i) {
        int depth = 0;
        bool saw_brace = false;
        for (; i < n_; ++i) {
            const Token& t = tok(i);
            if (t.kind != Token::Punct) continue;
            if (t.text == "(" || t.text == "[" || t.text == "{") {
                ++depth;
                if (t.text == "{") saw_brace = true;
            } else if (t.text == ")" || t.text == "]" || t.text == "}") {
                --depth;
            } else if (t.text == ";" && depth <= 0) {
                if (saw_brace) warn("brace-enclosed construct treated as one statement", i);
                return i;
            }
        }
        return n_;
    }

    // -----------------------------------------------------------------------
    // Top level

    void parse_translation_unit() {
        struct Segment {
            size_t lo, hi;     // token range, hi exclusive
            bool executable;
        };
        std::vector<Segment> stmts;
        std::vector<std::pair<size_t, size_t>> functions;  // header lo, body close

        size_t i = 0;
        while (i < n_) {
            if (is_punct(i, ";")) {
                ++i;
                continue;
            }
            if (is_kw(i, "using") || is_kw(i, "typedef")) {
                i = statement_end(i) + 1;
                continue;
            }
            if (is_kw(i, "template")) {
                warn("templates are outside the supported subset, skipping item", i);
                ++i;
                if (is_punct(i, "<")) i = skip_angles(i);
                i = skip_item(i);
                continue;
            }
            if (is_kw(i, "struct") || is_kw(i, "class") || is_kw(i, "union") ||
                is_kw(i, "enum")) {
                size_t j = i + 1;
                while (j < n_ && !is_punct(j, "{") && !is_punct(j, ";")) ++j;
                if (is_punct(j, "{")) {
                    warn("user-defined type bodies are not analyzed", i);
                    j = match(j);
                }
                i = statement_end(j) + 1;
                continue;
            }
            size_t fn_end;
            if (try_parse_function(i, fn_end)) {
                i = fn_end + 1;
                continue;
            }
            // Top-level statement or declaration.
            size_t lo = i;
            size_t hi;
            if (tok(i).kind == Token::Keyword &&
                (tok(i).text == "for" || tok(i).text == "while" ||
                 tok(i).text == "do" || tok(i).text == "if" ||
                 tok(i).text == "switch")) {
                hi = construct_extent(i);
                stmts.push_back({lo, hi, true});
            } else {
                hi = statement_end(i) + 1;
                stmts.push_back({lo, hi, segment_executable(lo, hi)});
            }
            i = hi;
        }

        // Implicit scope for executable file-level statements.
        int top_id = -1;
        int first = 0, last = 0;
        for (const auto& s : stmts) {
            if (!s.executable) continue;
            int a = tok(s.lo).line;
            int b = tok(s.hi > s.lo ? s.hi - 1 : s.lo).line;
            if (top_id == -1) {
                first = a;
                last = b;
                top_id = 0;  // placeholder, assigned below
            } else {
                first = std::min(first, a);
                last = std::max(last, b);
            }
        }
        if (top_id != -1) {
            MethodNode m;
            m.id = static_cast<int>(g_.methods_.size());
            m.name = "<toplevel>";
            m.span = {first, last};
            m.synthetic = true;
            g_.methods_.push_back(m);
            top_id = m.id;
        }

        for (const auto& s : stmts) {
            Context ctx;
            ctx.method = s.executable ? top_id : -1;
            parse_items(s.lo, s.hi, ctx, nullptr);
        }
    }

    bool segment_executable(size_t lo, size_t hi) const {
        // A pure declaration with a call-free initializer stays at file scope;
        // anything with a call, stream op, or assignment-only statement needs
        // the implicit top-level scope.
        if (!looks_like_decl(lo, hi)) return true;
        for (size_t i = lo; i + 1 < hi; ++i)
            if (tok(i).kind == Token::Ident && is_punct(i + 1, "(")) return true;
        return false;
    }

    size_t skip_angles(size_t i) {
        // i at '<'; returns index after the matching '>'.
        int depth = 0;
        for (; i < n_; ++i) {
            if (is_punct(i, "<")) ++depth;
            else if (is_punct(i, ">")) {
                if (--depth == 0) return i + 1;
            } else if (is_punct(i, ">>")) {
                depth -= 2;
                if (depth <= 0) return i + 1;
            } else if (is_punct(i, ";") || is_punct(i, "{")) {
                return i;
            }
        }
        return i;
    }

    size_t skip_item(size_t i) {
        // Skip a declaration or definition: to ';' or through a brace body.
        while (i < n_) {
            if (is_punct(i, ";")) return i + 1;
            if (is_punct(i, "{")) return match(i) + 1;
            ++i;
        }
        return i;
    }

    size_t construct_extent(size_t i) {
        // Full extent of a control construct starting at i (exclusive end).
        const std::string& kw = tok(i).text;
        size_t j = i + 1;
        if (kw == "do") {
            if (is_punct(j, "{")) j = match(j) + 1;
            else j = statement_end(j) + 1;
            if (is_kw(j, "while")) {
                if (is_punct(j + 1, "(")) j = match(j + 1) + 1;
            }
            return statement_end(j) + 1;
        }
        if (is_punct(j, "(")) j = match(j) + 1;
        if (is_punct(j, "{")) return match(j) + 1;
        if (tok(j).kind == Token::Keyword &&
            (tok(j).text == "for" || tok(j).text == "while" ||
             tok(j).text == "do" || tok(j).text == "if" ||
             tok(j).text == "switch"))
            j = construct_extent(j);
        else
            j = statement_end(j) + 1;
        if (kw == "if" && is_kw(j, "else")) {
            size_t k = j + 1;
            if (is_punct(k, "{")) return match(k) + 1;
            if (tok(k).kind == Token::Keyword &&
                (tok(k).text == "if" || tok(k).text == "for" ||
                 tok(k).text == "while" || tok(k).text == "do" ||
                 tok(k).text == "switch"))
                return construct_extent(k);
            return statement_end(k) + 1;
        }
        return j;
    }

    // -----------------------------------------------------------------------
    // Functions

    bool try_parse_function(size_t i, size_t& end_out) {
        size_t j = i;
        bool saw_type = false;
        int name_idx = -1;
        while (j < n_) {
            const Token& t = tok(j);
            if (t.kind == Token::Keyword) {
                if (!type_keywords().count(t.text)) return false;
                saw_type = true;
                ++j;
                continue;
            }
            if (t.kind == Token::Ident) {
                if (is_punct(j + 1, "::")) {
                    j += 2;
                    continue;
                }
                if (is_punct(j + 1, "<") && std_type_names().count(t.text)) {
                    saw_type = true;
                    j = skip_angles(j + 1);
                    continue;
                }
                if (is_punct(j + 1, "(")) {
                    name_idx = static_cast<int>(j);
                    break;
                }
                // type name followed by more tokens
                saw_type = true;
                ++j;
                continue;
            }
            if (t.kind == Token::Punct && (t.text == "*" || t.text == "&")) {
                ++j;
                continue;
            }
            return false;
        }
        if (name_idx < 0 || !saw_type) return false;
        size_t open = name_idx + 1;
        size_t close = match(open);
        size_t k = close + 1;
        while (is_kw(k, "const") || is_kw(k, "noexcept")) ++k;
        if (!is_punct(k, "{")) return false;
        size_t body_close = match(k);

        MethodNode m;
        m.id = static_cast<int>(g_.methods_.size());
        m.name = tok(name_idx).text;
        m.span = {tok(i).line, tok(body_close).line};
        // Parameter names: last identifier of each comma-separated group.
        int depth = 0;
        int last_ident = -1;
        for (size_t p = open; p <= close; ++p) {
            if (is_punct(p, "(") || is_punct(p, "[")) ++depth;
            else if (is_punct(p, ")") || is_punct(p, "]")) {
                --depth;
                if (depth == 0 && last_ident >= 0)
                    m.parameters.push_back(tok(last_ident).text);
            } else if (depth == 1 && is_punct(p, ",")) {
                if (last_ident >= 0) m.parameters.push_back(tok(last_ident).text);
                last_ident = -1;
            } else if (depth == 1 && tok(p).kind == Token::Ident &&
                       !is_punct(p + 1, "::") && !std_type_names().count(tok(p).text)) {
                last_ident = static_cast<int>(p);
            }
        }
        g_.methods_.push_back(m);

        Context ctx;
        ctx.method = m.id;
        parse_items(k + 1, body_close, ctx, nullptr);
        end_out = body_close;
        return true;
    }

    // -----------------------------------------------------------------------
    // Statements

    // Parse a run of statements in [lo, hi). When record_loop is non-null,
    // each direct statement is appended to that loop's body_statements.
    void parse_items(size_t lo, size_t hi, Context& ctx, LoopScope* record_loop) {
        size_t i = lo;
        while (i < hi && i < n_) {
            if (record_loop) {
                LoopStatement rec;
                size_t before = i;
                LoopStatement* prev = ctx.current;
                ctx.current = &rec;
                i = parse_one(i, hi, ctx);
                ctx.current = prev;
                if (i > before) {
                    rec.span = {tok(before).line, tok(i - 1 < n_ ? i - 1 : before).line};
                    record_loop->body_statements.push_back(std::move(rec));
                }
            } else {
                i = parse_one(i, hi, ctx);
            }
        }
    }

    // Parse one statement/construct starting at i; returns index after it.
    size_t parse_one(size_t i, size_t hi, Context& ctx) {
        if (i >= hi || i >= n_) return hi;
        if (is_punct(i, ";")) return i + 1;
        if (is_punct(i, "{")) {
            size_t m = match(i);
            parse_items(i + 1, std::min(m, hi), ctx, nullptr);
            return m + 1;
        }
        const Token& t = tok(i);
        if (t.kind == Token::Keyword) {
            const std::string& kw = t.text;
            if (kw == "for") return parse_for(i, ctx);
            if (kw == "while") return parse_while(i, ctx);
            if (kw == "do") return parse_do(i, ctx);
            if (kw == "if") return parse_if(i, hi, ctx);
            if (kw == "switch") return parse_switch(i, ctx);
            if (kw == "return") {
                size_t e = statement_end(i);
                analyze_expr(i + 1, e, ctx);
                return e + 1;
            }
            if (kw == "break" || kw == "continue" || kw == "goto")
                return statement_end(i) + 1;
            if (kw == "case") {
                size_t j = i;
                while (j < hi && !is_punct(j, ":")) ++j;
                return j + 1;
            }
            if (kw == "default") return is_punct(i + 1, ":") ? i + 2 : i + 1;
            if (kw == "using" || kw == "typedef") return statement_end(i) + 1;
            if (kw == "struct" || kw == "class" || kw == "union" || kw == "enum") {
                warn("user-defined type bodies are not analyzed", i);
                return skip_item(i);
            }
            if (kw == "else") return i + 1;  // dangling; tolerated
        }
        size_t e = statement_end(i);
        analyze_statement(i, e, ctx);
        if (ctx.current) ctx.current->span = {tok(i).line, tok(e < n_ ? e : i).line};
        return e + 1;
    }

    // Body of a loop or branch: single statement or block.
    size_t parse_substatement(size_t i, Context& ctx, LoopScope* record_loop) {
        if (is_punct(i, "{")) {
            size_t m = match(i);
            parse_items(i + 1, m, ctx, record_loop);
            return m + 1;
        }
        if (record_loop) {
            LoopStatement rec;
            size_t before = i;
            LoopStatement* prev = ctx.current;
            ctx.current = &rec;
            size_t after = parse_one(i, n_, ctx);
            ctx.current = prev;
            rec.span = {tok(before).line, tok(after > before ? after - 1 : before).line};
            record_loop->body_statements.push_back(std::move(rec));
            return after;
        }
        return parse_one(i, n_, ctx);
    }

    LoopScope* open_loop(size_t i, Context& ctx) {
        LoopScope loop;
        loop.id = static_cast<int>(g_.loops_.size());
        loop.parent = ctx.loop_stack.empty() ? -1 : ctx.loop_stack.back();
        loop.method = ctx.method;
        loop.span = {tok(i).line, tok(i).line};
        g_.loops_.push_back(loop);
        ctx.loop_stack.push_back(loop.id);
        return &g_.loops_.back();
    }

    void close_loop(Context& ctx, int loop_id, int end_line) {
        g_.loops_[loop_id].span.end_line =
            std::max(g_.loops_[loop_id].span.start_line, end_line);
        ctx.loop_stack.pop_back();
    }

    size_t parse_for(size_t i, Context& ctx) {
        size_t open = i + 1;
        if (!is_punct(open, "(")) {
            if (strict_) fail("expected '(' after for", i);
            warn("malformed for, skipping", i);
            return statement_end(i) + 1;
        }
        size_t close = match(open);
        LoopScope* loop = open_loop(i, ctx);
        int id = loop->id;
        // init; cond; step
        std::vector<std::pair<size_t, size_t>> parts;
        size_t start = open + 1;
        int depth = 0;
        for (size_t j = open + 1; j < close; ++j) {
            if (is_punct(j, "(") || is_punct(j, "[")) ++depth;
            else if (is_punct(j, ")") || is_punct(j, "]")) --depth;
            else if (depth == 0 && is_punct(j, ";")) {
                parts.push_back({start, j});
                start = j + 1;
            }
        }
        parts.push_back({start, close});
        if (!parts.empty()) analyze_statement(parts[0].first, parts[0].second, ctx);
        for (size_t p = 1; p < parts.size(); ++p)
            analyze_expr(parts[p].first, parts[p].second, ctx);
        size_t after = parse_substatement(close + 1, ctx, &g_.loops_[id]);
        close_loop(ctx, id, tok(after > 0 ? after - 1 : close).line);
        return after;
    }

    size_t parse_while(size_t i, Context& ctx) {
        size_t open = i + 1;
        if (!is_punct(open, "(")) {
            if (strict_) fail("expected '(' after while", i);
            warn("malformed while, skipping", i);
            return statement_end(i) + 1;
        }
        size_t close = match(open);
        LoopScope* loop = open_loop(i, ctx);
        int id = loop->id;
        analyze_expr(open + 1, close, ctx);
        size_t after = parse_substatement(close + 1, ctx, &g_.loops_[id]);
        close_loop(ctx, id, tok(after > 0 ? after - 1 : close).line);
        return after;
    }

    size_t parse_do(size_t i, Context& ctx) {
        LoopScope* loop = open_loop(i, ctx);
        int id = loop->id;
        size_t after = parse_substatement(i + 1, ctx, &g_.loops_[id]);
        size_t end = after;
        if (is_kw(after, "while") && is_punct(after + 1, "(")) {
            size_t close = match(after + 1);
            analyze_expr(after + 2, close, ctx);
            end = is_punct(close + 1, ";") ? close + 1 : close;
        }
        close_loop(ctx, id, tok(end).line);
        return end + 1;
    }

    size_t parse_if(size_t i, size_t hi, Context& ctx) {
        size_t open = i + 1;
        if (!is_punct(open, "(")) {
            if (strict_) fail("expected '(' after if", i);
            warn("malformed if, skipping", i);
            return statement_end(i) + 1;
        }
        size_t close = match(open);
        analyze_expr(open + 1, close, ctx);
        size_t after = parse_substatement(close + 1, ctx, nullptr);
        if (after < hi && is_kw(after, "else"))
            after = parse_substatement(after + 1, ctx, nullptr);
        return after;
    }

    size_t parse_switch(size_t i, Context& ctx) {
        size_t open = i + 1;
        if (!is_punct(open, "(")) return statement_end(i) + 1;
        size_t close = match(open);
        analyze_expr(open + 1, close, ctx);
        return parse_substatement(close + 1, ctx, nullptr);
    }

    // -----------------------------------------------------------------------
    // Statement analysis

    void analyze_statement(size_t lo, size_t hi, Context& ctx) {
        if (lo >= hi) return;
        int stream = stream_kind(lo, hi);
        if (stream != 0) {
            analyze_stream(lo, hi, ctx, stream);
            return;
        }
        if (looks_like_decl(lo, hi)) {
            analyze_declaration(lo, hi, ctx);
            return;
        }
        analyze_expr(lo, hi, ctx);
    }

    // 1 = cin extraction, 2 = cout/cerr insertion, 0 = neither.
    int stream_kind(size_t lo, size_t hi) const {
        int depth = 0;
        for (size_t i = lo; i < hi; ++i) {
            if (is_punct(i, "(") || is_punct(i, "[")) ++depth;
            else if (is_punct(i, ")") || is_punct(i, "]")) --depth;
            else if (depth == 0 && tok(i).kind == Token::Ident) {
                size_t nx = i + 1;
                if (tok(i).text == "cin" && is_punct(nx, ">>")) return 1;
                if ((tok(i).text == "cout" || tok(i).text == "cerr") &&
                    is_punct(nx, "<<"))
                    return 2;
            }
        }
        return 0;
    }

    void analyze_stream(size_t lo, size_t hi, Context& ctx, int kind) {
        std::string name = kind == 1 ? "cin" : "cout";
        // Locate the stream object to name cerr correctly.
        for (size_t i = lo; i < hi; ++i)
            if (tok(i).kind == Token::Ident && tok(i).text == "cerr") {
                name = "cerr";
                break;
            }
        CallSite cs;
        cs.id = static_cast<int>(g_.calls_.size());
        cs.callee = name;
        cs.caller = ctx.method;
        cs.span = {tok(lo).line, tok(hi - 1).line};

        // Operand slices after each >>/<< at depth zero.
        const char* op = kind == 1 ? ">>" : "<<";
        std::vector<std::pair<size_t, size_t>> operands;
        int depth = 0;
        size_t start = 0;
        for (size_t i = lo; i < hi; ++i) {
            if (is_punct(i, "(") || is_punct(i, "[")) ++depth;
            else if (is_punct(i, ")") || is_punct(i, "]")) --depth;
            else if (depth == 0 && is_punct(i, op)) {
                if (start) operands.push_back({start, i});
                start = i + 1;
            }
        }
        if (start && start < hi) operands.push_back({start, hi});

        for (auto [a, b] : operands) {
            for (size_t j = a; j < b; ++j) {
                if (tok(j).kind != Token::Ident) continue;
                if (ignored_idents().count(tok(j).text)) continue;
                if (is_punct(j + 1, "::")) continue;
                cs.arg_identifiers.push_back(tok(j).text);
            }
            if (kind == 1) {
                // First identifier of the slice is the extraction target.
                for (size_t j = a; j < b; ++j) {
                    if (tok(j).kind == Token::Ident &&
                        !ignored_idents().count(tok(j).text)) {
                        record_use(j, UseKind::Write, chain_directness(j), ctx);
                        mark_mutated(tok(j).text, ctx);
                        break;
                    }
                }
            } else {
                analyze_expr(a, b, ctx);
            }
        }
        dedupe(cs.arg_identifiers);
        attach_call(std::move(cs), ctx);
    }

    bool looks_like_decl(size_t lo, size_t hi) const {
        if (lo >= hi) return false;
        const Token& t = tok(lo);
        if (t.kind == Token::Keyword) return type_keywords().count(t.text) > 0;
        if (t.kind != Token::Ident) return false;
        if (t.text == "std" && is_punct(lo + 1, "::") &&
            tok(lo + 2).kind == Token::Ident)
            return std_type_names().count(tok(lo + 2).text) > 0;
        if (std_type_names().count(t.text))
            return tok(lo + 1).kind == Token::Ident || is_punct(lo + 1, "<");
        return false;
    }

    void analyze_declaration(size_t lo, size_t hi, Context& ctx) {
        // Consume the type part.
        size_t i = lo;
        bool saw_type = false;
        while (i < hi) {
            const Token& t = tok(i);
            if (t.kind == Token::Keyword && type_keywords().count(t.text)) {
                saw_type = true;
                ++i;
                continue;
            }
            if (t.kind == Token::Ident && is_punct(i + 1, "::")) {
                i += 2;
                continue;
            }
            if (t.kind == Token::Ident && is_punct(i + 1, "<") &&
                std_type_names().count(t.text)) {
                saw_type = true;
                i = skip_angles(i + 1);
                continue;
            }
            if (t.kind == Token::Ident && !saw_type &&
                std_type_names().count(t.text)) {
                saw_type = true;
                ++i;
                continue;
            }
            if (t.kind == Token::Punct && (t.text == "*" || t.text == "&")) {
                ++i;
                continue;
            }
            break;
        }
        if (!saw_type || i >= hi || tok(i).kind != Token::Ident) {
            analyze_expr(lo, hi, ctx);  // not actually a declaration
            return;
        }
        std::string type_text;
        for (size_t j = lo; j < i; ++j) {
            if (!type_text.empty()) type_text += ' ';
            type_text += tok(j).text;
        }
        bool container = false;
        for (const auto& c : container_type_names())
            if (type_text.find(c) != std::string::npos) {
                container = true;
                break;
            }

        // Declarators.
        while (i < hi && tok(i).kind == Token::Ident) {
            size_t name_idx = i;
            Declaration d;
            d.name = tok(i).text;
            d.method = ctx.method;
            d.is_container = container;
            d.type_text = type_text;
            d.span = {tok(name_idx).line, tok(name_idx).line};
            g_.declarations_.push_back(d);
            declared_containers_.insert(container ? d.name : "");
            if (container) container_vars_.insert(d.name);
            ++i;
            bool initialized = false;
            while (i < hi) {
                if (is_punct(i, "[")) {
                    size_t m = match(i);
                    analyze_expr(i + 1, m, ctx);
                    i = m + 1;
                } else if (is_punct(i, "=")) {
                    size_t end = i + 1;
                    int depth = 0;
                    while (end < hi) {
                        if (is_punct(end, "(") || is_punct(end, "[") || is_punct(end, "{"))
                            ++depth;
                        else if (is_punct(end, ")") || is_punct(end, "]") ||
                                 is_punct(end, "}"))
                            --depth;
                        else if (depth == 0 && is_punct(end, ","))
                            break;
                        ++end;
                    }
                    analyze_expr(i + 1, end, ctx);
                    initialized = true;
                    i = end;
                } else if (is_punct(i, "(") || is_punct(i, "{")) {
                    size_t m = match(i);
                    analyze_expr(i + 1, m, ctx);
                    initialized = true;
                    i = m + 1;
                } else {
                    break;
                }
            }
            if (initialized) {
                IdentifierUse u;
                u.name = d.name;
                u.kind = UseKind::Write;
                u.directness = Directness::Direct;
                u.method = ctx.method;
                u.span = {tok(name_idx).line, tok(name_idx).line};
                g_.identifiers_.push_back(u);
                mark_mutated(d.name, ctx);
            }
            if (ctx.current) ctx.current->is_declaration = true;
            if (is_punct(i, ",")) {
                ++i;
                while (i < hi && tok(i).kind == Token::Punct &&
                       (tok(i).text == "*" || tok(i).text == "&"))
                    ++i;
            } else {
                break;
            }
        }
    }

    // -----------------------------------------------------------------------
    // Expression analysis

    Directness chain_directness(size_t i) const {
        if (is_punct(i + 1, "[") || is_punct(i + 1, ".") || is_punct(i + 1, "->"))
            return Directness::Indirect;
        if (i > 0 && is_punct(i - 1, "*") && unary_position(i - 1))
            return Directness::Indirect;
        return Directness::Direct;
    }

    bool unary_position(size_t i) const {
        if (i == 0) return true;
        const Token& p = tok(i - 1);
        if (p.kind == Token::Ident || p.kind == Token::Number ||
            p.kind == Token::String)
            return false;
        if (p.kind == Token::Punct && (p.text == ")" || p.text == "]"))
            return false;
        return true;
    }

    void analyze_expr(size_t lo, size_t hi, Context& ctx) {
        for (size_t i = lo; i < hi && i < n_; ++i) {
            const Token& t = tok(i);
            if (t.kind == Token::Punct && t.text == "&" && unary_position(i) &&
                tok(i + 1).kind == Token::Ident) {
                mark_mutated(tok(i + 1).text, ctx);  // address taken
                continue;
            }
            if (t.kind != Token::Ident) continue;
            if (ignored_idents().count(t.text)) continue;
            if (is_punct(i + 1, "::")) continue;  // namespace qualifier
            bool after_member = i > 0 && (is_punct(i - 1, ".") || is_punct(i - 1, "->"));
            if (is_punct(i + 1, "(")) {
                record_call_at(i, after_member, ctx);
                continue;
            }
            if (after_member) continue;  // data member name, not a variable

            // Postfix chain peek to classify the use.
            size_t j = i + 1;
            bool indirect = false;
            if (i > 0 && is_punct(i - 1, "*") && unary_position(i - 1))
                indirect = true;
            while (j < hi) {
                if (is_punct(j, "[")) {
                    size_t m = match(j);
                    if (t.text.size()) record_subscript(t.text, tok(i).line, tok(m).line);
                    j = m + 1;
                    indirect = true;
                } else if ((is_punct(j, ".") || is_punct(j, "->")) &&
                           tok(j + 1).kind == Token::Ident &&
                           !is_punct(j + 2, "(")) {
                    j += 2;
                    indirect = true;
                } else if ((is_punct(j, ".") || is_punct(j, "->")) &&
                           tok(j + 1).kind == Token::Ident) {
                    indirect = true;  // member call on this base
                    break;
                } else {
                    break;
                }
            }
            UseKind kind = UseKind::Read;
            if (j < hi && tok(j).kind == Token::Punct &&
                (assign_ops().count(tok(j).text) || tok(j).text == "++" ||
                 tok(j).text == "--"))
                kind = UseKind::Write;
            if (i > 0 && (is_punct(i - 1, "++") || is_punct(i - 1, "--")))
                kind = UseKind::Write;
            record_use(i, kind,
                       indirect ? Directness::Indirect : Directness::Direct, ctx);
            if (kind == UseKind::Write) mark_mutated(t.text, ctx);
        }
    }

    void record_subscript(const std::string& var, int a, int b) {
        g_.subscripts_.push_back({var, {a, b}});
    }

    void record_use(size_t i, UseKind kind, Directness d, Context& ctx) {
        IdentifierUse u;
        u.name = tok(i).text;
        u.kind = kind;
        u.directness = d;
        u.method = ctx.method;
        u.span = {tok(i).line, tok(i).line};
        g_.identifiers_.push_back(u);
        if (ctx.current && kind == UseKind::Read)
            ctx.current->reads.insert(u.name);
    }

    void mark_mutated(const std::string& name, Context& ctx) {
        for (int id : ctx.loop_stack) g_.loops_[id].mutated.insert(name);
    }

    void record_call_at(size_t name_idx, bool member, Context& ctx) {
        size_t open = name_idx + 1;
        size_t close = match(open);
        CallSite cs;
        cs.id = static_cast<int>(g_.calls_.size());
        cs.callee = tok(name_idx).text;
        cs.caller = ctx.method;
        cs.member_call = member;
        if (member && name_idx >= 2 && tok(name_idx - 2).kind == Token::Ident)
            cs.receiver = tok(name_idx - 2).text;
        cs.span = {tok(name_idx).line, tok(close < n_ ? close : name_idx).line};

        // Split arguments at depth-zero commas.
        int depth = 0;
        size_t start = open + 1;
        std::vector<std::pair<size_t, size_t>> args;
        for (size_t j = open + 1; j < close; ++j) {
            if (is_punct(j, "(") || is_punct(j, "[") || is_punct(j, "{")) ++depth;
            else if (is_punct(j, ")") || is_punct(j, "]") || is_punct(j, "}")) --depth;
            else if (depth == 0 && is_punct(j, ",")) {
                args.push_back({start, j});
                start = j + 1;
            }
        }
        if (start < close) args.push_back({start, close});
        for (auto [a, b] : args) {
            std::string text;
            for (size_t j = a; j < b; ++j) {
                if (!text.empty()) text += ' ';
                text += tok(j).text;
            }
            cs.arg_texts.push_back(text);
            for (size_t j = a; j < b; ++j) {
                if (tok(j).kind != Token::Ident) continue;
                if (ignored_idents().count(tok(j).text)) continue;
                if (is_punct(j + 1, "::")) continue;
                if (is_punct(j + 1, "(")) continue;  // nested callee
                if (j > a && (is_punct(j - 1, ".") || is_punct(j - 1, "->")))
                    continue;  // member name
                cs.arg_identifiers.push_back(tok(j).text);
            }
        }
        dedupe(cs.arg_identifiers);
        if (member && !cs.receiver.empty()) mark_mutated(cs.receiver, ctx);
        attach_call(std::move(cs), ctx);
    }

    void attach_call(CallSite cs, Context& ctx) {
        int id = cs.id;
        if (ctx.current) ctx.current->call_sites.push_back(id);
        for (int l : ctx.loop_stack) g_.loops_[l].call_sites.push_back(id);
        g_.calls_.push_back(std::move(cs));
    }

    static void dedupe(std::vector<std::string>& v) {
        std::vector<std::string> out;
        for (auto& s : v)
            if (std::find(out.begin(), out.end(), s) == out.end())
                out.push_back(s);
        v = std::move(out);
    }

    // -----------------------------------------------------------------------

    void finalize() {
        std::map<std::string, int> by_name;
        for (const auto& m : g_.methods_)
            if (!m.synthetic && !by_name.count(m.name)) by_name[m.name] = m.id;
        for (auto& c : g_.calls_) {
            auto it = by_name.find(c.callee);
            if (it != by_name.end()) {
                c.resolved = true;
                c.callee_method = it->second;
            }
        }
        auto mkey = [&](int id) { return "method:" + std::to_string(id); };
        for (const auto& c : g_.calls_) {
            if (c.caller >= 0)
                g_.edges_.push_back({"contains", mkey(c.caller),
                                     "call:" + std::to_string(c.id)});
            if (c.resolved)
                g_.edges_.push_back({"calls", mkey(c.caller), mkey(c.callee_method)});
        }
        for (const auto& l : g_.loops_) {
            std::string lk = "loop:" + std::to_string(l.id);
            if (l.parent >= 0)
                g_.edges_.push_back({"contains", "loop:" + std::to_string(l.parent), lk});
            else if (l.method >= 0)
                g_.edges_.push_back({"contains", mkey(l.method), lk});
            for (int cid : l.call_sites)
                g_.edges_.push_back({"contains", lk, "call:" + std::to_string(cid)});
        }
        // Def-use: match each use to the nearest declaration by scope.
        for (size_t u = 0; u < g_.identifiers_.size(); ++u) {
            const auto& use = g_.identifiers_[u];
            int best = -1;
            for (size_t d = 0; d < g_.declarations_.size(); ++d) {
                const auto& decl = g_.declarations_[d];
                if (decl.name != use.name) continue;
                if (decl.method == use.method) {
                    best = static_cast<int>(d);
                    break;
                }
                if (decl.method == -1 && best == -1) best = static_cast<int>(d);
            }
            if (best >= 0)
                g_.edges_.push_back({"defuse", "decl:" + std::to_string(best),
                                     "use:" + std::to_string(u)});
        }
    }

    const SourceUnit& src_;
    bool strict_;
    CodePropertyGraph g_;
    std::vector<Token> toks_;
    size_t n_ = 0;
    std::set<std::string> declared_containers_;
    std::set<std::string> container_vars_;
};

CodePropertyGraph build_cpg(const SourceUnit& src, const ParseOptions& opts) {
    if (src.text.empty()) throw ParseError("empty source", 1, 1);
    return CpgBuilder(src, opts).build();
}

// ---------------------------------------------------------------------------
// Queries

const MethodNode& CodePropertyGraph::method(const std::string& name) const {
    for (const auto& m : methods_)
        if (m.name == name) return m;
    throw UnknownMethod(name);
}

bool CodePropertyGraph::has_method(const std::string& name) const {
    for (const auto& m : methods_)
        if (m.name == name) return true;
    return false;
}

std::set<std::string> CodePropertyGraph::self_call_methods() const {
    std::set<std::string> out;
    for (const auto& c : calls_)
        if (c.resolved && c.caller >= 0 && c.callee_method == c.caller)
            out.insert(methods_[c.caller].name);
    return out;
}

std::set<std::string> CodePropertyGraph::indirect_reads(
    const std::string& method_name) const {
    const MethodNode& m = method(method_name);
    std::set<std::string> out;
    for (const auto& u : identifiers_)
        if (u.method == m.id && u.directness == Directness::Indirect &&
            u.kind == UseKind::Read)
            out.insert(u.name);
    return out;
}

std::set<std::string> CodePropertyGraph::indirect_writes(
    const std::string& method_name) const {
    const MethodNode& m = method(method_name);
    std::set<std::string> out;
    for (const auto& u : identifiers_)
        if (u.method == m.id && u.directness == Directness::Indirect &&
            u.kind == UseKind::Write)
            out.insert(u.name);
    return out;
}

bool CodePropertyGraph::declares(const std::string& method_name,
                                 const std::string& id) const {
    const MethodNode& m = method(method_name);
    for (const auto& d : declarations_)
        if (d.method == m.id && d.name == id) return true;
    return false;
}

bool CodePropertyGraph::declared_at_file_scope(const std::string& id) const {
    for (const auto& d : declarations_)
        if (d.method == -1 && d.name == id) return true;
    return false;
}

std::vector<CallSite> CodePropertyGraph::call_sites(
    const std::set<std::string>& name_filter) const {
    std::vector<CallSite> out;
    for (const auto& c : calls_)
        if (name_filter.empty() || name_filter.count(c.callee)) out.push_back(c);
    return out;
}

std::vector<std::pair<std::string, LineSpan>>
CodePropertyGraph::container_operations(const std::string& var) const {
    bool known = false;
    for (const auto& d : declarations_)
        if (d.name == var) known = true;
    if (!known)
        for (const auto& u : identifiers_)
            if (u.name == var) known = true;
    if (!known) throw UnknownIdentifier(var);

    bool container = false;
    for (const auto& d : declarations_)
        if (d.name == var && d.is_container) container = true;

    std::vector<std::pair<std::string, LineSpan>> out;
    for (const auto& c : calls_)
        if (c.member_call && c.receiver == var)
            out.push_back({c.callee, c.span});
    if (container)
        for (const auto& s : subscripts_)
            if (s.first == var) out.push_back({"operator[]", s.second});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.second.start_line < b.second.start_line;
    });
    return out;
}

void CodePropertyGraph::dump(std::ostream& out) const {
    for (const auto& m : methods_)
        out << "method\t" << m.id << "\t" << m.span.start_line << "-"
            << m.span.end_line << "\tname=" << m.name
            << (m.synthetic ? "\tsynthetic" : "") << "\n";
    for (const auto& c : calls_)
        out << "call\t" << c.id << "\t" << c.span.start_line << "-"
            << c.span.end_line << "\tcallee=" << c.callee
            << "\tcaller=" << c.caller << "\tresolved=" << (c.resolved ? 1 : 0)
            << "\n";
    for (size_t i = 0; i < loops_.size(); ++i)
        out << "loop\t" << loops_[i].id << "\t" << loops_[i].span.start_line
            << "-" << loops_[i].span.end_line << "\tparent=" << loops_[i].parent
            << "\n";
    for (size_t i = 0; i < declarations_.size(); ++i)
        out << "decl\t" << i << "\t" << declarations_[i].span.start_line << "-"
            << declarations_[i].span.end_line << "\tname=" << declarations_[i].name
            << "\tmethod=" << declarations_[i].method
            << "\tcontainer=" << (declarations_[i].is_container ? 1 : 0) << "\n";
    for (size_t i = 0; i < identifiers_.size(); ++i)
        out << "use\t" << i << "\t" << identifiers_[i].span.start_line << "-"
            << identifiers_[i].span.end_line << "\tname=" << identifiers_[i].name
            << "\tkind=" << (identifiers_[i].kind == UseKind::Read ? "read" : "write")
            << "\tdir="
            << (identifiers_[i].directness == Directness::Direct ? "direct"
                                                                 : "indirect")
            << "\tmethod=" << identifiers_[i].method << "\n";
    for (const auto& e : edges_)
        out << "edge\t" << e.kind << "\t" << e.from << "\t" << e.to << "\n";
}

}  // namespace eco
