#include "eco/source_unit.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "eco/errors.hpp"

namespace eco {

int count_lines(const std::string& text) {
    if (text.empty()) return 0;
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    if (text.back() != '\n') ++n;
    return n;
}

SourceUnit SourceUnit::from_text(std::string text, std::string path) {
    SourceUnit u;
    u.line_count = count_lines(text);
    u.text = std::move(text);
    u.path = std::move(path);
    return u;
}

SourceUnit SourceUnit::from_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), p.string());
}

SourceUnit SourceUnit::from_stdin() {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return from_text(buf.str(), "<stdin>");
}

}  // namespace eco
