#include "eco/templates.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "eco/errors.hpp"

namespace eco {

std::string load_template(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open template: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

static bool placeholder_at(const std::string& s, size_t i, std::string& name,
                           size_t& end) {
    if (s[i] != '{') return false;
    size_t j = i + 1;
    while (j < s.size() &&
           (std::islower(static_cast<unsigned char>(s[j])) ||
            std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
    if (j == i + 1 || j >= s.size() || s[j] != '}') return false;
    name = s.substr(i + 1, j - i - 1);
    end = j + 1;
    return true;
}

std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size());
    for (size_t i = 0; i < tmpl.size();) {
        std::string name;
        size_t end;
        if (placeholder_at(tmpl, i, name, end)) {
            auto it = vars.find(name);
            if (it == vars.end()) throw MissingPlaceholder(name);
            out += it->second;
            i = end;
        } else {
            out += tmpl[i];
            ++i;
        }
    }
    return out;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("template directory not found: " + dir.string());
    TemplateSet ts;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".tmpl") continue;
        ts.templates_[e.path().stem().string()] = load_template(e.path());
    }
    if (ts.templates_.empty())
        throw ConfigError("no *.tmpl assets in " + dir.string());
    return ts;
}

const std::string& TemplateSet::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end()) throw ConfigError("unknown template: " + name);
    return it->second;
}

bool TemplateSet::has(const std::string& name) const {
    return templates_.count(name) > 0;
}

}  // namespace eco
