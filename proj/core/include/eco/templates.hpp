#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace eco {

/// Read a template asset verbatim (UTF-8, newlines preserved).
std::string load_template(const std::filesystem::path& file);

/// Replace every `{name}` whose name is bound in `vars`, in one left-to-right
/// pass; substituted content is never rescanned. An identifier-shaped
/// placeholder with no binding throws MissingPlaceholder. Braces that do not
/// wrap a bare identifier (JSON, code) pass through untouched.
std::string substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& vars);

/// Named template assets loaded from one directory (*.tmpl files).
class TemplateSet {
public:
    static TemplateSet load(const std::filesystem::path& dir);
    const std::string& get(const std::string& name) const;  // throws ConfigError
    bool has(const std::string& name) const;

private:
    std::map<std::string, std::string> templates_;
};

}  // namespace eco
