#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eco/source_unit.hpp"

namespace eco_test {

inline std::filesystem::path fixture_dir() { return ECO_FIXTURE_DIR; }
inline std::filesystem::path asset_dir() { return ECO_ASSET_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline eco::SourceUnit fig(const std::string& name) {
    return eco::SourceUnit::from_file(fixture_dir() / "src" / (name + ".cpp"));
}

inline std::string golden(const std::string& name) {
    return read_file(fixture_dir() / "golden" / (name + ".txt"));
}

/// Scratch directory unique per test run; removed lazily by the OS.
inline std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / "eco-tests" / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

}  // namespace eco_test
