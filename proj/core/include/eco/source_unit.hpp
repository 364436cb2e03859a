#pragma once

#include <filesystem>
#include <string>

namespace eco {

/// A single-file program as raw text plus line bookkeeping.
struct SourceUnit {
    std::string text;
    std::string path;  // optional identifier, may be empty
    int line_count = 0;

    static SourceUnit from_text(std::string text, std::string path = "");
    static SourceUnit from_file(const std::filesystem::path& p);
    static SourceUnit from_stdin();
};

/// Number of newline-delimited lines ("a\nb" and "a\nb\n" are both 2).
int count_lines(const std::string& text);

}  // namespace eco
