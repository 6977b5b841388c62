#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace census::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::string_view trim(std::string_view s, std::string_view chars);

/// Collapses every run of whitespace to one space and trims the ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);

/// Number of (possibly overlapping-free, left to right) occurrences of
/// `needle` in `haystack`, case-insensitive. Empty needle counts zero.
int count_ci(std::string_view haystack, std::string_view needle);

bool is_space(char c);
bool is_alpha(char c);
bool is_digit(char c);
bool is_upper(char c);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);
std::string latin1_to_utf8(std::string_view bytes);

/// Reads a plain-text list: one entry per line, trimmed, blank lines and
/// lines starting with '#' skipped.
std::vector<std::string> read_lines(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace census::text
