#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "census/lexicon.hpp"

namespace census {

/// local@domain.tld matches in text order. Hand-rolled scanner; std::regex
/// is too slow for whole-page scans.
std::vector<std::string> find_emails(std::string_view text);

/// Runs of 7-15 digits with - . ( ) and space separators.
std::vector<std::string> find_phones(std::string_view text);

/// Word-initial occurrences of title phrases, longest match at each position,
/// non-overlapping.
int count_title_terms(std::string_view text, const TitleWhitelist& titles);

/// A token that starts with an uppercase letter.
bool is_capitalized(std::string_view token);

}  // namespace census
