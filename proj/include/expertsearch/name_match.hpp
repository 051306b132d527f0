#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "expertsearch/corpus.hpp"

namespace expertsearch {

/// Decodes UTF-8 into scalar values. Invalid sequences become U+FFFD.
std::u32string utf8_to_u32(std::string_view s);

/// Edit distance over Unicode scalar values (insert, delete, substitute;
/// unit costs). Two-row dynamic program, O(|a|·|b|) time.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Lowercase (ASCII), strip periods, trim, collapse whitespace runs.
std::string normalize_name(std::string_view s);

struct MatchResult {
  std::optional<std::string> matched_id;
  // SIZE_MAX when there were no candidates.
  std::size_t distance = static_cast<std::size_t>(-1);
  bool discarded_for_tie = false;
};

struct MatchOptions {
  // Upper bound on distance / max(len) for a match to be accepted.
  double max_normalized_distance = 0.34;
};

/// Author to profile resolution. The unique closest profile wins; if two or
/// more profiles share the minimum the link is dropped.
MatchResult match_author_to_profile(std::string_view author_name,
                                    std::span<const Profile> profiles,
                                    const MatchOptions& opts = {});

/// Pre-normalized candidate list for repeated author lookups.
class ProfileMatcher {
 public:
  explicit ProfileMatcher(std::span<const Profile> profiles,
                          MatchOptions opts = {});
  MatchResult match(std::string_view author_name) const;

 private:
  struct Candidate {
    std::u32string name;
    const std::string* id;
  };
  std::vector<Candidate> candidates_;  // sorted by name length
  MatchOptions opts_;
};

struct CategoryMatch {
  std::string category_id;
  std::size_t distance = 0;
};

/// Closest vocabulary word over all categories; ties go to the smallest
/// category_id. Throws std::invalid_argument on an empty taxonomy.
CategoryMatch match_keyword_to_category(std::string_view keyword,
                                        const CategoryTaxonomy& taxonomy);

}  // namespace expertsearch
