#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "expertsearch/corpus.hpp"

namespace expertsearch {

struct Keyword {
  std::string term;  // unigram or "word word" bigram
  double weight = 0.0;

  bool operator==(const Keyword&) const = default;
};

struct KeywordOptions {
  std::size_t max_keywords = 10;
  double bigram_boost = 1.5;
};

/// The built-in English stopword list.
const std::set<std::string, std::less<>>& stopwords();

/// Lowercases, splits on non-alphanumeric bytes, drops stopwords, and
/// weights each unigram by its frequency and each bigram of adjacent
/// non-stopwords by frequency times the boost. Returns the heaviest terms,
/// ties in lexicographic order.
std::vector<Keyword> extract_keywords(std::string_view text,
                                      const KeywordOptions& opts = {});

struct CategorySuggestion {
  std::string category_id;
  std::string label;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct SuggestOptions {
  KeywordOptions keywords;
  std::size_t max_suggestions = 5;
  bool feeling_lucky = false;  // keep only rank 1
};

/// Each keyword votes for its closest category with weight / (1 + distance).
/// Categories are ordered by total score, then by category_id.
std::vector<CategorySuggestion> suggest_categories(
    std::string_view text, const CategoryTaxonomy& taxonomy,
    const SuggestOptions& opts = {});

}  // namespace expertsearch
