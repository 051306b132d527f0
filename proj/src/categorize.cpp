#include "expertsearch/categorize.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "expertsearch/name_match.hpp"

namespace expertsearch {

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",        "about",   "above",   "after",      "again",    "against",
      "all",      "also",    "am",      "an",         "and",      "any",
      "are",      "as",      "at",      "be",         "because",  "been",
      "before",   "being",   "below",   "between",    "both",     "but",
      "by",       "can",     "could",   "did",        "do",       "does",
      "doing",    "down",    "during",  "each",       "etc",      "few",
      "for",      "from",    "further", "had",        "has",      "have",
      "having",   "he",      "her",     "here",       "hers",     "herself",
      "him",      "himself", "his",     "how",        "i",        "if",
      "in",       "into",    "is",      "it",         "its",      "itself",
      "just",     "may",     "me",      "might",      "more",     "most",
      "must",     "my",      "myself",  "no",         "nor",      "not",
      "now",      "of",      "off",     "on",         "once",     "only",
      "or",       "other",   "our",     "ours",       "ourselves", "out",
      "over",     "own",     "s",       "same",       "shall",    "she",
      "should",   "so",      "some",    "such",       "t",        "than",
      "that",     "the",     "their",   "theirs",     "them",     "themselves",
      "then",     "there",   "these",   "they",       "this",     "those",
      "through",  "to",      "too",     "under",      "until",    "up",
      "very",     "was",     "we",      "were",       "what",     "when",
      "where",    "which",   "while",   "who",        "whom",     "why",
      "will",     "with",    "would",   "you",        "your",     "yours",
  };
  return words;
}

std::vector<Keyword> extract_keywords(std::string_view text,
                                      const KeywordOptions& opts) {
  // Token stream with stopwords kept as breaks for bigram adjacency.
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c)) {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else {
      flush();
    }
  }
  flush();

  std::map<std::string, double> weights;
  const std::string* prev = nullptr;
  for (const auto& tok : tokens) {
    if (stopwords().contains(tok)) {
      prev = nullptr;
      continue;
    }
    weights[tok] += 1.0;
    if (prev != nullptr) weights[*prev + " " + tok] += opts.bigram_boost;
    prev = &tok;
  }

  std::vector<Keyword> out;
  out.reserve(weights.size());
  for (auto& [term, w] : weights) out.push_back({term, w});
  // std::map order is lexicographic, so a stable sort keeps tie order.
  std::stable_sort(out.begin(), out.end(), [](const Keyword& a, const Keyword& b) {
    return a.weight > b.weight;
  });
  if (out.size() > opts.max_keywords) out.resize(opts.max_keywords);
  return out;
}

std::vector<CategorySuggestion> suggest_categories(
    std::string_view text, const CategoryTaxonomy& taxonomy,
    const SuggestOptions& opts) {
  if (taxonomy.empty()) {
    throw std::invalid_argument("suggest_categories: empty taxonomy");
  }
  std::map<std::string, double> scores;
  for (const auto& kw : extract_keywords(text, opts.keywords)) {
    const auto m = match_keyword_to_category(kw.term, taxonomy);
    scores[m.category_id] += kw.weight / (1.0 + static_cast<double>(m.distance));
  }

  std::vector<CategorySuggestion> out;
  for (const auto& [id, s] : scores) {
    const auto it = std::find_if(taxonomy.begin(), taxonomy.end(),
                                 [&](const Category& c) { return c.category_id == id; });
    out.push_back({id, it->label, s, 0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CategorySuggestion& a, const CategorySuggestion& b) {
                     return a.score > b.score;
                   });
  const std::size_t keep = opts.feeling_lucky ? 1 : opts.max_suggestions;
  if (out.size() > keep) out.resize(keep);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

}  // namespace expertsearch
