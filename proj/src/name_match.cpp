#include "expertsearch/name_match.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <vector>

namespace expertsearch {

std::u32string utf8_to_u32(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      out.push_back(U'�');
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) {
        ok = false;
        break;
      }
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // b is the shorter string; rows have |b|+1 cells.
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(utf8_to_u32(a), utf8_to_u32(b));
}

std::string normalize_name(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '.') continue;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
  }
  return out;
}

namespace {

bool accept(std::size_t distance, std::size_t len_a, std::size_t len_b,
            const MatchOptions& opts) {
  const std::size_t longest = std::max(len_a, len_b);
  if (longest == 0) return true;
  return static_cast<double>(distance) / static_cast<double>(longest) <=
         opts.max_normalized_distance;
}

}  // namespace

ProfileMatcher::ProfileMatcher(std::span<const Profile> profiles,
                               MatchOptions opts)
    : opts_(opts) {
  candidates_.reserve(profiles.size());
  for (const auto& p : profiles) {
    candidates_.push_back({utf8_to_u32(normalize_name(p.display_name)),
                           &p.profile_id});
  }
  std::stable_sort(candidates_.begin(), candidates_.end(),
                   [](const Candidate& x, const Candidate& y) {
                     return x.name.size() < y.name.size();
                   });
}

MatchResult ProfileMatcher::match(std::string_view author_name) const {
  MatchResult result;
  if (candidates_.empty()) return result;
  const std::u32string query = utf8_to_u32(normalize_name(author_name));

  std::size_t best = static_cast<std::size_t>(-1);
  const std::string* best_id = nullptr;
  std::size_t best_len = 0;
  std::size_t ties = 0;
  for (const auto& c : candidates_) {
    // |len difference| is a lower bound on the distance.
    const std::size_t gap = c.name.size() > query.size()
                                ? c.name.size() - query.size()
                                : query.size() - c.name.size();
    if (gap > best) {
      if (c.name.size() > query.size()) break;
      continue;
    }
    const std::size_t d = levenshtein(query, c.name);
    if (d < best) {
      best = d;
      best_id = c.id;
      best_len = c.name.size();
      ties = 1;
    } else if (d == best) {
      ++ties;
    }
  }

  result.distance = best;
  if (ties > 1) {
    result.discarded_for_tie = true;
    return result;
  }
  if (accept(best, query.size(), best_len, opts_)) result.matched_id = *best_id;
  return result;
}

MatchResult match_author_to_profile(std::string_view author_name,
                                    std::span<const Profile> profiles,
                                    const MatchOptions& opts) {
  return ProfileMatcher(profiles, opts).match(author_name);
}

CategoryMatch match_keyword_to_category(std::string_view keyword,
                                        const CategoryTaxonomy& taxonomy) {
  if (taxonomy.empty()) {
    throw std::invalid_argument("match_keyword_to_category: empty taxonomy");
  }
  const std::u32string query = utf8_to_u32(normalize_name(keyword));
  const Category* best_cat = nullptr;
  std::size_t best = static_cast<std::size_t>(-1);
  for (const auto& cat : taxonomy) {
    for (const auto& word : cat.vocabulary) {
      const std::size_t d = levenshtein(query, utf8_to_u32(normalize_name(word)));
      if (d < best ||
          (d == best && cat.category_id < best_cat->category_id)) {
        best = d;
        best_cat = &cat;
      }
    }
  }
  if (best_cat == nullptr) {
    throw std::invalid_argument("match_keyword_to_category: empty vocabulary");
  }
  return {best_cat->category_id, best};
}

}  // namespace expertsearch
