#include <random>
#include <string>

#include "doctest.h"
#include "expertsearch/name_match.hpp"
#include "support/oracles.hpp"

namespace es = expertsearch;

namespace {

es::Profile profile(std::string id, std::string name) {
  es::Profile p;
  p.profile_id = std::move(id);
  p.display_name = std::move(name);
  return p;
}

std::string random_string(std::mt19937& rng, std::size_t max_len, const std::string& alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

void all_strings(std::size_t max_len, std::vector<std::string>& out, std::string prefix = "") {
  out.push_back(prefix);
  if (prefix.size() == max_len) return;
  all_strings(max_len, out, prefix + 'a');
  all_strings(max_len, out, prefix + 'b');
}

}  // namespace

TEST_CASE("levenshtein examples") {
  CHECK(es::levenshtein("abc", "abc") == 0);
  CHECK(es::levenshtein("kitten", "") == 6);
  CHECK(es::levenshtein("kitten", "sitting") == 3);
  CHECK(es::levenshtein("", "") == 0);
}

TEST_CASE("levenshtein counts code points, not bytes") {
  CHECK(es::levenshtein("müller", "muller") == 1);
  CHECK(es::levenshtein("Żaneta", "Zaneta") == 1);
  CHECK(es::utf8_to_u32("é").size() == 1);
  CHECK(es::utf8_to_u32("\xff") == std::u32string(1, U'�'));
}

TEST_CASE("levenshtein agrees with the recursive oracle on all {a,b} strings up to length 6") {
  std::vector<std::string> words;
  all_strings(6, words);
  REQUIRE(words.size() == 127);
  std::size_t mismatches = 0;
  for (const auto& a : words) {
    for (const auto& b : words) mismatches += es::levenshtein(a, b) != oracle::levenshtein(a, b);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("levenshtein agrees with the oracle on random pairs up to length 12") {
  std::mt19937 rng(1234);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_string(rng, 12, "abcdefg ");
    const auto b = random_string(rng, 12, "abcdefg ");
    mismatches += es::levenshtein(a, b) != oracle::levenshtein(a, b);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("levenshtein metric properties") {
  std::mt19937 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_string(rng, 10, "abcd");
    const auto b = random_string(rng, 10, "abcd");
    const auto c = random_string(rng, 10, "abcd");
    const auto ab = es::levenshtein(a, b);
    CHECK(ab == es::levenshtein(b, a));
    CHECK(es::levenshtein(a, a) == 0);
    const auto diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    CHECK(diff <= ab);
    CHECK(ab <= std::max(a.size(), b.size()));
    CHECK(es::levenshtein(a, c) <= ab + es::levenshtein(b, c));
  }
}

TEST_CASE("normalize_name") {
  CHECK(es::normalize_name("  J. Smith ") == "j smith");
  CHECK(es::normalize_name("ADA LOVELACE") == "ada lovelace");
  CHECK(es::normalize_name("a  b") == "a b");
  CHECK(es::normalize_name("\tA.B.\n C ") == "ab c");
  CHECK(es::normalize_name("") == "");
}

TEST_CASE("exact match wins") {
  const std::vector<es::Profile> ps{profile("p1", "J. Smith"), profile("p2", "A. Jones")};
  const auto r = es::match_author_to_profile("J. Smith", ps);
  CHECK(r.matched_id == std::optional<std::string>("p1"));
  CHECK(r.distance == 0);
  CHECK_FALSE(r.discarded_for_tie);
}

TEST_CASE("equal closest candidates discard the link") {
  const std::vector<es::Profile> ps{profile("p1", "jon smith"), profile("p2", "ron smit")};
  const auto r = es::match_author_to_profile("jon smit", ps);
  CHECK_FALSE(r.matched_id.has_value());
  CHECK(r.discarded_for_tie);
  CHECK(r.distance == 1);
}

TEST_CASE("no candidates") {
  const auto r = es::match_author_to_profile("anyone", {});
  CHECK_FALSE(r.matched_id.has_value());
  CHECK_FALSE(r.discarded_for_tie);
  CHECK(r.distance == static_cast<std::size_t>(-1));
}

TEST_CASE("distance above the acceptance threshold is not a match") {
  const std::vector<es::Profile> ps{profile("p1", "Ada Lovelace")};
  const auto r = es::match_author_to_profile("Bob Stone", ps);
  CHECK_FALSE(r.matched_id.has_value());
  CHECK_FALSE(r.discarded_for_tie);
  CHECK(r.distance == es::levenshtein("bob stone", "ada lovelace"));

  es::MatchOptions loose;
  loose.max_normalized_distance = 1.0;
  CHECK(es::match_author_to_profile("Bob Stone", ps, loose).matched_id ==
        std::optional<std::string>("p1"));
}

TEST_CASE("the acceptance bound is inclusive") {
  // "abc" vs "abd": 1/3 <= 0.34.
  const std::vector<es::Profile> ps{profile("p1", "abd")};
  CHECK(es::match_author_to_profile("abc", ps).matched_id.has_value());
  es::MatchOptions tight;
  tight.max_normalized_distance = 0.3;
  CHECK_FALSE(es::match_author_to_profile("abc", ps, tight).matched_id.has_value());
}

TEST_CASE("matcher and free function agree on random candidate sets") {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    std::vector<es::Profile> ps;
    const auto n = rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      ps.push_back(profile("p" + std::to_string(i), random_string(rng, 6, "abc")));
    }
    const es::ProfileMatcher matcher(ps);
    const auto name = random_string(rng, 6, "abc");
    const auto a = matcher.match(name);
    const auto b = es::match_author_to_profile(name, ps);
    CHECK(a.matched_id == b.matched_id);
    CHECK(a.distance == b.distance);
    CHECK(a.discarded_for_tie == b.discarded_for_tie);

    // Result invariants against a direct scan.
    std::size_t best = static_cast<std::size_t>(-1), count = 0;
    for (const auto& p : ps) {
      const auto d = oracle::levenshtein(es::normalize_name(name), es::normalize_name(p.display_name));
      if (d < best) {
        best = d;
        count = 1;
      } else if (d == best) {
        ++count;
      }
    }
    CHECK(a.distance == best);
    CHECK(a.discarded_for_tie == (count >= 2));
    if (a.matched_id) CHECK(count == 1);
  }
}

TEST_CASE("keyword to category") {
  const es::CategoryTaxonomy t{
      {"databases", "databases", {"databases", "sql"}},
      {"information_retrieval", "information retrieval", {"information retrieval", "search"}},
  };
  const auto m = es::match_keyword_to_category("information retrival", t);
  CHECK(m.category_id == "information_retrieval");
  CHECK(m.distance == 1);
  const auto exact = es::match_keyword_to_category("sql", t);
  CHECK(exact.category_id == "databases");
  CHECK(exact.distance == 0);
}

TEST_CASE("keyword equidistant from two categories picks the smaller id") {
  const es::CategoryTaxonomy t{
      {"c_b", "b", {"xxcd"}},
      {"c_a", "a", {"abxx"}},
  };
  const auto m = es::match_keyword_to_category("abcd", t);
  CHECK(m.distance == 2);
  CHECK(m.category_id == "c_a");
}

TEST_CASE("keyword matching needs a taxonomy") {
  CHECK_THROWS_AS(es::match_keyword_to_category("x", {}), std::invalid_argument);
}

TEST_CASE("planted ties never produce a match") {
  std::mt19937 rng(2024);
  for (int round = 0; round < 200; ++round) {
    const auto c = fixture::planted_tie(rng);
    const auto r = es::match_author_to_profile(c.author, c.profiles);
    CHECK_FALSE(r.matched_id.has_value());
    CHECK(r.discarded_for_tie);
    CHECK(r.distance == c.tie_distance);
  }
}
