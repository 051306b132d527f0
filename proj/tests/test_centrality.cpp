#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "expertsearch/centrality.hpp"
#include "expertsearch/features.hpp"
#include "support/oracles.hpp"

namespace es = expertsearch;

namespace {

double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  REQUIRE(a.size() == b.size());
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

es::SocialGraph scaled(const es::SocialGraph& g, std::int64_t k) {
  es::SocialGraph out(g.nodes(), g.alpha() * static_cast<double>(k));
  for (const auto& [key, e] : g.edges()) {
    if (e.coauthor_count > 0) out.add_coauthorship(key.first, key.second, e.coauthor_count * k);
    if (e.has_profile_edge) out.add_profile_link(key.first, key.second);
  }
  return out;
}

}  // namespace

TEST_CASE("pagerank on small symmetric graphs") {
  const auto tri = es::pagerank(fixture::cycle(3));
  for (int i = 0; i < 3; ++i) CHECK(tri(i) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  const auto pair = es::pagerank(fixture::path(2));
  CHECK(pair(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pair(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(es::pagerank(es::SocialGraph{}).size() == 0);
}

TEST_CASE("pagerank on a star matches the two-state linear solve") {
  // Centre c, leaves l (three of them): c = (1-d)/4 + d*3l, l = (1-d)/4 + d*c/3.
  const double d = 0.85;
  Eigen::Matrix2d a;
  a << 1.0, -3.0 * d, -d / 3.0, 1.0;
  const Eigen::Vector2d b((1 - d) / 4, (1 - d) / 4);
  const Eigen::Vector2d x = a.colPivHouseholderQr().solve(b);
  CHECK(x(0) == doctest::Approx(0.4797).epsilon(1e-4));
  CHECK(x(1) == doctest::Approx(0.1734).epsilon(1e-3));

  const auto pr = es::pagerank(fixture::star(3));
  CHECK(std::abs(pr(0) - x(0)) < 1e-6);
  for (int i = 1; i <= 3; ++i) CHECK(std::abs(pr(i) - x(1)) < 1e-6);
}

TEST_CASE("pagerank matches the dense oracle, sums to one and respects the floor") {
  std::mt19937 rng(17);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 1 + rng() % 50;
    const auto g = fixture::random_graph(rng, n, std::uniform_real_distribution<>(0.02, 0.5)(rng));
    const auto pr = es::pagerank(g);
    CHECK(std::abs(pr.sum() - 1.0) < 1e-9);
    CHECK(pr.minCoeff() >= 0.15 / static_cast<double>(n) - 1e-12);
    CHECK(max_abs_diff(pr, oracle::pagerank(g, 0.85)) < 1e-6);
  }
}

TEST_CASE("pagerank is uniform on vertex-transitive graphs") {
  for (std::size_t n : {3u, 4u, 7u, 12u}) {
    for (const auto& g : {fixture::cycle(n), fixture::complete(n)}) {
      const auto pr = es::pagerank(g);
      for (Eigen::Index i = 0; i < pr.size(); ++i) {
        CHECK(std::abs(pr(i) - 1.0 / static_cast<double>(n)) < 1e-9);
      }
    }
  }
  // Isolated nodes only.
  const auto pr = es::pagerank(es::SocialGraph(fixture::node_ids(4)));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(pr(i) - 0.25) < 1e-12);
}

TEST_CASE("pagerank ignores a uniform weight scale") {
  std::mt19937 rng(23);
  for (int round = 0; round < 20; ++round) {
    const auto g = fixture::random_graph(rng, 15, 0.3);
    CHECK(max_abs_diff(es::pagerank(g), es::pagerank(scaled(g, 3))) < 1e-12);
  }
}

TEST_CASE("betweenness examples") {
  const auto path = es::betweenness(fixture::path(3));
  CHECK(path(0) == 0.0);
  CHECK(path(1) == doctest::Approx(1.0));
  CHECK(path(2) == 0.0);
  const auto tri = es::betweenness(fixture::complete(3));
  CHECK(tri.cwiseAbs().maxCoeff() == 0.0);
  const auto star = es::betweenness(fixture::star(3));
  CHECK(star(0) == doctest::Approx(3.0));
  CHECK(star.tail(3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("betweenness splits credit over equal shortest paths") {
  // Square a-b-c-d-a: each of b and d carries half of the a..c pair.
  const auto sq = es::betweenness(fixture::cycle(4));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(sq(i) == doctest::Approx(0.5));
}

TEST_CASE("stronger ties are shorter paths") {
  // Triangle where the direct 0-2 tie is weak: 1/1 > 1/3 + 1/3 routes via 1.
  es::SocialGraph g(fixture::node_ids(3));
  g.add_coauthorship(0, 1, 3);
  g.add_coauthorship(1, 2, 3);
  g.add_coauthorship(0, 2, 1);
  CHECK(es::betweenness(g)(1) == doctest::Approx(1.0));
  CHECK(es::betweenness(g, es::EdgeLength::unit)(1) == 0.0);
}

TEST_CASE("closeness examples") {
  const auto path = es::closeness(fixture::path(3));
  CHECK(path(1) == doctest::Approx(2.0));
  CHECK(path(0) == doctest::Approx(1.5));
  const auto split = es::closeness(es::SocialGraph(fixture::node_ids(2)));
  CHECK(split(0) == 0.0);
  CHECK(split(1) == 0.0);
  CHECK(es::closeness(es::SocialGraph(fixture::node_ids(1)))(0) == 0.0);
}

TEST_CASE("betweenness and closeness match brute-force oracles") {
  std::mt19937 rng(31);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + rng() % 7;
    const auto g = fixture::random_graph(rng, n, 0.5, 2);
    for (auto length : {es::EdgeLength::inverse_weight, es::EdgeLength::unit}) {
      CHECK(max_abs_diff(es::betweenness(g, length), oracle::betweenness(g, length)) < 1e-9);
      CHECK(max_abs_diff(es::closeness(g, length), oracle::closeness(g, length)) < 1e-9);
    }
  }
}

TEST_CASE("centralities are equivariant under relabelling") {
  std::mt19937 rng(41);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 2 + rng() % 20;
    const auto g = fixture::random_graph(rng, n, 0.25);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h = fixture::relabel(g, perm);
    const auto pg = es::pagerank(g), ph = es::pagerank(h);
    const auto bg = es::betweenness(g), bh = es::betweenness(h);
    const auto cg = es::closeness(g), ch = es::closeness(h);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<Eigen::Index>(perm[i]);
      const auto k = static_cast<Eigen::Index>(i);
      CHECK(std::abs(pg(k) - ph(j)) < 1e-9);
      CHECK(std::abs(bg(k) - bh(j)) < 1e-9);
      CHECK(std::abs(cg(k) - ch(j)) < 1e-9);
    }
  }
}

TEST_CASE("thread count does not change results") {
  std::mt19937 rng(43);
  const auto g = fixture::random_graph(rng, 120, 0.05);
  const auto b1 = es::betweenness(g, es::EdgeLength::inverse_weight, 1);
  const auto c1 = es::closeness(g, es::EdgeLength::inverse_weight, 1);
  for (unsigned t : {2u, 3u, 8u, 0u}) {
    CHECK(es::betweenness(g, es::EdgeLength::inverse_weight, t) == b1);
    CHECK(es::closeness(g, es::EdgeLength::inverse_weight, t) == c1);
  }
}

TEST_CASE("by_person keys scores by id") {
  const auto g = fixture::star(2);
  const auto m = es::by_person(g, es::betweenness(g));
  CHECK(m.size() == 3);
  CHECK(m.at("n000") == doctest::Approx(1.0));
}

TEST_CASE("assemble_features") {
  std::vector<es::Publication> pubs(4);
  pubs[0].journal = "Journal A";
  pubs[0].category_id = "ir";
  pubs[0].reader_count = 10;
  pubs[1].journal = "journal b";
  pubs[1].category_id = "ir";
  pubs[1].reader_count = 5;
  pubs[2].category_id = "ir";  // no journal: not part of the mean
  pubs[2].reader_count = 1;
  pubs[3].journal = "Journal A";
  pubs[3].category_id = "ml";  // other category
  pubs[3].reader_count = 100;
  const es::JournalRankTable ranks{{"journal a", 0.8}, {"journal b", 0.6}};
  es::Person person;
  person.person_id = "p";
  const std::vector<std::size_t> mine{0, 1, 2, 3};
  const auto fv = es::assemble_features(person, mine, "ir", {0.1, 2.0, 3.0}, pubs, ranks, 4);
  CHECK(fv.journal_rank == doctest::Approx(0.7));
  CHECK(fv.reader_count == 16);
  CHECK(fv.user_rank == 4);
  CHECK(fv.pagerank == 0.1);
  CHECK(fv.betweenness == 2.0);
  CHECK(fv.closeness == 3.0);

  const auto none = es::assemble_features(person, std::vector<std::size_t>{2}, "ir", {}, pubs,
                                          ranks, 0);
  CHECK(none.journal_rank == 0.0);

  pubs[1].journal = "Unlisted";
  const auto unknown = es::assemble_features(person, mine, "ir", {}, pubs, ranks, 0);
  CHECK(unknown.journal_rank == doctest::Approx(0.4));
}

TEST_CASE("category features on the bundled corpus") {
  const auto corpus = es::load_corpus(ES_DATA_DIR "/corpus");
  const auto r = es::resolve_persons(corpus.publications, corpus.profiles);
  const auto g = es::overlay_profile_edges(es::build_coauthor_graph(corpus.publications, r),
                                           corpus.edges, r);
  for (const auto& c : corpus.taxonomy) {
    const auto fv = es::category_features(g, c.category_id, corpus.publications, r,
                                          corpus.journal_ranks);
    REQUIRE_FALSE(fv.empty());
    double sum = 0;
    for (const auto& f : fv) {
      sum += f.pagerank;
      CHECK(f.category_id == c.category_id);
      CHECK(f.journal_rank >= 0.0);
      CHECK(f.journal_rank <= 1.0);
      CHECK(f.betweenness >= 0.0);
      CHECK(f.closeness >= 0.0);
      CHECK(f.user_rank == 0);
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(std::is_sorted(fv.begin(), fv.end(),
                         [](const auto& a, const auto& b) { return a.person_id < b.person_id; }));
  }
}

TEST_CASE("feature dump round trip at nine digits") {
  std::vector<es::FeatureVector> fv(2);
  fv[0] = {"p1", "ir", 0.123456789123, 2.5, 1.0 / 3, 0.7, 12, -1};
  fv[1] = {"p2", "ir", 1e-12, 0, 0, 0, 0, 0};
  std::stringstream s;
  es::write_feature_dump(s, fv);
  CHECK(s.str().substr(0, s.str().find('\n')) == "p1,ir,0.123456789,2.5,0.333333333,0.7,12,-1");
  const auto back = es::read_feature_dump(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0].pagerank == 0.123456789);
  CHECK(back[1].pagerank == 1e-12);
  CHECK(back[0].user_rank == -1);
  CHECK(es::format_real(0.1 + 0.2) == "0.3");
}
