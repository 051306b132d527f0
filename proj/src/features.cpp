#include "expertsearch/features.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "expertsearch/name_match.hpp"

namespace expertsearch {

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::pagerank: return "pagerank";
    case Feature::betweenness: return "betweenness";
    case Feature::closeness: return "closeness";
    case Feature::journal_rank: return "journal_rank";
    case Feature::reader_count: return "reader_count";
    case Feature::user_rank: return "user_rank";
  }
  return "";
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (auto f : kAllFeatures) {
    if (feature_name(f) == name) return f;
  }
  return std::nullopt;
}

double FeatureVector::value(Feature f) const {
  switch (f) {
    case Feature::pagerank: return pagerank;
    case Feature::betweenness: return betweenness;
    case Feature::closeness: return closeness;
    case Feature::journal_rank: return journal_rank;
    case Feature::reader_count: return static_cast<double>(reader_count);
    case Feature::user_rank: return static_cast<double>(user_rank);
  }
  return 0.0;
}

FeatureVector assemble_features(const Person& person,
                                std::span<const std::size_t> person_publications,
                                std::string_view category_id,
                                const GraphScores& scores,
                                std::span<const Publication> publications,
                                const JournalRankTable& journal_ranks,
                                std::int64_t user_rank) {
  FeatureVector fv;
  fv.person_id = person.person_id;
  fv.category_id = std::string(category_id);
  fv.pagerank = scores.pagerank;
  fv.betweenness = scores.betweenness;
  fv.closeness = scores.closeness;
  fv.user_rank = user_rank;

  double rank_sum = 0.0;
  std::size_t ranked = 0;
  for (auto pi : person_publications) {
    const auto& pub = publications[pi];
    if (pub.category_id != category_id) continue;
    fv.reader_count += pub.reader_count;
    if (pub.journal) {
      auto it = journal_ranks.find(normalize_name(*pub.journal));
      rank_sum += it == journal_ranks.end() ? 0.0 : it->second;
      ++ranked;
    }
  }
  fv.journal_rank = ranked == 0 ? 0.0 : rank_sum / static_cast<double>(ranked);
  return fv;
}

std::vector<FeatureVector> category_features(
    const SocialGraph& fused_graph, std::string_view category_id,
    std::span<const Publication> publications, const Resolution& resolution,
    const JournalRankTable& journal_ranks, const FeatureOptions& opts) {
  const SocialGraph sub =
      category_subgraph(fused_graph, category_id, publications, resolution);
  const SocialGraph& scored =
      opts.scope == FeatureScope::full_graph ? fused_graph : sub;

  const Eigen::VectorXd pr = pagerank(scored, opts.pagerank);
  const Eigen::VectorXd bc = betweenness(scored, opts.edge_length, opts.threads);
  const Eigen::VectorXd cc = closeness(scored, opts.edge_length, opts.threads);

  std::vector<FeatureVector> out;
  out.reserve(sub.node_count());
  for (const auto& id : sub.nodes()) {
    const auto person = resolution.find(id);
    const auto node = static_cast<Eigen::Index>(*scored.index_of(id));
    const GraphScores scores{pr[node], bc[node], cc[node]};
    out.push_back(assemble_features(
        resolution.persons[*person], resolution.person_publications[*person],
        category_id, scores, publications, journal_ranks, 0));
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_feature_dump(std::ostream& out,
                        std::span<const FeatureVector> features) {
  for (const auto& f : features) {
    out << f.person_id << ',' << f.category_id << ',' << format_real(f.pagerank)
        << ',' << format_real(f.betweenness) << ',' << format_real(f.closeness)
        << ',' << format_real(f.journal_rank) << ',' << f.reader_count << ','
        << f.user_rank << '\n';
  }
}

std::vector<FeatureVector> read_feature_dump(std::istream& in) {
  std::vector<FeatureVector> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const auto pos = line.find(',', start);
      f.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (f.size() != 8) throw ParseError("feature dump", lineno, "expected 8 fields");
    try {
      FeatureVector fv;
      fv.person_id = f[0];
      fv.category_id = f[1];
      fv.pagerank = std::stod(f[2]);
      fv.betweenness = std::stod(f[3]);
      fv.closeness = std::stod(f[4]);
      fv.journal_rank = std::stod(f[5]);
      fv.reader_count = std::stoll(f[6]);
      fv.user_rank = std::stoll(f[7]);
      out.push_back(std::move(fv));
    } catch (const std::logic_error&) {
      throw ParseError("feature dump", lineno, "bad numeric field");
    }
  }
  return out;
}

}  // namespace expertsearch
