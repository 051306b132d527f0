#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expertsearch/centrality.hpp"
#include "expertsearch/corpus.hpp"
#include "expertsearch/social_graph.hpp"

namespace expertsearch {

enum class Feature {
  pagerank,
  betweenness,
  closeness,
  journal_rank,
  reader_count,
  user_rank,
};

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::pagerank,     Feature::betweenness,  Feature::closeness,
    Feature::journal_rank, Feature::reader_count, Feature::user_rank};

std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

struct FeatureVector {
  std::string person_id;
  std::string category_id;
  double pagerank = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
  double journal_rank = 0.0;
  std::int64_t reader_count = 0;
  std::int64_t user_rank = 0;

  double value(Feature f) const;
  bool operator==(const FeatureVector&) const = default;
};

struct GraphScores {
  double pagerank = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
};

/// Combines centralities with the person's in-category publications.
/// journal_rank averages over publications that name a journal; journals
/// missing from the table count as 0.
FeatureVector assemble_features(const Person& person,
                                std::span<const std::size_t> person_publications,
                                std::string_view category_id,
                                const GraphScores& scores,
                                std::span<const Publication> publications,
                                const JournalRankTable& journal_ranks,
                                std::int64_t user_rank);

enum class FeatureScope {
  category_subgraph,  // centralities on the category's induced subgraph
  full_graph,
};

struct FeatureOptions {
  FeatureScope scope = FeatureScope::category_subgraph;
  PageRankOptions pagerank;
  EdgeLength edge_length = EdgeLength::inverse_weight;
  unsigned threads = 0;
};

/// Centrality-derived features for every person with a publication in the
/// category, sorted by person_id. user_rank is left at zero.
std::vector<FeatureVector> category_features(
    const SocialGraph& fused_graph, std::string_view category_id,
    std::span<const Publication> publications, const Resolution& resolution,
    const JournalRankTable& journal_ranks, const FeatureOptions& opts = {});

/// `person_id,category_id,pagerank,betweenness,closeness,journal_rank,
/// reader_count,user_rank`, reals with 9 significant digits.
void write_feature_dump(std::ostream& out,
                        std::span<const FeatureVector> features);
std::vector<FeatureVector> read_feature_dump(std::istream& in);

std::string format_real(double v);

}  // namespace expertsearch
