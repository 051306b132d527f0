#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expertsearch/c45.hpp"
#include "expertsearch/corpus.hpp"
#include "expertsearch/features.hpp"
#include "expertsearch/name_match.hpp"
#include "expertsearch/ranking.hpp"
#include "expertsearch/social_graph.hpp"

namespace expertsearch {

struct EngineOptions {
  double alpha = 1.0;
  MatchOptions match;
  FeatureOptions features;
};

/// The resolved corpus, fused social graph and per-category features.
class ExpertIndex {
 public:
  static ExpertIndex build(Corpus corpus, const EngineOptions& opts = {});

  const Corpus& corpus() const { return corpus_; }
  const Resolution& resolution() const { return resolution_; }
  const SocialGraph& graph() const { return graph_; }
  const OverlayReport& overlay_report() const { return overlay_; }
  const EngineOptions& options() const { return opts_; }

  /// Features for one category, quantized to the precision of the feature
  /// dump so in-memory and on-disk paths score identically.
  std::vector<FeatureVector> features_for(std::string_view category_id) const;
  /// All categories in taxonomy order.
  std::vector<FeatureVector> all_features() const;

  std::map<std::string, PersonInfo, std::less<>> person_info() const;

 private:
  Corpus corpus_;
  Resolution resolution_;
  SocialGraph graph_;
  OverlayReport overlay_;
  EngineOptions opts_;
};

/// Rounds reals to the 9 significant digits of the dump format.
FeatureVector quantize(FeatureVector fv);

/// An index directory as written by write_index.
struct IndexFiles {
  std::vector<Person> persons;  // sorted by person_id
  CategoryTaxonomy taxonomy;
  std::vector<FeatureVector> features;
  SocialGraph graph;

  std::map<std::string, PersonInfo, std::less<>> person_info() const;
  const Person* find_person(std::string_view person_id) const;
};

/// Writes persons.txt, taxonomy.txt, graph.txt, features.txt and
/// resolution.txt into `dir` (created if missing).
void write_index(const std::filesystem::path& dir, const ExpertIndex& index);
IndexFiles read_index(const std::filesystem::path& dir, double alpha = 1.0);

/// Resolves a label's person_ref as a person_id, else as a unique
/// normalized display name.
std::optional<std::string> resolve_person_ref(std::string_view ref,
                                              std::span<const Person> persons);

struct TrainingSet {
  std::vector<LabeledExample> examples;
  std::vector<std::string> skipped;
};

/// Joins labels with features on (person, category). In strict mode an
/// unresolvable label throws ParseError.
TrainingSet build_training_set(std::span<const TrainingLabel> labels,
                               std::span<const FeatureVector> features,
                               std::span<const Person> persons,
                               IngestMode mode = IngestMode::strict);

/// Trains from labels, or from bootstrap_labels when `labels` is empty.
DecisionTree train_from_features(std::span<const TrainingLabel> labels,
                                 std::span<const FeatureVector> features,
                                 std::span<const Person> persons,
                                 IngestMode mode = IngestMode::strict,
                                 const TrainParams& params = {});

}  // namespace expertsearch
