#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "expertsearch/features.hpp"

namespace expertsearch {

struct LabeledExample {
  FeatureVector features;
  bool is_expert = false;
};

/// Binary entropy in bits of a (pos, neg) class split; 0·log 0 = 0.
double entropy(std::int64_t pos, std::int64_t neg);

struct Split {
  Feature feature = Feature::pagerank;
  double threshold = 0.0;  // left branch: value <= threshold
  double gain = 0.0;
  double split_info = 0.0;
  double gain_ratio = 0.0;
  std::size_t left_size = 0;
  std::size_t right_size = 0;
};

/// Best binary threshold on one continuous feature. Candidates are the
/// midpoints between consecutive distinct values with at least `min_leaf`
/// examples on each side; the candidate with the largest gain ratio wins
/// (lowest threshold on ties). Returns nullopt when no candidate exists,
/// e.g. for a constant feature.
std::optional<Split> best_split(std::span<const LabeledExample> data,
                                Feature feature, std::size_t min_leaf = 1);

struct TrainParams {
  std::size_t min_leaf = 2;
  std::size_t max_depth = 6;
};

/// Binary C4.5 tree over continuous features, stored in preorder.
class DecisionTree {
 public:
  struct Node {
    bool leaf = true;
    Feature feature = Feature::pagerank;
    double threshold = 0.0;
    std::int64_t expert_count = 0;
    std::int64_t non_expert_count = 0;
    std::size_t left = 0;   // child indices, internal nodes only
    std::size_t right = 0;

    bool operator==(const Node&) const = default;
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }
  const Node& leaf_for(const FeatureVector& features) const;
  std::size_t depth() const;

  /// Preorder text form: `node <feature> <threshold>` or `leaf <pos> <neg>`.
  void write(std::ostream& out) const;
  static DecisionTree read(std::istream& in);

  bool operator==(const DecisionTree&) const = default;

 private:
  friend DecisionTree train_c45(std::span<const LabeledExample>,
                                const TrainParams&);
  friend class TreeReader;
  std::vector<Node> nodes_;
};

/// Grows a tree top-down. At each node only features whose best split has
/// gain at least the mean gain over all splittable features compete, and
/// the largest gain ratio among them is chosen. Growth stops on a pure node,
/// fewer than 2·min_leaf examples, max_depth, or no split with positive gain.
/// Throws std::invalid_argument on an empty dataset.
DecisionTree train_c45(std::span<const LabeledExample> data,
                       const TrainParams& params = {});

/// Laplace-smoothed expert probability of the leaf the features reach.
double score(const DecisionTree& tree, const FeatureVector& features);

}  // namespace expertsearch
