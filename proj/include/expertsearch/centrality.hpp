#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "expertsearch/social_graph.hpp"

namespace expertsearch {

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-8;  // L1 change between iterates
  int max_iterations = 100;
};

/// How edge weights become path lengths for betweenness and closeness.
enum class EdgeLength {
  inverse_weight,  // length = 1 / weight, strong ties are short
  unit,
};

// Equal-length tolerance for floating-point path sums.
inline constexpr double kPathLengthTolerance = 1e-12;

/// Compressed adjacency of a SocialGraph; neighbours sorted by index.
struct Adjacency {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<std::size_t> targets;
  std::vector<double> weights;

  explicit Adjacency(const SocialGraph& graph);
  std::size_t size() const { return offsets.size() - 1; }
};

/// Weighted PageRank on the undirected graph read as bidirectional arcs.
/// A walker at u moves to v with probability weight(u,v) / strength(u);
/// isolated nodes jump uniformly. Indexed by node index; sums to one.
Eigen::VectorXd pagerank(const SocialGraph& graph,
                         const PageRankOptions& opts = {});

/// Unnormalized Brandes betweenness, each unordered pair counted once.
/// Sources are split into a fixed number of blocks that may run on
/// separate threads; blocks are reduced in order so the result does not
/// depend on `threads`. `threads == 0` picks hardware concurrency.
Eigen::VectorXd betweenness(const SocialGraph& graph,
                            EdgeLength length = EdgeLength::inverse_weight,
                            unsigned threads = 0);

/// Harmonic closeness: sum over u != v of 1 / d(v, u); unreachable nodes
/// contribute nothing.
Eigen::VectorXd closeness(const SocialGraph& graph,
                          EdgeLength length = EdgeLength::inverse_weight,
                          unsigned threads = 0);

std::map<std::string, double> by_person(const SocialGraph& graph,
                                        const Eigen::VectorXd& scores);

}  // namespace expertsearch
