#include "expertsearch/centrality.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseCore>

namespace expertsearch {

Adjacency::Adjacency(const SocialGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [key, e] : graph.edges()) {
    ++degree[key.first];
    ++degree[key.second];
  }
  offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets[v + 1] = offsets[v] + degree[v];
  targets.resize(offsets[n]);
  weights.resize(offsets[n]);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [key, e] : graph.edges()) {
    targets[fill[key.first]] = key.second;
    weights[fill[key.first]++] = e.weight;
  }
  for (const auto& [key, e] : graph.edges()) {
    targets[fill[key.second]] = key.first;
    weights[fill[key.second]++] = e.weight;
  }
  for (std::size_t v = 0; v < n; ++v) {
    // Sort each row by neighbour index.
    std::vector<std::pair<std::size_t, double>> row;
    for (auto k = offsets[v]; k < offsets[v + 1]; ++k) {
      row.emplace_back(targets[k], weights[k]);
    }
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < row.size(); ++k) {
      targets[offsets[v] + k] = row[k].first;
      weights[offsets[v] + k] = row[k].second;
    }
  }
}

Eigen::VectorXd pagerank(const SocialGraph& graph,
                         const PageRankOptions& opts) {
  if (!(opts.damping > 0.0 && opts.damping < 1.0)) {
    throw std::invalid_argument("pagerank: damping must lie in (0,1)");
  }
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (n == 0) return {};

  Eigen::VectorXd strength = Eigen::VectorXd::Zero(n);
  for (const auto& [key, e] : graph.edges()) {
    strength[key.first] += e.weight;
    strength[key.second] += e.weight;
  }

  // Column-stochastic transition matrix: T(v, u) = w(u, v) / strength(u).
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * graph.edge_count());
  for (const auto& [key, e] : graph.edges()) {
    const auto u = static_cast<Eigen::Index>(key.first);
    const auto v = static_cast<Eigen::Index>(key.second);
    triplets.emplace_back(v, u, e.weight / strength[u]);
    triplets.emplace_back(u, v, e.weight / strength[v]);
  }
  Eigen::SparseMatrix<double> transition(n, n);
  transition.setFromTriplets(triplets.begin(), triplets.end());

  const Eigen::ArrayXd dangling =
      (strength.array() == 0.0).cast<double>();
  const double teleport = (1.0 - opts.damping) / static_cast<double>(n);

  Eigen::VectorXd rank =
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double dangling_mass = (dangling * rank.array()).sum();
    Eigen::VectorXd next =
        (opts.damping * (transition * rank)).array() +
        (opts.damping * dangling_mass / static_cast<double>(n) + teleport);
    const double change = (next - rank).lpNorm<1>();
    rank.swap(next);
    if (change < opts.tolerance) break;
  }
  return rank / rank.sum();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Fixed source partition; reduction order depends only on this.
constexpr std::size_t kSourceBlocks = 64;

double edge_length(double weight, EdgeLength mode) {
  return mode == EdgeLength::unit ? 1.0 : 1.0 / weight;
}

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<std::vector<std::size_t>> preds;
  std::vector<std::size_t> order;  // settlement order, non-decreasing dist

  explicit ShortestPaths(std::size_t n)
      : dist(n, kInf), sigma(n, 0.0), preds(n) {
    order.reserve(n);
  }

  void run(const Adjacency& adj, std::size_t source, EdgeLength mode) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    std::vector<char> settled(dist.size(), 0);
    dist[source] = 0.0;
    sigma[source] = 1.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (settled[v]) continue;
      settled[v] = 1;
      order.push_back(v);
      for (auto k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) {
        const std::size_t w = adj.targets[k];
        if (settled[w]) continue;
        const double nd = d + edge_length(adj.weights[k], mode);
        if (nd < dist[w] - kPathLengthTolerance) {
          dist[w] = nd;
          sigma[w] = sigma[v];
          preds[w].assign(1, v);
          queue.emplace(nd, w);
        } else if (std::abs(nd - dist[w]) <= kPathLengthTolerance) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
  }
};

unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return std::min<unsigned>(threads, kSourceBlocks);
}

// Runs `work(begin, end, partial)` for every source block and sums the partial
// vectors in block order.
template <typename Work>
Eigen::VectorXd blocked_reduce(std::size_t n, unsigned threads, Work work) {
  const std::size_t blocks = std::min<std::size_t>(kSourceBlocks, n);
  std::vector<Eigen::VectorXd> partials(blocks, Eigen::VectorXd::Zero(n));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < blocks;) {
      const std::size_t begin = n * b / blocks;
      const std::size_t end = n * (b + 1) / blocks;
      work(begin, end, partials[b]);
    }
  };
  const unsigned t = resolve_threads(threads);
  if (t <= 1 || blocks <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
  }
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  for (const auto& p : partials) total += p;
  return total;
}

}  // namespace

Eigen::VectorXd betweenness(const SocialGraph& graph, EdgeLength length,
                            unsigned threads) {
  const std::size_t n = graph.node_count();
  if (n == 0) return {};
  const Adjacency adj(graph);
  Eigen::VectorXd total = blocked_reduce(
      n, threads,
      [&](std::size_t begin, std::size_t end, Eigen::VectorXd& acc) {
        ShortestPaths sp(n);
        std::vector<double> delta(n);
        for (std::size_t s = begin; s < end; ++s) {
          sp.run(adj, s, length);
          std::fill(delta.begin(), delta.end(), 0.0);
          for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
            const std::size_t w = *it;
            for (const std::size_t v : sp.preds[w]) {
              delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) acc[static_cast<Eigen::Index>(w)] += delta[w];
          }
        }
      });
  // Each unordered pair was visited from both ends.
  return total / 2.0;
}

Eigen::VectorXd closeness(const SocialGraph& graph, EdgeLength length,
                          unsigned threads) {
  const std::size_t n = graph.node_count();
  if (n == 0) return {};
  const Adjacency adj(graph);
  return blocked_reduce(
      n, threads,
      [&](std::size_t begin, std::size_t end, Eigen::VectorXd& acc) {
        ShortestPaths sp(n);
        for (std::size_t s = begin; s < end; ++s) {
          sp.run(adj, s, length);
          double sum = 0.0;
          for (std::size_t u = 0; u < n; ++u) {
            if (u != s && std::isfinite(sp.dist[u])) sum += 1.0 / sp.dist[u];
          }
          acc[static_cast<Eigen::Index>(s)] = sum;
        }
      });
}

std::map<std::string, double> by_person(const SocialGraph& graph,
                                        const Eigen::VectorXd& scores) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    out.emplace(graph.node_id(i), scores[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

}  // namespace expertsearch
