#include "expertsearch/c45.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace expertsearch {

double entropy(std::int64_t pos, std::int64_t neg) {
  if (pos < 0 || neg < 0) throw std::invalid_argument("entropy: negative count");
  const double total = static_cast<double>(pos + neg);
  if (pos == 0 || neg == 0) return 0.0;
  const double p = static_cast<double>(pos) / total;
  const double q = static_cast<double>(neg) / total;
  return -p * std::log2(p) - q * std::log2(q);
}

namespace {

std::optional<Split> best_split_on(std::span<const LabeledExample> data,
                                   std::span<const std::size_t> rows,
                                   Feature feature, std::size_t min_leaf) {
  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(rows.size());
  std::int64_t pos = 0;
  for (auto r : rows) {
    sorted.emplace_back(data[r].features.value(feature), data[r].is_expert);
    pos += data[r].is_expert ? 1 : 0;
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<std::int64_t>(sorted.size());
  const std::int64_t neg = n - pos;
  const double parent = entropy(pos, neg);
  const std::int64_t min_side = static_cast<std::int64_t>(std::max<std::size_t>(min_leaf, 1));

  std::optional<Split> best;
  std::int64_t left_pos = 0;
  for (std::int64_t i = 0; i + 1 < n; ++i) {
    left_pos += sorted[i].second ? 1 : 0;
    if (sorted[i].first == sorted[i + 1].first) continue;
    const std::int64_t left = i + 1;
    const std::int64_t right = n - left;
    if (left < min_side || right < min_side) continue;
    const std::int64_t right_pos = pos - left_pos;
    const double wl = static_cast<double>(left) / static_cast<double>(n);
    const double wr = static_cast<double>(right) / static_cast<double>(n);
    const double children = wl * entropy(left_pos, left - left_pos) +
                            wr * entropy(right_pos, right - right_pos);
    Split s;
    s.feature = feature;
    s.threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2.0;
    s.gain = std::max(0.0, parent - children);
    s.split_info = entropy(left, right);
    s.gain_ratio = s.split_info > 0.0 ? s.gain / s.split_info : 0.0;
    s.left_size = static_cast<std::size_t>(left);
    s.right_size = static_cast<std::size_t>(right);
    if (!best || s.gain_ratio > best->gain_ratio) best = s;
  }
  return best;
}

class Builder {
 public:
  Builder(std::span<const LabeledExample> data, const TrainParams& params,
          std::vector<DecisionTree::Node>& nodes)
      : data_(data), params_(params), nodes_(nodes) {}

  std::size_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const std::size_t self = nodes_.size();
    nodes_.emplace_back();
    DecisionTree::Node node;
    for (auto r : rows) {
      (data_[r].is_expert ? node.expert_count : node.non_expert_count) += 1;
    }
    const bool pure = node.expert_count == 0 || node.non_expert_count == 0;
    if (pure || rows.size() < 2 * params_.min_leaf ||
        depth >= params_.max_depth) {
      nodes_[self] = node;
      return self;
    }

    std::vector<Split> candidates;
    for (auto f : kAllFeatures) {
      if (auto s = best_split_on(data_, rows, f, params_.min_leaf)) {
        candidates.push_back(*s);
      }
    }
    const Split* chosen = nullptr;
    if (!candidates.empty()) {
      double mean_gain = 0.0;
      for (const auto& c : candidates) mean_gain += c.gain;
      mean_gain /= static_cast<double>(candidates.size());
      for (const auto& c : candidates) {
        if (c.gain <= 0.0 || c.gain < mean_gain - 1e-12) continue;
        if (chosen == nullptr || c.gain_ratio > chosen->gain_ratio) chosen = &c;
      }
    }
    if (chosen == nullptr) {
      nodes_[self] = node;
      return self;
    }

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (data_[r].features.value(chosen->feature) <= chosen->threshold ? left
                                                                      : right)
          .push_back(r);
    }
    node = {};
    node.leaf = false;
    node.feature = chosen->feature;
    node.threshold = chosen->threshold;
    rows.clear();
    rows.shrink_to_fit();
    node.left = grow(std::move(left), depth + 1);
    node.right = grow(std::move(right), depth + 1);
    nodes_[self] = node;
    return self;
  }

 private:
  std::span<const LabeledExample> data_;
  const TrainParams& params_;
  std::vector<DecisionTree::Node>& nodes_;
};

std::string format_threshold(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::optional<Split> best_split(std::span<const LabeledExample> data,
                                Feature feature, std::size_t min_leaf) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  return best_split_on(data, rows, feature, min_leaf);
}

DecisionTree train_c45(std::span<const LabeledExample> data,
                       const TrainParams& params) {
  if (data.empty()) throw std::invalid_argument("train_c45: empty dataset");
  if (params.min_leaf == 0) throw std::invalid_argument("train_c45: min_leaf must be >= 1");
  DecisionTree tree;
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  Builder(data, params, tree.nodes_).grow(std::move(rows), 0);
  return tree;
}

const DecisionTree::Node& DecisionTree::leaf_for(
    const FeatureVector& features) const {
  if (nodes_.empty()) throw std::logic_error("decision tree is empty");
  const Node* n = &nodes_.front();
  while (!n->leaf) {
    n = &nodes_[features.value(n->feature) <= n->threshold ? n->left : n->right];
  }
  return *n;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes_[i].leaf) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return deepest;
}

void DecisionTree::write(std::ostream& out) const {
  for (const auto& n : nodes_) {
    if (n.leaf) {
      out << "leaf " << n.expert_count << ' ' << n.non_expert_count << '\n';
    } else {
      out << "node " << feature_name(n.feature) << ' '
          << format_threshold(n.threshold) << '\n';
    }
  }
}

class TreeReader {
 public:
  explicit TreeReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      lines_.push_back(line);
    }
  }

  DecisionTree read() {
    DecisionTree tree;
    if (lines_.empty()) throw std::runtime_error("model: no nodes");
    parse(tree.nodes_);
    if (next_ != lines_.size()) throw std::runtime_error("model: trailing lines");
    return tree;
  }

 private:
  std::size_t parse(std::vector<DecisionTree::Node>& nodes) {
    if (next_ >= lines_.size()) throw std::runtime_error("model: truncated");
    std::istringstream ls(lines_[next_]);
    ls.imbue(std::locale::classic());
    const std::size_t lineno = ++next_;
    std::string kind;
    ls >> kind;
    const std::size_t self = nodes.size();
    nodes.emplace_back();
    DecisionTree::Node node;
    if (kind == "leaf") {
      ls >> node.expert_count >> node.non_expert_count;
      if (ls.fail() || node.expert_count < 0 || node.non_expert_count < 0) {
        throw std::runtime_error("model line " + std::to_string(lineno) +
                                 ": bad leaf");
      }
    } else if (kind == "node") {
      std::string name;
      ls >> name >> node.threshold;
      const auto f = parse_feature(name);
      if (ls.fail() || !f) {
        throw std::runtime_error("model line " + std::to_string(lineno) +
                                 ": bad node");
      }
      node.leaf = false;
      node.feature = *f;
      node.left = parse(nodes);
      node.right = parse(nodes);
    } else {
      throw std::runtime_error("model line " + std::to_string(lineno) +
                               ": unknown record '" + kind + "'");
    }
    nodes[self] = node;
    return self;
  }

  std::vector<std::string> lines_;
  std::size_t next_ = 0;
};

DecisionTree DecisionTree::read(std::istream& in) { return TreeReader(in).read(); }

double score(const DecisionTree& tree, const FeatureVector& features) {
  const auto& leaf = tree.leaf_for(features);
  return static_cast<double>(leaf.expert_count + 1) /
         static_cast<double>(leaf.expert_count + leaf.non_expert_count + 2);
}

}  // namespace expertsearch
