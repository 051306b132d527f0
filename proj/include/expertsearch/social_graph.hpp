#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "expertsearch/corpus.hpp"
#include "expertsearch/name_match.hpp"

namespace expertsearch {

struct Person {
  std::string person_id;
  std::string display_name;
  std::optional<std::string> profile_id;
  AcademicStatus academic_status = AcademicStatus::other;
  std::int64_t total_reader_count = 0;
  std::int64_t vote_tally = 0;

  bool operator==(const Person&) const = default;
};

struct ResolutionStats {
  std::size_t distinct_author_names = 0;
  std::size_t matched = 0;
  std::size_t discarded_for_tie = 0;
  std::size_t over_threshold = 0;
};

/// Result of author/profile entity resolution. Persons are sorted by
/// person_id; all index vectors refer to positions in `persons` and in the
/// publication list that was resolved.
struct Resolution {
  std::vector<Person> persons;
  // Normalized author name -> person index. Total over author occurrences.
  std::map<std::string, std::size_t> author_to_person;
  // Profile id -> person index.
  std::map<std::string, std::size_t> profile_to_person;
  // Sorted publication indices per person.
  std::vector<std::vector<std::size_t>> person_publications;
  // Sorted distinct person indices per publication.
  std::vector<std::vector<std::size_t>> publication_persons;
  ResolutionStats stats;

  std::optional<std::size_t> find(std::string_view person_id) const;
};

/// Every distinct normalized author name resolves to the profile chosen by
/// ProfileMatcher, or to an author-only person `au_<name>`. Author names that
/// resolve to the same profile share one person. Every profile yields a
/// person even without publications.
Resolution resolve_persons(std::span<const Publication> publications,
                           std::span<const Profile> profiles,
                           const MatchOptions& opts = {});

struct EdgeData {
  std::int64_t coauthor_count = 0;
  bool has_profile_edge = false;
  double weight = 0.0;

  bool operator==(const EdgeData&) const = default;
};

/// Undirected weighted graph over person ids. Node indices follow the sorted
/// order of ids; edge keys are (i, j) with i < j. Edge weight is always
/// coauthor_count + alpha * has_profile_edge.
class SocialGraph {
 public:
  using EdgeKey = std::pair<std::size_t, std::size_t>;

  explicit SocialGraph(std::vector<std::string> node_ids = {},
                       double alpha = 1.0);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  double alpha() const { return alpha_; }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node_id(std::size_t i) const { return nodes_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  const std::map<EdgeKey, EdgeData>& edges() const { return edges_; }
  const EdgeData* edge(std::size_t i, std::size_t j) const;

  void add_coauthorship(std::size_t i, std::size_t j, std::int64_t count = 1);
  void add_profile_link(std::size_t i, std::size_t j);

  /// Induced subgraph on the given node ids (unknown ids ignored).
  SocialGraph induced(std::span<const std::string> ids) const;

  bool operator==(const SocialGraph&) const = default;

 private:
  EdgeData& slot(std::size_t i, std::size_t j);
  void reweigh(EdgeData& e) const;

  std::vector<std::string> nodes_;
  std::map<EdgeKey, EdgeData> edges_;
  double alpha_;
};

/// Nodes: every person. Each publication adds +1 to each distinct pair of
/// its resolved persons.
SocialGraph build_coauthor_graph(std::span<const Publication> publications,
                                 const Resolution& resolution,
                                 double alpha = 1.0);

struct OverlayReport {
  std::size_t applied = 0;
  std::vector<std::string> skipped;  // "a,b" for unresolved endpoints
};

SocialGraph overlay_profile_edges(SocialGraph graph,
                                  const ProfileEdgeSet& profile_edges,
                                  const Resolution& resolution,
                                  OverlayReport* report = nullptr);

/// Induced subgraph on persons with at least one publication in the category.
SocialGraph category_subgraph(const SocialGraph& graph,
                              std::string_view category_id,
                              std::span<const Publication> publications,
                              const Resolution& resolution);

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t connected_component_count = 0;
  std::size_t largest_component_size = 0;
  // Components with >= 2 nodes whose edge count is n(n-1)/2.
  std::size_t clique_like_component_count = 0;

  bool operator==(const GraphStats&) const = default;
};

GraphStats graph_stats(const SocialGraph& graph);

/// `person_a,person_b,coauthor_count,has_profile_edge,weight` per edge.
void write_edge_list(std::ostream& out, const SocialGraph& graph);

/// Reads an edge list back onto the given node set.
SocialGraph read_edge_list(std::istream& in, std::vector<std::string> node_ids,
                           double alpha);

}  // namespace expertsearch
