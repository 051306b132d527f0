#include "expertsearch/social_graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace expertsearch {

namespace {

std::string author_person_id(std::string_view normalized) {
  std::string id = "au_";
  for (char ch : normalized) {
    const auto c = static_cast<unsigned char>(ch);
    id.push_back(std::isalnum(c) && c < 0x80 ? ch : '_');
  }
  return id;
}

}  // namespace

std::optional<std::size_t> Resolution::find(std::string_view person_id) const {
  auto it = std::lower_bound(
      persons.begin(), persons.end(), person_id,
      [](const Person& p, std::string_view id) { return p.person_id < id; });
  if (it == persons.end() || it->person_id != person_id) return std::nullopt;
  return static_cast<std::size_t>(it - persons.begin());
}

Resolution resolve_persons(std::span<const Publication> publications,
                           std::span<const Profile> profiles,
                           const MatchOptions& opts) {
  Resolution r;

  // Smallest raw spelling per normalized author name.
  std::map<std::string, std::string> spellings;
  for (const auto& pub : publications) {
    for (const auto& raw : pub.author_names) {
      auto norm = normalize_name(raw);
      auto [it, fresh] = spellings.emplace(std::move(norm), raw);
      if (!fresh && raw < it->second) it->second = raw;
    }
  }
  r.stats.distinct_author_names = spellings.size();

  // Provisional persons keyed by person_id.
  std::map<std::string, Person> by_id;
  std::set<std::string> profile_ids;
  for (const auto& p : profiles) {
    profile_ids.insert(p.profile_id);
    Person person;
    person.person_id = p.profile_id;
    person.display_name = p.display_name;
    person.profile_id = p.profile_id;
    person.academic_status = p.academic_status;
    by_id.emplace(p.profile_id, std::move(person));
  }

  ProfileMatcher matcher(profiles, opts);
  std::map<std::string, std::string> author_to_id;
  std::set<std::string> taken(profile_ids);
  for (const auto& [norm, spelling] : spellings) {
    const MatchResult m = matcher.match(norm);
    if (m.matched_id) {
      ++r.stats.matched;
      author_to_id.emplace(norm, *m.matched_id);
      continue;
    }
    if (m.discarded_for_tie) {
      ++r.stats.discarded_for_tie;
    } else {
      ++r.stats.over_threshold;
    }
    std::string id = author_person_id(norm);
    if (taken.contains(id)) {
      for (int k = 2;; ++k) {
        std::string alt = id + "_" + std::to_string(k);
        if (!taken.contains(alt)) {
          id = std::move(alt);
          break;
        }
      }
    }
    taken.insert(id);
    Person person;
    person.person_id = id;
    person.display_name = spelling;
    by_id.emplace(id, std::move(person));
    author_to_id.emplace(norm, std::move(id));
  }

  std::map<std::string, std::size_t> index;
  for (auto& [id, person] : by_id) {
    index.emplace(id, r.persons.size());
    r.persons.push_back(std::move(person));
  }
  for (const auto& [norm, id] : author_to_id) {
    r.author_to_person.emplace(norm, index.at(id));
  }
  for (const auto& p : profiles) {
    r.profile_to_person.emplace(p.profile_id, index.at(p.profile_id));
  }

  r.person_publications.assign(r.persons.size(), {});
  r.publication_persons.reserve(publications.size());
  for (std::size_t pi = 0; pi < publications.size(); ++pi) {
    std::vector<std::size_t> members;
    for (const auto& raw : publications[pi].author_names) {
      members.push_back(r.author_to_person.at(normalize_name(raw)));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto m : members) {
      r.person_publications[m].push_back(pi);
      r.persons[m].total_reader_count += publications[pi].reader_count;
    }
    r.publication_persons.push_back(std::move(members));
  }
  return r;
}

SocialGraph::SocialGraph(std::vector<std::string> node_ids, double alpha)
    : nodes_(std::move(node_ids)), alpha_(alpha) {
  if (!(alpha_ > 0.0)) {
    throw std::invalid_argument("profile edge weight alpha must be positive");
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

std::optional<std::size_t> SocialGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

const EdgeData* SocialGraph::edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  auto it = edges_.find({i, j});
  return it == edges_.end() ? nullptr : &it->second;
}

EdgeData& SocialGraph::slot(std::size_t i, std::size_t j) {
  if (i == j) throw std::invalid_argument("self-loop on " + nodes_.at(i));
  if (i >= nodes_.size() || j >= nodes_.size()) {
    throw std::out_of_range("edge endpoint out of range");
  }
  if (i > j) std::swap(i, j);
  return edges_[{i, j}];
}

void SocialGraph::reweigh(EdgeData& e) const {
  e.weight = static_cast<double>(e.coauthor_count) +
             (e.has_profile_edge ? alpha_ : 0.0);
}

void SocialGraph::add_coauthorship(std::size_t i, std::size_t j,
                                   std::int64_t count) {
  if (count <= 0) throw std::invalid_argument("coauthor count must be > 0");
  auto& e = slot(i, j);
  e.coauthor_count += count;
  reweigh(e);
}

void SocialGraph::add_profile_link(std::size_t i, std::size_t j) {
  auto& e = slot(i, j);
  e.has_profile_edge = true;
  reweigh(e);
}

SocialGraph SocialGraph::induced(std::span<const std::string> ids) const {
  std::vector<std::string> keep;
  for (const auto& id : ids) {
    if (index_of(id)) keep.push_back(id);
  }
  SocialGraph sub(std::move(keep), alpha_);
  // Old index -> new index.
  std::vector<std::optional<std::size_t>> remap(nodes_.size());
  for (std::size_t k = 0; k < sub.nodes_.size(); ++k) {
    remap[*index_of(sub.nodes_[k])] = k;
  }
  for (const auto& [key, data] : edges_) {
    const auto a = remap[key.first];
    const auto b = remap[key.second];
    if (a && b) sub.edges_.emplace(std::minmax(*a, *b), data);
  }
  return sub;
}

SocialGraph build_coauthor_graph(std::span<const Publication> publications,
                                 const Resolution& resolution, double alpha) {
  std::vector<std::string> ids;
  ids.reserve(resolution.persons.size());
  for (const auto& p : resolution.persons) ids.push_back(p.person_id);
  SocialGraph g(std::move(ids), alpha);
  // Persons are sorted by id, so person index == node index.
  for (std::size_t pi = 0; pi < publications.size(); ++pi) {
    const auto& members = resolution.publication_persons.at(pi);
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        g.add_coauthorship(members[x], members[y]);
      }
    }
  }
  return g;
}

SocialGraph overlay_profile_edges(SocialGraph graph,
                                  const ProfileEdgeSet& profile_edges,
                                  const Resolution& resolution,
                                  OverlayReport* report) {
  for (const auto& e : profile_edges) {
    const auto pa = resolution.profile_to_person.find(e.a);
    const auto pb = resolution.profile_to_person.find(e.b);
    std::optional<std::size_t> a, b;
    if (pa != resolution.profile_to_person.end()) {
      a = graph.index_of(resolution.persons[pa->second].person_id);
    }
    if (pb != resolution.profile_to_person.end()) {
      b = graph.index_of(resolution.persons[pb->second].person_id);
    }
    if (!a || !b || *a == *b) {
      if (report) report->skipped.push_back(e.a + "," + e.b);
      continue;
    }
    graph.add_profile_link(*a, *b);
    if (report) ++report->applied;
  }
  return graph;
}

SocialGraph category_subgraph(const SocialGraph& graph,
                              std::string_view category_id,
                              std::span<const Publication> publications,
                              const Resolution& resolution) {
  std::set<std::string> members;
  for (std::size_t pi = 0; pi < publications.size(); ++pi) {
    if (publications[pi].category_id != category_id) continue;
    for (auto person : resolution.publication_persons.at(pi)) {
      members.insert(resolution.persons[person].person_id);
    }
  }
  const std::vector<std::string> ids(members.begin(), members.end());
  return graph.induced(ids);
}

GraphStats graph_stats(const SocialGraph& graph) {
  GraphStats s;
  const std::size_t n = graph.node_count();
  s.node_count = n;
  s.edge_count = graph.edge_count();

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [key, data] : graph.edges()) {
    const auto a = find(key.first);
    const auto b = find(key.second);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::map<std::size_t, std::pair<std::size_t, std::size_t>> comps;  // nodes, edges
  for (std::size_t v = 0; v < n; ++v) ++comps[find(v)].first;
  for (const auto& [key, data] : graph.edges()) ++comps[find(key.first)].second;

  s.connected_component_count = comps.size();
  for (const auto& [root, ne] : comps) {
    const auto [nodes, edges] = ne;
    s.largest_component_size = std::max(s.largest_component_size, nodes);
    if (nodes >= 2 && edges == nodes * (nodes - 1) / 2) {
      ++s.clique_like_component_count;
    }
  }
  return s;
}

void write_edge_list(std::ostream& out, const SocialGraph& graph) {
  char buf[64];
  for (const auto& [key, e] : graph.edges()) {
    std::snprintf(buf, sizeof buf, "%.9g", e.weight);
    out << graph.node_id(key.first) << ',' << graph.node_id(key.second) << ','
        << e.coauthor_count << ',' << (e.has_profile_edge ? 1 : 0) << ','
        << buf << '\n';
  }
}

SocialGraph read_edge_list(std::istream& in, std::vector<std::string> node_ids,
                           double alpha) {
  SocialGraph g(std::move(node_ids), alpha);
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
    if (f.size() != 5) {
      throw ParseError("edge list", lineno, "expected 5 fields");
    }
    const auto a = g.index_of(f[0]);
    const auto b = g.index_of(f[1]);
    if (!a || !b) throw ParseError("edge list", lineno, "unknown node");
    const long long count = std::stoll(f[2]);
    if (count > 0) g.add_coauthorship(*a, *b, count);
    if (f[3] == "1") g.add_profile_link(*a, *b);
  }
  return g;
}

}  // namespace expertsearch
