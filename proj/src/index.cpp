#include "expertsearch/index.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace expertsearch {

ExpertIndex ExpertIndex::build(Corpus corpus, const EngineOptions& opts) {
  ExpertIndex idx;
  idx.opts_ = opts;
  idx.corpus_ = std::move(corpus);
  idx.resolution_ = resolve_persons(idx.corpus_.publications,
                                    idx.corpus_.profiles, opts.match);
  idx.graph_ = overlay_profile_edges(
      build_coauthor_graph(idx.corpus_.publications, idx.resolution_, opts.alpha),
      idx.corpus_.edges, idx.resolution_, &idx.overlay_);
  return idx;
}

FeatureVector quantize(FeatureVector fv) {
  fv.pagerank = std::stod(format_real(fv.pagerank));
  fv.betweenness = std::stod(format_real(fv.betweenness));
  fv.closeness = std::stod(format_real(fv.closeness));
  fv.journal_rank = std::stod(format_real(fv.journal_rank));
  return fv;
}

std::vector<FeatureVector> ExpertIndex::features_for(
    std::string_view category_id) const {
  auto out = category_features(graph_, category_id, corpus_.publications,
                               resolution_, corpus_.journal_ranks,
                               opts_.features);
  for (auto& fv : out) fv = quantize(std::move(fv));
  return out;
}

std::vector<FeatureVector> ExpertIndex::all_features() const {
  std::vector<FeatureVector> out;
  for (const auto& c : corpus_.taxonomy) {
    auto part = features_for(c.category_id);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

namespace {

std::map<std::string, PersonInfo, std::less<>> info_of(std::span<const Person> persons) {
  std::map<std::string, PersonInfo, std::less<>> out;
  for (const auto& p : persons) out.emplace(p.person_id, PersonInfo{p.academic_status});
  return out;
}

std::ofstream create(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

}  // namespace

std::map<std::string, PersonInfo, std::less<>> ExpertIndex::person_info() const {
  return info_of(resolution_.persons);
}

std::map<std::string, PersonInfo, std::less<>> IndexFiles::person_info() const {
  return info_of(persons);
}

const Person* IndexFiles::find_person(std::string_view person_id) const {
  auto it = std::lower_bound(
      persons.begin(), persons.end(), person_id,
      [](const Person& p, std::string_view id) { return p.person_id < id; });
  return it != persons.end() && it->person_id == person_id ? &*it : nullptr;
}

void write_index(const std::filesystem::path& dir, const ExpertIndex& index) {
  std::filesystem::create_directories(dir);
  {
    auto out = create(dir / "persons.txt");
    for (const auto& p : index.resolution().persons) {
      out << p.person_id << '|' << p.display_name << '|'
          << p.profile_id.value_or("") << '|' << to_string(p.academic_status)
          << '|' << p.total_reader_count << '\n';
    }
  }
  {
    auto out = create(dir / "taxonomy.txt");
    write_taxonomy(out, index.corpus().taxonomy);
  }
  {
    auto out = create(dir / "graph.txt");
    write_edge_list(out, index.graph());
  }
  {
    auto out = create(dir / "features.txt");
    write_feature_dump(out, index.all_features());
  }
  {
    auto out = create(dir / "resolution.txt");
    const auto& r = index.resolution();
    for (const auto& [author, person] : r.author_to_person) {
      out << author << '|' << r.persons[person].person_id << '\n';
    }
  }
}

IndexFiles read_index(const std::filesystem::path& dir, double alpha) {
  IndexFiles files;
  {
    auto in = open(dir / "persons.txt");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::size_t start = 0;
      for (;;) {
        const auto pos = line.find('|', start);
        f.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
      }
      const auto status = f.size() == 5 ? parse_status(f[3]) : std::nullopt;
      if (!status) throw ParseError((dir / "persons.txt").string(), lineno, "bad person record");
      Person p;
      p.person_id = f[0];
      p.display_name = f[1];
      if (!f[2].empty()) p.profile_id = f[2];
      p.academic_status = *status;
      p.total_reader_count = std::stoll(f[4]);
      files.persons.push_back(std::move(p));
    }
    std::sort(files.persons.begin(), files.persons.end(),
              [](const Person& a, const Person& b) { return a.person_id < b.person_id; });
  }
  files.taxonomy = load_taxonomy(dir / "taxonomy.txt");
  {
    auto in = open(dir / "features.txt");
    files.features = read_feature_dump(in);
  }
  {
    auto in = open(dir / "graph.txt");
    std::vector<std::string> ids;
    for (const auto& p : files.persons) ids.push_back(p.person_id);
    files.graph = read_edge_list(in, std::move(ids), alpha);
  }
  return files;
}

std::optional<std::string> resolve_person_ref(std::string_view ref,
                                              std::span<const Person> persons) {
  for (const auto& p : persons) {
    if (p.person_id == ref) return p.person_id;
  }
  const auto norm = normalize_name(ref);
  std::optional<std::string> found;
  for (const auto& p : persons) {
    if (normalize_name(p.display_name) == norm) {
      if (found) return std::nullopt;
      found = p.person_id;
    }
  }
  return found;
}

TrainingSet build_training_set(std::span<const TrainingLabel> labels,
                               std::span<const FeatureVector> features,
                               std::span<const Person> persons,
                               IngestMode mode) {
  std::map<std::pair<std::string, std::string>, const FeatureVector*> lookup;
  for (const auto& fv : features) lookup[{fv.person_id, fv.category_id}] = &fv;

  TrainingSet set;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& label = labels[i];
    std::string problem;
    const auto id = resolve_person_ref(label.person_ref, persons);
    const FeatureVector* fv = nullptr;
    if (!id) {
      problem = "label '" + label.person_ref + "' matches no unique person";
    } else if (auto it = lookup.find({*id, label.category_id}); it == lookup.end()) {
      problem = "person '" + *id + "' has no features in category '" +
                label.category_id + "'";
    } else {
      fv = it->second;
    }
    if (fv == nullptr) {
      if (mode == IngestMode::strict) throw ParseError("labels", i + 1, problem);
      set.skipped.push_back(problem);
      continue;
    }
    set.examples.push_back({*fv, label.is_expert});
  }
  return set;
}

DecisionTree train_from_features(std::span<const TrainingLabel> labels,
                                 std::span<const FeatureVector> features,
                                 std::span<const Person> persons,
                                 IngestMode mode, const TrainParams& params) {
  std::vector<TrainingLabel> generated;
  if (labels.empty()) {
    generated = bootstrap_labels(features);
    labels = generated;
  }
  const TrainingSet set = build_training_set(labels, features, persons, mode);
  return train_c45(set.examples, params);
}

}  // namespace expertsearch
