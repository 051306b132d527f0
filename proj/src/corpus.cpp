#include "expertsearch/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "expertsearch/name_match.hpp"

namespace expertsearch {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Splits a `;` list, dropping empty items.
std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  for (auto& item : split(s, ';')) {
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string tmp(s);
  std::istringstream is(tmp);
  is.imbue(std::locale::classic());
  double v = 0;
  is >> v;
  if (is.fail() || !is.eof()) return std::nullopt;
  return v;
}

class LineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Drives a line-oriented parse: skips blanks and `#` comments, converts
// LineError into a numbered ParseError (strict) or a warning (lenient).
template <typename Fn>
void for_each_record(std::istream& in, std::string_view source,
                     const LoadOptions& opts, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    const auto t = trim(view);
    if (t.empty() || t.front() == '#') continue;
    try {
      fn(view, lineno);
      ++records;
    } catch (const LineError& e) {
      if (opts.mode == IngestMode::strict) {
        throw ParseError(std::string(source), lineno, e.what());
      }
      if (opts.diagnostics != nullptr) {
        opts.diagnostics->warnings.push_back(std::string(source) + ":" +
                                             std::to_string(lineno) + ": " +
                                             e.what() + " (skipped)");
      }
    }
  }
  if (opts.diagnostics != nullptr) opts.diagnostics->records += records;
}

void expect_fields(const std::vector<std::string>& f, std::size_t n) {
  if (f.size() != n) {
    throw LineError("expected " + std::to_string(n) + " fields, found " +
                    std::to_string(f.size()));
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

// Uniqueness tracker reporting both line numbers on a clash.
class UniqueIds {
 public:
  explicit UniqueIds(std::string_view what) : what_(what) {}
  void add(const std::string& id, std::size_t lineno) {
    auto [it, fresh] = seen_.emplace(id, lineno);
    if (!fresh) {
      throw LineError("duplicate " + std::string(what_) + " '" + id +
                      "' on lines " + std::to_string(it->second) + " and " +
                      std::to_string(lineno));
    }
  }

 private:
  std::string_view what_;
  std::unordered_map<std::string, std::size_t> seen_;
};

template <typename Fn>
auto with_file(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_or_throw(path);
  return fn(in, path.string());
}

}  // namespace

std::string_view to_string(AcademicStatus s) {
  switch (s) {
    case AcademicStatus::professor: return "professor";
    case AcademicStatus::postdoc: return "postdoc";
    case AcademicStatus::phd_student: return "phd_student";
    case AcademicStatus::other: return "other";
  }
  return "other";
}

std::optional<AcademicStatus> parse_status(std::string_view token) {
  for (auto s : kAllStatuses) {
    if (to_string(s) == token) return s;
  }
  return std::nullopt;
}

std::string_view to_string(ProfileSource s) {
  return s == ProfileSource::mendeley ? "mendeley" : "academia";
}

std::optional<ProfileSource> parse_source(std::string_view token) {
  if (token == "mendeley") return ProfileSource::mendeley;
  if (token == "academia") return ProfileSource::academia;
  return std::nullopt;
}

ProfileEdge ProfileEdge::make(std::string x, std::string y) {
  if (y < x) std::swap(x, y);
  return {std::move(x), std::move(y)};
}

ParseError::ParseError(const std::string& source, std::size_t line,
                       const std::string& message)
    : std::runtime_error(line == 0 ? source + ": " + message
                                   : source + ":" + std::to_string(line) +
                                         ": " + message),
      line_(line) {}

std::vector<Profile> parse_profiles(std::istream& in, std::string_view source,
                                    const LoadOptions& opts) {
  std::vector<Profile> out;
  UniqueIds ids("profile_id");
  for_each_record(in, source, opts, [&](std::string_view line, std::size_t n) {
    const auto f = split(line, '|');
    expect_fields(f, 5);
    Profile p;
    p.profile_id = f[0];
    p.display_name = f[1];
    if (p.profile_id.empty()) throw LineError("empty profile_id");
    if (p.display_name.empty()) throw LineError("empty display_name");
    auto status = parse_status(f[2]);
    if (!status) throw LineError("unknown academic status '" + f[2] + "'");
    auto src = parse_source(f[3]);
    if (!src) throw LineError("unknown profile source '" + f[3] + "'");
    p.academic_status = *status;
    p.source = *src;
    p.research_interests = split_list(f[4]);
    ids.add(p.profile_id, n);
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<Publication> parse_publications(std::istream& in,
                                            std::string_view source,
                                            const LoadOptions& opts) {
  std::vector<Publication> out;
  UniqueIds ids("pub_id");
  for_each_record(in, source, opts, [&](std::string_view line, std::size_t n) {
    const auto f = split(line, '|');
    expect_fields(f, 7);
    Publication p;
    p.pub_id = f[0];
    if (p.pub_id.empty()) throw LineError("empty pub_id");
    p.title = f[1];
    p.author_names = split_list(f[2]);
    if (p.author_names.empty()) throw LineError("publication has no authors");
    if (!f[3].empty()) p.journal = f[3];
    if (!f[4].empty()) p.category_id = f[4];
    const auto readers = parse_int(f[5]);
    if (!readers) throw LineError("bad reader_count '" + f[5] + "'");
    if (*readers < 0) throw LineError("negative reader_count");
    p.reader_count = *readers;
    for (const auto& entry : split_list(f[6])) {
      const auto colon = entry.find(':');
      if (colon == std::string::npos) {
        throw LineError("histogram entry '" + entry + "' lacks ':'");
      }
      const auto status = parse_status(trim(std::string_view(entry).substr(0, colon)));
      if (!status) throw LineError("unknown status in histogram '" + entry + "'");
      const auto count = parse_int(trim(std::string_view(entry).substr(colon + 1)));
      if (!count || *count < 0) {
        throw LineError("bad histogram count in '" + entry + "'");
      }
      p.reader_status_histogram[*status] += *count;
    }
    ids.add(p.pub_id, n);
    out.push_back(std::move(p));
  });
  return out;
}

ProfileEdgeSet parse_profile_edges(std::istream& in, std::string_view source,
                                   const LoadOptions& opts) {
  ProfileEdgeSet out;
  for_each_record(in, source, opts, [&](std::string_view line, std::size_t) {
    const auto f = split(line, ',');
    expect_fields(f, 2);
    if (f[0].empty() || f[1].empty()) throw LineError("empty edge endpoint");
    if (f[0] == f[1]) throw LineError("self-loop on '" + f[0] + "'");
    out.insert(ProfileEdge::make(f[0], f[1]));
  });
  return out;
}

JournalRankTable parse_journal_ranks(std::istream& in, std::string_view source,
                                     const LoadOptions& opts) {
  JournalRankTable out;
  for_each_record(in, source, opts, [&](std::string_view line, std::size_t) {
    // Journal names may contain commas; the rank is after the last one.
    const auto comma = line.rfind(',');
    if (comma == std::string_view::npos) throw LineError("expected name,rank");
    const auto name = normalize_name(trim(line.substr(0, comma)));
    if (name.empty()) throw LineError("empty journal name");
    const auto rank = parse_real(trim(line.substr(comma + 1)));
    if (!rank) throw LineError("bad rank value");
    if (!(*rank >= 0.0 && *rank <= 1.0)) {
      throw LineError("journal rank outside [0,1] for '" + name + "'");
    }
    out[name] = *rank;
  });
  return out;
}

CategoryTaxonomy parse_taxonomy(std::istream& in, std::string_view source,
                                const LoadOptions& opts) {
  CategoryTaxonomy out;
  UniqueIds ids("category_id");
  for_each_record(in, source, opts, [&](std::string_view line, std::size_t n) {
    const auto f = split(line, '|');
    expect_fields(f, 3);
    Category c{f[0], f[1], split_list(f[2])};
    if (c.category_id.empty()) throw LineError("empty category_id");
    if (c.label.empty()) throw LineError("empty category label");
    if (c.vocabulary.empty()) throw LineError("empty category vocabulary");
    ids.add(c.category_id, n);
    out.push_back(std::move(c));
  });
  if (out.empty()) {
    throw ParseError(std::string(source), 0, "taxonomy has no categories");
  }
  return out;
}

std::vector<TrainingLabel> parse_training_labels(std::istream& in,
                                                 std::string_view source,
                                                 const LoadOptions& opts) {
  std::vector<TrainingLabel> out;
  for_each_record(in, source, opts, [&](std::string_view line, std::size_t) {
    const auto f = split(line, ',');
    expect_fields(f, 3);
    if (f[0].empty() || f[1].empty()) throw LineError("empty label field");
    if (f[2] != "0" && f[2] != "1") throw LineError("label must be 0 or 1");
    out.push_back({f[0], f[1], f[2] == "1"});
  });
  return out;
}

std::vector<Profile> load_profiles(const std::filesystem::path& path,
                                   const LoadOptions& opts) {
  return with_file(path, [&](std::istream& in, const std::string& src) {
    return parse_profiles(in, src, opts);
  });
}

std::vector<Publication> load_publications(const std::filesystem::path& path,
                                           const LoadOptions& opts) {
  return with_file(path, [&](std::istream& in, const std::string& src) {
    return parse_publications(in, src, opts);
  });
}

ProfileEdgeSet load_profile_edges(const std::filesystem::path& path,
                                  const LoadOptions& opts) {
  return with_file(path, [&](std::istream& in, const std::string& src) {
    return parse_profile_edges(in, src, opts);
  });
}

JournalRankTable load_journal_ranks(const std::filesystem::path& path,
                                    const LoadOptions& opts) {
  return with_file(path, [&](std::istream& in, const std::string& src) {
    return parse_journal_ranks(in, src, opts);
  });
}

CategoryTaxonomy load_taxonomy(const std::filesystem::path& path,
                               const LoadOptions& opts) {
  return with_file(path, [&](std::istream& in, const std::string& src) {
    return parse_taxonomy(in, src, opts);
  });
}

std::vector<TrainingLabel> load_training_labels(
    const std::filesystem::path& path, const LoadOptions& opts) {
  return with_file(path, [&](std::istream& in, const std::string& src) {
    return parse_training_labels(in, src, opts);
  });
}

namespace {

void write_list(std::ostream& out, const std::vector<std::string>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << ';';
    out << items[i];
  }
}

}  // namespace

void write_profiles(std::ostream& out, std::span<const Profile> profiles) {
  for (const auto& p : profiles) {
    out << p.profile_id << '|' << p.display_name << '|'
        << to_string(p.academic_status) << '|' << to_string(p.source) << '|';
    write_list(out, p.research_interests);
    out << '\n';
  }
}

void write_publications(std::ostream& out,
                        std::span<const Publication> publications) {
  for (const auto& p : publications) {
    out << p.pub_id << '|' << p.title << '|';
    write_list(out, p.author_names);
    out << '|' << p.journal.value_or("") << '|' << p.category_id.value_or("")
        << '|' << p.reader_count << '|';
    bool first = true;
    for (const auto& [status, count] : p.reader_status_histogram) {
      if (!first) out << ';';
      first = false;
      out << to_string(status) << ':' << count;
    }
    out << '\n';
  }
}

void write_profile_edges(std::ostream& out, const ProfileEdgeSet& edges) {
  for (const auto& e : edges) out << e.a << ',' << e.b << '\n';
}

void write_journal_ranks(std::ostream& out, const JournalRankTable& ranks) {
  const auto old = out.precision(17);
  for (const auto& [name, rank] : ranks) out << name << ',' << rank << '\n';
  out.precision(old);
}

void write_taxonomy(std::ostream& out, const CategoryTaxonomy& taxonomy) {
  for (const auto& c : taxonomy) {
    out << c.category_id << '|' << c.label << '|';
    write_list(out, c.vocabulary);
    out << '\n';
  }
}

void write_training_labels(std::ostream& out,
                           std::span<const TrainingLabel> labels) {
  for (const auto& l : labels) {
    out << l.person_ref << ',' << l.category_id << ','
        << (l.is_expert ? '1' : '0') << '\n';
  }
}

CorpusReport validate_corpus(std::span<const Profile> profiles,
                             std::span<const Publication> publications,
                             const ProfileEdgeSet& edges,
                             const CategoryTaxonomy& taxonomy,
                             IngestMode mode) {
  CorpusReport r;
  r.profile_count = profiles.size();
  r.publication_count = publications.size();
  r.edge_count = edges.size();

  std::set<std::string_view> profile_ids;
  for (const auto& p : profiles) profile_ids.insert(p.profile_id);
  std::set<std::string_view> category_ids;
  for (const auto& c : taxonomy) category_ids.insert(c.category_id);

  for (const auto& p : publications) {
    if (p.category_id && !category_ids.contains(*p.category_id)) {
      r.unknown_category_publications.push_back(p.pub_id);
    }
  }
  for (const auto& e : edges) {
    if (!profile_ids.contains(e.a) || !profile_ids.contains(e.b)) {
      r.dangling_edges.push_back(e.a + "," + e.b);
    }
  }

  if (mode == IngestMode::strict && !r.clean()) {
    std::string msg = "corpus validation failed:";
    for (const auto& id : r.unknown_category_publications) {
      msg += " publication " + id + " has unknown category;";
    }
    for (const auto& e : r.dangling_edges) msg += " dangling edge " + e + ";";
    throw ParseError("corpus", 0, msg);
  }
  return r;
}

const Category* Corpus::find_category(std::string_view id) const {
  for (const auto& c : taxonomy) {
    if (c.category_id == id) return &c;
  }
  return nullptr;
}

Corpus load_corpus(const std::filesystem::path& dir, const LoadOptions& opts) {
  Corpus c;
  c.profiles = load_profiles(dir / "profiles.txt", opts);
  c.publications = load_publications(dir / "publications.txt", opts);
  c.edges = load_profile_edges(dir / "edges.txt", opts);
  if (std::filesystem::exists(dir / "journals.txt")) {
    c.journal_ranks = load_journal_ranks(dir / "journals.txt", opts);
  }
  c.taxonomy = load_taxonomy(dir / "taxonomy.txt", opts);
  if (std::filesystem::exists(dir / "labels.txt")) {
    c.labels = load_training_labels(dir / "labels.txt", opts);
  }
  c.report = validate_corpus(c.profiles, c.publications, c.edges, c.taxonomy,
                             opts.mode);
  return c;
}

}  // namespace expertsearch
