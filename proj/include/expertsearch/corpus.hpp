#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expertsearch {

enum class AcademicStatus { professor, postdoc, phd_student, other };

inline constexpr AcademicStatus kAllStatuses[] = {
    AcademicStatus::professor, AcademicStatus::postdoc,
    AcademicStatus::phd_student, AcademicStatus::other};

std::string_view to_string(AcademicStatus s);
std::optional<AcademicStatus> parse_status(std::string_view token);

enum class ProfileSource { mendeley, academia };

std::string_view to_string(ProfileSource s);
std::optional<ProfileSource> parse_source(std::string_view token);

struct Profile {
  std::string profile_id;
  std::string display_name;
  AcademicStatus academic_status = AcademicStatus::other;
  std::vector<std::string> research_interests;
  ProfileSource source = ProfileSource::mendeley;

  bool operator==(const Profile&) const = default;
};

struct Publication {
  std::string pub_id;
  std::string title;
  std::vector<std::string> author_names;
  std::optional<std::string> journal;
  std::optional<std::string> category_id;
  std::int64_t reader_count = 0;
  std::map<AcademicStatus, std::int64_t> reader_status_histogram;

  bool operator==(const Publication&) const = default;
};

// Unordered pair stored canonically with a < b.
struct ProfileEdge {
  std::string a;
  std::string b;

  static ProfileEdge make(std::string x, std::string y);
  auto operator<=>(const ProfileEdge&) const = default;
};

using ProfileEdgeSet = std::set<ProfileEdge>;

// Keys are normalized journal names.
using JournalRankTable = std::map<std::string, double>;

struct Category {
  std::string category_id;
  std::string label;
  std::vector<std::string> vocabulary;

  bool operator==(const Category&) const = default;
};

using CategoryTaxonomy = std::vector<Category>;

struct TrainingLabel {
  std::string person_ref;
  std::string category_id;
  bool is_expert = false;

  bool operator==(const TrainingLabel&) const = default;
};

enum class IngestMode { strict, lenient };

/// Thrown on malformed or invariant-violating input. `line()` is 1-based,
/// zero when the error is not tied to a single line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Collects skipped-line warnings in lenient mode.
struct Diagnostics {
  std::vector<std::string> warnings;
  std::size_t records = 0;
};

struct LoadOptions {
  IngestMode mode = IngestMode::strict;
  Diagnostics* diagnostics = nullptr;
};

// Stream parsers. `source` names the input in error messages.
std::vector<Profile> parse_profiles(std::istream& in, std::string_view source,
                                    const LoadOptions& opts = {});
std::vector<Publication> parse_publications(std::istream& in,
                                            std::string_view source,
                                            const LoadOptions& opts = {});
ProfileEdgeSet parse_profile_edges(std::istream& in, std::string_view source,
                                   const LoadOptions& opts = {});
JournalRankTable parse_journal_ranks(std::istream& in, std::string_view source,
                                     const LoadOptions& opts = {});
CategoryTaxonomy parse_taxonomy(std::istream& in, std::string_view source,
                                const LoadOptions& opts = {});
std::vector<TrainingLabel> parse_training_labels(std::istream& in,
                                                 std::string_view source,
                                                 const LoadOptions& opts = {});

// File wrappers; throw ParseError if the file cannot be opened.
std::vector<Profile> load_profiles(const std::filesystem::path& path,
                                   const LoadOptions& opts = {});
std::vector<Publication> load_publications(const std::filesystem::path& path,
                                           const LoadOptions& opts = {});
ProfileEdgeSet load_profile_edges(const std::filesystem::path& path,
                                  const LoadOptions& opts = {});
JournalRankTable load_journal_ranks(const std::filesystem::path& path,
                                    const LoadOptions& opts = {});
CategoryTaxonomy load_taxonomy(const std::filesystem::path& path,
                               const LoadOptions& opts = {});
std::vector<TrainingLabel> load_training_labels(
    const std::filesystem::path& path, const LoadOptions& opts = {});

// Writers emit the same line grammar the parsers accept.
void write_profiles(std::ostream& out, std::span<const Profile> profiles);
void write_publications(std::ostream& out,
                        std::span<const Publication> publications);
void write_profile_edges(std::ostream& out, const ProfileEdgeSet& edges);
void write_journal_ranks(std::ostream& out, const JournalRankTable& ranks);
void write_taxonomy(std::ostream& out, const CategoryTaxonomy& taxonomy);
void write_training_labels(std::ostream& out,
                           std::span<const TrainingLabel> labels);

struct CorpusReport {
  std::size_t profile_count = 0;
  std::size_t publication_count = 0;
  std::size_t edge_count = 0;
  // pub_id of each publication whose category_id is not in the taxonomy.
  std::vector<std::string> unknown_category_publications;
  // "a,b" for each edge with an endpoint that names no profile.
  std::vector<std::string> dangling_edges;

  bool clean() const {
    return unknown_category_publications.empty() && dangling_edges.empty();
  }
};

/// Cross-file reference check. In strict mode a non-clean report throws.
CorpusReport validate_corpus(std::span<const Profile> profiles,
                             std::span<const Publication> publications,
                             const ProfileEdgeSet& edges,
                             const CategoryTaxonomy& taxonomy,
                             IngestMode mode = IngestMode::lenient);

/// Everything a corpus directory holds. Standard file names:
/// profiles.txt publications.txt edges.txt journals.txt taxonomy.txt
/// and optionally labels.txt.
struct Corpus {
  std::vector<Profile> profiles;
  std::vector<Publication> publications;
  ProfileEdgeSet edges;
  JournalRankTable journal_ranks;
  CategoryTaxonomy taxonomy;
  std::vector<TrainingLabel> labels;
  CorpusReport report;

  const Category* find_category(std::string_view id) const;
};

Corpus load_corpus(const std::filesystem::path& dir,
                   const LoadOptions& opts = {});

}  // namespace expertsearch
