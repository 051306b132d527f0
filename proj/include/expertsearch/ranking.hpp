#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expertsearch/c45.hpp"
#include "expertsearch/corpus.hpp"
#include "expertsearch/features.hpp"

namespace expertsearch {

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VoteRecord {
  std::string voter_token;
  std::string person_id;
  int delta = 0;
  std::int64_t unix_ts = 0;
};

/// Per-person ±1 votes. Each voter holds at most one live vote per person;
/// a re-vote replaces the earlier one. With a log path every accepted vote
/// is appended (`voter_token,person_id,delta,unix_ts`) and flushed to disk
/// before apply() returns, and the log is replayed on construction.
///
/// Writes are serialized; reads take a shared lock and see a consistent
/// snapshot.
class VoteStore {
 public:
  using PersonCheck = std::function<bool(std::string_view)>;

  explicit VoteStore(PersonCheck exists = {});
  VoteStore(const std::filesystem::path& log_path, PersonCheck exists = {});
  ~VoteStore();

  VoteStore(const VoteStore&) = delete;
  VoteStore& operator=(const VoteStore&) = delete;

  /// Returns the new tally. Throws NotFoundError for an unknown person and
  /// std::invalid_argument for a bad delta or voter token.
  std::int64_t apply(std::string_view voter_token, std::string_view person_id,
                     int delta, std::int64_t unix_ts = -1);

  std::int64_t tally(std::string_view person_id) const;
  std::map<std::string, std::int64_t> tallies() const;
  // Incremented on every accepted vote.
  std::uint64_t epoch() const;
  std::vector<VoteRecord> log() const;
  // Log lines that were skipped during replay.
  const std::vector<std::string>& replay_warnings() const { return replay_warnings_; }

 private:
  std::int64_t record(const VoteRecord& v);

  mutable std::shared_mutex mutex_;
  PersonCheck exists_;
  std::map<std::pair<std::string, std::string>, int> live_;  // (voter, person)
  std::map<std::string, std::int64_t, std::less<>> tallies_;
  std::vector<VoteRecord> log_;
  std::uint64_t epoch_ = 0;
  std::FILE* file_ = nullptr;
  std::vector<std::string> replay_warnings_;
};

/// Empty means no filtering.
using StatusFilter = std::set<AcademicStatus>;

/// Parses a comma list of status names; throws std::invalid_argument on an
/// unknown token.
StatusFilter parse_status_filter(std::string_view list);

struct RankedEntry {
  std::string person_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  FeatureVector features;
};

using RankedList = std::vector<RankedEntry>;

/// What rank_experts needs to know about each person.
struct PersonInfo {
  AcademicStatus status = AcademicStatus::other;
};

/// Scores the category's persons with the tree and orders them by score,
/// then user_rank, reader_count, pagerank (all descending), then person_id.
/// `features` may hold several categories; only `category_id` rows count.
/// When `votes` is given its tallies replace each row's user_rank before
/// scoring. Throws NotFoundError for a category outside the taxonomy and
/// std::invalid_argument for k <= 0.
RankedList rank_experts(std::string_view category_id,
                        const StatusFilter& status_filter, int k,
                        const DecisionTree& tree,
                        std::span<const FeatureVector> features,
                        const std::map<std::string, PersonInfo, std::less<>>& persons,
                        const CategoryTaxonomy& taxonomy,
                        const VoteStore* votes = nullptr);

/// Demo labels: within each category the top 10% by reader_count (at least
/// one person) are experts, everyone else is not.
std::vector<TrainingLabel> bootstrap_labels(std::span<const FeatureVector> features);

}  // namespace expertsearch
