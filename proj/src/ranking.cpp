#include "expertsearch/ranking.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace expertsearch {

namespace {

std::int64_t now_unix() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

bool valid_token(std::string_view s) {
  return !s.empty() && s.find_first_of(",\r\n") == std::string_view::npos;
}

}  // namespace

VoteStore::VoteStore(PersonCheck exists) : exists_(std::move(exists)) {}

VoteStore::VoteStore(const std::filesystem::path& log_path, PersonCheck exists)
    : exists_(std::move(exists)) {
  if (std::filesystem::exists(log_path)) {
    std::ifstream in(log_path);
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
      const auto skip = [&](const char* why) {
        replay_warnings_.push_back(log_path.string() + ":" +
                                   std::to_string(lineno) + ": " + why);
      };
      if (f.size() != 4) {
        skip("expected 4 fields");
        continue;
      }
      VoteRecord v{f[0], f[1], 0, 0};
      if (f[2] == "1" || f[2] == "+1") {
        v.delta = 1;
      } else if (f[2] == "-1") {
        v.delta = -1;
      } else {
        skip("bad delta");
        continue;
      }
      try {
        v.unix_ts = std::stoll(f[3]);
      } catch (const std::logic_error&) {
        skip("bad timestamp");
        continue;
      }
      if (exists_ && !exists_(v.person_id)) {
        skip("unknown person");
        continue;
      }
      record(v);
    }
  }
  file_ = std::fopen(log_path.c_str(), "a");
  if (file_ == nullptr) {
    throw std::runtime_error("cannot open vote log " + log_path.string());
  }
}

VoteStore::~VoteStore() {
  if (file_ != nullptr) std::fclose(file_);
}

std::int64_t VoteStore::record(const VoteRecord& v) {
  auto& slot = live_[{v.voter_token, v.person_id}];
  auto& tally = tallies_[v.person_id];
  tally += v.delta - slot;
  slot = v.delta;
  log_.push_back(v);
  ++epoch_;
  return tally;
}

std::int64_t VoteStore::apply(std::string_view voter_token,
                              std::string_view person_id, int delta,
                              std::int64_t unix_ts) {
  if (delta != 1 && delta != -1) {
    throw std::invalid_argument("vote delta must be +1 or -1");
  }
  if (!valid_token(voter_token)) {
    throw std::invalid_argument("voter_token must be non-empty without commas");
  }
  if (!valid_token(person_id) || (exists_ && !exists_(person_id))) {
    throw NotFoundError("unknown person '" + std::string(person_id) + "'");
  }
  VoteRecord v{std::string(voter_token), std::string(person_id), delta,
               unix_ts < 0 ? now_unix() : unix_ts};

  std::unique_lock lock(mutex_);
  if (file_ != nullptr) {
    const std::string line = v.voter_token + "," + v.person_id + "," +
                             std::to_string(v.delta) + "," +
                             std::to_string(v.unix_ts) + "\n";
    if (std::fputs(line.c_str(), file_) < 0 || std::fflush(file_) != 0 ||
        ::fsync(fileno(file_)) != 0) {
      throw std::runtime_error("failed to persist vote");
    }
  }
  return record(v);
}

std::int64_t VoteStore::tally(std::string_view person_id) const {
  std::shared_lock lock(mutex_);
  auto it = tallies_.find(person_id);
  return it == tallies_.end() ? 0 : it->second;
}

std::map<std::string, std::int64_t> VoteStore::tallies() const {
  std::shared_lock lock(mutex_);
  return {tallies_.begin(), tallies_.end()};
}

std::uint64_t VoteStore::epoch() const {
  std::shared_lock lock(mutex_);
  return epoch_;
}

std::vector<VoteRecord> VoteStore::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

StatusFilter parse_status_filter(std::string_view list) {
  StatusFilter out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto pos = list.find(',', start);
    if (pos == std::string_view::npos) pos = list.size();
    auto token = list.substr(start, pos - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      const auto s = parse_status(token);
      if (!s) {
        throw std::invalid_argument("unknown status '" + std::string(token) + "'");
      }
      out.insert(*s);
    }
    start = pos + 1;
  }
  return out;
}

RankedList rank_experts(std::string_view category_id,
                        const StatusFilter& status_filter, int k,
                        const DecisionTree& tree,
                        std::span<const FeatureVector> features,
                        const std::map<std::string, PersonInfo, std::less<>>& persons,
                        const CategoryTaxonomy& taxonomy,
                        const VoteStore* votes) {
  if (k <= 0) throw std::invalid_argument("k must be positive");
  const bool known = std::any_of(taxonomy.begin(), taxonomy.end(), [&](const Category& c) {
    return c.category_id == category_id;
  });
  if (!known) throw NotFoundError("unknown category '" + std::string(category_id) + "'");

  const auto tallies = votes ? votes->tallies() : std::map<std::string, std::int64_t>{};
  RankedList list;
  for (const auto& fv : features) {
    if (fv.category_id != category_id) continue;
    const auto info = persons.find(fv.person_id);
    const AcademicStatus status =
        info == persons.end() ? AcademicStatus::other : info->second.status;
    if (!status_filter.empty() && !status_filter.contains(status)) continue;
    RankedEntry e;
    e.person_id = fv.person_id;
    e.features = fv;
    if (votes) {
      auto t = tallies.find(fv.person_id);
      e.features.user_rank = t == tallies.end() ? 0 : t->second;
    }
    e.score = score(tree, e.features);
    list.push_back(std::move(e));
  }

  std::sort(list.begin(), list.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.features.user_rank != b.features.user_rank) {
      return a.features.user_rank > b.features.user_rank;
    }
    if (a.features.reader_count != b.features.reader_count) {
      return a.features.reader_count > b.features.reader_count;
    }
    if (a.features.pagerank != b.features.pagerank) {
      return a.features.pagerank > b.features.pagerank;
    }
    return a.person_id < b.person_id;
  });
  if (list.size() > static_cast<std::size_t>(k)) list.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < list.size(); ++i) list[i].rank = i + 1;
  return list;
}

std::vector<TrainingLabel> bootstrap_labels(std::span<const FeatureVector> features) {
  std::map<std::string, std::vector<const FeatureVector*>> by_category;
  for (const auto& fv : features) by_category[fv.category_id].push_back(&fv);

  std::vector<TrainingLabel> out;
  for (auto& [category, rows] : by_category) {
    std::sort(rows.begin(), rows.end(), [](const FeatureVector* a, const FeatureVector* b) {
      if (a->reader_count != b->reader_count) return a->reader_count > b->reader_count;
      return a->person_id < b->person_id;
    });
    const std::size_t experts = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(rows.size()))));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.push_back({rows[i]->person_id, category, i < experts});
    }
  }
  return out;
}

}  // namespace expertsearch
