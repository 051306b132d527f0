#pragma once

#include <cstdint>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "expertsearch/c45.hpp"
#include "expertsearch/categorize.hpp"
#include "expertsearch/index.hpp"
#include "expertsearch/ranking.hpp"

namespace httplib {
class Server;
}

namespace expertsearch {

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path corpus_dir;
  // Trained model; when absent the service trains from the corpus labels
  // (or bootstrap labels) at startup.
  std::optional<std::filesystem::path> model_path;
  std::filesystem::path vote_log = "votes.log";
  double alpha = 1.0;
  double damping = 0.85;
  std::size_t cache_size = 16;
  IngestMode mode = IngestMode::strict;
  FeatureScope scope = FeatureScope::category_subgraph;

  /// JSON config; relative paths resolve against the file's directory.
  /// EXPERTSEARCH_PORT overrides `port`.
  static ServiceConfig load(const std::filesystem::path& path);
  void validate() const;
};

inline constexpr std::size_t kMaxCategorizeText = 64 * 1024;

struct HttpResponse {
  int status = 200;
  std::string body;
};

/// Request handling independent of the HTTP transport. All handlers are
/// safe to call concurrently.
class SearchService {
 public:
  explicit SearchService(const ServiceConfig& config);
  ~SearchService();

  HttpResponse categorize(std::string_view body) const;
  HttpResponse lucky(std::string_view body);
  HttpResponse experts(const std::multimap<std::string, std::string>& params);
  HttpResponse person(std::string_view person_id) const;
  HttpResponse vote(std::string_view body);

  /// Blocks serving HTTP until stop() is called.
  void listen();
  /// Binds to the configured host/port; port 0 picks a free one which is
  /// returned. Serving starts with listen_after_bind().
  int bind();
  void listen_after_bind();
  void stop();
  bool running() const;

  void clear_cache();
  std::size_t cache_misses() const;

  const ExpertIndex& index() const { return index_; }
  const DecisionTree& model() const { return tree_; }
  const VoteStore& votes() const { return *votes_; }

 private:
  std::shared_ptr<const std::vector<FeatureVector>> features(const std::string& category);
  HttpResponse experts_for(const std::string& category, const StatusFilter& filter, int k);
  void install_routes();

  ServiceConfig config_;
  ExpertIndex index_;
  DecisionTree tree_;
  std::map<std::string, PersonInfo, std::less<>> person_info_;
  std::unique_ptr<VoteStore> votes_;

  mutable std::mutex cache_mutex_;
  std::list<std::string> lru_;  // front is most recent
  std::map<std::string, std::pair<std::shared_ptr<const std::vector<FeatureVector>>,
                                  std::list<std::string>::iterator>>
      cache_;
  std::size_t misses_ = 0;

  std::unique_ptr<httplib::Server> server_;
};

}  // namespace expertsearch
