#include "expertsearch/service.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "httplib.h"
#include "json.hpp"

namespace expertsearch {

using json = nlohmann::ordered_json;

namespace {

HttpResponse error(int status, std::string_view message) {
  return {status, json{{"error", message}}.dump()};
}

HttpResponse ok(const json& body) { return {200, body.dump()}; }

std::optional<json> parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

json suggestions_json(const std::vector<CategorySuggestion>& suggestions) {
  json arr = json::array();
  for (const auto& s : suggestions) {
    arr.push_back({{"category_id", s.category_id},
                   {"label", s.label},
                   {"score", s.score},
                   {"rank", s.rank}});
  }
  return arr;
}

}  // namespace

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("config " + path.string() + " is not a JSON object");
  }
  const auto base = path.parent_path();
  ServiceConfig c;
  c.host = j.value("host", c.host);
  c.port = j.value("port", c.port);
  c.corpus_dir = resolve(base, j.value("corpus_dir", std::string(".")));
  if (j.contains("model_path")) c.model_path = resolve(base, j["model_path"].get<std::string>());
  c.vote_log = resolve(base, j.value("vote_log", std::string("votes.log")));
  c.alpha = j.value("alpha", c.alpha);
  c.damping = j.value("damping", c.damping);
  c.cache_size = j.value("cache_size", c.cache_size);
  const auto mode = j.value("ingest_mode", std::string("strict"));
  if (mode != "strict" && mode != "lenient") {
    throw std::runtime_error("ingest_mode must be strict or lenient");
  }
  c.mode = mode == "strict" ? IngestMode::strict : IngestMode::lenient;
  const auto scope = j.value("feature_scope", std::string("category"));
  if (scope != "category" && scope != "full") {
    throw std::runtime_error("feature_scope must be category or full");
  }
  c.scope = scope == "full" ? FeatureScope::full_graph : FeatureScope::category_subgraph;
  if (const char* env = std::getenv("EXPERTSEARCH_PORT")) c.port = std::atoi(env);
  c.validate();
  return c;
}

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw std::runtime_error("port out of range");
  if (!std::filesystem::is_directory(corpus_dir)) {
    throw std::runtime_error("corpus directory not readable: " + corpus_dir.string());
  }
  if (!(alpha > 0.0)) throw std::runtime_error("alpha must be positive");
  if (!(damping > 0.0 && damping < 1.0)) throw std::runtime_error("damping must lie in (0,1)");
  if (cache_size == 0) throw std::runtime_error("cache_size must be at least 1");
}

SearchService::SearchService(const ServiceConfig& config) : config_(config) {
  config_.validate();
  EngineOptions opts;
  opts.alpha = config_.alpha;
  opts.features.pagerank.damping = config_.damping;
  opts.features.scope = config_.scope;
  index_ = ExpertIndex::build(load_corpus(config_.corpus_dir, {config_.mode, nullptr}), opts);
  person_info_ = index_.person_info();

  if (config_.model_path && std::filesystem::exists(*config_.model_path)) {
    std::ifstream in(*config_.model_path);
    tree_ = DecisionTree::read(in);
  } else {
    tree_ = train_from_features(index_.corpus().labels, index_.all_features(),
                                index_.resolution().persons, config_.mode);
  }

  votes_ = std::make_unique<VoteStore>(config_.vote_log, [this](std::string_view id) {
    return index_.resolution().find(id).has_value();
  });
}

SearchService::~SearchService() { stop(); }

HttpResponse SearchService::categorize(std::string_view body) const {
  const auto j = parse_body(body);
  if (!j || !j->contains("text") || !(*j)["text"].is_string()) {
    return error(400, "body must be a JSON object with a string 'text'");
  }
  const auto text = (*j)["text"].get<std::string>();
  if (text.size() > kMaxCategorizeText) return error(413, "text exceeds 64 KiB");
  if (blank(text)) return error(400, "text is empty");
  SuggestOptions opts;
  opts.feeling_lucky = j->value("lucky", false);
  if (j->contains("max_suggestions")) {
    const auto& m = (*j)["max_suggestions"];
    if (!m.is_number_integer() || m.get<int>() <= 0) {
      return error(400, "max_suggestions must be a positive integer");
    }
    opts.max_suggestions = m.get<std::size_t>();
  }
  const auto suggestions = suggest_categories(text, index_.corpus().taxonomy, opts);
  return ok({{"suggestions", suggestions_json(suggestions)}});
}

HttpResponse SearchService::lucky(std::string_view body) {
  const auto j = parse_body(body);
  if (!j || !j->contains("text") || !(*j)["text"].is_string()) {
    return error(400, "body must be a JSON object with a string 'text'");
  }
  const auto text = (*j)["text"].get<std::string>();
  if (text.size() > kMaxCategorizeText) return error(413, "text exceeds 64 KiB");
  if (blank(text)) return error(400, "text is empty");
  StatusFilter filter;
  try {
    filter = parse_status_filter(j->value("status", std::string()));
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }
  const int k = j->value("k", 20);
  if (k <= 0) return error(400, "k must be positive");
  SuggestOptions opts;
  opts.feeling_lucky = true;
  const auto top = suggest_categories(text, index_.corpus().taxonomy, opts);
  if (top.empty()) {
    return ok({{"category", nullptr}, {"results", json::array()}});
  }
  auto res = experts_for(top.front().category_id, filter, k);
  if (res.status != 200) return res;
  json out = {{"category", suggestions_json(top).front()}};
  out["results"] = json::parse(res.body)["results"];
  return ok(out);
}

std::shared_ptr<const std::vector<FeatureVector>> SearchService::features(
    const std::string& category) {
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(category); it != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
  }
  auto computed =
      std::make_shared<const std::vector<FeatureVector>>(index_.features_for(category));
  std::lock_guard lock(cache_mutex_);
  ++misses_;
  if (auto it = cache_.find(category); it != cache_.end()) return it->second.first;
  lru_.push_front(category);
  cache_.emplace(category, std::make_pair(computed, lru_.begin()));
  while (cache_.size() > config_.cache_size) {
    cache_.erase(lru_.back());
    lru_.pop_back();
  }
  return computed;
}

HttpResponse SearchService::experts_for(const std::string& category,
                                        const StatusFilter& filter, int k) {
  if (index_.corpus().find_category(category) == nullptr) {
    return error(404, "unknown category '" + category + "'");
  }
  const auto feats = features(category);
  const auto ranked = rank_experts(category, filter, k, tree_, *feats, person_info_,
                                   index_.corpus().taxonomy, votes_.get());
  json results = json::array();
  for (const auto& e : ranked) {
    const auto& p = index_.resolution().persons[*index_.resolution().find(e.person_id)];
    results.push_back({{"person_id", e.person_id},
                       {"name", p.display_name},
                       {"status", to_string(p.academic_status)},
                       {"score", e.score},
                       {"rank", e.rank}});
  }
  return ok({{"results", results}});
}

HttpResponse SearchService::experts(
    const std::multimap<std::string, std::string>& params) {
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
  };
  const auto category = get("category");
  if (!category || category->empty()) return error(400, "missing category");
  StatusFilter filter;
  try {
    filter = parse_status_filter(get("status").value_or(""));
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }
  int k = 20;
  if (auto ks = get("k")) {
    try {
      std::size_t used = 0;
      k = std::stoi(*ks, &used);
      if (used != ks->size()) throw std::invalid_argument("k");
    } catch (const std::logic_error&) {
      return error(400, "k must be an integer");
    }
    if (k <= 0) return error(400, "k must be positive");
  }
  return experts_for(*category, filter, k);
}

HttpResponse SearchService::person(std::string_view person_id) const {
  const auto& r = index_.resolution();
  const auto idx = r.find(person_id);
  if (!idx) return error(404, "unknown person '" + std::string(person_id) + "'");
  const Person& p = r.persons[*idx];

  json interests = json::array();
  if (p.profile_id) {
    for (const auto& prof : index_.corpus().profiles) {
      if (prof.profile_id == *p.profile_id) {
        for (const auto& i : prof.research_interests) interests.push_back(i);
        break;
      }
    }
  }
  json pubs = json::array();
  for (auto pi : r.person_publications[*idx]) {
    const auto& pub = index_.corpus().publications[pi];
    pubs.push_back({{"pub_id", pub.pub_id},
                    {"title", pub.title},
                    {"journal", pub.journal ? json(*pub.journal) : json(nullptr)},
                    {"category_id", pub.category_id ? json(*pub.category_id) : json(nullptr)},
                    {"reader_count", pub.reader_count}});
  }
  return ok({{"person_id", p.person_id},
             {"name", p.display_name},
             {"status", to_string(p.academic_status)},
             {"research_interests", interests},
             {"publications", pubs},
             {"vote_tally", votes_->tally(p.person_id)}});
}

HttpResponse SearchService::vote(std::string_view body) {
  const auto j = parse_body(body);
  if (!j) return error(400, "body must be a JSON object");
  if (!j->contains("person_id") || !(*j)["person_id"].is_string()) {
    return error(400, "missing person_id");
  }
  if (!j->contains("voter_token") || !(*j)["voter_token"].is_string()) {
    return error(400, "missing voter_token");
  }
  if (!j->contains("delta") || !(*j)["delta"].is_number_integer()) {
    return error(400, "delta must be +1 or -1");
  }
  const auto delta = (*j)["delta"].get<std::int64_t>();
  if (delta != 1 && delta != -1) return error(400, "delta must be +1 or -1");
  try {
    const auto tally = votes_->apply((*j)["voter_token"].get<std::string>(),
                                     (*j)["person_id"].get<std::string>(),
                                     static_cast<int>(delta));
    return ok({{"tally", tally}});
  } catch (const NotFoundError& e) {
    return error(404, e.what());
  } catch (const std::invalid_argument& e) {
    return error(400, e.what());
  }
}

void SearchService::clear_cache() {
  std::lock_guard lock(cache_mutex_);
  cache_.clear();
  lru_.clear();
}

std::size_t SearchService::cache_misses() const {
  std::lock_guard lock(cache_mutex_);
  return misses_;
}

void SearchService::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  server_->set_payload_max_length(4 * kMaxCategorizeText);
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  server_->Post("/categorize", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, categorize(req.body));
  });
  server_->Post("/lucky", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, lucky(req.body));
  });
  server_->Get("/experts", [this, reply](const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
    reply(res, experts(params));
  });
  server_->Get(R"(/person/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, person(req.matches[1].str()));
  });
  server_->Post("/vote", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, vote(req.body));
  });
  server_->set_exception_handler([reply](const httplib::Request&, httplib::Response& res,
                                         std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    reply(res, error(500, what));
  });
}

int SearchService::bind() {
  install_routes();
  if (config_.port == 0) {
    const int port = server_->bind_to_any_port(config_.host);
    if (port < 0) throw std::runtime_error("cannot bind " + config_.host);
    return port;
  }
  if (!server_->bind_to_port(config_.host, config_.port)) {
    throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  }
  return config_.port;
}

void SearchService::listen_after_bind() {
  if (!server_) throw std::logic_error("bind() before listen_after_bind()");
  server_->listen_after_bind();
}

void SearchService::listen() {
  bind();
  listen_after_bind();
}

void SearchService::stop() {
  if (server_) server_->stop();
}

bool SearchService::running() const { return server_ && server_->is_running(); }

}  // namespace expertsearch
