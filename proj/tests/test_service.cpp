#include <cstdlib>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "expertsearch/service.hpp"
#include "httplib.h"
#include "json.hpp"
#include "support/oracles.hpp"

namespace es = expertsearch;
using json = nlohmann::json;

namespace {

struct Workspace {
  std::filesystem::path dir = fixture::temp_dir("service");
  ~Workspace() { std::filesystem::remove_all(dir); }

  es::ServiceConfig config() const {
    es::ServiceConfig c;
    c.host = "127.0.0.1";
    c.port = 0;
    c.corpus_dir = std::filesystem::path(ES_DATA_DIR) / "corpus";
    c.vote_log = dir / "votes.log";
    return c;
  }
};

std::multimap<std::string, std::string> query(
    std::initializer_list<std::pair<const std::string, std::string>> items) {
  return std::multimap<std::string, std::string>(items);
}

json body(const es::HttpResponse& r) { return json::parse(r.body); }

std::string task2_text() {
  return fixture::read_file(std::filesystem::path(ES_DATA_DIR) / "task2.txt");
}

}  // namespace

TEST_CASE("service handlers") {
  Workspace ws;
  es::SearchService service(ws.config());

  SUBCASE("categorize the conference text") {
    const auto r = service.categorize(json{{"text", task2_text()}}.dump());
    REQUIRE(r.status == 200);
    const auto s = body(r)["suggestions"];
    REQUIRE(s.size() >= 1);
    CHECK(s[0]["category_id"] == "information_retrieval");
    CHECK(s[0]["label"] == "information retrieval");
    CHECK(s[0]["rank"] == 1);
    CHECK(s[0]["score"].get<double>() > 0);
  }

  SUBCASE("categorize errors") {
    CHECK(service.categorize(R"({"text": ""})").status == 400);
    CHECK(service.categorize(R"({"text": "   "})").status == 400);
    CHECK(service.categorize("not json").status == 400);
    CHECK(service.categorize(R"({"words": "x"})").status == 400);
    CHECK(service.categorize(R"({"text": 5})").status == 400);
    CHECK(service.categorize(R"(["text"])").status == 400);
    CHECK(service.categorize(R"({"text": "x", "max_suggestions": 0})").status == 400);
    const std::string big(es::kMaxCategorizeText + 1, 'a');
    CHECK(service.categorize(json{{"text", big}}.dump()).status == 413);
    const auto stop = service.categorize(R"({"text": "the of and"})");
    CHECK(stop.status == 200);
    CHECK(body(stop)["suggestions"].empty());
  }

  SUBCASE("categorize lucky") {
    const auto r = service.categorize(json{{"text", task2_text()}, {"lucky", true}}.dump());
    CHECK(body(r)["suggestions"].size() == 1);
  }

  SUBCASE("experts listing") {
    const auto r = service.experts(query({{"category", "information_retrieval"}}));
    REQUIRE(r.status == 200);
    const auto results = body(r)["results"];
    CHECK(results.size() == 20);
    for (std::size_t i = 0; i < results.size(); ++i) {
      CHECK(results[i]["rank"] == i + 1);
      CHECK(results[i].contains("person_id"));
      CHECK(results[i].contains("name"));
      CHECK(results[i].contains("status"));
      if (i > 0) CHECK(results[i - 1]["score"].get<double>() >= results[i]["score"].get<double>());
    }
    const auto few = body(service.experts(query({{"category", "databases"}, {"k", "3"}})));
    CHECK(few["results"].size() == 3);
  }

  SUBCASE("experts status filter") {
    const auto r = service.experts(
        query({{"category", "machine_learning"}, {"status", "professor"}, {"k", "100"}}));
    REQUIRE(r.status == 200);
    const auto results = body(r)["results"];
    CHECK_FALSE(results.empty());
    for (const auto& e : results) CHECK(e["status"] == "professor");
    const auto all = body(service.experts(query({{"category", "machine_learning"}, {"k", "100"}})));
    CHECK(all["results"].size() > results.size());
  }

  SUBCASE("experts errors") {
    CHECK(service.experts(query({{"category", "zzz"}})).status == 404);
    CHECK(service.experts(query({})).status == 400);
    CHECK(service.experts(query({{"category", "databases"}, {"status", "king"}})).status == 400);
    CHECK(service.experts(query({{"category", "databases"}, {"k", "0"}})).status == 400);
    CHECK(service.experts(query({{"category", "databases"}, {"k", "ten"}})).status == 400);
  }

  SUBCASE("person detail") {
    const auto r = service.person("u000");
    REQUIRE(r.status == 200);
    const auto p = body(r);
    CHECK(p["person_id"] == "u000");
    CHECK_FALSE(p["research_interests"].empty());
    CHECK_FALSE(p["publications"].empty());
    CHECK(p["vote_tally"] == 0);
    const auto& pub = p["publications"][0];
    for (const char* key : {"pub_id", "title", "journal", "category_id", "reader_count"}) {
      CHECK(pub.contains(key));
    }

    const auto au = body(service.person("au_jon_smit"));
    CHECK(au["research_interests"].empty());
    CHECK(au["publications"].size() == 1);
    CHECK(au["status"] == "other");

    const auto lonely = body(service.person("u950"));
    CHECK(lonely["publications"].empty());

    CHECK(service.person("nobody").status == 404);
  }

  SUBCASE("voting") {
    auto vote = [&](const std::string& person, int delta, const std::string& voter) {
      return service.vote(json{{"person_id", person}, {"delta", delta}, {"voter_token", voter}}.dump());
    };
    CHECK(body(vote("u001", 1, "alice"))["tally"] == 1);
    CHECK(body(vote("u001", -1, "alice"))["tally"] == -1);
    CHECK(body(vote("u001", 1, "bob"))["tally"] == 0);
    CHECK(vote("u001", 2, "alice").status == 400);
    CHECK(vote("nobody", 1, "alice").status == 404);
    CHECK(service.vote(R"({"person_id": "u001", "delta": 1})").status == 400);
    CHECK(service.vote(R"({"person_id": "u001", "delta": "+1", "voter_token": "x"})").status == 400);
    CHECK(service.vote("{").status == 400);
    CHECK(body(service.person("u001"))["vote_tally"] == 0);
  }

  SUBCASE("lucky search") {
    const auto r = service.lucky(json{{"text", task2_text()}, {"k", 5}}.dump());
    REQUIRE(r.status == 200);
    const auto j = body(r);
    CHECK(j["category"]["category_id"] == "information_retrieval");
    CHECK(j["results"].size() == 5);
    CHECK(j["results"] ==
          body(service.experts(query({{"category", "information_retrieval"}, {"k", "5"}})))["results"]);
    CHECK(service.lucky(R"({"text": ""})").status == 400);
    CHECK(service.lucky(R"({"text": "retrieval", "status": "king"})").status == 400);
    const auto none = body(service.lucky(R"({"text": "the of and"})"));
    CHECK(none["category"].is_null());
  }
}

TEST_CASE("warm and cold caches answer identically") {
  Workspace ws;
  es::SearchService service(ws.config());
  const auto params = query({{"category", "information_retrieval"}, {"k", "50"}});
  const auto cold = service.experts(params).body;
  CHECK(service.cache_misses() == 1);
  const auto warm = service.experts(params).body;
  CHECK(service.cache_misses() == 1);
  CHECK(warm == cold);
  service.clear_cache();
  CHECK(service.experts(params).body == cold);
  CHECK(service.cache_misses() == 2);

  // A vote reaches a warm cache without recomputing features.
  service.vote(R"({"person_id": "u002", "delta": 1, "voter_token": "t"})");
  const auto voted = service.experts(params).body;
  CHECK(service.cache_misses() == 2);
  CHECK(voted != cold);
  service.clear_cache();
  CHECK(service.experts(params).body == voted);
}

TEST_CASE("cache eviction keeps answers stable") {
  Workspace ws;
  auto config = ws.config();
  config.cache_size = 1;
  es::SearchService service(config);
  const auto a = service.experts(query({{"category", "databases"}})).body;
  const auto b = service.experts(query({{"category", "machine_learning"}})).body;
  CHECK(service.experts(query({{"category", "databases"}})).body == a);
  CHECK(service.experts(query({{"category", "machine_learning"}})).body == b);
  CHECK(service.cache_misses() == 4);
}

TEST_CASE("votes survive a service restart") {
  Workspace ws;
  {
    es::SearchService service(ws.config());
    service.vote(R"({"person_id": "u002", "delta": 1, "voter_token": "a"})");
    service.vote(R"({"person_id": "u002", "delta": 1, "voter_token": "b"})");
    service.vote(R"({"person_id": "u002", "delta": -1, "voter_token": "a"})");
  }
  es::SearchService restarted(ws.config());
  CHECK(body(restarted.person("u002"))["vote_tally"] == 0);
  CHECK(restarted.votes().tally("u002") == 0);
  CHECK(restarted.votes().log().size() == 3);
}

TEST_CASE("a saved model is used when present") {
  Workspace ws;
  auto config = ws.config();
  config.model_path = ws.dir / "model.txt";
  {
    std::ofstream out(*config.model_path);
    out << "leaf 1 1\n";
  }
  es::SearchService service(config);
  CHECK(service.model().nodes().size() == 1);
  for (const auto& e : body(service.experts(query({{"category", "databases"}})))["results"]) {
    CHECK(e["score"] == 0.5);
  }
}

TEST_CASE("config file") {
  Workspace ws;
  const auto path = ws.dir / "service.json";
  {
    std::ofstream out(path);
    out << json{{"port", 9099},
                {"corpus_dir", (std::filesystem::path(ES_DATA_DIR) / "corpus").string()},
                {"vote_log", "votes.log"},
                {"cache_size", 4},
                {"feature_scope", "full"}}
               .dump();
  }
  unsetenv("EXPERTSEARCH_PORT");
  auto c = es::ServiceConfig::load(path);
  CHECK(c.port == 9099);
  CHECK(c.vote_log == ws.dir / "votes.log");
  CHECK(c.cache_size == 4);
  CHECK(c.scope == es::FeatureScope::full_graph);
  CHECK_FALSE(c.model_path.has_value());

  setenv("EXPERTSEARCH_PORT", "7001", 1);
  CHECK(es::ServiceConfig::load(path).port == 7001);
  setenv("EXPERTSEARCH_PORT", "70000", 1);
  CHECK_THROWS(es::ServiceConfig::load(path));
  unsetenv("EXPERTSEARCH_PORT");

  auto bad = [&](const json& j) {
    std::ofstream(path) << j.dump();
    return es::ServiceConfig::load(path);
  };
  CHECK_THROWS(bad({{"corpus_dir", "/nonexistent/dir"}}));
  CHECK_THROWS(bad({{"corpus_dir", ES_DATA_DIR}, {"damping", 1.0}}));
  CHECK_THROWS(bad({{"corpus_dir", ES_DATA_DIR}, {"ingest_mode", "sloppy"}}));
  CHECK_THROWS(bad({{"corpus_dir", ES_DATA_DIR}, {"cache_size", 0}}));
  std::ofstream(path) << "[1, 2]";
  CHECK_THROWS(es::ServiceConfig::load(path));
}

TEST_CASE("endpoints over HTTP") {
  Workspace ws;
  es::SearchService service(ws.config());
  const int port = service.bind();
  REQUIRE(port > 0);
  std::thread server([&] { service.listen_after_bind(); });
  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  for (int i = 0; i < 100 && !service.running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }

  auto cat = client.Post("/categorize", json{{"text", task2_text()}}.dump(), "application/json");
  REQUIRE(cat);
  CHECK(cat->status == 200);
  CHECK(json::parse(cat->body)["suggestions"][0]["category_id"] == "information_retrieval");
  CHECK(cat->get_header_value("Content-Type").find("application/json") == 0);

  auto experts = client.Get("/experts?category=information_retrieval&status=professor,postdoc&k=5");
  REQUIRE(experts);
  CHECK(experts->status == 200);
  CHECK(experts->body == service.experts(query({{"category", "information_retrieval"},
                                                 {"status", "professor,postdoc"},
                                                 {"k", "5"}}))
                             .body);

  auto missing = client.Get("/experts?category=zzz");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto person = client.Get("/person/u000");
  REQUIRE(person);
  CHECK(json::parse(person->body)["person_id"] == "u000");
  CHECK(client.Get("/person/nobody")->status == 404);

  auto vote = client.Post("/vote", R"({"person_id": "u000", "delta": 1, "voter_token": "http"})",
                          "application/json");
  REQUIRE(vote);
  CHECK(json::parse(vote->body)["tally"] == 1);
  CHECK(client.Post("/vote", R"({"person_id": "u000", "delta": 3, "voter_token": "http"})",
                    "application/json")
            ->status == 400);

  auto lucky = client.Post("/lucky", json{{"text", task2_text()}}.dump(), "application/json");
  REQUIRE(lucky);
  CHECK(json::parse(lucky->body)["category"]["category_id"] == "information_retrieval");

  service.stop();
  server.join();
}
