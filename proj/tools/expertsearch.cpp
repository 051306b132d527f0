// Command-line front end: index building, training, querying, voting and
// the HTTP service.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "expertsearch/categorize.hpp"
#include "expertsearch/index.hpp"
#include "expertsearch/ranking.hpp"
#include "expertsearch/service.hpp"

namespace es = expertsearch;

namespace {

es::SearchService* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

std::filesystem::path default_votes(const std::filesystem::path& index,
                                    const std::string& votes) {
  return votes.empty() ? index / "votes.log" : std::filesystem::path(votes);
}

void print_warnings(const es::Diagnostics& diag) {
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social-network expert search"};
  app.require_subcommand(1);

  // build-index
  auto* build = app.add_subcommand("build-index", "Resolve persons, build the graph and dump features");
  std::string corpus_dir, out_dir;
  double alpha = 1.0;
  bool lenient = false, full_graph = false, unit_lengths = false;
  build->add_option("corpus-dir", corpus_dir)->required();
  build->add_option("out-dir", out_dir)->required();
  build->add_option("--alpha", alpha, "Profile-edge weight")->check(CLI::PositiveNumber);
  build->add_flag("--lenient", lenient, "Skip malformed lines instead of failing");
  build->add_flag("--full-graph", full_graph, "Centralities on the full graph, not per category");
  build->add_flag("--unit-lengths", unit_lengths, "Unit edge lengths for shortest paths");

  // train
  auto* train = app.add_subcommand("train", "Train the C4.5 expertise model");
  std::string labels_path, model_out, index_dir = "index";
  std::size_t min_leaf = 2, max_depth = 6;
  train->add_option("--labels", labels_path, "Labels file (bootstrap labels when omitted)");
  train->add_option("--out", model_out)->required();
  train->add_option("--index", index_dir, "Index directory")->capture_default_str();
  train->add_option("--min-leaf", min_leaf)->capture_default_str();
  train->add_option("--max-depth", max_depth)->capture_default_str();
  train->add_flag("--lenient", lenient, "Skip unresolvable labels");

  // query
  auto* query = app.add_subcommand("query", "Rank experts in a category");
  std::string category, status, model_path, votes_path;
  int k = 20;
  query->add_option("--category", category)->required();
  query->add_option("--status", status, "Comma list of statuses");
  query->add_option("-k", k)->capture_default_str();
  query->add_option("--index", index_dir)->capture_default_str();
  query->add_option("--model", model_path, "Model file (default <index>/model.txt)");
  query->add_option("--votes", votes_path, "Vote log (default <index>/votes.log)");

  // vote
  auto* vote = app.add_subcommand("vote", "Record a +1/-1 vote for a person");
  std::string person, voter = "cli";
  int delta = 0;
  vote->add_option("--person", person)->required();
  vote->add_option("--delta", delta)->required();
  vote->add_option("--voter", voter)->capture_default_str();
  vote->add_option("--index", index_dir)->capture_default_str();
  vote->add_option("--votes", votes_path);

  // stats
  auto* stats = app.add_subcommand("stats", "Graph statistics of an index");
  stats->add_option("--index", index_dir)->capture_default_str();

  // categorize
  auto* categorize = app.add_subcommand("categorize", "Suggest categories for free text");
  std::string text, text_file;
  bool lucky = false;
  categorize->add_option("--text", text);
  categorize->add_option("--file", text_file);
  categorize->add_option("--index", index_dir)->capture_default_str();
  categorize->add_flag("--lucky", lucky, "Only the best category");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string config_path;
  serve->add_option("--config", config_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      es::Diagnostics diag;
      const es::LoadOptions opts{lenient ? es::IngestMode::lenient : es::IngestMode::strict, &diag};
      es::EngineOptions engine;
      engine.alpha = alpha;
      engine.features.scope = full_graph ? es::FeatureScope::full_graph
                                         : es::FeatureScope::category_subgraph;
      engine.features.edge_length =
          unit_lengths ? es::EdgeLength::unit : es::EdgeLength::inverse_weight;
      auto index = es::ExpertIndex::build(es::load_corpus(corpus_dir, opts), engine);
      print_warnings(diag);
      es::write_index(out_dir, index);
      const auto& rs = index.resolution().stats;
      std::cout << "records: " << diag.records << '\n'
                << "persons: " << index.resolution().persons.size() << '\n'
                << "authors matched: " << rs.matched << '/' << rs.distinct_author_names
                << " (tie-discarded " << rs.discarded_for_tie << ", over threshold "
                << rs.over_threshold << ")\n"
                << "edges: " << index.graph().edge_count() << '\n';
      for (const auto& skipped : index.overlay_report().skipped) {
        std::cerr << "warning: profile edge " << skipped << " not resolved\n";
      }
      return 0;
    }

    if (*train) {
      const auto files = es::read_index(index_dir);
      const auto mode = lenient ? es::IngestMode::lenient : es::IngestMode::strict;
      std::vector<es::TrainingLabel> labels;
      if (!labels_path.empty()) labels = es::load_training_labels(labels_path, {mode, nullptr});
      const auto tree = es::train_from_features(labels, files.features, files.persons, mode,
                                                {min_leaf, max_depth});
      std::ofstream out(model_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + model_out);
      tree.write(out);
      std::cout << "nodes: " << tree.nodes().size() << ", depth: " << tree.depth() << '\n';
      return 0;
    }

    if (*query) {
      const auto files = es::read_index(index_dir);
      const auto model = model_path.empty() ? std::filesystem::path(index_dir) / "model.txt"
                                            : std::filesystem::path(model_path);
      std::ifstream min(model);
      if (!min) throw std::runtime_error("cannot open model " + model.string());
      const auto tree = es::DecisionTree::read(min);
      const auto vpath = default_votes(index_dir, votes_path);
      std::unique_ptr<es::VoteStore> votes;
      if (std::filesystem::exists(vpath)) votes = std::make_unique<es::VoteStore>(vpath);
      const auto ranked =
          es::rank_experts(category, es::parse_status_filter(status), k, tree, files.features,
                           files.person_info(), files.taxonomy, votes.get());
      for (const auto& e : ranked) {
        const auto* p = files.find_person(e.person_id);
        std::cout << e.rank << '\t' << e.person_id << '\t' << es::format_real(e.score) << '\t'
                  << es::to_string(p->academic_status) << '\t' << p->display_name << '\n';
      }
      return 0;
    }

    if (*vote) {
      const auto files = es::read_index(index_dir);
      es::VoteStore store(default_votes(index_dir, votes_path), [&](std::string_view id) {
        return files.find_person(id) != nullptr;
      });
      std::cout << store.apply(voter, person, delta) << '\n';
      return 0;
    }

    if (*stats) {
      const auto files = es::read_index(index_dir);
      const auto s = es::graph_stats(files.graph);
      std::cout << "nodes: " << s.node_count << '\n'
                << "edges: " << s.edge_count << '\n'
                << "components: " << s.connected_component_count << '\n'
                << "largest component: " << s.largest_component_size << '\n'
                << "clique-like components: " << s.clique_like_component_count << '\n';
      return 0;
    }

    if (*categorize) {
      if (!text_file.empty()) {
        std::ifstream in(text_file);
        if (!in) throw std::runtime_error("cannot open " + text_file);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      }
      const auto taxonomy = es::load_taxonomy(std::filesystem::path(index_dir) / "taxonomy.txt");
      es::SuggestOptions opts;
      opts.feeling_lucky = lucky;
      for (const auto& s : es::suggest_categories(text, taxonomy, opts)) {
        std::cout << s.rank << '\t' << s.category_id << '\t' << es::format_real(s.score) << '\t'
                  << s.label << '\n';
      }
      return 0;
    }

    if (*serve) {
      auto config = es::ServiceConfig::load(config_path);
      es::SearchService service(config);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const int port = service.bind();
      std::cerr << "listening on " << config.host << ':' << port << '\n';
      service.listen_after_bind();
      g_service = nullptr;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
