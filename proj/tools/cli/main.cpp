#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "footloco/compose.hpp"
#include "footloco/correct.hpp"
#include "footloco/database.hpp"
#include "footloco/io.hpp"
#include "footloco/service.hpp"
#include "footloco/synthgen.hpp"
#include "footloco/transitions.hpp"

namespace fs = std::filesystem;
using namespace footloco;

namespace {

std::vector<fs::path> json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::InvalidInput, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Writes canonical JSON to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const Json& j) {
  const std::string text = dump_canonical(j);
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

// Clip and sequence ids may contain path separators.
std::string file_name(std::string id) {
  std::replace(id.begin(), id.end(), '/', '_');
  return id + ".json";
}

void emit_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << text;
}

MotionDatabase load_db(const std::string& path) { return database_from_json(read_json_file(path)); }
FootprintPlan load_plan(const std::string& path) { return plan_from_json(read_json_file(path)); }
TransitionGraphSet load_graphs(const std::string& path) {
  return path.empty() ? TransitionGraphSet{} : graph_set_from_json(read_json_file(path));
}

service::HttpServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Footprint-driven locomotion composition"};
  app.require_subcommand(1);

  std::string db_path, plan_path, graphs_path, out_path, log_path, report_path, clips_dir, seq_dir, spec_path,
      csv_path;
  bool timing = false;
  std::optional<double> theta_deg, feet_max;
  std::size_t index = 0;
  std::uint64_t seed = 1;
  int port = service::kDefaultPort;
  std::string bind = service::kDefaultBind;

  auto* build_db = app.add_subcommand("build-db", "Build a motion database from a directory of clip files");
  build_db->add_option("--clips", clips_dir, "Directory of clip JSON files")->required();
  build_db->add_option("--out", out_path, "Output database JSON")->required();
  build_db->add_option("--theta-deg", theta_deg, "Override both jump simultaneity angles (degrees)");
  build_db->add_option("--feet-max", feet_max, "Override the simultaneity inter-foot distance (m)");

  auto* classify = app.add_subcommand("classify", "Classify every step of a footprint plan");
  classify->add_option("--db", db_path)->required();
  classify->add_option("--plan", plan_path)->required();
  classify->add_option("--out", out_path, "Output file (stdout by default)");

  auto* correct = app.add_subcommand("correct", "Correct unreachable footprints");
  correct->add_option("--db", db_path)->required();
  correct->add_option("--plan", plan_path)->required();
  correct->add_option("--out", out_path, "Corrected plan")->required();
  correct->add_option("--log", log_path, "Change log");

  auto* explain = app.add_subcommand("explain-step", "Dump the enclosure and weights chosen for one step");
  explain->add_option("--db", db_path)->required();
  explain->add_option("--plan", plan_path)->required();
  explain->add_option("--index", index, "Plan index of the step's target footprint")->required();
  explain->add_option("--graphs", graphs_path);
  explain->add_option("--out", out_path);

  auto* graphs = app.add_subcommand("graphs", "Build transition graphs from labeled sequences");
  graphs->add_option("--db", db_path, "Accepted for interface symmetry; graphs depend only on the sequences");
  graphs->add_option("--sequences", seq_dir, "Directory of labeled sequence JSON files");
  graphs->add_option("--graphs", graphs_path, "Existing graphs JSON (instead of --sequences)");
  graphs->add_option("--out", out_path, "Output graphs JSON");
  graphs->add_option("--dump-csv", csv_path, "Write (offset, v_mean) tables as CSV; '-' for stdout")
      ->expected(0, 1)
      ->default_str("-");

  auto* synth = app.add_subcommand("synthesize", "Compose motion for a footprint plan");
  synth->add_option("--db", db_path)->required();
  synth->add_option("--graphs", graphs_path)->required();
  synth->add_option("--plan", plan_path)->required();
  synth->add_option("--out", out_path, "Output motion JSON")->required();
  synth->add_option("--report", report_path, "Composition report JSON");
  synth->add_flag("--timing", timing, "Include wall-clock timings in the report");

  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic clip corpus and transition sequences");
  gen->add_option("--spec", spec_path, "Synthesis spec JSON (defaults built in)");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path, "Output directory")->required();

  auto* serve = app.add_subcommand("serve", "Run the local HTTP service");
  serve->add_option("--db", db_path)->required();
  serve->add_option("--graphs", graphs_path)->required();
  serve->add_option("--port", port);
  serve->add_option("--bind", bind);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_db) {
      std::vector<StepClip> clips;
      for (const fs::path& p : json_files(clips_dir)) clips.push_back(clip_from_json(read_json_file(p)));
      DatabaseConfig cfg;
      if (theta_deg) cfg.theta_override = *theta_deg * kPi / 180.0;
      cfg.feet_max_override = feet_max;
      if (!clips.empty()) cfg.toe_offset = plane_distance(clips.front().support.foot, clips.front().support.toe);
      emit(out_path, database_to_json(build_database(std::move(clips), cfg)));
    } else if (*classify) {
      emit(out_path, service::classify(load_db(db_path), load_plan(plan_path)));
    } else if (*correct) {
      const Json r = service::correct(load_db(db_path), load_plan(plan_path));
      emit(out_path, r.at("plan"));
      if (!log_path.empty()) emit(log_path, r.at("log"));
    } else if (*explain) {
      emit(out_path, service::explain_step(load_db(db_path), load_graphs(graphs_path), load_plan(plan_path), index));
    } else if (*graphs) {
      TransitionGraphSet set;
      if (!seq_dir.empty()) {
        std::vector<LabeledSequence> seqs;
        for (const fs::path& p : json_files(seq_dir)) seqs.push_back(sequence_from_json(read_json_file(p)));
        set = build_graph_set(seqs);
      } else if (!graphs_path.empty()) {
        set = load_graphs(graphs_path);
      } else {
        throw Error(ErrorCode::InvalidInput, "graphs needs --sequences or --graphs");
      }
      if (!out_path.empty()) emit(out_path, graph_set_to_json(set));
      if (graphs->count("--dump-csv") > 0) emit_text(csv_path, graph_set_to_csv(set));
    } else if (*synth) {
      const Composition c = compose(load_db(db_path), load_graphs(graphs_path), load_plan(plan_path));
      emit(out_path, motion_to_json(c.motion));
      if (!report_path.empty()) emit(report_path, report_to_json(c.report, timing));
    } else if (*gen) {
      const SynthSpec spec = spec_path.empty() ? default_synth_spec() : synth_spec_from_json(read_json_file(spec_path));
      const fs::path root(out_path);
      fs::create_directories(root / "clips");
      fs::create_directories(root / "sequences");
      for (const StepClip& c : gen_database(spec.database, seed)) {
        emit((root / "clips" / file_name(c.id)).string(), clip_to_json(c));
      }
      for (std::size_t g = 0; g < spec.graphs.size(); ++g) {
        for (const LabeledSequence& s : gen_graph_corpus(spec.graphs[g], seed + 1000 * (g + 1))) {
          emit((root / "sequences" / file_name(s.id)).string(), sequence_to_json(s));
        }
      }
      emit((root / "spec.json").string(), synth_spec_to_json(spec));
    } else if (*serve) {
      auto db = std::make_shared<const MotionDatabase>(load_db(db_path));
      auto gs = std::make_shared<const TransitionGraphSet>(load_graphs(graphs_path));
      service::HttpServer server(service::Router(db, gs));
      if (server.bind(bind, port) < 0) {
        std::fprintf(stderr, "error: cannot bind %s:%d\n", bind.c_str(), port);
        return 2;
      }
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::fprintf(stderr, "serving on http://%s:%d\n", bind.c_str(), port);
      const bool ok = server.listen();
      g_server = nullptr;
      return ok ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << dump_canonical(service::error_to_json(e)) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
