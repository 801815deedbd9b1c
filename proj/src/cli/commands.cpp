#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "cascade_vqa/cli.hpp"
#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/imaging.hpp"
#include "cascade_vqa/json_io.hpp"
#include "cascade_vqa/sampling.hpp"
#include "cascade_vqa/vqa/campaign.hpp"
#include "common.hpp"

namespace cvqa::cli {

constexpr double kDefaultSourceGate = 85.0;

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create directory " + dir.string());
}

qsim::Statevector read_state_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw InputError("statevector file " + path.string() + " not found");
  try {
    return qsim::load_statevector(path.string());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

void set_path(json& j, std::initializer_list<const char*> keys, json value) {
  json* node = &j;
  for (const char* k : keys) {
    if (!node->is_object()) *node = json::object();
    node = &(*node)[k];
  }
  *node = std::move(value);
}

namespace {

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json j = read_json_file(path);
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  return j;
}

template <typename T>
T top_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type");
  }
}

int jobs_from_env() {
  const char* env = std::getenv("CASCADE_VQA_JOBS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("CASCADE_VQA_JOBS must be a positive integer");
  return static_cast<int>(v);
}

std::shared_ptr<const vqa::CostContext> context_for(const fem::GridSpec& spec,
                                                    const fem::BoundarySpec& bc) {
  return std::make_shared<const vqa::CostContext>(
      vqa::CostContext::make(fem::build_problem(spec, bc)));
}

/// Best cascade source from a campaign directory or a single run file.
std::shared_ptr<const vqa::RunRecord> load_source(const fs::path& path, double gate) {
  std::vector<vqa::RunRecord> runs;
  if (fs::is_directory(path)) {
    const fs::path dir = path / "runs";
    if (!fs::is_directory(dir)) throw InputError("source " + path.string() + " has no runs/ directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) runs.push_back(json_io::run_record_from_json(read_json_file(f)));
  } else if (fs::is_regular_file(path)) {
    runs.push_back(json_io::run_record_from_json(read_json_file(path)));
  } else {
    throw InputError("cascade source " + path.string() + " not found");
  }
  if (runs.empty()) throw InputError("cascade source " + path.string() + " contains no runs");
  return vqa::select_cascade_source(runs, gate);
}

struct ResolvedCampaign {
  json snapshot;
  fem::GridSpec grid;
  fem::BoundarySpec bc;
  vqa::CampaignSpec spec;
  fs::path output;
  std::string source_path;
  double source_gate = kDefaultSourceGate;
};

ResolvedCampaign resolve_campaign(const CampaignOptions& o, bool force_cascade) {
  json cfg = load_config(o.config);
  if (o.qubits) set_path(cfg, {"grid", "qubits"}, *o.qubits);
  if (o.family) set_path(cfg, {"ansatz", "family"}, *o.family);
  if (o.reps) {
    set_path(cfg, {"ansatz", "reps"}, *o.reps);
    if (cfg["ansatz"].contains("params") && !o.params) cfg["ansatz"].erase("params");
  }
  if (o.params) {
    set_path(cfg, {"ansatz", "params"}, *o.params);
    if (!o.reps && cfg["ansatz"].contains("reps")) cfg["ansatz"].erase("reps");
  }
  if (o.final_layer) set_path(cfg, {"ansatz", "final_layer"}, *o.final_layer);
  if (o.strategy) cfg["strategy"] = *o.strategy;
  if (force_cascade) cfg["strategy"] = "cascade";
  if (o.runs) cfg["runs"] = *o.runs;
  if (o.max_evals) set_path(cfg, {"optimizer", "max_evals"}, *o.max_evals);
  if (o.time_budget) set_path(cfg, {"optimizer", "wall_clock_budget"}, *o.time_budget);
  if (o.trust_radius) set_path(cfg, {"optimizer", "initial_trust_radius"}, *o.trust_radius);
  if (o.method) set_path(cfg, {"optimizer", "method"}, *o.method);
  if (o.seed) cfg["master_seed"] = *o.seed;
  if (o.output) cfg["output"] = *o.output;
  if (o.source) cfg["source"] = *o.source;
  if (o.min_source_accuracy) cfg["min_source_accuracy"] = *o.min_source_accuracy;

  ResolvedCampaign r;
  if (!cfg.contains("grid")) throw ConfigError("grid.qubits: missing required field");
  std::tie(r.grid, r.bc) = json_io::grid_from_json(cfg["grid"]);
  json ansatz_json = cfg.contains("ansatz") ? cfg["ansatz"] : json::object();
  if (!ansatz_json.contains("family")) ansatz_json["family"] = "RxRyCnot";
  r.spec.ansatz = json_io::ansatz_from_json(ansatz_json, r.grid.qubits);
  const auto strategy = top_field<std::string>(cfg, "strategy", "cold");
  try {
    r.spec.strategy = vqa::parse_strategy(strategy);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("strategy: ") + e.what());
  }
  r.spec.runs = top_field<int>(cfg, "runs", 1);
  if (r.spec.runs < 1) throw ConfigError("runs: must be at least 1");
  r.spec.optimizer = json_io::optimizer_from_json(
      cfg.contains("optimizer") ? cfg["optimizer"] : json::object());
  try {
    r.spec.optimizer.validate(static_cast<std::size_t>(r.spec.ansatz.param_count()));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("optimizer: ") + e.what());
  }
  r.spec.master_seed = top_field<std::uint64_t>(cfg, "master_seed", 0);
  r.spec.jobs = o.jobs ? *o.jobs : top_field<int>(cfg, "jobs", jobs_from_env());
  if (r.spec.jobs < 1) throw ConfigError("jobs: must be at least 1");
  const auto output = top_field<std::string>(cfg, "output", "");
  if (output.empty()) throw ConfigError("output: missing required field");
  r.output = output;
  r.source_gate = top_field<double>(cfg, "min_source_accuracy", kDefaultSourceGate);
  if (r.spec.strategy == vqa::StrategyKind::Cascade) {
    r.source_path = top_field<std::string>(cfg, "source", "");
    if (r.source_path.empty()) throw ConfigError("source: required for the cascade strategy");
  }

  r.snapshot = {{"grid", json_io::grid_to_json(r.grid, r.bc)},
                {"ansatz", json_io::to_json(r.spec.ansatz)},
                {"strategy", vqa::strategy_name(r.spec.strategy)},
                {"runs", r.spec.runs},
                {"optimizer", json_io::to_json(r.spec.optimizer)},
                {"master_seed", r.spec.master_seed}};
  if (r.spec.strategy == vqa::StrategyKind::Cascade) {
    r.snapshot["source"] = r.source_path;
    r.snapshot["min_source_accuracy"] = r.source_gate;
  }
  return r;
}

std::string run_file_name(int index) {
  std::ostringstream s;
  s << "run_" << std::setw(3) << std::setfill('0') << index << ".json";
  return s.str();
}

struct StateInput {
  qsim::Statevector state{1};
  fem::GridSpec grid;
  fem::BoundarySpec bc;
};

/// Resolves the state file and its grid: --campaign supplies both, --config
/// supplies the boundary conditions, otherwise the defaults apply.
StateInput load_state_input(const StateOptions& o, bool need_state) {
  fs::path state_path = o.state;
  json cfg;
  if (!o.campaign.empty()) {
    const fs::path dir = o.campaign;
    if (!fs::is_directory(dir)) throw InputError("campaign directory " + dir.string() + " not found");
    if (state_path.empty()) state_path = dir / "best_state.bin";
    cfg = read_json_file(dir / "config.json");
  }
  if (!o.config.empty()) cfg = load_config(o.config);

  StateInput in;
  int qubits = 0;
  if (!state_path.empty()) {
    in.state = read_state_file(state_path);
    qubits = in.state.qubits();
  } else if (need_state) {
    throw InputError("no statevector given (use --state or --campaign)");
  }
  if (cfg.contains("grid")) {
    if (qubits > 0 && !cfg["grid"].contains("qubits")) cfg["grid"]["qubits"] = qubits;
    std::tie(in.grid, in.bc) = json_io::grid_from_json(cfg["grid"]);
  } else {
    if (qubits == 0) throw ConfigError("grid.qubits: missing required field");
    in.grid.qubits = qubits;
    try {
      in.grid.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("grid.qubits: ") + e.what());
    }
    in.bc = fem::BoundarySpec::defaults();
  }
  if (qubits > 0 && in.grid.qubits != qubits) {
    throw ConfigError("grid.qubits: state has " + std::to_string(qubits) +
                      " qubits but the grid has " + std::to_string(in.grid.qubits));
  }
  return in;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  json cfg = load_config(o.config);
  if (o.qubits) set_path(cfg, {"grid", "qubits"}, *o.qubits);
  if (o.output) cfg["output"] = *o.output;
  if (!cfg.contains("grid")) throw ConfigError("grid.qubits: missing required field");
  const auto [grid, bc] = json_io::grid_from_json(cfg["grid"]);
  const auto output = top_field<std::string>(cfg, "output", "");
  if (output.empty()) throw ConfigError("output: missing required field");

  const fem::GridSystem sys = fem::build_problem(grid, bc);
  double u_norm = 0.0;
  for (double v : sys.u_ref) u_norm += v * v;
  u_norm = std::sqrt(u_norm);

  const fs::path dir = output;
  ensure_directory(dir);
  std::vector<qsim::Complex> amps(sys.u_ref.begin(), sys.u_ref.end());
  std::ostringstream bin;
  qsim::write_statevector(bin, qsim::Statevector(grid.qubits, std::move(amps)));
  write_text_file(dir / "u_ref.bin", bin.str());
  const json meta{{"grid", json_io::grid_to_json(grid, bc)},
                  {"nodes_per_axis", grid.nodes_per_axis()},
                  {"e_ref", sys.e_ref},
                  {"u_norm", u_norm},
                  {"residual", sys.residual},
                  {"solver", sys.solver},
                  {"dirichlet_diagonal", sys.dirichlet_diagonal}};
  write_json_file(dir / "solution.json", meta);
  if (o.export_mtx) {
    std::ostringstream k;
    fem::write_matrix_market(k, sys.stiffness);
    write_text_file(dir / "stiffness.mtx", k.str());
    std::ostringstream f;
    fem::write_matrix_market(f, std::span<const double>(sys.load));
    write_text_file(dir / "load.mtx", f.str());
  }

  out << "qubits " << grid.qubits << ", nodes " << grid.node_count() << ", solver " << sys.solver
      << '\n';
  out << "E_ref " << std::setprecision(12) << sys.e_ref << '\n';
  out << "relative residual " << std::scientific << std::setprecision(3) << sys.residual
      << (sys.residual <= 1e-10 ? " (ok)" : " (above 1e-10)") << std::defaultfloat << '\n';
  if (sys.residual > 1e-10) err << "warning: classical residual above 1e-10\n";
  return kOk;
}

int cmd_campaign(const CampaignOptions& o, bool force_cascade, std::ostream& out,
                 std::ostream& err) {
  ResolvedCampaign r = resolve_campaign(o, force_cascade);
  if (r.spec.strategy == vqa::StrategyKind::Cascade) {
    r.spec.source = load_source(r.source_path, r.source_gate);
    err << "cascade source: " << r.spec.source->grid.qubits << " qubits, run "
        << r.spec.source->run_index << ", energy accuracy "
        << fixed(r.spec.source->metrics.energy_accuracy, 2) << "%\n";
  }
  const auto ctx = context_for(r.grid, r.bc);
  const vqa::CampaignResult result = vqa::run_campaign(*ctx, r.spec);

  ensure_directory(r.output / "runs");
  write_json_file(r.output / "config.json", r.snapshot);
  json brief = json::array();
  json timing = json::array();
  for (const auto& run : result.runs) {
    write_json_file(r.output / "runs" / run_file_name(run.run_index), json_io::to_json(run));
    brief.push_back({{"run_index", run.run_index},
                     {"seed", run.seed},
                     {"ok", run.ok},
                     {"energy_accuracy", run.metrics.energy_accuracy},
                     {"fidelity", run.metrics.fidelity},
                     {"evals_used", run.result.evals_used},
                     {"stop_reason", opt::stop_reason_name(run.result.stop_reason)}});
    timing.push_back({{"run_index", run.run_index}, {"wall_time", run.wall_time}});
    if (!run.ok) err << "run " << run.run_index << " failed: " << run.error << '\n';
  }
  write_json_file(r.output / "summary.json",
                  {{"summary", json_io::to_json(result.summary)}, {"runs", brief}});
  write_json_file(r.output / "timing.json", timing);
  const std::string table = vqa::format_table({result.summary});
  write_text_file(r.output / "summary.txt", table);
  out << table;

  if (result.summary.succeeded == 0) throw NoSuccessfulRuns("no run of the campaign succeeded");
  const auto& best = result.runs[static_cast<std::size_t>(result.summary.best_run)];
  std::ostringstream bin;
  qsim::write_statevector(bin, vqa::final_state(best));
  write_text_file(r.output / "best_state.bin", bin.str());
  return kOk;
}

int cmd_sample(const SampleOptions& o, std::ostream& out, std::ostream&) {
  StateInput in = load_state_input(o.input, true);
  in.state.normalize();
  const auto ctx = context_for(in.grid, in.bc);
  const sampling::ShotResult shots = sampling::sample(in.state, o.shots, o.seed);
  const qsim::Statevector sampled = sampling::reconstruct(shots, in.state);
  const sampling::SampledMetrics m = sampling::compare(sampled, in.state, *ctx);
  const json block{{"shots", o.shots},
                   {"seed", o.seed},
                   {"energy_vs_solution", m.energy_vs_solution},
                   {"fidelity_vs_solution", m.fidelity_vs_solution},
                   {"energy_vs_simulation", m.energy_vs_simulation},
                   {"fidelity_vs_simulation", m.fidelity_vs_simulation}};
  if (!o.output.empty()) {
    const fs::path dir = o.output;
    ensure_directory(dir);
    write_json_file(dir / "shots.json", json_io::to_json(shots));
    write_json_file(dir / "sample.json", block);
  }
  out << "qubits " << in.grid.qubits << ", shots " << o.shots << ", distinct outcomes "
      << shots.counts.size() << '\n';
  out << "                stoch/solution  stoch/simulation\n";
  out << "Energy (%)      " << std::left << std::setw(16) << fixed(m.energy_vs_solution, 2)
      << fixed(m.energy_vs_simulation, 2) << '\n';
  out << "Fidelity (%)    " << std::setw(16) << fixed(m.fidelity_vs_solution, 2)
      << fixed(m.fidelity_vs_simulation, 2) << '\n';
  return kOk;
}

int cmd_metrics(const StateOptions& o, std::ostream& out, std::ostream&) {
  const StateInput in = load_state_input(o, true);
  const auto ctx = context_for(in.grid, in.bc);
  const vqa::Metrics m = vqa::metrics(in.state, *ctx);
  json j = json_io::to_json(m);
  j["qubits"] = in.grid.qubits;
  j["e_ref"] = ctx->system->e_ref;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_slice(const SliceOptions& o, std::ostream& out, std::ostream&) {
  const StateInput in = load_state_input(o.input, !o.classical);
  const auto ctx = context_for(in.grid, in.bc);
  const fem::Axis axis = fem::parse_axis(o.axis);
  const auto format = imaging::parse_format(o.format);
  const int n = static_cast<int>(in.grid.nodes_per_axis());
  const int layer = o.layer ? *o.layer : n / 2;
  if (o.upsample < 1) throw ConfigError("upsample: must be at least 1");

  const imaging::SliceImage classical = imaging::extract_slice(ctx->u_ref(), n, axis, layer);
  const imaging::SliceImage img =
      o.classical ? classical : imaging::extract_slice(in.state, *ctx, axis, layer);
  try {
    imaging::export_slice(o.output, img, format, o.upsample);
  } catch (const std::ios_base::failure& e) {
    throw OutputError(e.what());
  }
  out << "slice " << fem::axis_name(axis) << '=' << layer << ", " << img.rows * o.upsample << 'x'
      << img.cols * o.upsample << ", written to " << o.output << '\n';
  if (!o.classical) {
    out << "discarded imaginary norm fraction " << std::scientific << std::setprecision(3)
        << img.discarded_imag << std::defaultfloat << '\n';
    out << "correlation with classical slice " << fixed(imaging::correlation(img, classical), 4)
        << '\n';
  }
  return kOk;
}

}  // namespace cvqa::cli
