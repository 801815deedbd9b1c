#include "cascade_vqa/json_io.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "cascade_vqa/errors.hpp"

namespace cvqa::json_io {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

/// Runs fn, prefixing any ConfigError with `path`.
template <typename Fn>
auto at_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

template <typename T>
T field(const json& j, const std::string& key, const std::string& path) {
  const std::string where = join(path, key);
  if (!j.contains(key)) fail(where, "missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(where, "wrong type");
  }
}

template <typename T>
T field_or(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return field<T>(j, key, path);
}

std::string region_name(fem::PatchRegion r) { return r == fem::PatchRegion::Full ? "full" : "half"; }

fem::PatchRegion parse_region(const std::string& s) {
  if (s == "full") return fem::PatchRegion::Full;
  if (s == "half") return fem::PatchRegion::Half;
  throw ConfigError("region must be 'full' or 'half'");
}

}  // namespace

json grid_to_json(const fem::GridSpec& spec, const fem::BoundarySpec& bc) {
  json dirichlet = json::array();
  for (const auto& d : bc.dirichlet) dirichlet.push_back({{"face", fem::face_name(d.face)}, {"value", d.value}});
  json neumann = json::array();
  for (const auto& n : bc.neumann) {
    neumann.push_back(
        {{"face", fem::face_name(n.face)}, {"region", region_name(n.region)}, {"flux", n.flux}});
  }
  return {{"qubits", spec.qubits},
          {"conductivity", spec.conductivity},
          {"dirichlet", dirichlet},
          {"neumann", neumann}};
}

std::pair<fem::GridSpec, fem::BoundarySpec> grid_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  fem::GridSpec spec;
  spec.qubits = field<int>(j, "qubits", path);
  spec.conductivity = field_or<double>(j, "conductivity", path, 1.0);
  at_path(join(path, "qubits"), [&] { fem::GridSpec{spec.qubits, 1.0}.validate(); });
  at_path(join(path, "conductivity"), [&] { spec.validate(); });

  fem::BoundarySpec bc = fem::BoundarySpec::defaults();
  if (j.contains("dirichlet")) {
    const std::string dpath = join(path, "dirichlet");
    if (!j["dirichlet"].is_array()) fail(dpath, "expected an array");
    bc.dirichlet.clear();
    for (std::size_t i = 0; i < j["dirichlet"].size(); ++i) {
      const std::string ipath = dpath + "[" + std::to_string(i) + "]";
      const json& e = j["dirichlet"][i];
      require_object(e, ipath);
      fem::DirichletFace d;
      const auto face = field<std::string>(e, "face", ipath);
      d.face = at_path(join(ipath, "face"), [&] { return fem::parse_face(face); });
      d.value = field<double>(e, "value", ipath);
      bc.dirichlet.push_back(d);
    }
  }
  if (j.contains("neumann")) {
    const std::string npath = join(path, "neumann");
    if (!j["neumann"].is_array()) fail(npath, "expected an array");
    bc.neumann.clear();
    for (std::size_t i = 0; i < j["neumann"].size(); ++i) {
      const std::string ipath = npath + "[" + std::to_string(i) + "]";
      const json& e = j["neumann"][i];
      require_object(e, ipath);
      fem::NeumannPatch n;
      const auto face = field<std::string>(e, "face", ipath);
      n.face = at_path(join(ipath, "face"), [&] { return fem::parse_face(face); });
      const auto region = field_or<std::string>(e, "region", ipath, "full");
      n.region = at_path(join(ipath, "region"), [&] { return parse_region(region); });
      n.flux = field<double>(e, "flux", ipath);
      bc.neumann.push_back(n);
    }
  }
  at_path(path, [&] { bc.validate(); });
  return {spec, bc};
}

json to_json(const ansatz::AnsatzSpec& spec) {
  return {{"family", ansatz::family_name(spec.family)},
          {"qubits", spec.qubits},
          {"reps", spec.reps},
          {"final_layer", ansatz::final_layer_name(spec.final_layer)},
          {"params", spec.param_count()}};
}

ansatz::AnsatzSpec ansatz_from_json(const json& j, int qubits, const std::string& path) {
  require_object(j, path);
  const auto name = field<std::string>(j, "family", path);
  const auto family = at_path(join(path, "family"), [&] { return ansatz::parse_family(name); });
  if (j.contains("qubits") && field<int>(j, "qubits", path) != qubits) {
    fail(join(path, "qubits"), "does not match the grid (" + std::to_string(qubits) + " qubits)");
  }
  ansatz::AnsatzSpec spec;
  if (j.contains("reps")) {
    spec.family = family;
    spec.qubits = qubits;
    spec.reps = field<int>(j, "reps", path);
    const auto fl = field_or<std::string>(j, "final_layer", path, "double");
    spec.final_layer = at_path(join(path, "final_layer"), [&] { return ansatz::parse_final_layer(fl); });
    at_path(path, [&] { spec.validate(); });
    if (j.contains("params") && field<int>(j, "params", path) != spec.param_count()) {
      fail(join(path, "params"), "does not match reps (" + std::to_string(spec.param_count()) + ")");
    }
  } else if (j.contains("params")) {
    const int count = field<int>(j, "params", path);
    spec = at_path(join(path, "params"),
                   [&] { return ansatz::spec_for_param_count(family, qubits, count); });
  } else {
    spec = at_path(path, [&] { return ansatz::default_spec(family, qubits); });
  }
  return spec;
}

json to_json(const opt::OptimizerConfig& cfg) {
  return {{"method", opt::method_name(cfg.method)},
          {"abs_tol", cfg.abs_tol},
          {"rel_tol", cfg.rel_tol},
          {"max_evals", cfg.max_evals},
          {"wall_clock_budget", cfg.wall_clock_budget},
          {"initial_trust_radius", cfg.initial_trust_radius},
          {"final_trust_radius", cfg.final_trust_radius}};
}

opt::OptimizerConfig optimizer_from_json(const json& j, const std::string& path) {
  require_object(j, path);
  opt::OptimizerConfig cfg;
  const auto method = field_or<std::string>(j, "method", path, "newuoa");
  cfg.method = at_path(join(path, "method"), [&] { return opt::parse_method(method); });
  cfg.abs_tol = field_or(j, "abs_tol", path, cfg.abs_tol);
  cfg.rel_tol = field_or(j, "rel_tol", path, cfg.rel_tol);
  cfg.max_evals = field_or(j, "max_evals", path, cfg.max_evals);
  cfg.wall_clock_budget = field_or(j, "wall_clock_budget", path, cfg.wall_clock_budget);
  cfg.initial_trust_radius = field_or(j, "initial_trust_radius", path, cfg.initial_trust_radius);
  cfg.final_trust_radius = field_or(j, "final_trust_radius", path, cfg.final_trust_radius);
  at_path(path, [&] { cfg.validate(0); });
  return cfg;
}

json to_json(const opt::OptimResult& r, bool with_trace) {
  json out{{"best_params", r.best_params},
           {"best_cost", r.best_cost},
           {"evals_used", r.evals_used},
           {"stop_reason", opt::stop_reason_name(r.stop_reason)},
           {"message", r.message}};
  if (with_trace) {
    json trace = json::array();
    for (const auto& p : r.trace) trace.push_back({p.eval, p.cost});
    out["trace"] = trace;
  }
  return out;
}

opt::OptimResult optim_result_from_json(const json& j) {
  opt::OptimResult r;
  r.best_params = field<std::vector<double>>(j, "best_params", "result");
  r.best_cost = field<double>(j, "best_cost", "result");
  r.evals_used = field<int>(j, "evals_used", "result");
  const auto reason = field<std::string>(j, "stop_reason", "result");
  r.stop_reason = at_path("result.stop_reason", [&] { return opt::parse_stop_reason(reason); });
  r.message = field_or<std::string>(j, "message", "result", "");
  if (j.contains("trace")) {
    for (const auto& p : j["trace"]) r.trace.push_back({p.at(0).get<int>(), p.at(1).get<double>()});
  }
  return r;
}

json to_json(const vqa::Metrics& m) {
  return {{"energy_accuracy", m.energy_accuracy},
          {"fidelity", m.fidelity},
          {"r_opt", m.r_opt},
          {"cost", m.cost_value}};
}

vqa::Metrics metrics_from_json(const json& j) {
  vqa::Metrics m;
  m.energy_accuracy = field<double>(j, "energy_accuracy", "metrics");
  m.fidelity = field<double>(j, "fidelity", "metrics");
  m.r_opt = field<double>(j, "r_opt", "metrics");
  m.cost_value = field<double>(j, "cost", "metrics");
  return m;
}

json to_json(const vqa::RunRecord& r, bool with_trace) {
  json out{{"run_index", r.run_index},
           {"seed", r.seed},
           {"strategy", vqa::strategy_name(r.strategy)},
           {"grid", grid_to_json(r.grid, r.bc)},
           {"ansatz", to_json(r.ansatz)},
           {"ok", r.ok},
           {"error", r.error},
           {"result", to_json(r.result, with_trace)},
           {"metrics", to_json(r.metrics)}};
  if (r.source) out["source"] = to_json(*r.source, false);
  return out;
}

vqa::RunRecord run_record_from_json(const json& j) {
  require_object(j, "run");
  vqa::RunRecord r;
  r.run_index = field<int>(j, "run_index", "run");
  r.seed = field<std::uint64_t>(j, "seed", "run");
  const auto strategy = field<std::string>(j, "strategy", "run");
  r.strategy = at_path("run.strategy", [&] { return vqa::parse_strategy(strategy); });
  std::tie(r.grid, r.bc) = grid_from_json(field<json>(j, "grid", "run"), "run.grid");
  r.ansatz = ansatz_from_json(field<json>(j, "ansatz", "run"), r.grid.qubits, "run.ansatz");
  r.ok = field_or(j, "ok", "run", true);
  r.error = field_or<std::string>(j, "error", "run", "");
  r.result = optim_result_from_json(field<json>(j, "result", "run"));
  r.metrics = metrics_from_json(field<json>(j, "metrics", "run"));
  if (j.contains("source") && !j["source"].is_null()) {
    r.source = std::make_shared<const vqa::RunRecord>(run_record_from_json(j["source"]));
  }
  if (r.strategy == vqa::StrategyKind::Cascade && !r.source) {
    fail("run.source", "cascade run without its source run");
  }
  if (static_cast<int>(r.result.best_params.size()) != r.ansatz.param_count()) {
    fail("run.result.best_params", "length does not match the ansatz");
  }
  return r;
}

json to_json(const vqa::CampaignSummary& s) {
  return {{"qubits", s.qubits},
          {"params", s.params},
          {"family", ansatz::family_name(s.family)},
          {"strategy", vqa::strategy_name(s.strategy)},
          {"source_qubits", s.source_qubits},
          {"runs", s.runs},
          {"succeeded", s.succeeded},
          {"mean_energy", s.mean_energy},
          {"std_energy", s.std_energy},
          {"max_energy", s.max_energy},
          {"min_energy", s.min_energy},
          {"mean_evals", s.mean_evals},
          {"std_evals", s.std_evals},
          {"mean_fidelity", s.mean_fidelity},
          {"best_run", s.best_run}};
}

json to_json(const sampling::ShotResult& shots) {
  json counts = json::object();
  for (const auto& [index, c] : shots.counts) counts[std::to_string(index)] = c;
  return {{"qubits", shots.qubits}, {"shots", shots.shots}, {"counts", counts}};
}

sampling::ShotResult shot_result_from_json(const json& j) {
  require_object(j, "shots");
  sampling::ShotResult out;
  out.qubits = field<int>(j, "qubits", "shots");
  out.shots = field<std::uint64_t>(j, "shots", "shots");
  const json counts = field<json>(j, "counts", "shots");
  if (!counts.is_object()) fail("shots.counts", "expected an object");
  std::uint64_t total = 0;
  for (const auto& [key, value] : counts.items()) {
    std::size_t used = 0;
    std::uint64_t index = 0;
    try {
      index = std::stoull(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size()) fail("shots.counts", "key '" + key + "' is not a basis index");
    const auto c = value.get<std::uint64_t>();
    if (c > 0) out.counts[index] = c;
    total += c;
  }
  if (total != out.shots) fail("shots.counts", "counts do not sum to shots");
  return out;
}

}  // namespace cvqa::json_io
