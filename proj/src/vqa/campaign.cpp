#include "cascade_vqa/vqa/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/rng.hpp"

namespace cvqa::vqa {

namespace {

struct RunPlan {
  qsim::Statevector prefix;
  ansatz::BoundCircuit body;
};

RunPlan plan_for(const ansatz::AnsatzSpec& spec, StrategyKind strategy,
                 const RunRecord* source) {
  if (strategy != StrategyKind::Cascade) {
    return {qsim::Statevector(spec.qubits), ansatz::build(spec)};
  }
  if (source == nullptr) throw ConfigError("cascade strategy requires a source run");
  auto cascade = build_cascade_circuit(preparation(*source), spec);
  return {cascade.warm_start.state(), std::move(cascade.body)};
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

PreparedCircuit preparation(const RunRecord& record) {
  if (record.strategy != StrategyKind::Cascade) {
    return bind_parameters(ansatz::build(record.ansatz), record.result.best_params);
  }
  if (!record.source) throw ConfigError("cascade run record has no source");
  const auto cascade = build_cascade_circuit(preparation(*record.source), record.ansatz);
  return cascade.bind(record.result.best_params);
}

qsim::Statevector final_state(const RunRecord& record) { return preparation(record).state(); }

Objective::Objective(const CostContext& ctx, const qsim::Statevector& prefix_state,
                     const ansatz::BoundCircuit& body)
    : ctx_(ctx), cached_(prefix_state) {
  std::size_t first_param = 0;
  while (first_param < body.ops.size() && !body.ops[first_param].param_slot) ++first_param;
  for (std::size_t i = 0; i < first_param; ++i) qsim::apply(cached_, body.ops[i]);
  remaining_.assign(body.ops.begin() + static_cast<std::ptrdiff_t>(first_param), body.ops.end());
}

qsim::Statevector Objective::state(std::span<const double> params) const {
  qsim::Statevector s = cached_;
  qsim::apply_circuit(s, remaining_, params);
  return s;
}

double Objective::operator()(std::span<const double> params) const {
  return cost(state(params), ctx_);
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(run_index));
}

namespace {

RunRecord run_with_plan(const CostContext& ctx, const CampaignSpec& spec, const RunPlan& plan,
                        int run_index) {
  RunRecord rec;
  rec.run_index = run_index;
  rec.seed = run_seed(spec.master_seed, run_index);
  rec.ansatz = spec.ansatz;
  rec.strategy = spec.strategy;
  rec.grid = ctx.spec();
  rec.bc = ctx.system->bc;
  rec.source = spec.source;
  const auto start = std::chrono::steady_clock::now();
  try {
    std::vector<double> x0;
    switch (spec.strategy) {
      case StrategyKind::Cold: x0 = init_cold(spec.ansatz, rec.seed); break;
      case StrategyKind::Uniform: x0 = init_uniform(spec.ansatz, rec.seed); break;
      case StrategyKind::Cascade:
        x0.assign(static_cast<std::size_t>(plan.body.param_count), 0.0);
        break;
    }
    const Objective objective(ctx, plan.prefix, plan.body);
    opt::OptimizerConfig cfg = spec.optimizer;
    cfg.seed = rec.seed;
    rec.result = opt::minimize([&](std::span<const double> p) { return objective(p); }, x0, cfg);
    if (rec.result.stop_reason == opt::StopReason::CostError) {
      rec.ok = false;
      rec.error = rec.result.message;
    }
    if (!rec.result.best_params.empty() && std::isfinite(rec.result.best_cost)) {
      rec.metrics = metrics(objective.state(rec.result.best_params), ctx);
    }
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

RunRecord run_single(const CostContext& ctx, const CampaignSpec& spec, int run_index) {
  const RunPlan plan = plan_for(spec.ansatz, spec.strategy, spec.source.get());
  return run_with_plan(ctx, spec, plan, run_index);
}

CampaignResult run_campaign(const CostContext& ctx, const CampaignSpec& spec) {
  spec.ansatz.validate();
  if (spec.ansatz.qubits != ctx.qubits()) {
    throw ConfigError("ansatz has " + std::to_string(spec.ansatz.qubits) +
                      " qubits but the grid has " + std::to_string(ctx.qubits()));
  }
  if (spec.runs < 1) throw ConfigError("runs must be at least 1");
  if (spec.strategy == StrategyKind::Cascade) {
    if (!spec.source) throw ConfigError("cascade strategy requires a source run");
    if (spec.source->grid.qubits + 3 != ctx.qubits()) {
      throw ConfigError("cascade source must have " + std::to_string(ctx.qubits() - 3) +
                        " qubits");
    }
  }
  spec.optimizer.validate(static_cast<std::size_t>(spec.ansatz.param_count()));

  const RunPlan plan = plan_for(spec.ansatz, spec.strategy, spec.source.get());
  CampaignResult out;
  out.runs.resize(static_cast<std::size_t>(spec.runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < spec.runs; i = next++) {
      out.runs[static_cast<std::size_t>(i)] = run_with_plan(ctx, spec, plan, i);
    }
  };
  const int jobs = std::clamp(spec.jobs, 1, spec.runs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.summary = summarize(out.runs, spec);
  return out;
}

CampaignSummary summarize(const std::vector<RunRecord>& runs, const CampaignSpec& spec) {
  CampaignSummary s;
  s.qubits = spec.ansatz.qubits;
  s.params = spec.ansatz.param_count();
  s.family = spec.ansatz.family;
  s.strategy = spec.strategy;
  s.source_qubits = spec.source ? spec.source->grid.qubits : 0;
  s.runs = static_cast<int>(runs.size());
  std::vector<double> energy;
  std::vector<double> evals;
  std::vector<double> fid;
  double best = -1e300;
  for (const auto& r : runs) {
    if (!r.ok) continue;
    energy.push_back(r.metrics.energy_accuracy);
    evals.push_back(r.result.evals_used);
    fid.push_back(r.metrics.fidelity);
    if (r.metrics.energy_accuracy > best) {
      best = r.metrics.energy_accuracy;
      s.best_run = r.run_index;
    }
  }
  s.succeeded = static_cast<int>(energy.size());
  if (!energy.empty()) {
    s.mean_energy = mean_of(energy);
    s.std_energy = sample_std(energy);
    s.max_energy = *std::max_element(energy.begin(), energy.end());
    s.min_energy = *std::min_element(energy.begin(), energy.end());
    s.mean_evals = mean_of(evals);
    s.std_evals = sample_std(evals);
    s.mean_fidelity = mean_of(fid);
  }
  return s;
}

std::shared_ptr<const RunRecord> select_cascade_source(const std::vector<RunRecord>& runs,
                                                       double min_accuracy) {
  const RunRecord* best = nullptr;
  for (const auto& r : runs) {
    if (r.ok && (!best || r.metrics.energy_accuracy > best->metrics.energy_accuracy)) best = &r;
  }
  if (!best) throw ConfigError("cascade source campaign has no successful run");
  if (best->metrics.energy_accuracy < min_accuracy) {
    std::ostringstream msg;
    msg << std::fixed << std::setprecision(2) << "cascade source best energy accuracy "
        << best->metrics.energy_accuracy << "% is below the required " << min_accuracy << "%";
    throw ConfigError(msg.str());
  }
  return std::make_shared<const RunRecord>(*best);
}

std::string format_table(const std::vector<CampaignSummary>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "Qubits" << std::setw(8) << "Params" << std::setw(16)
      << "Ansatz" << std::setw(20) << "Mean Energy (%)" << std::setw(20) << "Iterations"
      << std::setw(16) << "Max Energy (%)" << "Min Energy (%)\n";
  for (const auto& r : rows) {
    std::ostringstream q;
    if (r.source_qubits > 0) {
      q << r.source_qubits << " to " << r.qubits;
    } else {
      q << r.qubits;
    }
    std::ostringstream mean;
    mean << std::fixed << std::setprecision(2) << r.mean_energy << " ± " << r.std_energy;
    std::ostringstream iters;
    iters << std::fixed << std::setprecision(0) << r.mean_evals << " ± " << r.std_evals;
    std::ostringstream mx;
    mx << std::fixed << std::setprecision(2) << r.max_energy;
    std::ostringstream mn;
    mn << std::fixed << std::setprecision(2) << r.min_energy;
    // "±" is two bytes in UTF-8; widen its column by one to keep alignment.
    out << std::left << std::setw(10) << q.str() << std::setw(8) << r.params << std::setw(16)
        << ansatz::family_label(r.family) << std::setw(21) << mean.str() << std::setw(21)
        << iters.str() << std::setw(16) << mx.str() << mn.str() << '\n';
  }
  return out.str();
}

}  // namespace cvqa::vqa
