#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cascade_vqa/ansatz.hpp"
#include "cascade_vqa/optimizer.hpp"
#include "cascade_vqa/vqa/cascade.hpp"
#include "cascade_vqa/vqa/cost.hpp"
#include "cascade_vqa/vqa/init.hpp"

namespace cvqa::vqa {

/// One optimization run. Cascade runs keep the coarse run they started from.
struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  ansatz::AnsatzSpec ansatz;
  StrategyKind strategy = StrategyKind::Cold;
  fem::GridSpec grid;
  fem::BoundarySpec bc;
  opt::OptimResult result;
  Metrics metrics;
  double wall_time = 0.0;
  bool ok = true;
  std::string error;
  std::shared_ptr<const RunRecord> source;
};

/// Circuit (with bound angles) that produces the record's optimized state.
PreparedCircuit preparation(const RunRecord& record);
qsim::Statevector final_state(const RunRecord& record);

/// Evaluates cost(theta) for a fixed prefix followed by a parameterized body.
/// The prefix and the body's leading parameter-free gates are simulated once.
class Objective {
 public:
  Objective(const CostContext& ctx, const qsim::Statevector& prefix_state,
            const ansatz::BoundCircuit& body);
  qsim::Statevector state(std::span<const double> params) const;
  double operator()(std::span<const double> params) const;

 private:
  const CostContext& ctx_;
  qsim::Statevector cached_;
  std::vector<qsim::GateOp> remaining_;
};

struct CampaignSpec {
  ansatz::AnsatzSpec ansatz;
  StrategyKind strategy = StrategyKind::Cold;
  std::shared_ptr<const RunRecord> source;  // required for cascade
  int runs = 1;
  opt::OptimizerConfig optimizer;
  std::uint64_t master_seed = 0;
  int jobs = 1;
};

struct CampaignSummary {
  int qubits = 0;
  int params = 0;
  ansatz::Family family = ansatz::Family::RyCnot;
  StrategyKind strategy = StrategyKind::Cold;
  int source_qubits = 0;  // 0 unless cascade
  int runs = 0;
  int succeeded = 0;
  double mean_energy = 0.0;
  double std_energy = 0.0;  // sample standard deviation
  double max_energy = 0.0;
  double min_energy = 0.0;
  double mean_evals = 0.0;
  double std_evals = 0.0;
  double mean_fidelity = 0.0;
  int best_run = -1;
};

struct CampaignResult {
  std::vector<RunRecord> runs;
  CampaignSummary summary;
};

/// Per-run seed derived from the master seed (SplitMix fan-out).
std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

RunRecord run_single(const CostContext& ctx, const CampaignSpec& spec, int run_index);

/// n_runs independent seeded runs on a worker pool of spec.jobs threads.
/// A failing run is recorded (ok = false), not propagated.
CampaignResult run_campaign(const CostContext& ctx, const CampaignSpec& spec);

CampaignSummary summarize(const std::vector<RunRecord>& runs, const CampaignSpec& spec);

/// Best successful run; throws ConfigError if none reaches `min_accuracy` percent.
std::shared_ptr<const RunRecord> select_cascade_source(const std::vector<RunRecord>& runs,
                                                       double min_accuracy);

/// Table with columns Qubits, Params, Ansatz, Mean Energy (%), Iterations, Max, Min.
std::string format_table(const std::vector<CampaignSummary>& rows);

}  // namespace cvqa::vqa
