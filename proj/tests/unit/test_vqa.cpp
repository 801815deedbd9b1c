#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include <nlohmann/json.hpp>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/fem_grid.hpp"
#include "cascade_vqa/vqa/campaign.hpp"
#include "cascade_vqa/vqa/cascade.hpp"
#include "cascade_vqa/vqa/cost.hpp"
#include "cascade_vqa/vqa/init.hpp"
#include "dense.hpp"

using namespace cvqa;
using namespace cvqa::vqa;

namespace {

const nlohmann::json& golden(int qubits) {
  static const nlohmann::json j = [] {
    std::ifstream in(std::string(CVQA_GOLDEN_DIR) + "/fem_golden.json");
    return nlohmann::json::parse(in);
  }();
  return j.at(std::to_string(qubits));
}

const CostContext& context(int qubits) {
  static std::map<int, CostContext> cache;
  auto it = cache.find(qubits);
  if (it == cache.end()) {
    fem::GridSpec spec;
    spec.qubits = qubits;
    it = cache.emplace(qubits, CostContext::make(fem::build_problem(spec, fem::BoundarySpec::defaults())))
             .first;
  }
  return it->second;
}

qsim::Statevector real_state(int qubits, const std::vector<double>& v) {
  std::vector<qsim::Complex> a(v.begin(), v.end());
  qsim::Statevector s(qubits, std::move(a));
  s.normalize();
  return s;
}

CampaignSpec small_campaign(int qubits, StrategyKind strategy, int runs) {
  CampaignSpec spec;
  spec.ansatz = ansatz::default_spec(ansatz::Family::RxRyCnot, qubits);
  spec.strategy = strategy;
  spec.runs = runs;
  spec.optimizer.max_evals = qubits == 6 ? 150 : 260;
  spec.master_seed = 11;
  return spec;
}

}  // namespace

TEST(Cost, ReferenceStateReachesExactEnergy) {
  const auto& ctx = context(6);
  EXPECT_NEAR(ctx.reference_cost, golden(6)["e_ref"].get<double>(), 1e-11);
  const auto m = metrics(reference_state(ctx), ctx);
  EXPECT_NEAR(m.energy_accuracy, 100.0, 1e-10);
  EXPECT_NEAR(m.fidelity, 1.0, 1e-13);
  EXPECT_NEAR(m.r_opt, golden(6)["u_norm"].get<double>(), 1e-10);
}

TEST(Cost, GoldenMetricsOfSimpleStates) {
  for (int n : {6, 9}) {
    const auto& ctx = context(n);
    qsim::Statevector plus(n);
    for (int q = 0; q < n; ++q) qsim::apply(plus, qsim::GateOp::h(q));
    const auto mu = metrics(plus, ctx);
    EXPECT_NEAR(mu.energy_accuracy, golden(n)["uniform_energy_accuracy"].get<double>(), 1e-9);
    EXPECT_NEAR(mu.fidelity, golden(n)["uniform_fidelity"].get<double>(), 1e-12);
    const auto mf = metrics(real_state(n, ctx.f_state), ctx);
    EXPECT_NEAR(mf.energy_accuracy, golden(n)["f_state_energy_accuracy"].get<double>(), 1e-9);
    EXPECT_NEAR(mf.fidelity, golden(n)["f_state_fidelity"].get<double>(), 1e-12);
  }
}

TEST(Cost, MinimumOfTrialEnergyAlongRay) {
  const auto& ctx = context(6);
  qsim::Statevector psi(6, std::vector<qsim::Complex>(64));
  for (std::size_t i = 0; i < 64; ++i) psi[i] = {std::sin(0.3 * i) + 1.1, 0.2 * std::cos(1.7 * i)};
  psi.normalize();
  const double r = r_opt(psi, ctx);
  auto scaled = [&](double s) {
    std::vector<qsim::Complex> x(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto& a : x) a *= s;
    return trial_energy(x, ctx);
  };
  EXPECT_NEAR(scaled(r), cost(psi, ctx), 1e-12 * std::abs(cost(psi, ctx)));
  EXPECT_GT(scaled(1.01 * r), scaled(r));
  EXPECT_GT(scaled(0.99 * r), scaled(r));
  EXPECT_GE(cost(psi, ctx), ctx.reference_cost);
}

TEST(Cost, SignFlipInvariantButNotPhase) {
  const auto& ctx = context(6);
  auto psi = real_state(6, ctx.f_state);
  const double c0 = cost(psi, ctx);
  auto flipped = psi;
  for (auto& a : flipped.amplitudes()) a = -a;
  EXPECT_NEAR(cost(flipped, ctx), c0, 1e-15 * std::abs(c0));
  auto rotated = psi;
  for (auto& a : rotated.amplitudes()) a *= std::polar(1.0, std::numbers::pi / 3);
  EXPECT_NEAR(cost(rotated, ctx), 0.25 * c0, 1e-12 * std::abs(c0));
  qsim::Statevector zero(6, std::vector<qsim::Complex>(64));
  EXPECT_THROW(cost(zero, ctx), NumericalError);
}

TEST(Init, ColdAnglesCoverFullTurn) {
  const auto spec = ansatz::default_spec(ansatz::Family::RxRyCnot, 12);
  const auto p = init_cold(spec, 3);
  ASSERT_EQ(p.size(), 252U);
  double lo = 10.0;
  double hi = -10.0;
  for (double x : p) {
    EXPECT_GE(x, -std::numbers::pi);
    EXPECT_LT(x, std::numbers::pi);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  EXPECT_LT(lo, -2.5);
  EXPECT_GT(hi, 2.5);
  EXPECT_EQ(init_cold(spec, 3), p);
  EXPECT_NE(init_cold(spec, 4), p);
}

TEST(Init, UniformStartsNearPlusState) {
  const auto spec = ansatz::default_spec(ansatz::Family::RxRyCnot, 9);
  const auto p = init_uniform(spec, 5);
  const auto bc = ansatz::build(spec);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (bc.slots[i].block == 0) {
      EXPECT_EQ(p[i], bc.slots[i].kind == qsim::GateKind::RY ? std::numbers::pi / 2 : 0.0);
    } else {
      EXPECT_LE(std::abs(p[i]), 0.01);
    }
  }
  const auto m = metrics(qsim::run(bc.ops, p, 9), context(9));
  EXPECT_NEAR(m.energy_accuracy, golden(9)["uniform_energy_accuracy"].get<double>(), 1.0);
  EXPECT_EQ(parse_strategy("uniform"), StrategyKind::Uniform);
  EXPECT_THROW(parse_strategy("warm"), ConfigError);
}

TEST(Remesh, PermutationForSixQubits) {
  EXPECT_EQ(remesh_permutation(6), (std::vector<int>{0, 3, 6, 1, 2, 4, 5, 7, 8}));
  EXPECT_THROW(remesh_permutation(7), ConfigError);
}

TEST(Remesh, SwapsRealizePermutation) {
  for (int nc : {3, 6, 9, 12}) {
    const auto dest = remesh_permutation(nc);
    std::vector<int> wire(dest.size());
    for (std::size_t i = 0; i < wire.size(); ++i) wire[i] = static_cast<int>(i);
    for (const auto& op : remesh_swaps(nc)) {
      std::swap(wire[static_cast<std::size_t>(op.targets[0])], wire[static_cast<std::size_t>(op.targets[1])]);
    }
    for (std::size_t w = 0; w < wire.size(); ++w) {
      EXPECT_EQ(dest[static_cast<std::size_t>(wire[w])], static_cast<int>(w));
    }
  }
}

TEST(Remesh, EmbeddingEqualsProlongation) {
  const auto spec = ansatz::default_spec(ansatz::Family::RxRyCnot, 6);
  const auto coarse = bind_parameters(ansatz::build(spec), init_cold(spec, 21));
  const auto cs = coarse.state();
  const std::vector<qsim::Complex> amps(cs.amplitudes().begin(), cs.amplitudes().end());
  const auto expected = oracle::dense_prolong(amps, 4);
  const auto fine = embed_coarse(coarse).state();
  double e = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) e = std::max(e, std::abs(fine[i] - expected[i]));
  EXPECT_LE(e, 1e-14);
}

TEST(Cascade, ZeroBodyKeepsWarmStart) {
  const auto spec6 = ansatz::default_spec(ansatz::Family::RxRyCnot, 6);
  const auto coarse = bind_parameters(ansatz::build(spec6), init_cold(spec6, 2));
  const auto cc = build_cascade_circuit(coarse, ansatz::default_spec(ansatz::Family::RxRyCnot, 9));
  EXPECT_EQ(cc.param_count(), 108);
  const std::vector<double> zero(108, 0.0);
  EXPECT_LE(qsim::max_abs_diff(cc.run(zero), cc.warm_start.state()), 1e-13);
  const auto bound = cc.bind(zero);
  EXPECT_LE(qsim::max_abs_diff(bound.state(), cc.warm_start.state()), 1e-13);
  EXPECT_THROW(build_cascade_circuit(coarse, ansatz::default_spec(ansatz::Family::RxRyCnot, 12)),
               ConfigError);
}

TEST(Cascade, ExactCoarseSolutionWarmStart) {
  for (int n : {9, 12}) {
    const auto& coarse = context(n - 3).u_ref();
    const auto warm = real_state(n, fem::prolong(coarse));
    const auto m = metrics(warm, context(n));
    EXPECT_NEAR(m.energy_accuracy, golden(n)["warm_start_energy_accuracy"].get<double>(), 1e-8);
    EXPECT_NEAR(m.fidelity, golden(n)["warm_start_fidelity"].get<double>(), 1e-11);
    EXPECT_LT(m.energy_accuracy, 100.0);
  }
}

TEST(Campaign, DeterministicAcrossJobCounts) {
  auto spec = small_campaign(6, StrategyKind::Cold, 4);
  const auto a = run_campaign(context(6), spec);
  spec.jobs = 3;
  const auto b = run_campaign(context(6), spec);
  ASSERT_EQ(a.runs.size(), 4U);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_TRUE(a.runs[i].ok);
    EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
    EXPECT_EQ(a.runs[i].result.best_params, b.runs[i].result.best_params);
    EXPECT_EQ(a.runs[i].result.trace, b.runs[i].result.trace);
    EXPECT_EQ(a.runs[i].result.evals_used, 150);
  }
  EXPECT_NE(a.runs[0].seed, a.runs[1].seed);
  EXPECT_EQ(a.summary.succeeded, 4);
  EXPECT_EQ(a.summary.mean_energy, b.summary.mean_energy);
  EXPECT_GE(a.summary.max_energy, a.summary.mean_energy);
  EXPECT_LE(a.summary.min_energy, a.summary.mean_energy);
}

TEST(Campaign, BestStateReproducesMetrics) {
  const auto r = run_campaign(context(6), small_campaign(6, StrategyKind::Uniform, 1));
  const auto& rec = r.runs[0];
  const auto m = metrics(final_state(rec), context(6));
  EXPECT_NEAR(m.energy_accuracy, rec.metrics.energy_accuracy, 1e-9);
  EXPECT_NEAR(m.cost_value, rec.result.best_cost, 1e-12);
}

TEST(Campaign, CascadeStartsFromWarmStart) {
  const auto coarse = run_campaign(context(6), small_campaign(6, StrategyKind::Cold, 2));
  auto spec = small_campaign(9, StrategyKind::Cascade, 1);
  spec.source = select_cascade_source(coarse.runs, 0.0);
  const auto fine = run_campaign(context(9), spec);
  const auto& rec = fine.runs[0];
  ASSERT_TRUE(rec.ok) << rec.error;
  const auto warm = embed_coarse(preparation(*spec.source)).state();
  EXPECT_NEAR(rec.result.trace.front().cost, cost(warm, context(9)), 1e-12);
  EXPECT_LE(rec.result.best_cost, rec.result.trace.front().cost);
  EXPECT_NEAR(metrics(final_state(rec), context(9)).energy_accuracy, rec.metrics.energy_accuracy,
              1e-9);
  EXPECT_EQ(fine.summary.source_qubits, 6);
}

TEST(Campaign, Validation) {
  auto spec = small_campaign(6, StrategyKind::Cascade, 1);
  EXPECT_THROW(run_campaign(context(6), spec), ConfigError);
  spec = small_campaign(9, StrategyKind::Cold, 1);
  EXPECT_THROW(run_campaign(context(6), spec), ConfigError);
  spec = small_campaign(6, StrategyKind::Cold, 0);
  EXPECT_THROW(run_campaign(context(6), spec), ConfigError);
}

TEST(Campaign, SourceSelectionGate) {
  std::vector<RunRecord> runs(3);
  runs[0].metrics.energy_accuracy = 80.0;
  runs[1].metrics.energy_accuracy = 90.0;
  runs[2].metrics.energy_accuracy = 95.0;
  runs[2].ok = false;
  runs[1].run_index = 1;
  EXPECT_EQ(select_cascade_source(runs, 85.0)->run_index, 1);
  try {
    select_cascade_source(runs, 92.0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("90.00%"), std::string::npos);
  }
  runs[0].ok = runs[1].ok = false;
  EXPECT_THROW(select_cascade_source(runs, 0.0), ConfigError);
}

TEST(Campaign, TableLayout) {
  CampaignSummary cold;
  cold.qubits = 6;
  cold.params = 36;
  cold.family = ansatz::Family::RxRyCnot;
  cold.mean_energy = 99.4321;
  CampaignSummary casc = cold;
  casc.qubits = 9;
  casc.source_qubits = 6;
  const auto t = format_table({cold, casc});
  for (const char* h : {"Qubits", "Params", "Ansatz", "Mean Energy (%)", "Iterations", "Max", "Min"}) {
    EXPECT_NE(t.find(h), std::string::npos) << h;
  }
  EXPECT_NE(t.find("6 to 9"), std::string::npos);
  EXPECT_NE(t.find("Rx-Ry-Cnot"), std::string::npos);
}
