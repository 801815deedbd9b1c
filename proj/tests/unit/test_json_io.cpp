#include <gtest/gtest.h>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/json_io.hpp"

using namespace cvqa;
using namespace cvqa::json_io;

namespace {

std::string config_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const vqa::CostContext& context() {
  static const auto ctx = vqa::CostContext::make(fem::build_problem({}, fem::BoundarySpec::defaults()));
  return ctx;
}

vqa::CampaignResult tiny_campaign(vqa::StrategyKind strategy, int qubits,
                                  std::shared_ptr<const vqa::RunRecord> source = nullptr) {
  vqa::CampaignSpec spec;
  spec.ansatz = ansatz::default_spec(ansatz::Family::RyCnot, qubits);
  spec.strategy = strategy;
  spec.source = std::move(source);
  spec.runs = 2;
  spec.optimizer.max_evals = 2 * spec.ansatz.param_count() + 20;
  spec.master_seed = 3;
  if (qubits == 6) return vqa::run_campaign(context(), spec);
  fem::GridSpec g;
  g.qubits = qubits;
  static const auto fine = vqa::CostContext::make(fem::build_problem(g, fem::BoundarySpec::defaults()));
  return vqa::run_campaign(fine, spec);
}

void expect_same_record(const vqa::RunRecord& a, const vqa::RunRecord& b) {
  EXPECT_EQ(a.run_index, b.run_index);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.ansatz, b.ansatz);
  EXPECT_EQ(a.strategy, b.strategy);
  EXPECT_EQ(a.grid.qubits, b.grid.qubits);
  EXPECT_TRUE(a.bc == b.bc);
  EXPECT_EQ(a.ok, b.ok);
  EXPECT_EQ(a.result.best_params, b.result.best_params);
  EXPECT_EQ(a.result.best_cost, b.result.best_cost);
  EXPECT_EQ(a.result.evals_used, b.result.evals_used);
  EXPECT_EQ(a.result.stop_reason, b.result.stop_reason);
  EXPECT_EQ(a.metrics.energy_accuracy, b.metrics.energy_accuracy);
  EXPECT_EQ(a.metrics.fidelity, b.metrics.fidelity);
}

}  // namespace

TEST(GridJson, RoundTrip) {
  fem::GridSpec spec;
  spec.qubits = 9;
  spec.conductivity = 2.5;
  fem::BoundarySpec bc;
  bc.dirichlet = {{{fem::Axis::X, true}, 3.0}};
  bc.neumann = {{{fem::Axis::Z, false}, fem::PatchRegion::Half, -0.5}};
  const auto [s2, bc2] = grid_from_json(grid_to_json(spec, bc));
  EXPECT_EQ(s2.qubits, 9);
  EXPECT_EQ(s2.conductivity, 2.5);
  EXPECT_TRUE(bc2 == bc);
}

TEST(GridJson, MissingListsUseDefaults) {
  const auto [spec, bc] = grid_from_json(json{{"qubits", 6}});
  EXPECT_TRUE(bc == fem::BoundarySpec::defaults());
  EXPECT_EQ(spec.conductivity, 1.0);
}

TEST(GridJson, ErrorsCarryFieldPath) {
  EXPECT_EQ(config_error([] { grid_from_json(json{{"qubits", 7}}); }),
            "grid.qubits: qubits must be divisible by 3");
  EXPECT_EQ(config_error([] { grid_from_json(json::object()); }), "grid.qubits: missing required field");
  EXPECT_EQ(config_error([] { grid_from_json(json{{"qubits", "six"}}); }), "grid.qubits: wrong type");
  EXPECT_EQ(config_error([] { grid_from_json(json{{"qubits", 6}, {"conductivity", -1.0}}); })
                .rfind("grid.conductivity: ", 0),
            0U);
  const json bad_face{{"qubits", 6}, {"dirichlet", {{{"face", "w0"}, {"value", 1.0}}}}};
  EXPECT_EQ(config_error([&] { grid_from_json(bad_face); }).rfind("grid.dirichlet[0].face: ", 0), 0U);
  const json bad_region{{"qubits", 6},
                        {"neumann", {{{"face", "y0"}, {"region", "third"}, {"flux", 1.0}}}}};
  EXPECT_EQ(config_error([&] { grid_from_json(bad_region); }),
            "grid.neumann[0].region: region must be 'full' or 'half'");
}

TEST(AnsatzJson, DepthSources) {
  const auto a = ansatz_from_json(json{{"family", "RxRyCnot"}, {"reps", 4}, {"final_layer", "single"}}, 6);
  EXPECT_EQ(a.reps, 4);
  EXPECT_EQ(a.final_layer, ansatz::FinalLayer::Single);
  EXPECT_EQ(ansatz_from_json(json{{"family", "Rx-Ry-Cnot"}, {"params", 330}}, 15).param_count(), 330);
  EXPECT_EQ(ansatz_from_json(json{{"family", "RyToffoli"}}, 12).param_count(), 252);
  EXPECT_EQ(ansatz_from_json(to_json(a), 6), a);
  EXPECT_EQ(config_error([] { ansatz_from_json(json{{"reps", 2}}, 6); }),
            "ansatz.family: missing required field");
  EXPECT_EQ(config_error([] { ansatz_from_json(json{{"family", "Rz"}}, 6); }).rfind("ansatz.family: ", 0),
            0U);
  EXPECT_EQ(config_error([] { ansatz_from_json(json{{"family", "Ry"}, {"qubits", 9}}, 6); })
                .rfind("ansatz.qubits: ", 0),
            0U);
}

TEST(OptimizerJson, RoundTrip) {
  opt::OptimizerConfig cfg;
  cfg.method = opt::Method::NelderMead;
  cfg.max_evals = 1234;
  cfg.wall_clock_budget = 12.5;
  cfg.initial_trust_radius = 0.25;
  const auto back = optimizer_from_json(to_json(cfg));
  EXPECT_EQ(back.method, cfg.method);
  EXPECT_EQ(back.max_evals, 1234);
  EXPECT_EQ(back.wall_clock_budget, 12.5);
  EXPECT_EQ(back.initial_trust_radius, 0.25);
  EXPECT_EQ(back.abs_tol, cfg.abs_tol);
  EXPECT_EQ(config_error([] { optimizer_from_json(json{{"method", "bfgs"}}); }).rfind("optimizer.method: ", 0),
            0U);
}

TEST(RunRecordJson, ColdRoundTrip) {
  const auto r = tiny_campaign(vqa::StrategyKind::Cold, 6);
  const auto& rec = r.runs[1];
  const json j = to_json(rec);
  EXPECT_FALSE(j.contains("wall_time"));
  const auto back = run_record_from_json(j);
  expect_same_record(rec, back);
  EXPECT_EQ(back.result.trace, rec.result.trace);
  EXPECT_TRUE(run_record_from_json(to_json(rec, false)).result.trace.empty());
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(RunRecordJson, CascadeKeepsSource) {
  const auto coarse = tiny_campaign(vqa::StrategyKind::Cold, 6);
  const auto source = vqa::select_cascade_source(coarse.runs, 0.0);
  const auto fine = tiny_campaign(vqa::StrategyKind::Cascade, 9, source);
  const json j = to_json(fine.runs[0]);
  EXPECT_FALSE(j["source"]["result"].contains("trace"));
  const auto back = run_record_from_json(j);
  ASSERT_TRUE(back.source);
  expect_same_record(*source, *back.source);
  EXPECT_LE(qsim::max_abs_diff(vqa::final_state(back), vqa::final_state(fine.runs[0])), 0.0);

  json broken = j;
  broken.erase("source");
  EXPECT_THROW(run_record_from_json(broken), ConfigError);
  broken = j;
  broken["result"]["best_params"].erase(0);
  EXPECT_THROW(run_record_from_json(broken), ConfigError);
}

TEST(ShotJson, RoundTripAndValidation) {
  const sampling::ShotResult s{3, 10, {{1, 4}, {6, 6}}};
  const json j = to_json(s);
  EXPECT_EQ(j["counts"]["6"], 6);
  EXPECT_EQ(shot_result_from_json(j), s);
  json bad = j;
  bad["shots"] = 11;
  EXPECT_THROW(shot_result_from_json(bad), ConfigError);
}

TEST(SummaryJson, Fields) {
  vqa::CampaignSummary s;
  s.qubits = 9;
  s.params = 108;
  s.source_qubits = 6;
  s.strategy = vqa::StrategyKind::Cascade;
  const json j = to_json(s);
  EXPECT_EQ(j["qubits"], 9);
  EXPECT_EQ(j["strategy"], "cascade");
  EXPECT_EQ(j["source_qubits"], 6);
  EXPECT_TRUE(j.contains("mean_energy"));
}
