#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/optimizer.hpp"
#include "newuoa_kkt.hpp"

using namespace cvqa::opt;

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.1 * i) * (x[i] - 0.1 * i);
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
  }
  return s;
}

Eigen::MatrixXd random_points(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd x(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = u(rng);
  }
  return x;
}

}  // namespace

TEST(Kkt, RankTwoUpdateMatchesDirectInverse) {
  const Eigen::Index n = 4;
  const Eigen::Index m = 2 * n + 1;
  Eigen::MatrixXd xpt = random_points(m, n, 5);
  Eigen::MatrixXd h = detail::kkt_matrix(xpt).inverse();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int step = 0; step < 20; ++step) {
    Eigen::VectorXd s(n);
    for (Eigen::Index j = 0; j < n; ++j) s(j) = u(rng);
    const Eigen::Index t = step % m;
    const Eigen::VectorXd w = detail::kkt_column(xpt, s);
    const Eigen::VectorXd hw = h * w;
    ASSERT_TRUE(detail::powell_update(h, t, hw, detail::kkt_beta(s, w, hw)));
    xpt.row(t) = s.transpose();
    const Eigen::MatrixXd direct = detail::kkt_matrix(xpt).inverse();
    EXPECT_LE((h - direct).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff(), 1e-8) << step;
  }
}

TEST(Kkt, ColumnMatchesMatrix) {
  const Eigen::MatrixXd xpt = random_points(7, 3, 2);
  const Eigen::MatrixXd w = detail::kkt_matrix(xpt);
  const Eigen::VectorXd col = detail::kkt_column(xpt, xpt.row(4).transpose());
  EXPECT_LE((col - w.col(4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Newuoa, MinimizesQuadratic) {
  const std::vector<double> x0(6, 1.0);
  OptimizerConfig cfg;
  cfg.max_evals = 2000;
  const auto r = minimize_newuoa(sphere, x0, cfg);
  EXPECT_LE(r.best_cost, 1e-10);
  for (std::size_t i = 0; i < x0.size(); ++i) EXPECT_NEAR(r.best_params[i], 0.1 * i, 1e-5);
  EXPECT_EQ(r.stop_reason, StopReason::Tolerance);
  EXPECT_LE(r.evals_used, cfg.max_evals);
}

TEST(Newuoa, MinimizesRosenbrock) {
  const std::vector<double> x0{-1.2, 1.0};
  OptimizerConfig cfg;
  cfg.max_evals = 3000;
  const auto r = minimize_newuoa(rosenbrock, x0, cfg);
  EXPECT_LE(r.best_cost, 1e-8);
  EXPECT_NEAR(r.best_params[0], 1.0, 1e-3);
  EXPECT_NEAR(r.best_params[1], 1.0, 1e-3);
}

TEST(Newuoa, TraceIsMonotoneAndEndsAtBest) {
  const std::vector<double> x0(4, 0.7);
  OptimizerConfig cfg;
  cfg.max_evals = 500;
  const auto r = minimize_newuoa(rosenbrock, x0, cfg);
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace.front().eval, 1);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_GT(r.trace[i].eval, r.trace[i - 1].eval);
    EXPECT_LT(r.trace[i].cost, r.trace[i - 1].cost);
  }
  EXPECT_DOUBLE_EQ(r.trace.back().cost, r.best_cost);
  EXPECT_DOUBLE_EQ(rosenbrock(r.best_params), r.best_cost);
}

TEST(Newuoa, StopsOnEvaluationBudget) {
  const std::vector<double> x0(8, -0.5);
  OptimizerConfig cfg;
  cfg.max_evals = 40;
  int calls = 0;
  const auto r = minimize_newuoa(
      [&](std::span<const double> x) {
        ++calls;
        return rosenbrock(x);
      },
      x0, cfg);
  EXPECT_EQ(r.stop_reason, StopReason::BudgetEvals);
  EXPECT_EQ(r.evals_used, 40);
  EXPECT_EQ(calls, 40);
}

TEST(Newuoa, NanCostEndsWithCostError) {
  const std::vector<double> x0(3, 0.0);
  OptimizerConfig cfg;
  int calls = 0;
  const auto r = minimize_newuoa(
      [&](std::span<const double> x) {
        return ++calls > 5 ? std::numeric_limits<double>::quiet_NaN() : sphere(x);
      },
      x0, cfg);
  EXPECT_EQ(r.stop_reason, StopReason::CostError);
  EXPECT_EQ(r.evals_used, 6);
  EXPECT_TRUE(std::isfinite(r.best_cost));
}

TEST(Newuoa, ThrowingCostEndsWithCostError) {
  const std::vector<double> x0(2, 0.0);
  const auto r = minimize(
      [](std::span<const double>) -> double { throw std::runtime_error("boom"); }, x0, {});
  EXPECT_EQ(r.stop_reason, StopReason::CostError);
  EXPECT_NE(r.message.find("boom"), std::string::npos);
}

TEST(NelderMead, MinimizesQuadratic) {
  const std::vector<double> x0(3, 1.0);
  OptimizerConfig cfg;
  cfg.method = Method::NelderMead;
  cfg.max_evals = 4000;
  const auto r = minimize(sphere, x0, cfg);
  EXPECT_LE(r.best_cost, 1e-8);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate(10));
  cfg.max_evals = 20;
  EXPECT_THROW(cfg.validate(10), cvqa::ConfigError);
  cfg = {};
  cfg.initial_trust_radius = 0.0;
  EXPECT_THROW(cfg.validate(2), cvqa::ConfigError);
  cfg = {};
  cfg.final_trust_radius = 1.0;
  EXPECT_THROW(cfg.validate(2), cvqa::ConfigError);
}

TEST(OptimizerConfig, NamesRoundTrip) {
  for (auto m : {Method::Newuoa, Method::NelderMead}) EXPECT_EQ(parse_method(method_name(m)), m);
  for (auto s : {StopReason::Tolerance, StopReason::BudgetEvals, StopReason::BudgetTime,
                 StopReason::CostError}) {
    EXPECT_EQ(parse_stop_reason(stop_reason_name(s)), s);
  }
  EXPECT_THROW(parse_method("bfgs"), cvqa::ConfigError);
}
