#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cascade_vqa/optimizer.hpp"

namespace cvqa::opt::detail {

struct Stop {
  StopReason reason;
  std::string message;
};

/// Counts evaluations, enforces budgets, keeps the best point and the improvement trace.
class Evaluator {
 public:
  Evaluator(const CostFunction& cost, const OptimizerConfig& cfg)
      : cost_(cost), cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

  /// Throws Stop when a budget is exhausted or the cost is not finite.
  double operator()(std::span<const double> x) {
    if (evals_ >= cfg_.max_evals) throw Stop{StopReason::BudgetEvals, "evaluation budget exhausted"};
    if (cfg_.wall_clock_budget > 0.0 && elapsed() >= cfg_.wall_clock_budget) {
      throw Stop{StopReason::BudgetTime, "wall-clock budget exhausted"};
    }
    ++evals_;
    double f;
    try {
      f = cost_(x);
    } catch (const std::exception& e) {
      throw Stop{StopReason::CostError, std::string("cost evaluation failed: ") + e.what()};
    }
    if (!std::isfinite(f)) {
      throw Stop{StopReason::CostError,
                 "non-finite cost at evaluation " + std::to_string(evals_)};
    }
    if (best_x_.empty() || f < best_f_) {
      best_f_ = f;
      best_x_.assign(x.begin(), x.end());
      trace_.push_back({evals_, f});
    }
    return f;
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  int evals() const { return evals_; }
  double best() const { return best_f_; }

  OptimResult finish(StopReason reason, std::string message, std::span<const double> x0) {
    OptimResult r;
    r.best_params = best_x_.empty() ? std::vector<double>(x0.begin(), x0.end()) : best_x_;
    r.best_cost = best_x_.empty() ? std::numeric_limits<double>::quiet_NaN() : best_f_;
    r.evals_used = evals_;
    r.stop_reason = reason;
    r.message = std::move(message);
    r.trace = std::move(trace_);
    return r;
  }

 private:
  const CostFunction& cost_;
  const OptimizerConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  int evals_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
  std::vector<TracePoint> trace_;
};

}  // namespace cvqa::opt::detail
