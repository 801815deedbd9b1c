#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvqa::opt {

enum class Method { Newuoa, NelderMead };
enum class StopReason { Tolerance, BudgetEvals, BudgetTime, CostError };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);
std::string_view stop_reason_name(StopReason r);
StopReason parse_stop_reason(std::string_view name);

struct OptimizerConfig {
  Method method = Method::Newuoa;
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  int max_evals = 5000;
  double wall_clock_budget = 0.0;  // seconds; 0 disables the clock
  double initial_trust_radius = 0.5;
  double final_trust_radius = 1e-8;
  std::uint64_t seed = 0;

  /// Throws ConfigError on non-positive tolerances/radii or max_evals < 2*dim + 1.
  void validate(std::size_t dim) const;
};

struct TracePoint {
  int eval;     // 1-based evaluation index
  double cost;  // best cost so far, recorded whenever it improves
  bool operator==(const TracePoint&) const = default;
};

struct OptimResult {
  std::vector<double> best_params;
  double best_cost = 0.0;
  int evals_used = 0;
  StopReason stop_reason = StopReason::Tolerance;
  std::string message;
  std::vector<TracePoint> trace;
};

using CostFunction = std::function<double(std::span<const double>)>;

/// Derivative-free minimization. The cost is called sequentially. A NaN/inf
/// cost (or an exception from it) ends the run with StopReason::CostError,
/// keeping the best point and trace found so far.
OptimResult minimize(const CostFunction& cost, std::span<const double> x0,
                     const OptimizerConfig& cfg);

OptimResult minimize_newuoa(const CostFunction& cost, std::span<const double> x0,
                            const OptimizerConfig& cfg);
OptimResult minimize_nelder_mead(const CostFunction& cost, std::span<const double> x0,
                                 const OptimizerConfig& cfg);

}  // namespace cvqa::opt
