#include "cascade_vqa/optimizer.hpp"

#include <cmath>

#include "cascade_vqa/errors.hpp"

namespace cvqa::opt {

std::string_view method_name(Method m) {
  return m == Method::Newuoa ? "newuoa" : "nelder-mead";
}

Method parse_method(std::string_view name) {
  if (name == "newuoa") return Method::Newuoa;
  if (name == "nelder-mead") return Method::NelderMead;
  throw ConfigError("optimizer method must be 'newuoa' or 'nelder-mead'");
}

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::BudgetEvals: return "budget_evals";
    case StopReason::BudgetTime: return "budget_time";
    case StopReason::CostError: return "cost_error";
  }
  return "?";
}

StopReason parse_stop_reason(std::string_view name) {
  for (StopReason r : {StopReason::Tolerance, StopReason::BudgetEvals, StopReason::BudgetTime,
                       StopReason::CostError}) {
    if (stop_reason_name(r) == name) return r;
  }
  throw ConfigError("unknown stop reason '" + std::string(name) + "'");
}

void OptimizerConfig::validate(std::size_t dim) const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (!(initial_trust_radius > 0.0) || !(final_trust_radius > 0.0) ||
      final_trust_radius > initial_trust_radius) {
    throw ConfigError("trust radii must satisfy 0 < final_trust_radius <= initial_trust_radius");
  }
  if (wall_clock_budget < 0.0) throw ConfigError("wall_clock_budget must be non-negative");
  if (max_evals < static_cast<long>(2 * dim + 1)) {
    throw ConfigError("max_evals must be at least 2*dim+1 = " + std::to_string(2 * dim + 1));
  }
}

OptimResult minimize(const CostFunction& cost, std::span<const double> x0,
                     const OptimizerConfig& cfg) {
  return cfg.method == Method::Newuoa ? minimize_newuoa(cost, x0, cfg)
                                      : minimize_nelder_mead(cost, x0, cfg);
}

}  // namespace cvqa::opt
