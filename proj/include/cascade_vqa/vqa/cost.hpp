#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cascade_vqa/fem_grid.hpp"
#include "cascade_vqa/qsim.hpp"

namespace cvqa::vqa {

/// Everything needed to score a trial state against one discretized problem.
struct CostContext {
  std::shared_ptr<const fem::GridSystem> system;
  std::vector<double> f_state;  // f / |f|
  double norm_f = 0.0;
  double k_norm = 0.0;          // infinity norm of K
  double reference_cost = 0.0;  // cost at u_ref / |u_ref|
  double u_norm = 0.0;

  /// Requires a solved system (u_ref present).
  static CostContext make(std::shared_ptr<const fem::GridSystem> system);
  static CostContext make(fem::GridSystem system);

  int qubits() const { return system->spec.qubits; }
  const fem::GridSpec& spec() const { return system->spec; }
  const std::vector<double>& u_ref() const { return system->u_ref; }
};

/// C(psi) = -(1/8) (<psi|f> + <f|psi>)^2 / <psi|K|psi>, with the unnormalized f.
/// Throws NumericalError when <psi|K|psi> <= 1e-14 |K|.
double cost(std::span<const qsim::Complex> psi, const CostContext& ctx);
double cost(const qsim::Statevector& psi, const CostContext& ctx);

/// Norm minimizing the trial energy along psi: (<psi|f> + <f|psi>) / (2 <psi|K|psi>).
double r_opt(const qsim::Statevector& psi, const CostContext& ctx);

/// E_c(x) = 1/2 <x|K|x> - (<x|f> + <f|x>) / 2 for an unnormalized trial vector.
double trial_energy(std::span<const qsim::Complex> x, const CostContext& ctx);

struct Metrics {
  double energy_accuracy = 0.0;  // percent, 100 at the exact solution
  double fidelity = 0.0;         // |<psi|u_ref>|^2 / |u_ref|^2
  double r_opt = 0.0;
  double cost_value = 0.0;
};

Metrics metrics(const qsim::Statevector& psi, const CostContext& ctx);

/// u_ref / |u_ref| as a statevector.
qsim::Statevector reference_state(const CostContext& ctx);

}  // namespace cvqa::vqa
