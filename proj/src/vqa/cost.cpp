#include "cascade_vqa/vqa/cost.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cascade_vqa/errors.hpp"

namespace cvqa::vqa {

namespace {

struct Overlaps {
  double re_psi_f;  // Re <psi|f>, unnormalized f
  double psi_k_psi;
};

Overlaps overlaps(std::span<const qsim::Complex> psi, const CostContext& ctx) {
  if (psi.size() != ctx.f_state.size()) {
    throw std::invalid_argument("state dimension does not match the grid");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) dot += psi[i].real() * ctx.f_state[i];
  const double denom = ctx.system->stiffness.quadratic_form(psi);
  if (!(denom > 1e-14 * ctx.k_norm)) {
    std::ostringstream msg;
    msg << "degenerate cost denominator <psi|K|psi> = " << denom;
    throw NumericalError(msg.str());
  }
  return {ctx.norm_f * dot, denom};
}

}  // namespace

CostContext CostContext::make(std::shared_ptr<const fem::GridSystem> system) {
  if (!system || system->u_ref.size() != system->load.size()) {
    throw std::invalid_argument("CostContext needs a solved GridSystem");
  }
  CostContext ctx;
  ctx.system = std::move(system);
  const auto& f = ctx.system->load;
  ctx.norm_f = std::sqrt(std::inner_product(f.begin(), f.end(), f.begin(), 0.0));
  if (ctx.norm_f == 0.0) throw NumericalError("load vector is zero; cost is identically zero");
  ctx.f_state.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) ctx.f_state[i] = f[i] / ctx.norm_f;
  ctx.k_norm = ctx.system->stiffness.norm_inf();
  const auto& u = ctx.system->u_ref;
  ctx.u_norm = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
  ctx.reference_cost = cost(reference_state(ctx), ctx);
  return ctx;
}

CostContext CostContext::make(fem::GridSystem system) {
  return make(std::make_shared<const fem::GridSystem>(std::move(system)));
}

double cost(std::span<const qsim::Complex> psi, const CostContext& ctx) {
  const auto o = overlaps(psi, ctx);
  // (<psi|f> + <f|psi>)^2 = 4 Re<psi|f>^2
  return -0.5 * o.re_psi_f * o.re_psi_f / o.psi_k_psi;
}

double cost(const qsim::Statevector& psi, const CostContext& ctx) {
  return cost(psi.amplitudes(), ctx);
}

double r_opt(const qsim::Statevector& psi, const CostContext& ctx) {
  const auto o = overlaps(psi.amplitudes(), ctx);
  return o.re_psi_f / o.psi_k_psi;
}

double trial_energy(std::span<const qsim::Complex> x, const CostContext& ctx) {
  const double xkx = ctx.system->stiffness.quadratic_form(x);
  double re_xf = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) re_xf += x[i].real() * ctx.system->load[i];
  return 0.5 * xkx - re_xf;
}

qsim::Statevector reference_state(const CostContext& ctx) {
  const auto& u = ctx.u_ref();
  std::vector<qsim::Complex> amps(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) amps[i] = u[i] / ctx.u_norm;
  return qsim::Statevector(ctx.qubits(), std::move(amps));
}

Metrics metrics(const qsim::Statevector& psi, const CostContext& ctx) {
  Metrics m;
  m.cost_value = cost(psi, ctx);
  m.r_opt = r_opt(psi, ctx);
  m.energy_accuracy = 100.0 * m.cost_value / ctx.reference_cost;
  qsim::Complex overlap = 0.0;
  const auto& u = ctx.u_ref();
  for (std::size_t i = 0; i < u.size(); ++i) overlap += std::conj(psi[i]) * u[i];
  const double psi_norm2 = psi.norm() * psi.norm();
  m.fidelity = std::norm(overlap) / (ctx.u_norm * ctx.u_norm * psi_norm2);
  return m;
}

}  // namespace cvqa::vqa
