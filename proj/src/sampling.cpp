#include "cascade_vqa/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/rng.hpp"

namespace cvqa::sampling {

ShotResult sample(const qsim::Statevector& psi, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ConfigError("shots must be positive");
  const auto amps = psi.amplitudes();
  std::vector<double> cumulative(amps.size());
  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    total += std::norm(amps[i]);
    cumulative[i] = total;
  }
  if (!(total > 0.0)) throw NumericalError("cannot sample from a zero state");

  ShotResult out;
  out.qubits = psi.qubits();
  out.shots = shots;
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // Rounding can leave u at the very top; the last nonzero bucket takes it.
    if (it == cumulative.end()) it = std::lower_bound(cumulative.begin(), cumulative.end(), total);
    ++out.counts[static_cast<std::uint64_t>(it - cumulative.begin())];
  }
  return out;
}

qsim::Statevector reconstruct(const ShotResult& shots, const qsim::Statevector& phase_ref) {
  if (shots.qubits != phase_ref.qubits()) {
    throw ConfigError("shot result has " + std::to_string(shots.qubits) +
                      " qubits but the phase reference has " +
                      std::to_string(phase_ref.qubits()));
  }
  std::uint64_t hits = 0;
  for (const auto& [index, c] : shots.counts) {
    if (index >= phase_ref.size()) throw ConfigError("shot index out of range");
    hits += c;
  }
  if (hits == 0) throw ConfigError("shot result has no counts");

  std::vector<qsim::Complex> amps(phase_ref.size(), 0.0);
  const double denom = static_cast<double>(shots.shots > 0 ? shots.shots : hits);
  for (const auto& [index, c] : shots.counts) {
    const double mag = std::sqrt(static_cast<double>(c) / denom);
    const qsim::Complex ref = phase_ref[index];
    const double r = std::abs(ref);
    amps[index] = r > 0.0 ? mag * (ref / r) : qsim::Complex(mag, 0.0);
  }
  qsim::Statevector out(phase_ref.qubits(), std::move(amps));
  out.normalize();
  return out;
}

SampledMetrics compare(const qsim::Statevector& sampled, const qsim::Statevector& simulated,
                       const vqa::CostContext& ctx) {
  const vqa::Metrics m = vqa::metrics(sampled, ctx);
  SampledMetrics out;
  out.energy_vs_solution = m.energy_accuracy;
  out.fidelity_vs_solution = 100.0 * m.fidelity;
  out.energy_vs_simulation = 100.0 * m.cost_value / vqa::cost(simulated, ctx);
  out.fidelity_vs_simulation = 100.0 * qsim::fidelity(sampled, simulated);
  return out;
}

}  // namespace cvqa::sampling
