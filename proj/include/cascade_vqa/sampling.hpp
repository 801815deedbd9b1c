#pragma once

// Finite-shot measurement in the computational basis and a magnitude-only
// reconstruction of the sampled state.

#include <cstdint>
#include <map>

#include "cascade_vqa/qsim.hpp"
#include "cascade_vqa/vqa/cost.hpp"

namespace cvqa::sampling {

struct ShotResult {
  int qubits = 0;
  std::uint64_t shots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;  // basis index -> hits, zero entries omitted

  bool operator==(const ShotResult&) const = default;
};

/// Multinomial draw of `shots` outcomes from |psi_i|^2 (psi is normalized internally).
/// Throws ConfigError for shots == 0.
ShotResult sample(const qsim::Statevector& psi, std::uint64_t shots, std::uint64_t seed);

/// amplitude_i = sqrt(counts_i / shots) * phase(phase_ref_i), renormalized.
/// Where phase_ref_i is zero the amplitude is taken real and positive.
qsim::Statevector reconstruct(const ShotResult& shots, const qsim::Statevector& phase_ref);

/// Sampled state scored against the classical solution and against the state it was drawn from.
/// All four values are percentages.
struct SampledMetrics {
  double energy_vs_solution = 0.0;
  double fidelity_vs_solution = 0.0;
  double energy_vs_simulation = 0.0;  // 100 * C(sampled) / C(simulated)
  double fidelity_vs_simulation = 0.0;
};

SampledMetrics compare(const qsim::Statevector& sampled, const qsim::Statevector& simulated,
                       const vqa::CostContext& ctx);

}  // namespace cvqa::sampling
