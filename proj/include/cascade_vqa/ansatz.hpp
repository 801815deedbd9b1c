#pragma once

// NLocal-style ansatz families: alternating rotation blocks and entangling
// chains, closing with a rotation-only block.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cascade_vqa/qsim.hpp"

namespace cvqa::ansatz {

enum class Family { Ry, RyCnot, RyToffoli, Ry1Cnot, RxRyCnot, RxRyToffoli };

inline constexpr std::array<Family, 6> kAllFamilies{Family::Ry,       Family::RyCnot,
                                                    Family::RyToffoli, Family::Ry1Cnot,
                                                    Family::RxRyCnot, Family::RxRyToffoli};

/// Rotation content of the last block for RX-then-RY families: both layers
/// (Double) or RY only (Single). Ry-only families ignore it.
enum class FinalLayer { Single, Double };

/// Canonical identifier, e.g. "RxRyCnot".
std::string_view family_name(Family family);
/// Table label, e.g. "Rx-Ry-Cnot".
std::string_view family_label(Family family);
/// Accepts canonical names and dashed labels, case-insensitively.
Family parse_family(std::string_view name);

std::string_view final_layer_name(FinalLayer layer);
FinalLayer parse_final_layer(std::string_view name);

bool has_rx(Family family);

struct AnsatzSpec {
  Family family = Family::RyCnot;
  int qubits = 6;
  int reps = 5;  // entangling-layer repetitions; rotation blocks = reps + 1
  FinalLayer final_layer = FinalLayer::Double;

  void validate() const;
  int rotation_layers() const;
  int param_count() const { return qubits * rotation_layers(); }

  bool operator==(const AnsatzSpec&) const = default;
};

/// Smallest-depth spec of `family` on `qubits` qubits with exactly `count` parameters.
/// Throws ConfigError when no (reps, final layer) choice reaches it.
AnsatzSpec spec_for_param_count(Family family, int qubits, int count);

/// Parameter budget per size used throughout the benchmarks: 36, 108, 252, 330
/// at 6, 9, 12, 15 qubits.
int default_param_count(int qubits);
AnsatzSpec default_spec(Family family, int qubits);

struct SlotInfo {
  qsim::GateKind kind;
  int block;
  int qubit;
};

struct BoundCircuit {
  int qubits = 0;
  std::vector<qsim::GateOp> ops;
  int param_count = 0;
  std::vector<SlotInfo> slots;  // indexed by parameter slot
};

BoundCircuit build(const AnsatzSpec& spec);

/// Ansatz(theta) * Ansatz(0)^dagger as an operator: the inverse of the
/// zero-angle circuit (its entanglers, reversed) acts first, so theta = 0 is the identity.
BoundCircuit build_composed(const AnsatzSpec& spec);

}  // namespace cvqa::ansatz
