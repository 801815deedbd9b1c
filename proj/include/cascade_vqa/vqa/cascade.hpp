#pragma once

// Remeshing warm start: embed an n-qubit state into n+3 qubits by adding three
// |+> qubits and interleaving them as the new finest bit of each axis.

#include <utility>
#include <vector>

#include "cascade_vqa/ansatz.hpp"
#include "cascade_vqa/qsim.hpp"

namespace cvqa::vqa {

/// A circuit with all of its rotation angles bound.
struct PreparedCircuit {
  int qubits = 0;
  std::vector<qsim::GateOp> ops;
  std::vector<double> params;

  qsim::Statevector state() const;
};

PreparedCircuit bind_parameters(const ansatz::BoundCircuit& circuit, std::vector<double> params);

/// Destination wire of every source wire on n_coarse + 3 qubits. Before the
/// permutation the fresh qubits are wires 0..2 and the coarse register sits on
/// wires 3..n_coarse+2 (x bits, then y, then z, least significant first).
/// Afterwards bit 0 of each axis group is a fresh qubit.
std::vector<int> remesh_permutation(int n_coarse);

/// SWAP gates realizing remesh_permutation.
std::vector<qsim::GateOp> remesh_swaps(int n_coarse);

/// Coarse preparation shifted onto wires 3.., Hadamards on the fresh wires, then the swaps.
PreparedCircuit embed_coarse(const PreparedCircuit& coarse);

struct CascadeCircuit {
  PreparedCircuit warm_start;  // A(theta_opt), H on fresh wires, swaps
  ansatz::BoundCircuit body;   // composed ansatz B(theta)

  int qubits() const { return body.qubits; }
  int param_count() const { return body.param_count; }
  qsim::Statevector run(std::span<const double> params) const;
  /// The whole circuit with body parameters bound to `params`.
  PreparedCircuit bind(std::span<const double> params) const;
};

/// `coarse` prepares the optimized coarse state on fine_spec.qubits - 3 qubits.
CascadeCircuit build_cascade_circuit(const PreparedCircuit& coarse,
                                     const ansatz::AnsatzSpec& fine_spec);

}  // namespace cvqa::vqa
