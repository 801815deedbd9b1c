#pragma once

// Exact statevector simulation for the gate set RX, RY, H, CNOT, CCNOT, SWAP.
// Qubit k is bit k of the basis index (qubit 0 is least significant).

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cvqa::qsim {

using Complex = std::complex<double>;

class Statevector {
 public:
  /// |0...0> on `qubits` qubits.
  explicit Statevector(int qubits);
  /// Takes ownership of amplitudes; length must be 2^qubits. No normalization is applied.
  Statevector(int qubits, std::vector<Complex> amplitudes);

  static Statevector basis(int qubits, std::size_t index);

  int qubits() const { return qubits_; }
  std::size_t size() const { return amps_.size(); }

  std::span<Complex> amplitudes() { return amps_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();

 private:
  int qubits_;
  std::vector<Complex> amps_;
};

/// <a|b>
Complex inner(const Statevector& a, const Statevector& b);
/// |<a|b>|^2 / (<a|a><b|b>)
double fidelity(const Statevector& a, const Statevector& b);
double max_abs_diff(const Statevector& a, const Statevector& b);

enum class GateKind { RX, RY, H, CNOT, CCNOT, SWAP };

std::string_view gate_name(GateKind kind);
GateKind parse_gate(std::string_view name);
int gate_arity(GateKind kind);
bool is_rotation(GateKind kind);

/// targets lists controls first then the target (CNOT: {c, t}; CCNOT: {c1, c2, t}).
struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::optional<int> param_slot;

  bool operator==(const GateOp&) const = default;

  static GateOp rx(int q, int slot) { return {GateKind::RX, {q}, slot}; }
  static GateOp ry(int q, int slot) { return {GateKind::RY, {q}, slot}; }
  static GateOp h(int q) { return {GateKind::H, {q}, std::nullopt}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}, std::nullopt}; }
  static GateOp ccnot(int c1, int c2, int target) {
    return {GateKind::CCNOT, {c1, c2, target}, std::nullopt};
  }
  static GateOp swap(int a, int b) { return {GateKind::SWAP, {a, b}, std::nullopt}; }
};

/// Throws std::invalid_argument if the op is malformed for `qubits` qubits.
void validate(const GateOp& op, int qubits);

/// Applies op in place. `theta` is required for RX/RY and ignored otherwise.
void apply(Statevector& state, const GateOp& op, std::optional<double> theta = std::nullopt);

/// Applies every op in order, reading rotation angles from params[slot].
void apply_circuit(Statevector& state, std::span<const GateOp> circuit,
                   std::span<const double> params);

/// U(params)|0...0>.
Statevector run(std::span<const GateOp> circuit, std::span<const double> params, int qubits);

/// One gate per line: "<kind> <t0>[,<t1>...] [slot]".
void write_gate_list(std::ostream& out, std::span<const GateOp> circuit);
std::vector<GateOp> read_gate_list(std::istream& in);

/// Header line "<qubits> <length>\n" followed by little-endian float64 (re, im) pairs.
void write_statevector(std::ostream& out, const Statevector& state);
Statevector read_statevector(std::istream& in);
void save_statevector(const std::string& path, const Statevector& state);
Statevector load_statevector(const std::string& path);

}  // namespace cvqa::qsim
