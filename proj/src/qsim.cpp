#include "cascade_vqa/qsim.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cvqa::qsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_qubits(int qubits) {
  if (qubits < 0 || qubits > 30) throw std::invalid_argument("qubit count out of range");
}

void rotate_y(std::span<Complex> amps, int q, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a = amps[i];
      const Complex b = amps[i + stride];
      amps[i] = c * a - s * b;
      amps[i + stride] = s * a + c * b;
    }
  }
}

void rotate_x(std::span<Complex> amps, int q, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a = amps[i];
      const Complex b = amps[i + stride];
      // -i s b = (s b.imag, -s b.real)
      amps[i] = Complex(c * a.real() + s * b.imag(), c * a.imag() - s * b.real());
      amps[i + stride] = Complex(c * b.real() + s * a.imag(), c * b.imag() - s * a.real());
    }
  }
}

void hadamard(std::span<Complex> amps, int q) {
  const std::size_t stride = std::size_t{1} << q;
  for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const Complex a = amps[i];
      const Complex b = amps[i + stride];
      amps[i] = kInvSqrt2 * (a + b);
      amps[i + stride] = kInvSqrt2 * (a - b);
    }
  }
}

// Swaps amplitude pairs (i, i | flip) for every i with all `require` bits set and `flip` clear.
void controlled_flip(std::span<Complex> amps, std::size_t require, std::size_t flip) {
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & require) == require && (i & flip) == 0) std::swap(amps[i], amps[i | flip]);
  }
}

void swap_qubits(std::span<Complex> amps, int a, int b) {
  const std::size_t am = std::size_t{1} << a;
  const std::size_t bm = std::size_t{1} << b;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & am) != 0 && (i & bm) == 0) std::swap(amps[i], amps[(i ^ am) | bm]);
  }
}

double to_le(double v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    bits = __builtin_bswap64(bits);
    std::memcpy(&v, &bits, sizeof bits);
  }
  return v;
}

}  // namespace

Statevector::Statevector(int qubits) : qubits_(qubits) {
  check_qubits(qubits);
  amps_.assign(std::size_t{1} << qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector::Statevector(int qubits, std::vector<Complex> amplitudes)
    : qubits_(qubits), amps_(std::move(amplitudes)) {
  check_qubits(qubits);
  if (amps_.size() != (std::size_t{1} << qubits)) {
    throw std::invalid_argument("Statevector: amplitude count must be 2^qubits");
  }
}

Statevector Statevector::basis(int qubits, std::size_t index) {
  Statevector s(qubits);
  if (index >= s.size()) throw std::out_of_range("Statevector::basis: index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

void Statevector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amps_) a /= n;
}

Complex inner(const Statevector& a, const Statevector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity(const Statevector& a, const Statevector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  return std::norm(inner(a, b)) / (na * na * nb * nb);
}

double max_abs_diff(const Statevector& a, const Statevector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CCNOT: return "CCNOT";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

GateKind parse_gate(std::string_view name) {
  for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::H, GateKind::CNOT, GateKind::CCNOT,
                     GateKind::SWAP}) {
    if (gate_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::H: return 1;
    case GateKind::CNOT:
    case GateKind::SWAP: return 2;
    case GateKind::CCNOT: return 3;
  }
  return 0;
}

bool is_rotation(GateKind kind) { return kind == GateKind::RX || kind == GateKind::RY; }

void validate(const GateOp& op, int qubits) {
  if (static_cast<int>(op.targets.size()) != gate_arity(op.kind)) {
    throw std::invalid_argument(std::string(gate_name(op.kind)) + ": wrong number of targets");
  }
  for (std::size_t i = 0; i < op.targets.size(); ++i) {
    if (op.targets[i] < 0 || op.targets[i] >= qubits) {
      throw std::invalid_argument(std::string(gate_name(op.kind)) + ": target " +
                                  std::to_string(op.targets[i]) + " out of range");
    }
    for (std::size_t j = i + 1; j < op.targets.size(); ++j) {
      if (op.targets[i] == op.targets[j]) {
        throw std::invalid_argument(std::string(gate_name(op.kind)) + ": repeated target");
      }
    }
  }
  if (is_rotation(op.kind) != op.param_slot.has_value()) {
    throw std::invalid_argument(std::string(gate_name(op.kind)) +
                                ": parameter slot must be present exactly for rotations");
  }
  if (op.param_slot && *op.param_slot < 0) throw std::invalid_argument("negative parameter slot");
}

void apply(Statevector& state, const GateOp& op, std::optional<double> theta) {
  validate(op, state.qubits());
  auto amps = state.amplitudes();
  const auto& t = op.targets;
  switch (op.kind) {
    case GateKind::RX:
    case GateKind::RY:
      if (!theta) throw std::invalid_argument(std::string(gate_name(op.kind)) + ": missing angle");
      if (op.kind == GateKind::RX) {
        rotate_x(amps, t[0], *theta);
      } else {
        rotate_y(amps, t[0], *theta);
      }
      break;
    case GateKind::H: hadamard(amps, t[0]); break;
    case GateKind::CNOT:
      controlled_flip(amps, std::size_t{1} << t[0], std::size_t{1} << t[1]);
      break;
    case GateKind::CCNOT:
      controlled_flip(amps, (std::size_t{1} << t[0]) | (std::size_t{1} << t[1]),
                      std::size_t{1} << t[2]);
      break;
    case GateKind::SWAP: swap_qubits(amps, t[0], t[1]); break;
  }
}

void apply_circuit(Statevector& state, std::span<const GateOp> circuit,
                   std::span<const double> params) {
  for (const auto& op : circuit) {
    if (op.param_slot) {
      const auto slot = static_cast<std::size_t>(*op.param_slot);
      if (slot >= params.size()) {
        throw std::out_of_range("parameter slot " + std::to_string(slot) + " out of range (" +
                                std::to_string(params.size()) + " parameters)");
      }
      apply(state, op, params[slot]);
    } else {
      apply(state, op);
    }
  }
}

Statevector run(std::span<const GateOp> circuit, std::span<const double> params, int qubits) {
  Statevector s(qubits);
  apply_circuit(s, circuit, params);
  return s;
}

void write_gate_list(std::ostream& out, std::span<const GateOp> circuit) {
  for (const auto& op : circuit) {
    out << gate_name(op.kind) << ' ';
    for (std::size_t i = 0; i < op.targets.size(); ++i) out << (i ? "," : "") << op.targets[i];
    if (op.param_slot) out << ' ' << *op.param_slot;
    out << '\n';
  }
}

std::vector<GateOp> read_gate_list(std::istream& in) {
  std::vector<GateOp> ops;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind;
    std::string targets;
    ls >> kind >> targets;
    GateOp op;
    op.kind = parse_gate(kind);
    std::istringstream ts(targets);
    std::string tok;
    while (std::getline(ts, tok, ',')) op.targets.push_back(std::stoi(tok));
    int slot;
    if (ls >> slot) op.param_slot = slot;
    ops.push_back(std::move(op));
  }
  return ops;
}

void write_statevector(std::ostream& out, const Statevector& state) {
  out << state.qubits() << ' ' << state.size() << '\n';
  for (const auto& a : state.amplitudes()) {
    const double parts[2] = {to_le(a.real()), to_le(a.imag())};
    out.write(reinterpret_cast<const char*>(parts), sizeof parts);
  }
}

Statevector read_statevector(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("statevector: missing header");
  std::istringstream hs(header);
  int qubits = -1;
  std::size_t length = 0;
  if (!(hs >> qubits >> length) || qubits < 0 || qubits > 30 ||
      length != (std::size_t{1} << qubits)) {
    throw std::runtime_error("statevector: malformed header '" + header + "'");
  }
  std::vector<Complex> amps(length);
  for (auto& a : amps) {
    double parts[2];
    if (!in.read(reinterpret_cast<char*>(parts), sizeof parts)) {
      throw std::runtime_error("statevector: truncated data");
    }
    a = Complex(to_le(parts[0]), to_le(parts[1]));
  }
  return Statevector(qubits, std::move(amps));
}

void save_statevector(const std::string& path, const Statevector& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_statevector(out, state);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

Statevector load_statevector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open statevector file '" + path + "'");
  return read_statevector(in);
}

}  // namespace cvqa::qsim
