#include "cascade_vqa/ansatz.hpp"

#include <algorithm>
#include <cctype>

#include "cascade_vqa/errors.hpp"

namespace cvqa::ansatz {

namespace {

using qsim::GateKind;
using qsim::GateOp;

enum class Entangler { None, Cnot, Toffoli };

Entangler entangler_of(Family f) {
  switch (f) {
    case Family::Ry: return Entangler::None;
    case Family::RyCnot:
    case Family::Ry1Cnot:
    case Family::RxRyCnot: return Entangler::Cnot;
    case Family::RyToffoli:
    case Family::RxRyToffoli: return Entangler::Toffoli;
  }
  return Entangler::None;
}

std::string normalized(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '-' || c == '_' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::vector<GateKind> block_rotations(const AnsatzSpec& spec, int block) {
  if (!has_rx(spec.family)) return {GateKind::RY};
  if (block == spec.reps && spec.final_layer == FinalLayer::Single) return {GateKind::RY};
  return {GateKind::RX, GateKind::RY};
}

void append_entangler(std::vector<GateOp>& ops, Entangler e, int qubits) {
  if (e == Entangler::Cnot) {
    for (int q = 0; q + 1 < qubits; ++q) ops.push_back(GateOp::cnot(q, q + 1));
  } else if (e == Entangler::Toffoli) {
    for (int q = 0; q + 2 < qubits; ++q) ops.push_back(GateOp::ccnot(q, q + 1, q + 2));
  }
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Ry: return "Ry";
    case Family::RyCnot: return "RyCnot";
    case Family::RyToffoli: return "RyToffoli";
    case Family::Ry1Cnot: return "Ry1Cnot";
    case Family::RxRyCnot: return "RxRyCnot";
    case Family::RxRyToffoli: return "RxRyToffoli";
  }
  return "?";
}

std::string_view family_label(Family family) {
  switch (family) {
    case Family::Ry: return "Ry";
    case Family::RyCnot: return "Ry-Cnot";
    case Family::RyToffoli: return "Ry-Toffoli";
    case Family::Ry1Cnot: return "Ry-1Cnot";
    case Family::RxRyCnot: return "Rx-Ry-Cnot";
    case Family::RxRyToffoli: return "Rx-Ry-Toffoli";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  const std::string key = normalized(name);
  for (Family f : kAllFamilies) {
    if (normalized(family_name(f)) == key) return f;
  }
  throw ConfigError("unknown ansatz family '" + std::string(name) + "'");
}

std::string_view final_layer_name(FinalLayer layer) {
  return layer == FinalLayer::Single ? "single" : "double";
}

FinalLayer parse_final_layer(std::string_view name) {
  if (name == "single") return FinalLayer::Single;
  if (name == "double") return FinalLayer::Double;
  throw ConfigError("final layer must be 'single' or 'double'");
}

bool has_rx(Family family) {
  return family == Family::RxRyCnot || family == Family::RxRyToffoli;
}

void AnsatzSpec::validate() const {
  if (qubits < 1) throw ConfigError("ansatz needs at least one qubit");
  if (reps < 0) throw ConfigError("reps must be non-negative");
  const Entangler e = entangler_of(family);
  if (e == Entangler::Cnot && qubits < 2) throw ConfigError("CNOT ansatz needs at least 2 qubits");
  if (e == Entangler::Toffoli && qubits < 3) {
    throw ConfigError("Toffoli ansatz needs at least 3 qubits");
  }
  if (family == Family::Ry1Cnot && reps < 1) throw ConfigError("Ry1Cnot needs reps >= 1");
}

int AnsatzSpec::rotation_layers() const {
  const int per_block = has_rx(family) ? 2 : 1;
  int layers = (reps + 1) * per_block;
  if (has_rx(family) && final_layer == FinalLayer::Single) --layers;
  return layers;
}

AnsatzSpec spec_for_param_count(Family family, int qubits, int count) {
  if (qubits < 1 || count <= 0 || count % qubits != 0) {
    throw ConfigError("cannot build " + std::string(family_name(family)) + " with " +
                      std::to_string(count) + " parameters on " + std::to_string(qubits) +
                      " qubits");
  }
  const int layers = count / qubits;
  AnsatzSpec spec{family, qubits, 0, FinalLayer::Double};
  if (has_rx(family)) {
    spec.final_layer = layers % 2 == 0 ? FinalLayer::Double : FinalLayer::Single;
    spec.reps = layers % 2 == 0 ? layers / 2 - 1 : (layers - 1) / 2;
  } else {
    spec.reps = layers - 1;
  }
  spec.validate();
  if (spec.param_count() != count) {
    throw ConfigError("cannot build " + std::string(family_name(family)) + " with " +
                      std::to_string(count) + " parameters");
  }
  return spec;
}

int default_param_count(int qubits) {
  switch (qubits) {
    case 6: return 36;
    case 9: return 108;
    case 12: return 252;
    case 15: return 330;
    default: break;
  }
  throw ConfigError("no default parameter count for " + std::to_string(qubits) +
                    " qubits; set ansatz.reps explicitly");
}

AnsatzSpec default_spec(Family family, int qubits) {
  return spec_for_param_count(family, qubits, default_param_count(qubits));
}

BoundCircuit build(const AnsatzSpec& spec) {
  spec.validate();
  BoundCircuit bc;
  bc.qubits = spec.qubits;
  const Entangler e = entangler_of(spec.family);
  int slot = 0;
  for (int block = 0; block <= spec.reps; ++block) {
    for (GateKind kind : block_rotations(spec, block)) {
      for (int q = 0; q < spec.qubits; ++q) {
        bc.ops.push_back(GateOp{kind, {q}, slot++});
        bc.slots.push_back({kind, block, q});
      }
    }
    if (block == spec.reps) break;
    if (spec.family == Family::Ry1Cnot) {
      if (block == spec.reps - 1) append_entangler(bc.ops, Entangler::Cnot, spec.qubits);
    } else {
      append_entangler(bc.ops, e, spec.qubits);
    }
  }
  bc.param_count = slot;
  return bc;
}

BoundCircuit build_composed(const AnsatzSpec& spec) {
  BoundCircuit forward = build(spec);
  BoundCircuit composed;
  composed.qubits = forward.qubits;
  composed.param_count = forward.param_count;
  composed.slots = forward.slots;
  // Rotations vanish at zero angle and the entanglers are self-inverse.
  for (auto it = forward.ops.rbegin(); it != forward.ops.rend(); ++it) {
    if (!qsim::is_rotation(it->kind)) composed.ops.push_back(*it);
  }
  composed.ops.insert(composed.ops.end(), forward.ops.begin(), forward.ops.end());
  return composed;
}

}  // namespace cvqa::ansatz
