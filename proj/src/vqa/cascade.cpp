#include "cascade_vqa/vqa/cascade.hpp"

#include <algorithm>

#include "cascade_vqa/errors.hpp"

namespace cvqa::vqa {

qsim::Statevector PreparedCircuit::state() const {
  return qsim::run(ops, params, qubits);
}

PreparedCircuit bind_parameters(const ansatz::BoundCircuit& circuit, std::vector<double> params) {
  if (params.size() != static_cast<std::size_t>(circuit.param_count)) {
    throw std::invalid_argument("bind_parameters: expected " + std::to_string(circuit.param_count) +
                                " parameters, got " + std::to_string(params.size()));
  }
  return {circuit.qubits, circuit.ops, std::move(params)};
}

std::vector<int> remesh_permutation(int n_coarse) {
  if (n_coarse <= 0 || n_coarse % 3 != 0) {
    throw ConfigError("remesh: coarse qubit count must be a positive multiple of 3");
  }
  const int kc = n_coarse / 3;
  const int kf = kc + 1;
  std::vector<int> dest(static_cast<std::size_t>(n_coarse + 3));
  // Fresh wires 0, 1, 2 become the finest x, y, z bits.
  for (int axis = 0; axis < 3; ++axis) dest[static_cast<std::size_t>(axis)] = axis * kf;
  for (int axis = 0; axis < 3; ++axis) {
    for (int b = 0; b < kc; ++b) {
      dest[static_cast<std::size_t>(3 + axis * kc + b)] = axis * kf + b + 1;
    }
  }
  return dest;
}

std::vector<qsim::GateOp> remesh_swaps(int n_coarse) {
  const auto dest = remesh_permutation(n_coarse);
  const int n = static_cast<int>(dest.size());
  // content[w] = source wire whose qubit currently sits on wire w.
  std::vector<int> content(dest.size());
  for (int w = 0; w < n; ++w) content[static_cast<std::size_t>(w)] = w;
  std::vector<int> wanted(dest.size());
  for (int src = 0; src < n; ++src) wanted[static_cast<std::size_t>(dest[static_cast<std::size_t>(src)])] = src;

  std::vector<qsim::GateOp> swaps;
  for (int w = 0; w < n; ++w) {
    const int src = wanted[static_cast<std::size_t>(w)];
    if (content[static_cast<std::size_t>(w)] == src) continue;
    const int at = static_cast<int>(std::find(content.begin(), content.end(), src) - content.begin());
    swaps.push_back(qsim::GateOp::swap(w, at));
    std::swap(content[static_cast<std::size_t>(w)], content[static_cast<std::size_t>(at)]);
  }
  return swaps;
}

PreparedCircuit embed_coarse(const PreparedCircuit& coarse) {
  PreparedCircuit out;
  out.qubits = coarse.qubits + 3;
  out.params = coarse.params;
  for (auto op : coarse.ops) {
    for (auto& t : op.targets) t += 3;
    out.ops.push_back(std::move(op));
  }
  for (int q = 0; q < 3; ++q) out.ops.push_back(qsim::GateOp::h(q));
  const auto swaps = remesh_swaps(coarse.qubits);
  out.ops.insert(out.ops.end(), swaps.begin(), swaps.end());
  return out;
}

qsim::Statevector CascadeCircuit::run(std::span<const double> params) const {
  qsim::Statevector s = warm_start.state();
  qsim::apply_circuit(s, body.ops, params);
  return s;
}

PreparedCircuit CascadeCircuit::bind(std::span<const double> params) const {
  if (params.size() != static_cast<std::size_t>(body.param_count)) {
    throw std::invalid_argument("CascadeCircuit::bind: wrong parameter count");
  }
  // Body parameters keep slots 0..P-1; warm-start slots are shifted past them.
  PreparedCircuit out;
  out.qubits = qubits();
  out.params.assign(params.begin(), params.end());
  out.params.insert(out.params.end(), warm_start.params.begin(), warm_start.params.end());
  for (auto op : warm_start.ops) {
    if (op.param_slot) *op.param_slot += body.param_count;
    out.ops.push_back(std::move(op));
  }
  out.ops.insert(out.ops.end(), body.ops.begin(), body.ops.end());
  return out;
}

CascadeCircuit build_cascade_circuit(const PreparedCircuit& coarse,
                                     const ansatz::AnsatzSpec& fine_spec) {
  if (coarse.qubits + 3 != fine_spec.qubits) {
    throw ConfigError("cascade: coarse circuit has " + std::to_string(coarse.qubits) +
                      " qubits, fine ansatz needs " + std::to_string(fine_spec.qubits - 3));
  }
  return {embed_coarse(coarse), ansatz::build_composed(fine_spec)};
}

}  // namespace cvqa::vqa
