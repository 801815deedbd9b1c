#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cascade_vqa/qsim.hpp"
#include "dense.hpp"

using namespace cvqa::qsim;

namespace {

Statevector random_state(int qubits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << qubits);
  for (auto& a : amps) a = {g(rng), g(rng)};
  Statevector s(qubits, std::move(amps));
  s.normalize();
  return s;
}

double dense_error(const GateOp& op, double theta, int qubits, std::uint64_t seed) {
  const Statevector in = random_state(qubits, seed);
  Statevector out = in;
  apply(out, op, theta);
  std::vector<oracle::cd> v(in.amplitudes().begin(), in.amplitudes().end());
  const auto expected = oracle::apply(oracle::gate_matrix(op, qubits, theta), v);
  double e = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) e = std::max(e, std::abs(out[i] - expected[i]));
  return e;
}

}  // namespace

TEST(Statevector, StartsInZeroState) {
  const Statevector s(3);
  EXPECT_EQ(s.size(), 8U);
  EXPECT_EQ(s[0], Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_THROW(Statevector(2, std::vector<Complex>(3)), std::invalid_argument);
}

TEST(Gates, EveryGateMatchesDenseMatrix) {
  const int n = 5;
  std::uint64_t seed = 1;
  for (int q = 0; q < n; ++q) {
    EXPECT_LE(dense_error(GateOp::rx(q, 0), 0.731, n, seed++), 1e-14);
    EXPECT_LE(dense_error(GateOp::ry(q, 0), -2.1, n, seed++), 1e-14);
    EXPECT_LE(dense_error(GateOp::h(q), 0.0, n, seed++), 1e-14);
  }
  EXPECT_LE(dense_error(GateOp::cnot(0, 3), 0.0, n, seed++), 1e-15);
  EXPECT_LE(dense_error(GateOp::cnot(4, 1), 0.0, n, seed++), 1e-15);
  EXPECT_LE(dense_error(GateOp::ccnot(0, 2, 4), 0.0, n, seed++), 1e-15);
  EXPECT_LE(dense_error(GateOp::ccnot(4, 3, 0), 0.0, n, seed++), 1e-15);
  EXPECT_LE(dense_error(GateOp::swap(1, 3), 0.0, n, seed++), 1e-15);
}

TEST(Gates, ZeroRotationIsIdentity) {
  const auto in = random_state(4, 9);
  auto out = in;
  apply(out, GateOp::rx(2, 0), 0.0);
  apply(out, GateOp::ry(1, 0), 0.0);
  EXPECT_EQ(max_abs_diff(in, out), 0.0);
}

TEST(Gates, BellState) {
  Statevector s(2);
  apply(s, GateOp::h(0));
  apply(s, GateOp::cnot(0, 1));
  EXPECT_NEAR(s[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[3].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(s[1], Complex(0.0));
}

TEST(Gates, HadamardOnAllQubitsGivesUniformState) {
  Statevector s(6);
  for (int q = 0; q < 6; ++q) apply(s, GateOp::h(q));
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i].real(), 0.125, 1e-15);
}

TEST(Gates, Validation) {
  Statevector s(3);
  EXPECT_THROW(apply(s, GateOp::h(3)), std::invalid_argument);
  EXPECT_THROW(apply(s, GateOp::cnot(1, 1)), std::invalid_argument);
  EXPECT_THROW(apply(s, GateOp::rx(0, 0)), std::invalid_argument);
  EXPECT_THROW(validate({GateKind::CNOT, {0}, std::nullopt}, 3), std::invalid_argument);
}

TEST(Circuit, RunMatchesDenseProduct) {
  const std::vector<GateOp> ops{GateOp::h(0),        GateOp::ry(1, 0),    GateOp::cnot(0, 1),
                                GateOp::rx(2, 1),    GateOp::ccnot(0, 1, 2), GateOp::swap(0, 2),
                                GateOp::ry(0, 2)};
  const std::vector<double> params{0.3, -1.2, 2.5};
  const auto s = run(ops, params, 3);
  const auto u = oracle::circuit_unitary(ops, params, 3);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(std::abs(s[i] - u(i, 0)), 0.0, 1e-15);
  EXPECT_THROW(run(ops, std::vector<double>{0.1}, 3), std::out_of_range);
}

TEST(Circuit, InnerAndFidelity) {
  const auto a = random_state(4, 1);
  const auto b = random_state(4, 2);
  EXPECT_NEAR(std::abs(inner(a, a)), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-14);
  const double f = fidelity(a, b);
  EXPECT_GE(f, 0.0);
  EXPECT_LE(f, 1.0);
  EXPECT_NEAR(f, std::norm(inner(a, b)), 1e-14);
}

TEST(GateList, RoundTrip) {
  const std::vector<GateOp> ops{GateOp::rx(0, 3), GateOp::cnot(0, 1), GateOp::ccnot(0, 1, 2),
                                GateOp::h(2), GateOp::swap(1, 2), GateOp::ry(1, 0)};
  std::stringstream ss;
  write_gate_list(ss, ops);
  EXPECT_EQ(read_gate_list(ss), ops);
}

TEST(StatevectorIo, BinaryRoundTripIsExact) {
  const auto s = random_state(5, 3);
  std::stringstream ss;
  write_statevector(ss, s);
  const auto back = read_statevector(ss);
  EXPECT_EQ(back.qubits(), 5);
  EXPECT_EQ(max_abs_diff(s, back), 0.0);
  std::stringstream bad("5 31\n");
  EXPECT_THROW(read_statevector(bad), std::runtime_error);
}
