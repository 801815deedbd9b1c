#pragma once

// Trilinear hexahedral FEM discretization of the steady heat equation on the
// unit cube, with node ordering chosen so that a grid node index equals the
// computational basis index of the corresponding quantum state.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascade_vqa/errors.hpp"
#include "cascade_vqa/sparse_matrix.hpp"

namespace cvqa::fem {

struct GridSpec {
  int qubits = 6;
  double conductivity = 1.0;

  /// Throws ConfigError unless qubits is a positive multiple of 3 and conductivity > 0.
  void validate() const;

  int bits_per_axis() const { return qubits / 3; }
  std::size_t nodes_per_axis() const { return std::size_t{1} << bits_per_axis(); }
  std::size_t node_count() const { return std::size_t{1} << qubits; }
  double spacing() const { return 1.0 / static_cast<double>(nodes_per_axis() - 1); }

  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    const std::size_t n = nodes_per_axis();
    return (z * n + y) * n + x;
  }
  std::array<std::size_t, 3> coords(std::size_t index) const;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

struct Face {
  Axis normal = Axis::Z;
  bool upper = false;  // false: coordinate 0, true: coordinate N-1

  bool operator==(const Face&) const = default;
};

/// "x0", "x1", "y0", "y1", "z0", "z1".
Face parse_face(std::string_view name);
std::string face_name(Face face);
std::string_view axis_name(Axis axis);
Axis parse_axis(std::string_view name);

enum class PatchRegion { Full, Half };

struct DirichletFace {
  Face face;
  double value = 0.0;
};

/// A half patch covers the lower half (coordinate < 0.5) of the face's first
/// tangential axis: x for y/z faces, y for x faces.
struct NeumannPatch {
  Face face;
  PatchRegion region = PatchRegion::Full;
  double flux = 0.0;
};

struct BoundarySpec {
  std::vector<DirichletFace> dirichlet;
  std::vector<NeumannPatch> neumann;

  /// T=0 on z=0, T=1 on z=N-1, unit flux on y=0 and on the x<1/2 half of y=N-1.
  static BoundarySpec defaults();

  /// Rejects an empty Dirichlet set, repeated faces, and Neumann patches on Dirichlet faces.
  void validate() const;

  bool operator==(const BoundarySpec& other) const;
};

struct GridSystem {
  GridSpec spec;
  BoundarySpec bc;
  SparseMatrix stiffness;  // after Dirichlet elimination
  std::vector<double> load;
  std::vector<bool> dirichlet_mask;
  double dirichlet_diagonal = 0.0;

  // Filled by solve_classical.
  std::vector<double> u_ref;
  double e_ref = 0.0;
  double residual = 0.0;
  std::string solver;
};

/// 8x8 element stiffness of a cube element of side h, local node order dx + 2dy + 4dz.
std::array<double, 64> hex_element_stiffness(double h, double conductivity);

/// Stiffness matrix before any boundary condition; annihilates constants.
SparseMatrix assemble_stiffness(const GridSpec& spec);

/// Stiffness of a 1D chain of linear elements with spacing h (assembly check).
SparseMatrix assemble_line(std::size_t elements, double h, double conductivity = 1.0);

GridSystem assemble(const GridSpec& spec, const BoundarySpec& bc);

/// Solves K u = f (banded Cholesky up to 12 qubits, Jacobi-preconditioned CG
/// above), stores u_ref, E_ref = -1/2 f.u and the relative residual.
/// Throws NumericalError naming the first non-positive pivot when K is not SPD.
const std::vector<double>& solve_classical(GridSystem& sys);

/// assemble followed by solve_classical.
GridSystem build_problem(const GridSpec& spec, const BoundarySpec& bc);

/// Dense-band Cholesky used for n <= 12. Exposed for testing.
std::vector<double> solve_banded_cholesky(const SparseMatrix& a, std::span<const double> b);
std::vector<double> solve_pcg(const SparseMatrix& a, std::span<const double> b, double tol,
                              std::size_t max_iter);

double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b);

namespace detail {
std::size_t checked_coarse_qubits(std::size_t length);
}

/// Copies each coarse node value into its 2x2x2 fine block scaled by 1/sqrt(8).
/// The coarse grid size is inferred from the vector length (a power of 8).
template <typename T>
std::vector<T> prolong(std::span<const T> coarse) {
  const std::size_t qubits = detail::checked_coarse_qubits(coarse.size());
  const std::size_t bits = qubits / 3;
  const std::size_t nc = std::size_t{1} << bits;
  const std::size_t nf = 2 * nc;
  const double scale = 1.0 / std::sqrt(8.0);
  std::vector<T> fine(coarse.size() * 8);
  for (std::size_t z = 0; z < nf; ++z) {
    for (std::size_t y = 0; y < nf; ++y) {
      for (std::size_t x = 0; x < nf; ++x) {
        const std::size_t src = ((z / 2) * nc + y / 2) * nc + x / 2;
        fine[(z * nf + y) * nf + x] = coarse[src] * scale;
      }
    }
  }
  return fine;
}

template <typename T>
std::vector<T> prolong(const std::vector<T>& coarse) {
  return prolong(std::span<const T>(coarse));
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(std::ostream& out, std::span<const double> v);

}  // namespace cvqa::fem
