#include "cascade_vqa/fem_grid.hpp"

#include <cstdlib>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <iomanip>
#include <sstream>

namespace cvqa::fem {

namespace {

constexpr int kMinQubits = 6;
constexpr int kMaxQubits = 24;
constexpr int kMaxBandedQubits = 12;

// Two-point Gauss rule on [0, 1].
constexpr std::array<double, 2> kGaussPoints{0.5 - 0.28867513459481287,
                                             0.5 + 0.28867513459481287};

double shape_1d(int node, double s) { return node == 0 ? 1.0 - s : s; }
double shape_1d_deriv(int node) { return node == 0 ? -1.0 : 1.0; }

std::array<Axis, 2> tangential_axes(Axis normal) {
  switch (normal) {
    case Axis::X: return {Axis::Y, Axis::Z};
    case Axis::Y: return {Axis::X, Axis::Z};
    case Axis::Z: return {Axis::X, Axis::Y};
  }
  return {Axis::X, Axis::Y};
}

std::size_t face_node_index(const GridSpec& spec, Face face, std::size_t t1, std::size_t t2) {
  std::array<std::size_t, 3> c{};
  const auto [a1, a2] = tangential_axes(face.normal);
  c[static_cast<int>(face.normal)] = face.upper ? spec.nodes_per_axis() - 1 : 0;
  c[static_cast<int>(a1)] = t1;
  c[static_cast<int>(a2)] = t2;
  return spec.index(c[0], c[1], c[2]);
}

}  // namespace

void GridSpec::validate() const {
  if (qubits % 3 != 0) throw ConfigError("qubits must be divisible by 3");
  if (qubits < kMinQubits) throw ConfigError("qubits must be at least 6");
  if (qubits > kMaxQubits) throw ConfigError("qubits must be at most 24");
  if (!(conductivity > 0.0) || !std::isfinite(conductivity)) {
    throw ConfigError("conductivity must be positive");
  }
}

std::array<std::size_t, 3> GridSpec::coords(std::size_t index) const {
  const std::size_t n = nodes_per_axis();
  return {index % n, (index / n) % n, index / (n * n)};
}

Face parse_face(std::string_view name) {
  if (name.size() == 2 && (name[1] == '0' || name[1] == '1')) {
    const bool upper = name[1] == '1';
    switch (name[0]) {
      case 'x': return {Axis::X, upper};
      case 'y': return {Axis::Y, upper};
      case 'z': return {Axis::Z, upper};
      default: break;
    }
  }
  throw ConfigError("unknown face '" + std::string(name) + "' (expected x0, x1, y0, y1, z0 or z1)");
}

std::string face_name(Face face) {
  return std::string(axis_name(face.normal)) + (face.upper ? "1" : "0");
}

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  if (name == "x") return Axis::X;
  if (name == "y") return Axis::Y;
  if (name == "z") return Axis::Z;
  throw ConfigError("unknown axis '" + std::string(name) + "' (expected x, y or z)");
}

BoundarySpec BoundarySpec::defaults() {
  BoundarySpec bc;
  bc.dirichlet = {{{Axis::Z, false}, 0.0}, {{Axis::Z, true}, 1.0}};
  bc.neumann = {{{Axis::Y, false}, PatchRegion::Full, 1.0},
                {{Axis::Y, true}, PatchRegion::Half, 1.0}};
  return bc;
}

void BoundarySpec::validate() const {
  if (dirichlet.empty()) {
    throw ConfigError("at least one Dirichlet face is required (pure Neumann system is singular)");
  }
  for (std::size_t i = 0; i < dirichlet.size(); ++i) {
    if (!std::isfinite(dirichlet[i].value)) throw ConfigError("Dirichlet value must be finite");
    for (std::size_t j = i + 1; j < dirichlet.size(); ++j) {
      if (dirichlet[i].face == dirichlet[j].face) {
        throw ConfigError("Dirichlet face " + face_name(dirichlet[i].face) + " listed twice");
      }
    }
  }
  for (std::size_t i = 0; i < neumann.size(); ++i) {
    if (!std::isfinite(neumann[i].flux)) throw ConfigError("Neumann flux must be finite");
    for (const auto& d : dirichlet) {
      if (d.face == neumann[i].face) {
        throw ConfigError("face " + face_name(d.face) + " has both Dirichlet and Neumann conditions");
      }
    }
    for (std::size_t j = i + 1; j < neumann.size(); ++j) {
      if (neumann[i].face == neumann[j].face) {
        throw ConfigError("Neumann face " + face_name(neumann[i].face) + " listed twice");
      }
    }
  }
}

bool BoundarySpec::operator==(const BoundarySpec& other) const {
  auto same_d = [](const DirichletFace& a, const DirichletFace& b) {
    return a.face == b.face && a.value == b.value;
  };
  auto same_n = [](const NeumannPatch& a, const NeumannPatch& b) {
    return a.face == b.face && a.region == b.region && a.flux == b.flux;
  };
  return std::equal(dirichlet.begin(), dirichlet.end(), other.dirichlet.begin(),
                    other.dirichlet.end(), same_d) &&
         std::equal(neumann.begin(), neumann.end(), other.neumann.begin(), other.neumann.end(),
                    same_n);
}

std::array<double, 64> hex_element_stiffness(double h, double conductivity) {
  std::array<double, 64> ke{};
  for (double gx : kGaussPoints) {
    for (double gy : kGaussPoints) {
      for (double gz : kGaussPoints) {
        std::array<std::array<double, 3>, 8> grad{};
        for (int a = 0; a < 8; ++a) {
          const int dx = a & 1;
          const int dy = (a >> 1) & 1;
          const int dz = (a >> 2) & 1;
          grad[a] = {shape_1d_deriv(dx) * shape_1d(dy, gy) * shape_1d(dz, gz),
                     shape_1d(dx, gx) * shape_1d_deriv(dy) * shape_1d(dz, gz),
                     shape_1d(dx, gx) * shape_1d(dy, gy) * shape_1d_deriv(dz)};
        }
        // Weights 1/8 per point; reference gradients scale by 1/h, volume by h^3.
        for (int a = 0; a < 8; ++a) {
          for (int b = 0; b < 8; ++b) {
            const double dot =
                grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1] + grad[a][2] * grad[b][2];
            ke[a * 8 + b] += 0.125 * conductivity * h * dot;
          }
        }
      }
    }
  }
  return ke;
}

SparseMatrix assemble_stiffness(const GridSpec& spec) {
  spec.validate();
  const std::size_t n = spec.nodes_per_axis();
  const auto ke = hex_element_stiffness(spec.spacing(), spec.conductivity);

  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve((n - 1) * (n - 1) * (n - 1) * 64);
  std::array<std::size_t, 8> nodes{};
  for (std::size_t z = 0; z + 1 < n; ++z) {
    for (std::size_t y = 0; y + 1 < n; ++y) {
      for (std::size_t x = 0; x + 1 < n; ++x) {
        for (int a = 0; a < 8; ++a) {
          nodes[a] = spec.index(x + (a & 1), y + ((a >> 1) & 1), z + ((a >> 2) & 1));
        }
        for (int a = 0; a < 8; ++a) {
          for (int b = 0; b < 8; ++b) triplets.push_back({nodes[a], nodes[b], ke[a * 8 + b]});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(spec.node_count(), spec.node_count(), std::move(triplets));
}

SparseMatrix assemble_line(std::size_t elements, double h, double conductivity) {
  std::vector<SparseMatrix::Triplet> triplets;
  const double k = conductivity / h;
  for (std::size_t e = 0; e < elements; ++e) {
    triplets.push_back({e, e, k});
    triplets.push_back({e, e + 1, -k});
    triplets.push_back({e + 1, e, -k});
    triplets.push_back({e + 1, e + 1, k});
  }
  return SparseMatrix::from_triplets(elements + 1, elements + 1, std::move(triplets));
}

GridSystem assemble(const GridSpec& spec, const BoundarySpec& bc) {
  spec.validate();
  bc.validate();

  GridSystem sys;
  sys.spec = spec;
  sys.bc = bc;
  const std::size_t dim = spec.node_count();
  const std::size_t n = spec.nodes_per_axis();
  const double h = spec.spacing();

  const SparseMatrix k0 = assemble_stiffness(spec);
  sys.load.assign(dim, 0.0);

  // Neumann: integrate flux * bilinear shape over each face quad clipped to the patch.
  for (const auto& patch : bc.neumann) {
    const double t1_limit = patch.region == PatchRegion::Half ? 0.5 : 1.0;
    for (std::size_t b = 0; b + 1 < n; ++b) {
      for (std::size_t a = 0; a + 1 < n; ++a) {
        const double lo = static_cast<double>(a) * h;
        const double hi = std::min(lo + h, t1_limit);
        if (hi <= lo + 1e-15) continue;
        for (double g1 : kGaussPoints) {
          const double s_phys = lo + g1 * (hi - lo);
          const double s = (s_phys - lo) / h;
          for (double g2 : kGaussPoints) {
            const double w = 0.25 * (hi - lo) * h * patch.flux;
            for (int c = 0; c < 4; ++c) {
              const int i1 = c & 1;
              const int i2 = c >> 1;
              const double phi = shape_1d(i1, s) * shape_1d(i2, g2);
              sys.load[face_node_index(spec, patch.face, a + i1, b + i2)] += w * phi;
            }
          }
        }
      }
    }
  }

  // Dirichlet values; later faces win on shared edges.
  std::vector<double> known(dim, 0.0);
  sys.dirichlet_mask.assign(dim, false);
  for (const auto& d : bc.dirichlet) {
    for (std::size_t t2 = 0; t2 < n; ++t2) {
      for (std::size_t t1 = 0; t1 < n; ++t1) {
        const std::size_t i = face_node_index(spec, d.face, t1, t2);
        sys.dirichlet_mask[i] = true;
        known[i] = d.value;
      }
    }
  }

  const auto diag0 = k0.diagonal();
  sys.dirichlet_diagonal = *std::max_element(diag0.begin(), diag0.end());

  // Symmetric elimination keeping the full 2^n dimension.
  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(k0.nonzeros());
  const auto rp = k0.row_ptr();
  const auto ci = k0.col_idx();
  const auto vals = k0.values();
  for (std::size_t r = 0; r < dim; ++r) {
    if (sys.dirichlet_mask[r]) {
      triplets.push_back({r, r, sys.dirichlet_diagonal});
      continue;
    }
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      const std::size_t c = ci[k];
      if (sys.dirichlet_mask[c]) {
        sys.load[r] -= vals[k] * known[c];
      } else {
        triplets.push_back({r, c, vals[k]});
      }
    }
  }
  for (std::size_t r = 0; r < dim; ++r) {
    if (sys.dirichlet_mask[r]) sys.load[r] = sys.dirichlet_diagonal * known[r];
  }
  sys.stiffness = SparseMatrix::from_triplets(dim, dim, std::move(triplets));
  return sys;
}

double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b) {
  const auto ax = a.multiply(x);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    num += (ax[i] - b[i]) * (ax[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::vector<double> solve_banded_cholesky(const SparseMatrix& a, std::span<const double> b) {
  const std::size_t dim = a.rows();
  if (a.cols() != dim || b.size() != dim) {
    throw std::invalid_argument("solve_banded_cholesky: dimension mismatch");
  }
  std::size_t bw = 0;
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto vals = a.values();
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      bw = std::max(bw, r > ci[k] ? r - ci[k] : ci[k] - r);
    }
  }
  const std::size_t width = bw + 1;
  // band[i * width + (j - i + bw)] holds L(i, j) for i - bw <= j <= i.
  std::vector<double> band(dim * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return band[i * width + (j + bw - i)]; };
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      if (ci[k] <= r) at(r, ci[k]) = vals[k];
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j0 = i >= bw ? i - bw : 0;
    for (std::size_t j = j0; j <= i; ++j) {
      double s = at(i, j);
      const std::size_t k0 = std::max(j0, j >= bw ? j - bw : 0);
      for (std::size_t k = k0; k < j; ++k) s -= at(i, k) * at(j, k);
      if (j == i) {
        if (!(s > 0.0)) {
          std::ostringstream msg;
          msg << "stiffness matrix is not positive definite: pivot " << i << " = " << s;
          throw NumericalError(msg.str());
        }
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j0 = i >= bw ? i - bw : 0;
    for (std::size_t j = j0; j < i; ++j) x[i] -= at(i, j) * x[j];
    x[i] /= at(i, i);
  }
  for (std::size_t ii = dim; ii-- > 0;) {
    const std::size_t j1 = std::min(dim - 1, ii + bw);
    for (std::size_t j = ii + 1; j <= j1; ++j) x[ii] -= at(j, ii) * x[j];
    x[ii] /= at(ii, ii);
  }
  return x;
}

std::vector<double> solve_pcg(const SparseMatrix& a, std::span<const double> b, double tol,
                              std::size_t max_iter) {
  const std::size_t dim = a.rows();
  const auto diag = a.diagonal();
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(diag[i] > 0.0)) {
      throw NumericalError("stiffness matrix is not positive definite: diagonal " +
                           std::to_string(i) + " is not positive");
    }
  }
  std::vector<double> x(dim, 0.0);
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(dim);
  std::vector<double> p(dim);
  std::vector<double> ap(dim);
  const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bnorm == 0.0) return x;
  for (std::size_t i = 0; i < dim; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  for (std::size_t it = 0; it < max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    if (!(pap > 0.0)) {
      throw NumericalError("stiffness matrix is not positive definite: CG curvature " +
                           std::to_string(pap) + " at iteration " + std::to_string(it));
    }
    const double alpha = rz / pap;
    double rnorm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rnorm2 += r[i] * r[i];
    }
    if (std::sqrt(rnorm2) <= tol * bnorm) break;
    for (std::size_t i = 0; i < dim; ++i) z[i] = r[i] / diag[i];
    const double rz_next = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < dim; ++i) p[i] = z[i] + beta * p[i];
  }
  return x;
}

const std::vector<double>& solve_classical(GridSystem& sys) {
  if (sys.spec.qubits <= kMaxBandedQubits) {
    sys.u_ref = solve_banded_cholesky(sys.stiffness, sys.load);
    sys.solver = "banded-cholesky";
  } else {
    sys.u_ref = solve_pcg(sys.stiffness, sys.load, 1e-13, 20 * sys.stiffness.rows());
    sys.solver = "jacobi-pcg";
  }
  sys.residual = relative_residual(sys.stiffness, sys.u_ref, sys.load);
  sys.e_ref = -0.5 * std::inner_product(sys.load.begin(), sys.load.end(), sys.u_ref.begin(), 0.0);
  return sys.u_ref;
}

GridSystem build_problem(const GridSpec& spec, const BoundarySpec& bc) {
  GridSystem sys = assemble(spec, bc);
  solve_classical(sys);
  return sys;
}

namespace detail {
std::size_t checked_coarse_qubits(std::size_t length) {
  if (length == 0 || (length & (length - 1)) != 0) {
    throw std::invalid_argument("prolong: length must be a power of 8");
  }
  const auto qubits = static_cast<std::size_t>(std::countr_zero(length));
  if (qubits % 3 != 0) throw std::invalid_argument("prolong: length must be a power of 8");
  return qubits;
}
}  // namespace detail

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonzeros() << '\n';
  out << std::setprecision(17);
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto vals = m.values();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      out << r + 1 << ' ' << ci[k] + 1 << ' ' << vals[k] << '\n';
    }
  }
}

void write_matrix_market(std::ostream& out, std::span<const double> v) {
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  out << std::setprecision(17);
  for (double x : v) out << x << '\n';
}

}  // namespace cvqa::fem
