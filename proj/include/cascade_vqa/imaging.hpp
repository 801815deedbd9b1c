#pragma once

// 2D slices of the temperature field encoded in a statevector.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cascade_vqa/fem_grid.hpp"
#include "cascade_vqa/qsim.hpp"
#include "cascade_vqa/vqa/cost.hpp"

namespace cvqa::imaging {

/// values is row-major (rows x cols). For a z slice rows run along y and columns
/// along x; for y, rows along z and columns along x; for x, rows along z and columns along y.
struct SliceImage {
  fem::Axis axis = fem::Axis::Z;
  int layer = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;
  double discarded_imag = 0.0;  // |Im psi|^2 / |psi|^2 over the whole state

  double at(int row, int col) const { return values[static_cast<std::size_t>(row * cols + col)]; }
};

enum class ImageFormat { Csv, Pgm };

ImageFormat parse_format(std::string_view name);
std::string_view format_name(ImageFormat format);

/// Temperatures r_opt(psi) * Re(psi) on one grid plane.
SliceImage extract_slice(const qsim::Statevector& psi, const vqa::CostContext& ctx,
                         fem::Axis axis, int layer);

/// Same plane taken from a plain nodal vector (e.g. the classical solution).
SliceImage extract_slice(const std::vector<double>& nodal, int nodes_per_axis, fem::Axis axis,
                         int layer);

/// Separable Lanczos-3 resampling to (factor*rows) x (factor*cols).
SliceImage upsample_lanczos3(const SliceImage& img, int factor);

double lanczos3(double x);

/// Pearson correlation of two equally sized slices.
double correlation(const SliceImage& a, const SliceImage& b);

void write_csv(std::ostream& out, const SliceImage& img);
std::vector<std::vector<double>> read_csv(std::istream& in);

/// Binary 16-bit P5 after min-max normalization; a constant image maps to mid gray.
void write_pgm(std::ostream& out, const SliceImage& img);

/// Writes `path` in the given format, resampling by `upsample` first when it exceeds 1.
void export_slice(const std::string& path, const SliceImage& img, ImageFormat format,
                  int upsample = 1);

}  // namespace cvqa::imaging
