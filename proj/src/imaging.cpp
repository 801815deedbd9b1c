#include "cascade_vqa/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cascade_vqa/errors.hpp"

namespace cvqa::imaging {

namespace {

std::size_t node_index(std::size_t n, fem::Axis axis, int layer, int row, int col) {
  const auto l = static_cast<std::size_t>(layer);
  const auto r = static_cast<std::size_t>(row);
  const auto c = static_cast<std::size_t>(col);
  switch (axis) {
    case fem::Axis::Z: return l * n * n + r * n + c;  // (x, y) = (c, r)
    case fem::Axis::Y: return r * n * n + l * n + c;  // (x, z) = (c, r)
    case fem::Axis::X: return r * n * n + c * n + l;  // (y, z) = (c, r)
  }
  return 0;
}

void check_layer(int layer, int n) {
  if (layer < 0 || layer >= n) {
    throw ConfigError("layer " + std::to_string(layer) + " out of range [0, " +
                      std::to_string(n) + ")");
  }
}

std::vector<double> resample_1d(std::span<const double> src, std::size_t stride,
                                std::size_t count, int factor) {
  const int len = static_cast<int>(count);
  std::vector<double> out(count * static_cast<std::size_t>(factor));
  for (std::size_t o = 0; o < out.size(); ++o) {
    const double x = (static_cast<double>(o) + 0.5) / factor - 0.5;
    const int base = static_cast<int>(std::floor(x));
    double acc = 0.0;
    double wsum = 0.0;
    for (int k = base - 2; k <= base + 3; ++k) {
      const double w = lanczos3(x - k);
      const int idx = std::clamp(k, 0, len - 1);
      acc += w * src[static_cast<std::size_t>(idx) * stride];
      wsum += w;
    }
    out[o] = acc / wsum;
  }
  return out;
}

}  // namespace

ImageFormat parse_format(std::string_view name) {
  if (name == "csv") return ImageFormat::Csv;
  if (name == "pgm") return ImageFormat::Pgm;
  throw ConfigError("unknown image format '" + std::string(name) + "' (expected csv or pgm)");
}

std::string_view format_name(ImageFormat format) {
  return format == ImageFormat::Csv ? "csv" : "pgm";
}

SliceImage extract_slice(const std::vector<double>& nodal, int nodes_per_axis, fem::Axis axis,
                         int layer) {
  const auto n = static_cast<std::size_t>(nodes_per_axis);
  if (nodal.size() != n * n * n) throw ConfigError("nodal vector does not match the grid size");
  check_layer(layer, nodes_per_axis);
  SliceImage img;
  img.axis = axis;
  img.layer = layer;
  img.rows = img.cols = nodes_per_axis;
  img.values.resize(n * n);
  for (int r = 0; r < nodes_per_axis; ++r) {
    for (int c = 0; c < nodes_per_axis; ++c) {
      img.values[static_cast<std::size_t>(r) * n + static_cast<std::size_t>(c)] =
          nodal[node_index(n, axis, layer, r, c)];
    }
  }
  return img;
}

SliceImage extract_slice(const qsim::Statevector& psi, const vqa::CostContext& ctx,
                         fem::Axis axis, int layer) {
  if (psi.qubits() != ctx.qubits()) {
    throw ConfigError("state has " + std::to_string(psi.qubits()) + " qubits but the grid has " +
                      std::to_string(ctx.qubits()));
  }
  const double scale = vqa::r_opt(psi, ctx);
  std::vector<double> nodal(psi.size());
  double imag2 = 0.0;
  double total2 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    nodal[i] = scale * psi[i].real();
    imag2 += psi[i].imag() * psi[i].imag();
    total2 += std::norm(psi[i]);
  }
  SliceImage img =
      extract_slice(nodal, static_cast<int>(ctx.spec().nodes_per_axis()), axis, layer);
  img.discarded_imag = total2 > 0.0 ? imag2 / total2 : 0.0;
  return img;
}

double lanczos3(double x) {
  constexpr double a = 3.0;
  x = std::abs(x);
  if (x < 1e-12) return 1.0;
  if (x >= a) return 0.0;
  const double px = std::numbers::pi * x;
  return a * std::sin(px) * std::sin(px / a) / (px * px);
}

SliceImage upsample_lanczos3(const SliceImage& img, int factor) {
  if (factor < 1) throw ConfigError("upsample factor must be at least 1");
  if (factor == 1) return img;
  const auto rows = static_cast<std::size_t>(img.rows);
  const auto cols = static_cast<std::size_t>(img.cols);
  const auto f = static_cast<std::size_t>(factor);

  std::vector<double> wide(rows * cols * f);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto line = resample_1d(std::span(img.values).subspan(r * cols), 1, cols, factor);
    std::copy(line.begin(), line.end(), wide.begin() + static_cast<std::ptrdiff_t>(r * cols * f));
  }
  SliceImage out = img;
  out.rows = img.rows * factor;
  out.cols = img.cols * factor;
  out.values.assign(rows * f * cols * f, 0.0);
  for (std::size_t c = 0; c < cols * f; ++c) {
    const auto column = resample_1d(std::span(wide).subspan(c), cols * f, rows, factor);
    for (std::size_t r = 0; r < column.size(); ++r) out.values[r * cols * f + c] = column[r];
  }
  return out;
}

double correlation(const SliceImage& a, const SliceImage& b) {
  if (a.values.size() != b.values.size()) throw ConfigError("slices differ in size");
  const auto n = static_cast<double>(a.values.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    ma += a.values[i];
    mb += b.values[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double da = a.values[i] - ma;
    const double db = b.values[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

void write_csv(std::ostream& out, const SliceImage& img) {
  out << std::setprecision(17);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      if (c > 0) out << ',';
      out << img.at(r, c);
    }
    out << '\n';
  }
}

std::vector<std::vector<double>> read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_pgm(std::ostream& out, const SliceImage& img) {
  const auto [lo_it, hi_it] = std::minmax_element(img.values.begin(), img.values.end());
  const double lo = img.values.empty() ? 0.0 : *lo_it;
  const double range = img.values.empty() ? 0.0 : *hi_it - lo;
  out << "P5\n" << img.cols << ' ' << img.rows << "\n65535\n";
  for (double v : img.values) {
    const double t = range > 0.0 ? (v - lo) / range : 0.5;
    const auto g = static_cast<unsigned>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
    out.put(static_cast<char>((g >> 8) & 0xff));
    out.put(static_cast<char>(g & 0xff));
  }
}

void export_slice(const std::string& path, const SliceImage& img, ImageFormat format,
                  int upsample) {
  const SliceImage target = upsample > 1 ? upsample_lanczos3(img, upsample) : img;
  std::ofstream out(path, format == ImageFormat::Pgm ? std::ios::binary : std::ios::out);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  if (format == ImageFormat::Csv) {
    write_csv(out, target);
  } else {
    write_pgm(out, target);
  }
  out.flush();
  if (!out) throw std::ios_base::failure("failed writing " + path);
}

}  // namespace cvqa::imaging
