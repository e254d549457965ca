#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace orbitlet {

// Uniform rectangular grid; points are origin + index * spacing, last axis fastest.
struct Grid {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<int> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  std::size_t size() const;
  double cell_volume() const;
  void validate() const;
  std::vector<int> unravel(std::size_t flat) const;
  std::size_t ravel(const std::vector<int>& idx) const;
  Eigen::VectorXd point(std::size_t flat) const;
  bool compatible(const Grid& other, double tol = 1e-12) const;

  static Grid centered(int d, int n, double half_width);
};

struct SampledFunction {
  Grid grid;
  std::vector<std::complex<double>> values;
  bool complex_valued = false;

  void validate() const;
  double l2_norm() const;
};

// CSV: "# orbitlet-grid" header lines followed by one value per line (re[,im]).
void write_csv(const SampledFunction& f, const std::filesystem::path& path);
SampledFunction read_csv(const std::filesystem::path& path);

// Binary: "ORBF", u32 version, u32 dim, u32 complex flag, then per axis (f64 origin, f64 spacing,
// u64 count), then little-endian f64 values in row-major order (re, im interleaved when complex).
void write_binary(const SampledFunction& f, const std::filesystem::path& path);
SampledFunction read_binary(const std::filesystem::path& path);

// Dispatches on extension: .csv is CSV, everything else binary.
SampledFunction read_sampled(const std::filesystem::path& path);
void write_sampled(const SampledFunction& f, const std::filesystem::path& path);

}  // namespace orbitlet
