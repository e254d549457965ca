#include "orbitlet/sampled.hpp"

#include "orbitlet/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace orbitlet {

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (int c : counts) n *= static_cast<std::size_t>(std::max(c, 0));
  return n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (double s : spacing) v *= s;
  return v;
}

void Grid::validate() const {
  if (counts.empty()) throw ParseError("grid needs at least one axis");
  if (origin.size() != counts.size() || spacing.size() != counts.size())
    throw DimensionMismatch("grid origin, spacing and counts differ in length");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 2) throw ParseError("grid counts must be at least 2 per axis");
    if (!(spacing[i] > 0.0) || !std::isfinite(spacing[i])) throw ParseError("grid spacing must be positive");
    if (!std::isfinite(origin[i])) throw ParseError("grid origin must be finite");
  }
}

std::vector<int> Grid::unravel(std::size_t flat) const {
  std::vector<int> idx(counts.size());
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % counts[a]);
    flat /= counts[a];
  }
  return idx;
}

std::size_t Grid::ravel(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) flat = flat * counts[a] + idx[a];
  return flat;
}

Eigen::VectorXd Grid::point(std::size_t flat) const {
  Eigen::VectorXd x(dim());
  for (int a = dim() - 1; a >= 0; --a) {
    x[a] = origin[a] + spacing[a] * static_cast<double>(flat % counts[a]);
    flat /= counts[a];
  }
  return x;
}

bool Grid::compatible(const Grid& o, double tol) const {
  if (o.counts != counts) return false;
  for (int a = 0; a < dim(); ++a)
    if (std::abs(o.origin[a] - origin[a]) > tol * (1 + std::abs(origin[a])) ||
        std::abs(o.spacing[a] - spacing[a]) > tol * spacing[a])
      return false;
  return true;
}

Grid Grid::centered(int d, int n, double half_width) {
  Grid g;
  const double h = 2.0 * half_width / n;
  g.origin.assign(d, -half_width);
  g.spacing.assign(d, h);
  g.counts.assign(d, n);
  return g;
}

void SampledFunction::validate() const {
  grid.validate();
  if (values.size() != grid.size()) throw DimensionMismatch("value count does not match the grid");
}

double SampledFunction::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * grid.cell_volume());
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::is_arithmetic_v<T>);
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
  } else {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ParseError("binary grid file is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

std::vector<double> parse_numbers(const std::string& rest, const char* what) {
  std::istringstream is(rest);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) throw ParseError(std::string("bad number in grid header field '") + what + "'");
  return out;
}

}  // namespace

void write_csv(const SampledFunction& f, const std::filesystem::path& path) {
  f.validate();
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  os << std::setprecision(17);
  os << "# orbitlet-grid dim=" << f.grid.dim() << " complex=" << (f.complex_valued ? 1 : 0) << "\n";
  os << "# origin";
  for (double v : f.grid.origin) os << ' ' << v;
  os << "\n# spacing";
  for (double v : f.grid.spacing) os << ' ' << v;
  os << "\n# counts";
  for (int v : f.grid.counts) os << ' ' << v;
  os << '\n';
  for (const auto& v : f.values) {
    os << v.real();
    if (f.complex_valued) os << ',' << v.imag();
    os << '\n';
  }
}

SampledFunction read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  SampledFunction f;
  std::string line;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls, rest);
      if (key == "orbitlet-grid") {
        have_header = true;
        f.complex_valued = rest.find("complex=1") != std::string::npos;
      } else if (key == "origin") {
        f.grid.origin = parse_numbers(rest, "origin");
      } else if (key == "spacing") {
        f.grid.spacing = parse_numbers(rest, "spacing");
      } else if (key == "counts") {
        for (double c : parse_numbers(rest, "counts")) f.grid.counts.push_back(static_cast<int>(c));
      }
      continue;
    }
    if (!have_header) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": missing '# orbitlet-grid' header");
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double re = 0.0, im = 0.0;
    if (!(ls >> re)) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected a number");
    ls >> im;
    f.values.emplace_back(re, im);
  }
  if (!have_header) throw ParseError(path.string() + ": missing '# orbitlet-grid' header");
  f.validate();
  return f;
}

void write_binary(const SampledFunction& f, const std::filesystem::path& path) {
  f.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  os.write("ORBF", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim()));
  put<std::uint32_t>(os, f.complex_valued ? 1 : 0);
  for (int a = 0; a < f.grid.dim(); ++a) {
    put<double>(os, f.grid.origin[a]);
    put<double>(os, f.grid.spacing[a]);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(f.grid.counts[a]));
  }
  for (const auto& v : f.values) {
    put<double>(os, v.real());
    if (f.complex_valued) put<double>(os, v.imag());
  }
}

SampledFunction read_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "ORBF", 4) != 0) throw ParseError(path.string() + ": not an ORBF file");
  if (get<std::uint32_t>(is) != 1) throw ParseError(path.string() + ": unsupported ORBF version");
  const auto d = get<std::uint32_t>(is);
  if (d == 0 || d > 16) throw ParseError(path.string() + ": implausible dimension");
  SampledFunction f;
  f.complex_valued = get<std::uint32_t>(is) != 0;
  for (std::uint32_t a = 0; a < d; ++a) {
    f.grid.origin.push_back(get<double>(is));
    f.grid.spacing.push_back(get<double>(is));
    f.grid.counts.push_back(static_cast<int>(get<std::uint64_t>(is)));
  }
  f.grid.validate();
  f.values.resize(f.grid.size());
  for (auto& v : f.values) {
    const double re = get<double>(is);
    v = {re, f.complex_valued ? get<double>(is) : 0.0};
  }
  return f;
}

SampledFunction read_sampled(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? read_csv(path) : read_binary(path);
}

void write_sampled(const SampledFunction& f, const std::filesystem::path& path) {
  if (path.extension() == ".csv")
    write_csv(f, path);
  else
    write_binary(f, path);
}

}  // namespace orbitlet
