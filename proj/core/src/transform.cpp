#include "orbitlet/transform.hpp"

#include "orbitlet/error.hpp"
#include "orbitlet/parallel.hpp"

#include <boost/math/tools/minima.hpp>
#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <memory>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numbers>

namespace orbitlet::transform {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// fftw_malloc'd buffer so every array shares the planner's alignment.
class Buffer {
 public:
  explicit Buffer(std::size_t n) : n_(n), p_(static_cast<Complex*>(fftw_malloc(sizeof(Complex) * n))) {
    if (!p_) throw std::bad_alloc();
    std::fill(p_, p_ + n_, Complex(0.0));
  }
  ~Buffer() { fftw_free(p_); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  Complex* data() { return p_; }
  const Complex* data() const { return p_; }
  Complex& operator[](std::size_t i) { return p_[i]; }
  std::size_t size() const { return n_; }
  void zero() { std::fill(p_, p_ + n_, Complex(0.0)); }

 private:
  std::size_t n_;
  Complex* p_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// In-place forward/backward plans over the zero-padded box of size 2N per axis.
class Plans {
 public:
  explicit Plans(const std::vector<int>& padded) : dims_(padded) {
    total_ = 1;
    for (int n : dims_) total_ *= static_cast<std::size_t>(n);
    Buffer probe(total_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), as_fftw(probe.data()), as_fftw(probe.data()),
                         FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(), as_fftw(probe.data()), as_fftw(probe.data()),
                         FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
  void forward(Buffer& b) const { fftw_execute_dft(fwd_, as_fftw(b.data()), as_fftw(b.data())); }
  void backward(Buffer& b) const { fftw_execute_dft(bwd_, as_fftw(b.data()), as_fftw(b.data())); }
  std::size_t total() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

 private:
  std::vector<int> dims_;
  std::size_t total_ = 1;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// Samples of k_h(z) = |det h|^{-1/2} psi(h^{-1} z) at lattice offsets z = m * spacing.
struct Kernel {
  std::vector<int> lo, hi;  // offset box, inclusive
  std::vector<double> values;

  std::size_t index(const std::vector<int>& m) const {
    std::size_t k = 0;
    for (std::size_t a = 0; a < lo.size(); ++a) k = k * (hi[a] - lo[a] + 1) + (m[a] - lo[a]);
    return k;
  }
};

template <class F>
void for_each_offset(const std::vector<int>& lo, const std::vector<int>& hi, F&& f) {
  const int d = static_cast<int>(lo.size());
  for (int a = 0; a < d; ++a)
    if (hi[a] < lo[a]) return;
  std::vector<int> m = lo;
  while (true) {
    f(m);
    int a = d - 1;
    while (a >= 0 && ++m[a] > hi[a]) m[a] = lo[a], --a;
    if (a < 0) return;
  }
}

Kernel make_kernel(const Atom& psi, const Matrix& h, const Grid& g) {
  const int d = g.dim();
  const double det = h.determinant();
  if (det == 0.0 || !std::isfinite(det)) throw SingularElement("dilation matrix is singular");
  const Matrix hinv = h.inverse();
  const double amp = 1.0 / std::sqrt(std::abs(det));
  // Bounding box of h * supp(psi).
  Vector bmin = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector bmax = -bmin;
  for (int corner = 0; corner < (1 << d); ++corner) {
    Vector c(d);
    for (int a = 0; a < d; ++a) c[a] = (corner >> a) & 1 ? psi.base.axes[a].hi : psi.base.axes[a].lo;
    const Vector z = h * c;
    bmin = bmin.cwiseMin(z);
    bmax = bmax.cwiseMax(z);
  }
  Kernel k;
  k.lo.resize(d);
  k.hi.resize(d);
  for (int a = 0; a < d; ++a) {
    const int lim = g.counts[a] - 1;
    k.lo[a] = std::max(-lim, static_cast<int>(std::ceil(bmin[a] / g.spacing[a] - 1e-9)));
    k.hi[a] = std::min(lim, static_cast<int>(std::floor(bmax[a] / g.spacing[a] + 1e-9)));
  }
  std::size_t n = 1;
  for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(std::max(0, k.hi[a] - k.lo[a] + 1));
  k.values.assign(n, 0.0);
  Vector z(d);
  std::size_t idx = 0;
  for_each_offset(k.lo, k.hi, [&](const std::vector<int>& m) {
    for (int a = 0; a < d; ++a) z[a] = m[a] * g.spacing[a];
    k.values[idx++] = amp * psi.value(Vector(hinv * z));
  });
  return k;
}

std::vector<int> padded_dims(const Grid& g) {
  std::vector<int> p(g.dim());
  for (int a = 0; a < g.dim(); ++a) p[a] = 2 * g.counts[a];
  return p;
}

std::size_t wrap_index(const std::vector<int>& m, const std::vector<int>& dims, int sign) {
  std::size_t k = 0;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    int v = (sign * m[a]) % dims[a];
    if (v < 0) v += dims[a];
    k = k * dims[a] + v;
  }
  return k;
}

// Copies a grid-shaped array into the corner of the padded box.
void embed(const std::vector<Complex>& src, const Grid& g, Buffer& dst, const std::vector<int>& dims) {
  dst.zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto idx = g.unravel(i);
    std::size_t k = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) k = k * dims[a] + idx[a];
    dst[k] = src[i];
  }
}

void extract(const Buffer& src, const Grid& g, const std::vector<int>& dims, double scale, std::vector<Complex>& out) {
  out.resize(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto idx = g.unravel(i);
    std::size_t k = 0;
    for (std::size_t a = 0; a < dims.size(); ++a) k = k * dims[a] + idx[a];
    out[i] = src.data()[k] * scale;
  }
}

bool use_fft(Method m) { return m != Method::Direct; }

constexpr std::size_t kBlock = 16;  // dilations per reduction block

}  // namespace

void TransformGrid::validate() const {
  translations.validate();
  if (dilations.empty()) throw ParseError("transform grid has no dilation samples");
  for (const auto& s : dilations) {
    if (s.h.rows() != translations.dim() || s.h.cols() != translations.dim())
      throw DimensionMismatch("dilation size differs from translation grid dimension");
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) throw ParseError("dilation weight must be finite and nonnegative");
  }
}

void CoefficientField::validate() const {
  TransformGrid{translations, dilations}.validate();
  if (values.size() != dilations.size()) throw DimensionMismatch("coefficient rows differ from dilation count");
  for (const auto& row : values) {
    if (row.size() != translations.size()) throw DimensionMismatch("coefficient row length differs from grid size");
    for (const auto& v : row)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NonConvergence("non-finite coefficient");
  }
}

TransformGrid make_transform_grid(const GroupSpec& spec, const Grid& translations, const DilationSampling& s) {
  translations.validate();
  if (translations.dim() != spec.dim()) throw DimensionMismatch("translation grid dimension differs from group dimension");
  if (s.scale_points < 2 || s.shear_points < 2 || s.angle_points < 1 || !(s.scale_range > 0) || !(s.shear_range > 0))
    throw ParseError("dilation sampling needs at least two points per axis and positive ranges");
  const groups::HaarChart chart = groups::haar_chart(spec);
  if (!chart.has_density) throw UnsupportedInput("no Haar density in the parameter chart of this group");

  struct Axis1 {
    std::vector<double> nodes, weights;
  };
  auto trapezoid = [](double lo, double hi, int n) {
    Axis1 a;
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      a.nodes.push_back(lo + i * h);
      a.weights.push_back((i == 0 || i == n - 1) ? 0.5 * h : h);
    }
    return a;
  };
  std::vector<Axis1> axes;
  for (const auto& ax : chart.axes) {
    switch (ax.role) {
      case groups::AxisRole::Scale: axes.push_back(trapezoid(-s.scale_range, s.scale_range, s.scale_points)); break;
      case groups::AxisRole::Shear: axes.push_back(trapezoid(-s.shear_range, s.shear_range, s.shear_points)); break;
      case groups::AxisRole::Angle: {
        Axis1 a;
        const double h = 2.0 * std::numbers::pi / s.angle_points;
        for (int i = 0; i < s.angle_points; ++i) a.nodes.push_back(i * h), a.weights.push_back(h);
        axes.push_back(a);
        break;
      }
    }
  }
  TransformGrid tg{translations, {}};
  const int patterns = s.both_signs ? chart.sign_patterns : 1;
  std::vector<int> lo(axes.size(), 0), hi(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) hi[a] = static_cast<int>(axes[a].nodes.size()) - 1;
  std::vector<double> p(axes.size());
  for (int pat = 0; pat < patterns; ++pat) {
    auto add = [&](const std::vector<int>& idx) {
      double w = 1.0;
      for (std::size_t a = 0; a < axes.size(); ++a) p[a] = axes[a].nodes[idx[a]], w *= axes[a].weights[idx[a]];
      tg.dilations.push_back({chart.element(pat, p).matrix, w * chart.density(p)});
    };
    if (axes.empty())
      add({});
    else
      for_each_offset(lo, hi, add);
  }
  return tg;
}

SampledFunction quasi_regular_apply(const Vector& x, const Matrix& h, const Atom& psi, const Grid& grid) {
  grid.validate();
  if (x.size() != grid.dim() || h.rows() != grid.dim() || psi.dim() != grid.dim())
    throw DimensionMismatch("translation, dilation and grid dimensions differ");
  const double det = h.determinant();
  if (det == 0.0 || !std::isfinite(det)) throw SingularElement("dilation matrix is singular");
  const Matrix hinv = h.inverse();
  const double amp = 1.0 / std::sqrt(std::abs(det));
  SampledFunction out{grid, std::vector<Complex>(grid.size()), false};
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = amp * psi.value(Vector(hinv * (grid.point(i) - x)));
  return out;
}

CoefficientField analyze(const SampledFunction& f, const Atom& psi, const TransformGrid& grid,
                         const TransformOptions& opts) {
  f.validate();
  grid.validate();
  if (!f.grid.compatible(grid.translations)) throw DimensionMismatch("signal grid does not match the translation grid");
  if (psi.dim() != f.grid.dim()) throw DimensionMismatch("atom dimension differs from signal dimension");
  const Grid& g = f.grid;
  const double dv = g.cell_volume();
  CoefficientField out{g, grid.dilations, std::vector<std::vector<Complex>>(grid.dilations.size())};

  if (!use_fft(opts.method)) {
    parallel_for(grid.dilations.size(), opts.threads, [&](std::size_t j) {
      const Kernel k = make_kernel(psi, grid.dilations[j].h, g);
      auto& w = out.values[j];
      w.assign(g.size(), 0.0);
      std::vector<int> shifted(g.dim());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        Complex acc = 0.0;
        std::size_t ki = 0;
        for_each_offset(k.lo, k.hi, [&](const std::vector<int>& m) {
          const double kv = k.values[ki++];
          if (kv == 0.0) return;
          for (int a = 0; a < g.dim(); ++a) {
            shifted[a] = idx[a] + m[a];
            if (shifted[a] < 0 || shifted[a] >= g.counts[a]) return;
          }
          acc += f.values[g.ravel(shifted)] * kv;
        });
        w[i] = acc * dv;
      }
    });
    return out;
  }

  const std::vector<int> dims = padded_dims(g);
  const Plans plans(dims);
  Buffer fhat(plans.total());
  embed(f.values, g, fhat, dims);
  plans.forward(fhat);
  parallel_for(grid.dilations.size(), opts.threads, [&](std::size_t j) {
    const Kernel k = make_kernel(psi, grid.dilations[j].h, g);
    Buffer buf(plans.total());
    // W = f * g with g[-m] = conj(k[m]); k is real.
    std::size_t ki = 0;
    for_each_offset(k.lo, k.hi, [&](const std::vector<int>& m) { buf[wrap_index(m, dims, -1)] = k.values[ki++]; });
    plans.forward(buf);
    for (std::size_t q = 0; q < buf.size(); ++q) buf[q] *= fhat[q];
    plans.backward(buf);
    extract(buf, g, dims, dv / static_cast<double>(plans.total()), out.values[j]);
  });
  return out;
}

SampledFunction synthesize(const CoefficientField& coeffs, const Atom& psi, double c_psi, const TransformOptions& opts) {
  if (!(c_psi > 0.0) || !std::isfinite(c_psi)) throw ParseError("c_psi must be positive");
  coeffs.validate();
  const Grid& g = coeffs.translations;
  if (psi.dim() != g.dim()) throw DimensionMismatch("atom dimension differs from coefficient grid");
  const double dv = g.cell_volume();
  const std::size_t nd = coeffs.dilations.size();
  const std::size_t blocks = (nd + kBlock - 1) / kBlock;
  auto mu = [&](std::size_t j) {
    return coeffs.dilations[j].weight / std::abs(coeffs.dilations[j].h.determinant());
  };
  SampledFunction out{g, std::vector<Complex>(g.size(), 0.0), true};

  if (!use_fft(opts.method)) {
    std::vector<std::vector<Complex>> partial(blocks, std::vector<Complex>(g.size(), 0.0));
    parallel_for(blocks, opts.threads, [&](std::size_t b) {
      std::vector<int> src(g.dim());
      for (std::size_t j = b * kBlock; j < std::min(nd, (b + 1) * kBlock); ++j) {
        const Kernel k = make_kernel(psi, coeffs.dilations[j].h, g);
        const double scale = mu(j) * dv;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto idx = g.unravel(i);
          Complex acc = 0.0;
          std::size_t ki = 0;
          for_each_offset(k.lo, k.hi, [&](const std::vector<int>& m) {
            const double kv = k.values[ki++];
            if (kv == 0.0) return;
            for (int a = 0; a < g.dim(); ++a) {
              src[a] = idx[a] - m[a];
              if (src[a] < 0 || src[a] >= g.counts[a]) return;
            }
            acc += coeffs.values[j][g.ravel(src)] * kv;
          });
          partial[b][i] += acc * scale;
        }
      }
    });
    for (const auto& p : partial)
      for (std::size_t i = 0; i < g.size(); ++i) out.values[i] += p[i];
  } else {
    const std::vector<int> dims = padded_dims(g);
    const Plans plans(dims);
    std::vector<std::unique_ptr<Buffer>> partial(blocks);
    parallel_for(blocks, opts.threads, [&](std::size_t b) {
      partial[b] = std::make_unique<Buffer>(plans.total());
      Buffer wbuf(plans.total()), kbuf(plans.total());
      for (std::size_t j = b * kBlock; j < std::min(nd, (b + 1) * kBlock); ++j) {
        const Kernel k = make_kernel(psi, coeffs.dilations[j].h, g);
        embed(coeffs.values[j], g, wbuf, dims);
        plans.forward(wbuf);
        kbuf.zero();
        std::size_t ki = 0;
        for_each_offset(k.lo, k.hi, [&](const std::vector<int>& m) { kbuf[wrap_index(m, dims, 1)] = k.values[ki++]; });
        plans.forward(kbuf);
        const double scale = mu(j);
        for (std::size_t q = 0; q < kbuf.size(); ++q) (*partial[b])[q] += scale * wbuf[q] * kbuf[q];
      }
    });
    Buffer acc(plans.total());
    for (const auto& p : partial)
      for (std::size_t q = 0; q < acc.size(); ++q) acc[q] += (*p)[q];
    plans.backward(acc);
    extract(acc, g, dims, dv / static_cast<double>(plans.total()), out.values);
  }
  for (auto& v : out.values) v /= c_psi;
  return out;
}

double calderon_sum(const Atom& psi, const std::vector<DilationSample>& dilations, const Vector& xi) {
  double s = 0.0;
  for (const auto& d : dilations) s += d.weight * std::norm(psi.spectrum(Vector(d.h.transpose() * xi)));
  return s;
}

double c_psi(const GroupSpec& spec, const Atom& psi, const TransformGrid& grid) {
  grid.validate();
  // The truncated sum is flat only near the middle of the sampled range, so take its maximum
  // along the ray through the base point: a coarse log scan refined by Brent's method.
  const Vector xi0 = groups::base_point(spec);
  auto neg = [&](double u) { return -calderon_sum(psi, grid.dilations, Vector(std::exp(u) * xi0)); };
  double best_u = 0.0, best = 0.0;
  for (int k = -96; k <= 96; ++k) {
    const double u = k / 8.0, v = -neg(u);
    if (v > best) best = v, best_u = u;
  }
  const auto refined = boost::math::tools::brent_find_minima(neg, best_u - 0.125, best_u + 0.125, 40);
  const double c = std::max(best, -refined.second);
  if (!(c > 0.0)) throw NonConvergence("truncated admissibility constant vanishes on the sampled dilations");
  return c;
}

double coefficient_norm(const CoefficientField& coeffs, const GroupSpec& spec, const embeddedness::WeightSpec& w) {
  coeffs.validate();
  w.validate();
  const Grid& g = coeffs.translations;
  const double dv = g.cell_volume();
  const bool p_inf = std::isinf(w.p), q_inf = std::isinf(w.q);
  std::vector<double> xnorm(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) xnorm[i] = g.point(i).norm();
  double outer = 0.0;
  for (std::size_t j = 0; j < coeffs.dilations.size(); ++j) {
    const auto& ds = coeffs.dilations[j];
    const GroupElement h = groups::make_element(spec, ds.h);
    const double wh = embeddedness::base_weight(w, spec, h);
    const double hn = ds.h.rows() == 1 ? std::abs(ds.h(0, 0)) : Eigen::JacobiSVD<Matrix>(ds.h).singularValues()[0];
    double inner = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = std::pow(1.0 + xnorm[i] + hn, w.s) * wh;
      const double a = std::abs(coeffs.values[j][i]) * v;
      inner = p_inf ? std::max(inner, a) : inner + std::pow(a, w.p) * dv;
    }
    if (!p_inf) inner = std::pow(inner, 1.0 / w.p);
    const double mu = ds.weight / std::abs(ds.h.determinant());
    outer = q_inf ? std::max(outer, inner) : outer + std::pow(inner, w.q) * mu;
  }
  return q_inf ? outer : std::pow(outer, 1.0 / w.q);
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "ORBC writer assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ParseError("coefficient file is truncated");
  return v;
}

}  // namespace

void write_coefficients(const CoefficientField& c, const std::filesystem::path& path) {
  c.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open " + path.string() + " for writing");
  const int d = c.translations.dim();
  os.write("ORBC", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  put<std::uint64_t>(os, c.dilations.size());
  for (int a = 0; a < d; ++a) {
    put<double>(os, c.translations.origin[a]);
    put<double>(os, c.translations.spacing[a]);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(c.translations.counts[a]));
  }
  for (const auto& s : c.dilations) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) put<double>(os, s.h(i, j));
    put<double>(os, s.weight);
  }
  for (const auto& row : c.values)
    for (const auto& v : row) put<double>(os, v.real()), put<double>(os, v.imag());
}

CoefficientField read_coefficients(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "ORBC", 4) != 0) throw ParseError(path.string() + ": not an ORBC file");
  if (get<std::uint32_t>(is) != 1) throw ParseError(path.string() + ": unsupported ORBC version");
  const auto d = static_cast<int>(get<std::uint32_t>(is));
  const auto nd = get<std::uint64_t>(is);
  if (d < 1 || d > 16 || nd > (1ULL << 32)) throw ParseError(path.string() + ": implausible header");
  CoefficientField c;
  for (int a = 0; a < d; ++a) {
    c.translations.origin.push_back(get<double>(is));
    c.translations.spacing.push_back(get<double>(is));
    c.translations.counts.push_back(static_cast<int>(get<std::uint64_t>(is)));
  }
  c.translations.validate();
  for (std::uint64_t j = 0; j < nd; ++j) {
    DilationSample s{Matrix(d, d), 0.0};
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) s.h(i, k) = get<double>(is);
    s.weight = get<double>(is);
    c.dilations.push_back(std::move(s));
  }
  c.values.assign(nd, std::vector<Complex>(c.translations.size()));
  for (auto& row : c.values)
    for (auto& v : row) {
      const double re = get<double>(is);
      v = {re, get<double>(is)};
    }
  c.validate();
  return c;
}

}  // namespace orbitlet::transform
