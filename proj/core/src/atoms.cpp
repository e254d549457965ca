#include "orbitlet/atoms.hpp"

#include "orbitlet/error.hpp"
#include "orbitlet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace orbitlet::atoms {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// All multi-indices of length d with entries summing to exactly m.
void compositions(int d, int m, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(m);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = m; k >= 0; --k) {
    cur.push_back(k);
    compositions(d, m - k, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> indices_below(int d, int r) {
  std::vector<std::vector<int>> out;
  for (int m = 0; m < r; ++m) {
    std::vector<int> cur;
    compositions(d, m, cur, out);
  }
  return out;
}

}  // namespace

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::FirstPartial: return "first-partial";
    case OperatorKind::MixedPartial: return "mixed-partial";
    case OperatorKind::Laplacian: return "laplacian";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "first-partial") return OperatorKind::FirstPartial;
  if (s == "mixed-partial") return OperatorKind::MixedPartial;
  if (s == "laplacian") return OperatorKind::Laplacian;
  throw ParseError("unknown differential operator '" + s + "'");
}

OperatorKind orbit_differential_operator(const GroupSpec& spec) {
  switch (orbit::orbit_of(spec).kind) {
    case orbit::OrbitKind::FirstCoordinateNonzero: return OperatorKind::FirstPartial;
    case orbit::OrbitKind::CoordinateCross: return OperatorKind::MixedPartial;
    case orbit::OrbitKind::PuncturedSpace: return OperatorKind::Laplacian;
    default: break;
  }
  throw UnsupportedInput("no differential operator for orbit kind " + orbit::to_string(orbit::orbit_of(spec).kind));
}

int DerivativePlan::order() const { return kind == OperatorKind::Laplacian ? 2 * power : power; }

std::vector<int> DerivativePlan::max_alpha() const {
  std::vector<int> m(dim, 0);
  for (const auto& t : terms)
    for (int a = 0; a < dim; ++a) m[a] = std::max(m[a], t.alpha[a]);
  return m;
}

Complex DerivativePlan::symbol(const Vector& xi) const {
  Complex s = 0.0;
  for (const auto& t : terms) {
    Complex p = t.coef;
    for (int a = 0; a < dim; ++a) p *= ipow(Complex(0.0, kTwoPi * xi[a]), t.alpha[a]);
    s += p;
  }
  return s;
}

DerivativePlan derivative_plan(OperatorKind kind, int dim, int r) {
  if (dim < 1) throw ParseError("dimension must be positive");
  if (r < 0) throw ParseError("moment order must be nonnegative");
  DerivativePlan p;
  p.kind = kind;
  p.dim = dim;
  switch (kind) {
    case OperatorKind::FirstPartial: {
      p.power = r;
      Term t{1.0, std::vector<int>(dim, 0)};
      t.alpha[0] = r;
      p.terms.push_back(t);
      break;
    }
    case OperatorKind::MixedPartial:
      p.power = r;
      p.terms.push_back({1.0, std::vector<int>(dim, r)});
      break;
    case OperatorKind::Laplacian: {
      p.power = (r + 1) / 2;
      std::vector<std::vector<int>> betas;
      std::vector<int> cur;
      compositions(dim, p.power, cur, betas);
      for (const auto& b : betas) {
        double coef = factorial(p.power);
        Term t{0.0, std::vector<int>(dim)};
        for (int a = 0; a < dim; ++a) {
          coef /= factorial(b[a]);
          t.alpha[a] = 2 * b[a];
        }
        t.coef = coef;
        p.terms.push_back(t);
      }
      break;
    }
  }
  return p;
}

SplineBase SplineBase::uniform(int dim, int degree, double lo, double hi) {
  if (dim < 1 || degree < 0 || !(hi > lo)) throw ParseError("invalid spline base");
  SplineBase b;
  b.axes.assign(dim, bspline::Scaled{degree, lo, hi});
  return b;
}

double Atom::factor(std::size_t term, int axis, double x) const {
  return base.axes[axis].derivative(plan.terms[term].alpha[axis], x);
}

Complex Atom::factor_spectrum(std::size_t term, int axis, double omega) const {
  return ipow(Complex(0.0, kTwoPi * omega), plan.terms[term].alpha[axis]) * base.axes[axis].spectrum(omega);
}

double Atom::value(const Vector& x) const {
  if (x.size() != dim()) throw DimensionMismatch("point dimension differs from atom dimension");
  if (!in_support(x)) return 0.0;
  double s = 0.0;
  for (std::size_t t = 0; t < plan.terms.size(); ++t) {
    double p = plan.terms[t].coef;
    for (int a = 0; a < dim() && p != 0.0; ++a) p *= factor(t, a, x[a]);
    s += p;
  }
  return s;
}

Complex Atom::spectrum(const Vector& xi) const {
  if (xi.size() != dim()) throw DimensionMismatch("frequency dimension differs from atom dimension");
  Complex f = 1.0;
  for (int a = 0; a < dim(); ++a) f *= base.axes[a].spectrum(xi[a]);
  return plan.symbol(xi) * f;
}

bool Atom::in_support(const Vector& x) const {
  for (int a = 0; a < dim(); ++a)
    if (x[a] < base.axes[a].lo || x[a] > base.axes[a].hi) return false;
  return true;
}

Atom make_atom(OperatorKind kind, int r, const SplineBase& base) {
  if (base.dim() < 1) throw ParseError("spline base has no axes");
  Atom a{base, derivative_plan(kind, base.dim(), r), r};
  const std::vector<int> need = a.plan.max_alpha();
  for (int i = 0; i < base.dim(); ++i) {
    const auto& ax = base.axes[i];
    if (!(ax.hi > ax.lo)) throw ParseError("spline support must be a nonempty interval");
    if (need[i] > 0 && ax.degree < need[i] + 1)
      throw UnsupportedInput("insufficient base smoothness: axis " + std::to_string(i) + " has degree " +
                             std::to_string(ax.degree) + " but needs at least " + std::to_string(need[i] + 1));
  }
  return a;
}

Atom make_atom(const GroupSpec& spec, int r, const SplineBase& base) {
  if (base.dim() != spec.dim()) throw DimensionMismatch("spline base dimension differs from group dimension");
  return make_atom(orbit_differential_operator(spec), r, base);
}

SampledFunction sample(const Atom& a, const Grid& g) {
  g.validate();
  if (g.dim() != a.dim()) throw DimensionMismatch("grid dimension differs from atom dimension");
  SampledFunction f{g, std::vector<Complex>(g.size()), false};
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = a.value(g.point(i));
  return f;
}

std::vector<std::pair<Vector, Vector>> complement_probes(const orbit::OrbitDescriptor& o) {
  const int d = o.dim;
  static const double near[] = {0.37, -0.61, 0.23, -0.44, 0.71, -0.17};
  static const double far[] = {4.1, -3.3, 2.9, -3.7, 3.1, -2.6};
  std::vector<std::pair<Vector, Vector>> out;
  switch (o.kind) {
    case orbit::OrbitKind::FirstCoordinateNonzero: {
      const Vector u = Vector::Unit(d, 0);
      out.emplace_back(Vector::Zero(d), u);
      for (int s = 0; s < 2 && d > 1; ++s) {
        Vector eta = Vector::Zero(d);
        for (int i = 1; i < d; ++i) eta[i] = near[(i - 1 + 3 * s) % 6];
        out.emplace_back(eta, u);
      }
      if (d > 1) {
        Vector eta = Vector::Zero(d);
        for (int i = 1; i < d; ++i) eta[i] = far[(i - 1) % 6];
        out.emplace_back(eta, u);
      }
      break;
    }
    case orbit::OrbitKind::PuncturedSpace:
      out.emplace_back(Vector::Zero(d), Vector::Ones(d).normalized());
      break;
    case orbit::OrbitKind::CoordinateCross:
      for (int i = 0; i < d; ++i) {
        Vector eta(d);
        for (int j = 0; j < d; ++j) eta[j] = j == i ? 0.0 : near[j % 6];
        out.emplace_back(eta, Vector::Unit(d, i));
      }
      break;
    default:
      throw UnsupportedInput("no complement probes for orbit kind " + orbit::to_string(o.kind));
  }
  return out;
}

namespace {

struct MomentValue {
  double value;
  double scale;
};

using Spectrum = std::function<Complex(const Vector&)>;
using Moment = std::function<MomentValue(const std::vector<int>&, const Vector&)>;

SpectrumProbe probe(const Spectrum& spec, const Moment& moment, const orbit::OrbitDescriptor& o, int r_claimed,
                    const ProbeOptions& opts) {
  if (opts.t_min_exp >= opts.t_max_exp) throw ParseError("probe range is empty");
  SpectrumProbe out;
  double min_slope = std::numeric_limits<double>::infinity();
  double max_res = 0.0;
  bool any = false;
  const auto probes = complement_probes(o);
  for (const auto& [eta, u] : probes) {
    ProbeLine line{eta, u, {}, {}, 0.0, 0.0, true};
    std::vector<double> lx, ly;
    for (int j = opts.t_min_exp; j <= opts.t_max_exp; ++j) {
      const double t = std::ldexp(1.0, j);
      const double m = std::abs(spec(Vector(eta + t * u)));
      line.t.push_back(t);
      line.magnitude.push_back(m);
      if (!(m > 0.0) || !std::isfinite(m)) line.usable = false;
      lx.push_back(std::log(t));
      ly.push_back(std::log(m));
    }
    if (line.usable) {
      const double n = static_cast<double>(lx.size());
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / n, my += ly[i] / n;
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
      line.slope = sxy / sxx;
      double rss = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (my + line.slope * (lx[i] - mx));
        rss += e * e;
      }
      line.residual = std::sqrt(rss / n);
      min_slope = std::min(min_slope, line.slope);
      max_res = std::max(max_res, line.residual);
      any = true;
    }
    out.lines.push_back(std::move(line));

    for (const auto& alpha : indices_below(o.dim, r_claimed)) {
      const MomentValue mv = moment(alpha, eta);
      MomentCheck mc{alpha, eta, mv.value, mv.scale, true};
      mc.pass = mv.value <= opts.moment_tol * mv.scale;
      out.moments_pass = out.moments_pass && mc.pass;
      out.moments.push_back(std::move(mc));
    }
  }
  out.fitted_order = any ? min_slope : 0.0;
  out.residual = max_res;
  if (!any || max_res > opts.residual_tol)
    out.verdict = "inconclusive";
  else if (out.fitted_order >= r_claimed - opts.slope_tol && out.moments_pass)
    out.verdict = "verified";
  else
    out.verdict = "failed";
  return out;
}

// Gauss-Legendre over each knot interval of a scaled spline; exact for polynomial integrands.
template <class F>
Complex spline_integral(const bspline::Scaled& s, F&& f) {
  const auto& rule = quadrature::gauss_legendre(20);
  const double h = s.step();
  Complex acc = 0.0;
  for (int j = 0; j <= s.degree; ++j) {
    const double a = s.lo + j * h, mid = a + 0.5 * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) acc += rule.weights[q] * 0.5 * h * f(mid + 0.5 * h * rule.nodes[q]);
  }
  return acc;
}

}  // namespace

SpectrumProbe verify_vanishing_moments(const Atom& psi, const orbit::OrbitDescriptor& o, int r_claimed,
                                       const ProbeOptions& opts) {
  if (o.dim != psi.dim()) throw DimensionMismatch("orbit dimension differs from atom dimension");
  auto moment = [&](const std::vector<int>& alpha, const Vector& eta) {
    Complex total = 0.0;
    double scale = 0.0;
    for (std::size_t t = 0; t < psi.plan.terms.size(); ++t) {
      Complex p = psi.plan.terms[t].coef;
      double s = std::abs(psi.plan.terms[t].coef);
      for (int a = 0; a < psi.dim(); ++a) {
        const auto& ax = psi.base.axes[a];
        p *= spline_integral(ax, [&](double x) {
          return std::pow(x, alpha[a]) * psi.factor(t, a, x) * std::polar(1.0, -kTwoPi * eta[a] * x);
        });
        s *= spline_integral(ax, [&](double x) { return Complex(std::pow(std::abs(x), alpha[a]) * std::abs(psi.factor(t, a, x))); })
                 .real();
      }
      total += p;
      scale += s;
    }
    return MomentValue{std::abs(total), scale};
  };
  return probe([&](const Vector& xi) { return psi.spectrum(xi); }, moment, o, r_claimed, opts);
}

SpectrumProbe verify_vanishing_moments(const SampledFunction& psi, const orbit::OrbitDescriptor& o, int r_claimed,
                                       ProbeOptions opts) {
  psi.validate();
  if (o.dim != psi.grid.dim()) throw DimensionMismatch("orbit dimension differs from sample dimension");
  // Riemann-sum spectra lose relative accuracy close to O^c; probe no closer than 2^-6.
  opts.t_min_exp = std::max(opts.t_min_exp, -6);
  opts.t_max_exp = std::max(opts.t_max_exp, opts.t_min_exp + 4);
  const double dv = psi.grid.cell_volume();
  const std::size_t n = psi.grid.size();
  std::vector<Vector> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = psi.grid.point(i);
  auto spectrum = [&](const Vector& xi) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += psi.values[i] * std::polar(1.0, -kTwoPi * xi.dot(pts[i]));
    return acc * dv;
  };
  auto moment = [&](const std::vector<int>& alpha, const Vector& eta) {
    Complex acc = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mono = 1.0;
      for (int a = 0; a < psi.grid.dim(); ++a) mono *= std::pow(pts[i][a], alpha[a]);
      acc += mono * psi.values[i] * std::polar(1.0, -kTwoPi * eta.dot(pts[i]));
      scale += std::abs(mono) * std::abs(psi.values[i]);
    }
    return MomentValue{std::abs(acc) * dv, scale * dv};
  };
  return probe(spectrum, moment, o, r_claimed, opts);
}

double orbit_density(const GroupSpec& spec, const Vector& xi) {
  return groups::modular_data(spec, orbit::orbit_section(spec, xi)).delta_g;
}

std::string to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::Finite: return "finite";
    case TailVerdict::Divergent: return "divergent";
    case TailVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

TailVerdict judge_tail(const std::vector<double>& c, const AdmissibilityOptions& opts) {
  const int n = static_cast<int>(c.size());
  if (n < opts.window + 1) return TailVerdict::Inconclusive;
  double max_ratio = 0.0, min_ratio = std::numeric_limits<double>::infinity();
  for (int j = n - opts.window - 1; j < n - 1; ++j) {
    if (!std::isfinite(c[j]) || !std::isfinite(c[j + 1])) return TailVerdict::Divergent;
    double ratio;
    if (c[j] == 0.0)
      ratio = c[j + 1] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      ratio = c[j + 1] / c[j];
    max_ratio = std::max(max_ratio, ratio);
    min_ratio = std::min(min_ratio, ratio);
  }
  if (max_ratio < opts.finite_ratio) return TailVerdict::Finite;
  if (min_ratio >= 0.999) return TailVerdict::Divergent;
  return TailVerdict::Inconclusive;
}

ShellSeries make_series(std::string direction, int axis, std::vector<double> shells, const AdmissibilityOptions& opts) {
  ShellSeries s{std::move(direction), axis, std::move(shells), {}, TailVerdict::Inconclusive};
  double acc = 0.0;
  for (double c : s.shells) s.partial_sums.push_back(acc += c);
  s.verdict = judge_tail(s.shells, opts);
  return s;
}

void finalize(AdmissibilityReport& rep) {
  bool all_finite = true, any_div = false;
  for (const auto& s : rep.series) {
    all_finite = all_finite && s.verdict == TailVerdict::Finite;
    any_div = any_div || s.verdict == TailVerdict::Divergent;
  }
  rep.verdict = any_div ? TailVerdict::Divergent : (all_finite ? TailVerdict::Finite : TailVerdict::Inconclusive);
}

// Phi as a product of |xi_a|^{-p_a}, when the family admits that form.
std::optional<std::vector<double>> separable_powers(const GroupSpec& spec) {
  const int d = spec.dim();
  if (groups::shearlet_view(spec)) {
    std::vector<double> p(d, 0.0);
    p[0] = d;
    return p;
  }
  if (std::holds_alternative<groups::Diagonal>(spec.family())) return std::vector<double>(d, 1.0);
  if (std::holds_alternative<groups::Similitude>(spec.family()) && d == 1) return std::vector<double>{1.0};
  return std::nullopt;
}

std::function<double(const Vector&)> density_for(const GroupSpec& spec) {
  if (auto p = separable_powers(spec)) {
    return [p = *p](const Vector& xi) {
      double v = 1.0;
      for (int a = 0; a < xi.size(); ++a)
        if (p[a] != 0.0) v *= std::pow(std::abs(xi[a]), -p[a]);
      return v;
    };
  }
  if (std::holds_alternative<groups::Similitude>(spec.family())) {
    const int d = spec.dim();
    return [d](const Vector& xi) { return std::pow(xi.norm(), -d); };
  }
  return [spec](const Vector& xi) { return orbit_density(spec, xi); };
}

// Dyadic shell k covers |x| in [2^k, 2^{k+1}].
std::vector<int> shell_indices(bool toward_complement, int count) {
  std::vector<int> ks;
  for (int j = 0; j < count; ++j) ks.push_back(toward_complement ? -1 - j : j);
  return ks;
}

}  // namespace

AdmissibilityReport admissibility_check(const GroupSpec& spec, const Atom& psi, const AdmissibilityOptions& opts) {
  if (psi.dim() != spec.dim()) throw DimensionMismatch("atom dimension differs from group dimension");
  const auto powers = separable_powers(spec);
  if (!powers || psi.plan.terms.size() != 1)
    return admissibility_check(spec, [&psi](const Vector& xi) { return psi.spectrum(xi); }, opts);

  // Separable case: every axis integral is one-dimensional.
  const int d = spec.dim();
  const auto& rule = quadrature::gauss_legendre(opts.quad.gauss_points);
  auto shell = [&](int a, int k) {
    const double lo = std::ldexp(1.0, k), hi = 2.0 * lo;
    const int panels = std::max(opts.quad.subpanels, static_cast<int>(std::ceil(4.0 * (hi - lo) * psi.base.axes[a].step())));
    return quadrature::panel_sum(
        [&](double x) {
          return (std::norm(psi.factor_spectrum(0, a, x)) + std::norm(psi.factor_spectrum(0, a, -x))) *
                 std::pow(x, -(*powers)[a]);
        },
        lo, hi, panels, rule);
  };
  std::vector<std::vector<double>> comp(d), inf(d);
  std::vector<double> full(d);
  parallel_for(static_cast<std::size_t>(d), opts.threads, [&](std::size_t ai) {
    const int a = static_cast<int>(ai);
    if ((*powers)[a] == 0.0) {
      // Plancherel: the full frequency integral equals the L2 norm of the factor.
      full[a] = spline_integral(psi.base.axes[a], [&](double x) { return Complex(std::pow(psi.factor(0, a, x), 2)); }).real();
      return;
    }
    for (int k : shell_indices(true, opts.shells)) comp[a].push_back(shell(a, k));
    for (int k : shell_indices(false, opts.shells)) inf[a].push_back(shell(a, k));
    double s = 0.0;
    for (double c : comp[a]) s += c;
    for (double c : inf[a]) s += c;
    full[a] = s;
  });

  AdmissibilityReport rep;
  rep.integral = 1.0;
  for (double f : full) rep.integral *= f;
  for (int a = 0; a < d; ++a) {
    if ((*powers)[a] == 0.0) continue;
    double others = 1.0;
    for (int b = 0; b < d; ++b)
      if (b != a) others *= full[b];
    auto scaled = [&](std::vector<double> v) {
      for (double& x : v) x *= others;
      return v;
    };
    rep.series.push_back(make_series("complement", a, scaled(comp[a]), opts));
    rep.series.push_back(make_series("infinity", a, scaled(inf[a]), opts));
  }
  finalize(rep);
  return rep;
}

AdmissibilityReport admissibility_check(const GroupSpec& spec, const SpectrumFn& psi_hat,
                                        const AdmissibilityOptions& opts) {
  const orbit::OrbitDescriptor o = orbit::orbit_of(spec);
  const int d = spec.dim();
  const auto phi = density_for(spec);
  quadrature::Options q = opts.quad;
  q.threads = opts.threads;
  auto safe = [&](const Vector& xi) {
    const double v = std::norm(psi_hat(xi));
    return v == 0.0 ? 0.0 : v * phi(xi);
  };

  std::vector<int> critical;
  quadrature::Axis other = quadrature::Axis::line();
  switch (o.kind) {
    case orbit::OrbitKind::FirstCoordinateNonzero: critical = {0}; break;
    case orbit::OrbitKind::CoordinateCross:
      for (int a = 0; a < d; ++a) critical.push_back(a);
      other = quadrature::Axis::punctured();
      break;
    case orbit::OrbitKind::PuncturedSpace: break;
    default: throw UnsupportedInput("admissibility check does not cover orbit kind " + orbit::to_string(o.kind));
  }

  auto panels_for = [&](int k) { return opts.quad.interval_panels * (1 + std::max(0, k)); };
  AdmissibilityReport rep;
  if (o.kind == orbit::OrbitKind::PuncturedSpace) {
    // Radial shells in hyperspherical coordinates.
    auto shell = [&](int k) {
      std::vector<quadrature::Axis> axes{quadrature::Axis::interval(std::ldexp(1.0, k), std::ldexp(2.0, k))};
      if (d >= 2) {
        for (int j = 0; j + 2 < d; ++j) axes.push_back(quadrature::Axis::interval(0.0, std::numbers::pi));
        axes.push_back(quadrature::Axis::interval(0.0, 2.0 * std::numbers::pi));
      }
      quadrature::Options qk = q;
      qk.interval_panels = panels_for(k);
      const double dsign = d == 1 ? 2.0 : 1.0;
      return dsign * quadrature::integrate(axes, [&](std::span<const double> p) {
        const double rho = p[0];
        Vector xi(d);
        double jac = std::pow(rho, d - 1);
        if (d == 1) {
          xi[0] = rho;
          return 0.5 * (safe(xi) + safe(Vector(-xi)));
        }
        double s = rho;
        for (int j = 0; j + 1 < d; ++j) {
          const double ang = p[1 + j];
          xi[j] = s * std::cos(ang);
          s *= std::sin(ang);
          if (j + 2 < d) jac *= std::pow(std::sin(ang), d - 2 - j);
        }
        xi[d - 1] = s;
        return jac * safe(xi);
      }, qk).value;
    };
    std::vector<double> c, f;
    for (int k : shell_indices(true, opts.shells)) c.push_back(shell(k));
    for (int k : shell_indices(false, opts.shells)) f.push_back(shell(k));
    for (double x : c) rep.integral += x;
    for (double x : f) rep.integral += x;
    rep.series.push_back(make_series("complement", -1, std::move(c), opts));
    rep.series.push_back(make_series("infinity", -1, std::move(f), opts));
    finalize(rep);
    return rep;
  }

  for (int a : critical) {
    auto shell = [&](int k) {
      std::vector<quadrature::Axis> axes{quadrature::Axis::interval(std::ldexp(1.0, k), std::ldexp(2.0, k))};
      for (int b = 0; b < d; ++b)
        if (b != a) axes.push_back(other);
      quadrature::Options qk = q;
      qk.interval_panels = panels_for(k);
      return quadrature::integrate(axes, [&](std::span<const double> p) {
        Vector xi(d);
        xi[a] = p[0];
        for (int b = 0, j = 1; b < d; ++b)
          if (b != a) xi[b] = p[j++];
        double v = safe(xi);
        xi[a] = -xi[a];
        return v + safe(xi);
      }, qk).value;
    };
    std::vector<double> c, f;
    for (int k : shell_indices(true, opts.shells)) c.push_back(shell(k));
    for (int k : shell_indices(false, opts.shells)) f.push_back(shell(k));
    if (a == critical.front()) {
      for (double x : c) rep.integral += x;
      for (double x : f) rep.integral += x;
    }
    rep.series.push_back(make_series("complement", a, std::move(c), opts));
    rep.series.push_back(make_series("infinity", a, std::move(f), opts));
  }
  finalize(rep);
  return rep;
}

}  // namespace orbitlet::atoms
