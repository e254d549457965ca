#include "orbitlet/embeddedness.hpp"

#include "orbitlet/error.hpp"
#include "orbitlet/parallel.hpp"
#include "orbitlet/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace orbitlet::embeddedness {

namespace {

double op_norm(const groups::Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  return Eigen::JacobiSVD<groups::Matrix>(m).singularValues()[0];
}

double inv_or_zero(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

struct FamilyExponents {
  double e1_maxdelta, e2, e3, e4;
};

FamilyExponents family_exponents(const GroupSpec& spec) {
  const double d = spec.dim();
  const auto& f = spec.family();
  if (std::holds_alternative<groups::Similitude>(f) || std::holds_alternative<groups::Diagonal>(f))
    return {d, 1.0, d, 0.0};
  if (const auto* s = std::get_if<groups::Shearlet2D>(&f))
    return {2.0, 1.0 + std::abs(s->c), std::abs(1.0 + s->c), std::abs(1.0 - s->c)};
  if (const auto* g = std::get_if<groups::GeneralizedShearlet>(&f)) {
    const double tr = g->y.sum();
    return {d, g->nilpotency_class - 1.0 + 2.0 * g->y.cwiseAbs().maxCoeff(), std::abs(tr), std::abs(d - tr)};
  }
  if (const auto* a = std::get_if<groups::AbelianFromAlgebra>(&f))
    return {d, 2.0 * a->alg.radical().nilpotency_class - 1.0, d, 0.0};
  const auto& p = std::get<groups::DirectProduct>(f);
  FamilyExponents out{0, 0, 0, 0};
  for (const auto& g : p.factors) {
    FamilyExponents b = family_exponents(g);
    out.e1_maxdelta += b.e1_maxdelta;
    out.e2 = std::max(out.e2, b.e2);
    out.e3 += b.e3;
    out.e4 += b.e4;
  }
  return out;
}

Rational exact(double x) { return snap_rational(x); }

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Analytic: return "analytic";
    case Provenance::Empirical: return "empirical";
    case Provenance::User: return "user";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "bounded";
    case Verdict::Growth: return "growth";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

void ExponentSet::validate() const {
  for (double e : {e1, e2, e3, e4})
    if (!std::isfinite(e) || e < 0.0) throw ParseError("exponents must be finite and nonnegative");
}

void WeightSpec::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ParseError("p and q must lie in [1, inf]");
  if (!(s >= 0.0) || !std::isfinite(s)) throw ParseError("s must be a finite nonnegative number");
  if (const auto* pw = std::get_if<PowerWeight>(&base))
    if (!(pw->k >= 0.0) || !std::isfinite(pw->k)) throw ParseError("power weight exponent must be nonnegative");
}

ExponentSet analytic_exponents(const GroupSpec& spec, const WeightSpec& w) {
  w.validate();
  const FamilyExponents fe = family_exponents(spec);
  ExponentSet e;
  e.e2 = fe.e2;
  e.e3 = fe.e3;
  e.e4 = fe.e4;
  if (std::holds_alternative<MaxDelta>(w.base)) {
    e.e1 = fe.e1_maxdelta + w.s * fe.e2;
  } else {
    // w(h^{+-1}) <~ A^{-2k e2}; Delta_G^{+-1} <~ A^{-(e3+e4)}; |det|^{+-1} <~ A^{-e3};
    // (1+|h|+|h^-1|)^s <~ A^{-s e2}.
    const double k = std::get<PowerWeight>(w.base).k;
    const double iq = inv_or_zero(w.q), ip = inv_or_zero(w.p);
    e.e1 = 2.0 * k * fe.e2 + std::max(iq, 1.0 - iq) * (fe.e3 + fe.e4) + fe.e3 * std::abs(ip - iq) + w.s * fe.e2;
  }
  e.provenance = Provenance::Analytic;
  return e;
}

std::pair<double, double> fallback_exponents(double e2, int d, int dim_h) {
  return {d * e2, 2.0 * e2 * dim_h};
}

ExponentSet combine_exponents(std::span<const ExponentSet> es) {
  if (es.empty()) throw ParseError("combine_exponents needs at least one block");
  ExponentSet out{0, 0, 0, 0, es.front().provenance};
  for (const auto& e : es) {
    out.e1 += e.e1;
    out.e2 = std::max(out.e2, e.e2);
    out.e3 += e.e3;
    out.e4 += e.e4;
    if (e.provenance != out.provenance) out.provenance = Provenance::User;
  }
  return out;
}

int index_temperate(const ExponentSet& e, double s, int d) {
  e.validate();
  if (d < 1 || !(s >= 0.0)) throw ParseError("index needs d >= 1 and s >= 0");
  Rational arg = exact(e.e1) + exact(e.e2) * (exact(s) + d + 1) + Rational(3, 2) * exact(e.e3) + exact(e.e4);
  return static_cast<int>(floor_to_int(arg)) + d + 1;
}

int index_strong(const ExponentSet& e, double s, int d) {
  e.validate();
  if (d < 1 || !(s >= 0.0)) throw ParseError("index needs d >= 1 and s >= 0");
  Rational arg = exact(e.e1) + exact(e.e2) * (2 * exact(s) + 2 * d + 2) + Rational(3, 2) * exact(e.e3) +
                 exact(e.e4);
  return static_cast<int>(floor_to_int(arg)) + d + 1;
}

int required_moments(int ell, int d) {
  if (ell < 0 || d < 1) throw ParseError("required_moments needs ell >= 0 and d >= 1");
  return ell + d + 1;
}

int shearlet_atom_order(const GroupSpec& spec) {
  auto v = groups::shearlet_view(spec);
  if (!v) throw UnsupportedInput("atom-order closed form applies to shearlet-type groups");
  const int d = spec.dim();
  const int n = v->nilpotency_class;
  Rational ynorm = exact(v->y.cwiseAbs().maxCoeff());
  Rational tr = exact(v->y.sum());
  Rational atr = tr < 0 ? Rational(-tr) : tr;
  Rational dtr = Rational(d) - tr;
  if (dtr < 0) dtr = -dtr;
  Rational arg = 4 * ynorm * (d + 1) + Rational(3, 2) * atr + dtr;
  return d * (1 + 2 * n) + static_cast<int>(floor_to_int(arg));
}

double base_weight(const WeightSpec& w, const GroupSpec& spec, const GroupElement& h) {
  if (std::holds_alternative<MaxDelta>(w.base)) return std::max(1.0, groups::modular_data(spec, h).delta_g);
  const double k = std::get<PowerWeight>(w.base).k;
  const GroupElement hi = groups::group_inverse(spec, h);
  return std::pow(1.0 + op_norm(h.matrix), k) * std::pow(1.0 + op_norm(hi.matrix), k);
}

double control_weight(const WeightSpec& w, const GroupSpec& spec, const GroupElement& h) {
  const GroupElement hi = groups::group_inverse(spec, h);
  const double size = std::pow(1.0 + op_norm(h.matrix) + op_norm(hi.matrix), w.s);
  if (std::holds_alternative<MaxDelta>(w.base)) return base_weight(w, spec, h) * size;
  const groups::ModularData md = groups::modular_data(spec, h);
  const double iq = inv_or_zero(w.q), ip = inv_or_zero(w.p);
  const double dg = md.delta_g, adet = std::abs(md.det);
  return (base_weight(w, spec, h) + base_weight(w, spec, hi)) * std::max(std::pow(dg, -iq), std::pow(dg, iq - 1.0)) *
         (std::pow(adet, iq - ip) + std::pow(adet, ip - iq)) * size;
}

EmbeddingReport pipeline(const GroupSpec& spec, const WeightSpec& w) {
  EmbeddingReport rep;
  const int d = spec.dim();
  rep.dim = d;
  rep.exponents = analytic_exponents(spec, w);
  rep.ell_temperate = index_temperate(rep.exponents, w.s, d);
  rep.ell_strong = index_strong(rep.exponents, w.s, d);
  rep.moments_analyzing = required_moments(rep.ell_temperate, d);
  rep.moments_atom = required_moments(rep.ell_strong, d);

  const auto& f = spec.family();
  if (groups::shearlet_view(spec)) {
    rep.closed_form_atom_order = shearlet_atom_order(spec);
    if (*rep.closed_form_atom_order != rep.moments_atom) {
      std::ostringstream os;
      os << "shearlet closed-form atom order is " << *rep.closed_form_atom_order << " while the strong index gives "
         << rep.moments_atom;
      if (std::holds_alternative<groups::GeneralizedShearlet>(f) && w.s == 0.0 &&
          std::holds_alternative<MaxDelta>(w.base)) {
        const int n = groups::shearlet_view(spec)->nilpotency_class;
        os << "; the closed form omits the 2n = " << 2 * n << " contribution of e2 to the strong index";
      } else {
        os << "; the closed form uses the generic shearlet exponents e1 = d, e2 = n-1+2|Y|";
      }
      rep.notes.push_back(os.str());
    }
  }
  if ((std::holds_alternative<groups::Similitude>(f) || std::holds_alternative<groups::Diagonal>(f)) &&
      w.s == 0.0 && std::holds_alternative<MaxDelta>(w.base)) {
    const int l1 = d / 2 + 4 * d + 1, l2 = d / 2 + 5 * d + 2;
    if (l1 != rep.ell_temperate || l2 != rep.ell_strong) {
      std::ostringstream os;
      os << "tabulated two-dimensional closed forms floor(d/2)+4d+1 = " << l1 << " and floor(d/2)+5d+2 = " << l2
         << " differ from the index formulas (" << rep.ell_temperate << ", " << rep.ell_strong
         << "); the index formulas are used";
      rep.notes.push_back(os.str());
    }
  }
  return rep;
}

namespace {

struct Sample {
  double log_a;
  double log_q[4];
};

double uniform01(std::uint64_t& state) {
  state = splitmix64(state);
  return static_cast<double>(state >> 11) * 0x1.0p-53;
}

struct StageStats {
  std::vector<std::vector<double>> stage_logs;  // per stage, S_k(e) in log domain
};

// Running supremum of log Q + e log A over stages.
std::vector<double> stage_sups(const std::vector<Sample>& samples, const std::vector<std::size_t>& stage_end, int which,
                               double e) {
  std::vector<double> out;
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  for (std::size_t end : stage_end) {
    for (; i < end; ++i) sup = std::max(sup, samples[i].log_q[which] + e * samples[i].log_a);
    out.push_back(sup);
  }
  return out;
}

Verdict judge(const std::vector<double>& sups, double slack, int confirm) {
  for (double s : sups)
    if (!std::isfinite(s)) return Verdict::Inconclusive;
  const int k = static_cast<int>(sups.size());
  if (k < confirm) return Verdict::Inconclusive;
  const double tol = std::log1p(slack);
  for (int i = k - confirm + 1; i < k; ++i)
    if (sups[i] > sups[i - 1] + tol) return Verdict::Growth;
  return Verdict::Bounded;
}

}  // namespace

EmpiricalReport empirical_exponent_check(const GroupSpec& spec, const ExponentSet& e, const WeightSpec& w,
                                         const EmpiricalOptions& opts) {
  e.validate();
  w.validate();
  if (opts.stages < 1) throw ParseError("at least one stage is required");
  const groups::HaarChart chart = groups::haar_chart(spec);
  const orbit::OrbitDescriptor orb = orbit::orbit_of(spec);
  const std::int64_t per_stage = opts.budget / opts.stages;

  EmpiricalReport rep;
  const bool starved = per_stage < 100;
  const std::size_t n = static_cast<std::size_t>(std::max<std::int64_t>(per_stage, 0)) * opts.stages;
  std::vector<Sample> samples(n);
  std::vector<std::size_t> stage_end;
  for (int k = 0; k < opts.stages; ++k) stage_end.push_back(static_cast<std::size_t>(per_stage) * (k + 1));

  parallel_for(n, opts.threads, [&](std::size_t i) {
    const int stage = static_cast<int>(i / static_cast<std::size_t>(per_stage));
    const double rbox = opts.scale_box * std::ldexp(1.0, stage);
    const double tbox = opts.shear_box * std::ldexp(1.0, stage);
    std::uint64_t st = stream_seed(opts.seed, i);
    std::vector<double> params(chart.axes.size());
    for (std::size_t a = 0; a < params.size(); ++a) {
      const double u = uniform01(st);
      switch (chart.axes[a].role) {
        case groups::AxisRole::Scale: params[a] = (2.0 * u - 1.0) * rbox; break;
        case groups::AxisRole::Shear: params[a] = (2.0 * u - 1.0) * tbox; break;
        case groups::AxisRole::Angle: params[a] = 2.0 * std::numbers::pi * u; break;
      }
    }
    const int pattern = static_cast<int>(uniform01(st) * chart.sign_patterns) % chart.sign_patterns;
    const GroupElement h = chart.element(pattern, params);
    const GroupElement hi = groups::group_inverse(spec, h);
    const groups::ModularData md = groups::modular_data(spec, h);
    Sample s;
    s.log_a = std::log(orbit::envelope_AH(orb, h.matrix));
    s.log_q[0] = std::log(std::max(control_weight(w, spec, h), control_weight(w, spec, hi)));
    s.log_q[1] = std::log(std::max(op_norm(h.matrix), op_norm(hi.matrix)));
    s.log_q[2] = std::abs(std::log(std::abs(md.det)));
    s.log_q[3] = std::abs(std::log(md.delta_h));
    samples[i] = s;
  });

  static const char* names[] = {"control_weight", "norm", "determinant", "modular_function"};
  const double given[] = {e.e1, e.e2, e.e3, e.e4};
  rep.samples = static_cast<std::int64_t>(n);
  bool any_growth = false, all_bounded = true;
  for (int q = 0; q < 4; ++q) {
    InequalityReport ir;
    ir.name = names[q];
    ir.exponent = given[q];
    if (starved) {
      ir.verdict = Verdict::Inconclusive;
    } else {
      std::vector<double> sups = stage_sups(samples, stage_end, q, given[q]);
      ir.verdict = judge(sups, opts.slack, opts.confirm_stages);
      for (double s : sups) ir.stage_sup.push_back(std::exp(s));
      auto bounded_at = [&](double ex) {
        return judge(stage_sups(samples, stage_end, q, ex), opts.slack, opts.confirm_stages) == Verdict::Bounded;
      };
      if (bounded_at(0.0)) {
        ir.least_exponent = 0.0;
      } else {
        double hi = std::max(given[q], opts.resolution);
        while (!bounded_at(hi) && hi < 256.0) hi *= 2.0;
        if (bounded_at(hi)) {
          double lo = 0.0;
          while (hi - lo > opts.resolution) {
            const double mid = 0.5 * (lo + hi);
            (bounded_at(mid) ? hi : lo) = mid;
          }
          ir.least_exponent = std::ceil(hi / opts.resolution - 1e-9) * opts.resolution;
        }
      }
    }
    any_growth = any_growth || ir.verdict == Verdict::Growth;
    all_bounded = all_bounded && ir.verdict == Verdict::Bounded;
    rep.inequalities.push_back(std::move(ir));
  }
  rep.verdict = any_growth ? Verdict::Growth : (all_bounded ? Verdict::Bounded : Verdict::Inconclusive);
  return rep;
}

PhiResult phi_ell_direct(const GroupSpec& spec, const GroupElement& h, int ell, const quadrature::Options& opts) {
  if (ell <= spec.dim()) throw UnsupportedInput("Phi_ell requires ell > d for convergence");
  const orbit::OrbitDescriptor o = orbit::orbit_of(spec);
  const groups::Matrix ht = h.matrix.transpose();
  quadrature::Result r = orbit::orbit_integral(
      o,
      [&](const groups::Vector& xi) {
        return std::pow(orbit::envelope_a(o, xi), ell) * std::pow(orbit::envelope_a(o, groups::Vector(ht * xi)), ell);
      },
      opts);
  return {r.value, r.converged, r.evaluations};
}

PhiResult phi_ell_convolution(const GroupSpec& spec, const GroupElement& h, int ell, const quadrature::Options& opts) {
  if (ell <= spec.dim()) throw UnsupportedInput("Phi_ell requires ell > d for convergence");
  const orbit::OrbitDescriptor o = orbit::orbit_of(spec);
  quadrature::Result r = orbit::group_integral(
      spec,
      [&](const GroupElement& g) {
        const GroupElement gi = groups::group_inverse(spec, g);
        const GroupElement gih = groups::compose(spec, gi, h);
        return std::pow(orbit::envelope_AH(o, gi.matrix), ell) * std::abs(gi.matrix.determinant()) *
               std::pow(orbit::envelope_AH(o, gih.matrix), ell);
      },
      opts);
  return {r.value, r.converged, r.evaluations};
}

}  // namespace orbitlet::embeddedness
