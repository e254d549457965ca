#include "orbitlet/quadrature.hpp"

#include "orbitlet/error.hpp"
#include "orbitlet/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>

namespace orbitlet::quadrature {

namespace {

template <unsigned N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[i]);
    } else {
      r.nodes.push_back(-x[i]);
      r.weights.push_back(w[i]);
      r.nodes.push_back(x[i]);
      r.weights.push_back(w[i]);
    }
  }
  return r;
}

struct Interval {
  double a, b;
};

struct Sweep {
  const Options& opts;
  const Rule& rule;
  const std::function<Result(double)>& g;
  bool fan_out;
  Result acc;
  double abs_ref = 0.0;

  double eval_intervals(const std::vector<Interval>& ivs, int panels) {
    std::vector<double> xs, ws;
    for (const auto& iv : ivs) {
      const double h = (iv.b - iv.a) / panels;
      for (int p = 0; p < panels; ++p) {
        const double lo = iv.a + p * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          xs.push_back(lo + 0.5 * h * (rule.nodes[k] + 1.0));
          ws.push_back(0.5 * h * rule.weights[k]);
        }
      }
    }
    std::vector<Result> rs(xs.size());
    parallel_for(xs.size(), fan_out ? opts.threads : 1u, [&](std::size_t i) { rs[i] = g(xs[i]); });
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s += ws[i] * rs[i].value;
      acc.evaluations += rs[i].evaluations;
    }
    // An unconverged inner integral only matters if its weighted value is visible at tolerance.
    const double visible = opts.rel_tol * (abs_ref + std::abs(s));
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!rs[i].converged && !(std::abs(ws[i] * rs[i].value) <= visible)) acc.converged = false;
    return s;
  }

  void add_fixed(const std::vector<Interval>& ivs, int panels) {
    const double s = eval_intervals(ivs, panels);
    acc.value += s;
    abs_ref += std::abs(s);
  }

  // shells(j) returns the intervals of shell j; j runs j0, j0 + step, ...
  void shells(const std::function<std::vector<Interval>(int)>& shell, int j0, int step) {
    int quiet = 0;
    for (int k = 0;; ++k) {
      if (k >= opts.max_shells) {
        acc.converged = false;
        return;
      }
      const double s = eval_intervals(shell(j0 + k * step), opts.subpanels);
      acc.value += s;
      abs_ref += std::abs(s);
      quiet = std::abs(s) <= opts.rel_tol * abs_ref ? quiet + 1 : 0;
      if (quiet >= opts.patience && k + 1 >= opts.min_shells) return;
    }
  }
};

Result integrate_axis(const Axis& ax, const std::function<Result(double)>& g, const Options& opts,
                      bool fan_out) {
  const Rule& rule = gauss_legendre(opts.gauss_points);
  Sweep sw{opts, rule, g, fan_out, {}, 0.0};
  const double u = ax.unit;
  switch (ax.kind) {
    case AxisKind::Interval:
      sw.add_fixed({{ax.lo, ax.hi}}, opts.interval_panels);
      break;
    case AxisKind::Line: {
      const double c = ax.center;
      sw.add_fixed({{c - u, c}, {c, c + u}}, 2 * opts.subpanels);
      sw.shells(
          [&](int j) {
            const double a = u * std::ldexp(1.0, j), b = 2.0 * a;
            return std::vector<Interval>{{c + a, c + b}, {c - b, c - a}};
          },
          0, 1);
      break;
    }
    case AxisKind::Punctured:
    case AxisKind::HalfLine: {
      const bool both = ax.kind == AxisKind::Punctured;
      auto shell = [&](int j) {
        const double a = u * std::ldexp(1.0, j), b = 2.0 * a;
        std::vector<Interval> v{{a, b}};
        if (both) v.push_back({-b, -a});
        return v;
      };
      sw.shells(shell, 0, 1);
      sw.shells(shell, -1, -1);
      break;
    }
  }
  sw.acc.evaluations = std::max<long long>(sw.acc.evaluations, 0);
  return sw.acc;
}

Result nested(std::span<const Axis> axes, std::size_t level, std::vector<double>& point, const Integrand& f,
              const Options& opts) {
  if (level == axes.size()) {
    const double v = f(std::span<const double>(point.data(), point.size()));
    return Result{v, std::isfinite(v), 1};
  }
  if (level == 0 && opts.threads > 1) {
    // Each outer node owns a private point buffer.
    return integrate_axis(
        axes[0],
        [&](double x) {
          std::vector<double> local(point.size());
          local[0] = x;
          return nested(axes, 1, local, f, opts);
        },
        opts, true);
  }
  return integrate_axis(
      axes[level],
      [&](double x) {
        point[level] = x;
        return nested(axes, level + 1, point, f, opts);
      },
      opts, false);
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static const Rule r4 = make_rule<4>(), r6 = make_rule<6>(), r8 = make_rule<8>(), r10 = make_rule<10>(),
                    r15 = make_rule<15>(), r20 = make_rule<20>();
  switch (n) {
    case 4: return r4;
    case 6: return r6;
    case 8: return r8;
    case 10: return r10;
    case 15: return r15;
    case 20: return r20;
    default: throw UnsupportedInput("Gauss-Legendre order must be one of 4, 6, 8, 10, 15, 20");
  }
}

double panel_sum(const std::function<double(double)>& f, double a, double b, int panels, const Rule& rule) {
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      s += 0.5 * h * rule.weights[k] * f(lo + 0.5 * h * (rule.nodes[k] + 1.0));
  }
  return s;
}

Result integrate(std::span<const Axis> axes, const Integrand& f, const Options& opts) {
  if (axes.empty()) {
    const double v = f({});
    return Result{v, std::isfinite(v), 1};
  }
  gauss_legendre(opts.gauss_points);  // validate early
  std::vector<double> point(axes.size(), 0.0);
  return nested(axes, 0, point, f, opts);
}

}  // namespace orbitlet::quadrature
