#include "commands.hpp"

#include "orbitlet/error.hpp"
#include "orbitlet/json_io.hpp"
#include "orbitlet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

namespace orbitlet::cli {

namespace {

using json = nlohmann::json;
using json_io::number;
using groups::GroupSpec;
using groups::Matrix;
using groups::Vector;

unsigned workers(const Context& ctx) { return ctx.threads ? ctx.threads : default_threads(); }

void emit(const Context& ctx, const std::string& command, json body) {
  json out{{"schema", json_io::kSchema}, {"command", command}};
  out.update(body);
  const std::string text = out.dump(2) + "\n";
  if (ctx.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(ctx.out, std::ios::binary);
  if (!os) throw ParseError("cannot write " + ctx.out);
  os << text;
}

GroupSpec load_group(const std::string& path) { return json_io::group_from_json(json_io::load_file(path)); }

atoms::Atom load_atom(const std::string& path) { return json_io::atom_from_json(json_io::load_file(path)); }

void write_json_file(const std::string& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot write " + path);
  os << j.dump(2) << "\n";
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

// Weight flags shared by exponents, moments and cwt.
struct WeightFlags {
  std::string p = "2", q = "2";
  double s = 0.0;
  std::string weight = "max_delta";
  std::string file;

  void add(CLI::App* sub) {
    sub->add_option("--p", p, "Inner exponent p (number or inf)")->capture_default_str();
    sub->add_option("--q", q, "Outer exponent q (number or inf)")->capture_default_str();
    sub->add_option("--s", s, "Translation weight exponent s")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--weight", weight, "max_delta or power:k")->capture_default_str();
    sub->add_option("--weight-file", file, "JSON weight spec; overrides the flags")->check(CLI::ExistingFile);
  }

  embeddedness::WeightSpec build() const {
    if (!file.empty()) return json_io::weight_from_json(json_io::load_file(file));
    json j{{"p", p}, {"q", q}, {"s", s}};
    if (weight == "max_delta") {
      j["weight"] = "max_delta";
    } else if (weight.rfind("power:", 0) == 0) {
      j["weight"] = {{"power", weight.substr(6)}};
    } else {
      throw ParseError("--weight must be max_delta or power:k");
    }
    return json_io::weight_from_json(j);
  }
};

// "lo:hi:n" for every axis, or one such triple per axis separated by commas.
std::vector<std::vector<double>> parse_axes(const std::string& spec, int d) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() == 1) parts.assign(d, parts.front());
  if (static_cast<int>(parts.size()) != d) throw DimensionMismatch("--grid needs one range or one per axis");
  std::vector<std::vector<double>> axes;
  for (const auto& p : parts) {
    double lo = 0, hi = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(p);
    if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
      throw ParseError("grid range '" + p + "' must read lo:hi:n");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    axes.push_back(v);
  }
  return axes;
}

double unit_uniform(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(stream_seed(seed, index) >> 11) * 0x1.0p-53;
}

// describe --------------------------------------------------------------------------------

int nilpotency_class(const GroupSpec& g) {
  if (auto v = groups::shearlet_view(g)) return v->nilpotency_class;
  if (const auto* a = std::get_if<groups::AbelianFromAlgebra>(&g.family())) return a->alg.radical().nilpotency_class;
  if (const auto* p = std::get_if<groups::DirectProduct>(&g.family())) {
    int n = 1;
    for (const auto& f : p->factors) n = std::max(n, nilpotency_class(f));
    return n;
  }
  return 1;
}

json modular_closed_forms(const GroupSpec& g) {
  const int d = g.dim();
  return std::visit(
      [&](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, groups::Shearlet2D>) {
          return {{"det", "a*|a|^" + fmt(f.c)},
                  {"delta_h", "|a|^(" + fmt(f.c - 1.0) + ")"},
                  {"delta_g", "|a|^(-2)"}};
        } else if constexpr (std::is_same_v<T, groups::GeneralizedShearlet>) {
          const double tr = f.y.sum();
          return {{"det", "(+-1)^" + std::to_string(d) + " * exp(" + fmt(tr) + "*r)"},
                  {"delta_h", tr == d ? std::string("1") : "exp(" + fmt(tr - d) + "*r)"},
                  {"delta_g", "exp(" + fmt(-static_cast<double>(d)) + "*r)"}};
        } else if constexpr (std::is_same_v<T, groups::DirectProduct>) {
          return {{"det", "product of factor determinants"},
                  {"delta_h", "product of factor modular functions"},
                  {"delta_g", "delta_h / |det h|"}};
        } else {
          if (auto v = groups::shearlet_view(g)) {
            const double tr = v->y.sum();
            return {{"det", "(+-1)^" + std::to_string(d) + " * exp(" + fmt(tr) + "*r)"},
                    {"delta_h", "1"},
                    {"delta_g", "exp(" + fmt(-tr) + "*r)"}};
          }
          return {{"det", "det h"}, {"delta_h", "1"}, {"delta_g", "1 / |det h|"}};
        }
      },
      g.family());
}

void cmd_describe(const Context& ctx, const std::string& path) {
  const GroupSpec g = load_group(path);
  const orbit::OrbitDescriptor o = orbit::orbit_of(g);
  json j{{"group", json_io::group_to_json(g)},
         {"family", g.family_tag()},
         {"dim", g.dim()},
         {"group_dim", g.group_dim()},
         {"orbit", orbit::to_string(o.kind)},
         {"base_point", json_io::vector_to_json(o.base_point)},
         {"modular", modular_closed_forms(g)},
         {"nilpotency_class", nilpotency_class(g)}};
  try {
    j["differential_operator"] = atoms::to_string(atoms::orbit_differential_operator(g));
  } catch (const UnsupportedInput&) {
    j["differential_operator"] = nullptr;
  }
  if (auto v = groups::shearlet_view(g)) j["y"] = json_io::vector_to_json(v->y);
  emit(ctx, "describe", j);
}

// validate --------------------------------------------------------------------------------

void cmd_validate(const Context& ctx, const std::string& path) {
  const json spec = json_io::load_file(path);
  groups::ValidationReport rep;
  const std::string family = spec.is_object() && spec.contains("family") && spec["family"].is_string()
                                 ? spec["family"].get<std::string>()
                                 : std::string();
  if (family == "generalized_shearlet") {
    std::vector<Matrix> basis;
    if (!spec.contains("basis") || !spec["basis"].is_array()) throw ParseError("missing field 'basis'");
    for (const auto& m : spec["basis"]) basis.push_back(json_io::matrix_from_json(m));
    const groups::ValidationReport shear = groups::validate_shearing(basis);
    for (const auto& c : shear.checks) rep.add("shearing: " + c.name, c.passed, c.detail);
    if (shear.passed && spec.contains("y")) {
      const GroupSpec g = json_io::group_from_json(spec);
      const auto& gs = std::get<groups::GeneralizedShearlet>(g.family());
      for (const auto& c : groups::validate_diagonal_complement(gs.y, gs.basis).checks)
        rep.add("complement: " + c.name, c.passed, c.detail);
    }
  } else {
    try {
      const GroupSpec g = json_io::group_from_json(spec);
      rep.add("construct", true, g.family_tag());
      if (auto v = groups::shearlet_view(g)) {
        for (const auto& c : groups::validate_shearing(v->basis).checks) rep.add("shearing: " + c.name, c.passed, c.detail);
        for (const auto& c : groups::validate_diagonal_complement(v->y, v->basis).checks)
          rep.add("complement: " + c.name, c.passed, c.detail);
      }
    } catch (const NotAShearingSubgroup& e) {
      rep.add("construct", false, e.what());
    }
  }
  emit(ctx, "validate", {{"report", json_io::to_json(rep)}});
  if (!rep.passed) throw NotAShearingSubgroup("validation failed: " + rep.summary());
}

// classify --------------------------------------------------------------------------------

algebra::StructureConstants catalog_algebra(int d, const std::string& name) {
  if (name == "standard") return algebra::trivial_extension(d);
  if (name == "toeplitz") return algebra::truncated_polynomial(d);
  if (name.rfind("H_", 0) == 0) return algebra::h_algebra(Rational(std::stoi(name.substr(2))));
  throw UnsupportedInput("no algebra known for catalog group " + name);
}

void cmd_classify(const Context& ctx, int d) {
  const std::vector<GroupSpec> cat = groups::enumerate_catalog(d);
  json classes = json::array();
  std::vector<algebra::InvariantRecord> records;
  for (const auto& g : cat) {
    const auto inv = algebra::isomorphism_invariants(catalog_algebra(d, g.name()));
    records.push_back(inv);
    const auto v = groups::shearlet_view(g);
    json gens = json::array();
    for (const auto& m : v->basis) gens.push_back(json_io::matrix_to_json(m));
    classes.push_back({{"name", g.name()},
                       {"invariants", json_io::to_json(inv)},
                       {"generators", gens},
                       {"y", json_io::vector_to_json(v->y)},
                       {"atom_order", embeddedness::shearlet_atom_order(g)}});
  }
  bool separated = true;
  for (std::size_t i = 0; i < records.size(); ++i)
    for (std::size_t k = i + 1; k < records.size(); ++k) separated = separated && !(records[i] == records[k]);
  emit(ctx, "classify", {{"dim", d}, {"count", cat.size()}, {"separated", separated}, {"classes", classes}});
}

// exponents / moments ---------------------------------------------------------------------

struct EmpiricalFlags {
  bool enabled = false;
  std::int64_t budget = 100000;
  int stages = 5;
  std::uint64_t seed = 1;

  void add(CLI::App* sub) {
    sub->add_flag("--empirical", enabled, "Run the Monte Carlo boundedness check");
    sub->add_option("--budget", budget, "Total samples")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--stages", stages, "Doubling stages")->capture_default_str()->check(CLI::Range(2, 16));
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
  }
};

void cmd_exponents(const Context& ctx, const std::string& path, const WeightFlags& wf, const EmpiricalFlags& ef) {
  const GroupSpec g = load_group(path);
  const auto w = wf.build();
  const auto e = embeddedness::analytic_exponents(g, w);
  json j{{"group", json_io::group_to_json(g)}, {"weight", json_io::weight_to_json(w)}, {"exponents", json_io::to_json(e)}};
  if (ef.enabled) {
    embeddedness::EmpiricalOptions opts;
    opts.budget = ef.budget;
    opts.stages = ef.stages;
    opts.seed = ef.seed;
    opts.threads = workers(ctx);
    const auto rep = embeddedness::empirical_exponent_check(g, e, w, opts);
    j["empirical"] = json_io::to_json(rep);
    if (rep.inequalities.size() == 4) {
      embeddedness::ExponentSet least;
      least.provenance = embeddedness::Provenance::Empirical;
      double* slots[4] = {&least.e1, &least.e2, &least.e3, &least.e4};
      bool complete = true;
      for (int i = 0; i < 4; ++i) {
        if (rep.inequalities[i].least_exponent)
          *slots[i] = *rep.inequalities[i].least_exponent;
        else
          complete = false;
      }
      j["empirical_exponents"] = complete ? json_io::to_json(least) : json(nullptr);
    }
  }
  emit(ctx, "exponents", j);
}

void cmd_moments(const Context& ctx, const std::string& path, const WeightFlags& wf, const std::string& mode) {
  const GroupSpec g = load_group(path);
  const auto w = wf.build();
  const auto rep = embeddedness::pipeline(g, w);
  json j{{"group", json_io::group_to_json(g)}, {"weight", json_io::weight_to_json(w)}, {"mode", mode},
         {"report", json_io::to_json(rep)}};
  if (mode == "analyzing")
    j["order"] = rep.moments_analyzing;
  else if (mode == "atom")
    j["order"] = rep.moments_atom;
  emit(ctx, "moments", j);
}

// envelope --------------------------------------------------------------------------------

void cmd_envelope(const Context& ctx, const std::string& path, const std::string& grid, const std::string& out,
                  const std::string& norm) {
  const GroupSpec g = load_group(path);
  const orbit::OrbitDescriptor o = orbit::orbit_of(g);
  const int d = g.dim();
  const auto axes = parse_axes(grid, d);
  const orbit::Norm nm = norm == "max" ? orbit::Norm::Max : orbit::Norm::Euclidean;
  std::ofstream os(out, std::ios::binary);
  if (!os) throw ParseError("cannot write " + out);
  os << std::setprecision(17);
  for (int a = 0; a < d; ++a) os << "xi" << a + 1 << ",";
  os << "a\n";
  std::vector<std::size_t> idx(d, 0);
  std::size_t points = 0, inside = 0;
  Vector xi(d);
  while (true) {
    for (int a = 0; a < d; ++a) xi[a] = axes[a][idx[a]];
    const bool in = orbit::contains(o, xi);
    const double a = in ? orbit::envelope_a(o, xi, nm) : 0.0;
    for (int k = 0; k < d; ++k) os << xi[k] << ",";
    os << a << "\n";
    ++points;
    inside += in;
    int k = d - 1;
    while (k >= 0 && ++idx[k] == axes[k].size()) idx[k] = 0, --k;
    if (k < 0) break;
  }
  emit(ctx, "envelope", {{"orbit", orbit::to_string(o.kind)}, {"norm", norm}, {"points", points},
                         {"in_orbit", inside}, {"out", out}});
}

// atoms -----------------------------------------------------------------------------------

struct AtomBuildFlags {
  std::string group, out, op;
  int order = 2;
  int degree = -1;
  double lo = -1.0, hi = 1.0;
};

void cmd_atom_build(const Context& ctx, const AtomBuildFlags& f) {
  const GroupSpec g = load_group(f.group);
  const atoms::OperatorKind kind =
      f.op.empty() ? atoms::orbit_differential_operator(g) : atoms::operator_kind_from_string(f.op);
  const atoms::DerivativePlan plan = atoms::derivative_plan(kind, g.dim(), f.order);
  int degree = f.degree;
  if (degree < 0) {
    int need = 0;
    for (int a : plan.max_alpha()) need = std::max(need, a + 1);
    degree = std::max(need, 3);
  }
  const auto atom = atoms::make_atom(kind, f.order, atoms::SplineBase::uniform(g.dim(), degree, f.lo, f.hi));
  json a = json_io::atom_to_json(atom);
  if (!f.out.empty()) {
    json file = a;
    file["schema"] = json_io::kSchema;
    write_json_file(f.out, file);
  }
  emit(ctx, "atom build", {{"atom", a}, {"moment_order", plan.order()}, {"out", f.out.empty() ? json(nullptr) : json(f.out)}});
}

void cmd_atom_verify(const Context& ctx, const std::string& atom_path, const std::string& group_path, int claimed,
                     bool admissibility) {
  const GroupSpec g = load_group(group_path);
  const auto atom = load_atom(atom_path);
  if (atom.dim() != g.dim()) throw DimensionMismatch("atom and group dimensions differ");
  const int r = claimed >= 0 ? claimed : atom.plan.order();
  const auto probe = atoms::verify_vanishing_moments(atom, orbit::orbit_of(g), r);
  json j{{"claimed_order", r}, {"probe", json_io::to_json(probe)}};
  if (admissibility) {
    atoms::AdmissibilityOptions opts;
    opts.threads = workers(ctx);
    j["admissibility"] = json_io::to_json(atoms::admissibility_check(g, atom, opts));
  }
  emit(ctx, "atom verify", j);
}

void cmd_atom_sample(const Context& ctx, const std::string& atom_path, int n, double half_width, const std::string& out) {
  const auto atom = load_atom(atom_path);
  const Grid grid = Grid::centered(atom.dim(), n, half_width);
  const SampledFunction f = atoms::sample(atom, grid);
  write_sampled(f, out);
  emit(ctx, "atom sample", {{"points", grid.size()}, {"l2_norm", number(f.l2_norm())}, {"out", out}});
}

void cmd_admissibility(const Context& ctx, const std::string& group_path, const std::string& atom_path, int shells) {
  const GroupSpec g = load_group(group_path);
  const auto atom = load_atom(atom_path);
  atoms::AdmissibilityOptions opts;
  opts.shells = shells;
  opts.threads = workers(ctx);
  emit(ctx, "admissibility", {{"report", json_io::to_json(atoms::admissibility_check(g, atom, opts))}});
}

// transform -------------------------------------------------------------------------------

struct SamplingFlags {
  transform::DilationSampling s;
  std::string file;
  bool one_sign = false;

  void add(CLI::App* sub) {
    sub->add_option("--scale-range", s.scale_range, "Scale parameter range R")->capture_default_str();
    sub->add_option("--scale-points", s.scale_points, "Scale nodes")->capture_default_str();
    sub->add_option("--shear-range", s.shear_range, "Shear parameter range T")->capture_default_str();
    sub->add_option("--shear-points", s.shear_points, "Shear nodes per axis")->capture_default_str();
    sub->add_option("--angle-points", s.angle_points, "Angle nodes")->capture_default_str();
    sub->add_flag("--one-sign", one_sign, "Sample only the identity component");
    sub->add_option("--sampling", file, "JSON dilation sampling; overrides the flags")->check(CLI::ExistingFile);
  }

  transform::DilationSampling build() const {
    if (!file.empty()) return json_io::sampling_from_json(json_io::load_file(file));
    auto out = s;
    out.both_signs = !one_sign;
    return out;
  }
};

transform::Method method_from(const std::string& m) {
  if (m == "auto") return transform::Method::Auto;
  if (m == "fft") return transform::Method::Fft;
  if (m == "direct") return transform::Method::Direct;
  throw ParseError("--method must be auto, fft or direct");
}

void cmd_cwt(const Context& ctx, const std::string& group_path, const std::string& atom_path,
             const std::string& signal, const SamplingFlags& sf, const WeightFlags& wf, const std::string& method,
             const std::string& out) {
  const GroupSpec g = load_group(group_path);
  const auto atom = load_atom(atom_path);
  const SampledFunction f = read_sampled(signal);
  const auto sampling = sf.build();
  const auto tg = transform::make_transform_grid(g, f.grid, sampling);
  const double c = transform::c_psi(g, atom, tg);
  const auto coeffs = transform::analyze(f, atom, tg, {method_from(method), workers(ctx)});
  transform::write_coefficients(coeffs, out);
  const auto w = wf.build();
  emit(ctx, "cwt", {{"dilations", tg.dilations.size()},
                    {"translations", f.grid.size()},
                    {"sampling", json_io::sampling_to_json(sampling)},
                    {"c_psi", number(c)},
                    {"signal_l2", number(f.l2_norm())},
                    {"weight", json_io::weight_to_json(w)},
                    {"coefficient_norm", number(transform::coefficient_norm(coeffs, g, w))},
                    {"out", out}});
}

void cmd_icwt(const Context& ctx, const std::string& coeff_path, const std::string& atom_path,
              const std::string& group_path, double c_given, const std::string& method, const std::string& out) {
  const auto coeffs = transform::read_coefficients(coeff_path);
  const auto atom = load_atom(atom_path);
  double c = c_given;
  if (!(c > 0.0)) {
    if (group_path.empty()) throw ParseError("icwt needs --group or a positive --c-psi");
    const GroupSpec g = load_group(group_path);
    c = transform::c_psi(g, atom, transform::TransformGrid{coeffs.translations, coeffs.dilations});
  }
  const SampledFunction f = transform::synthesize(coeffs, atom, c, {method_from(method), workers(ctx)});
  write_sampled(f, out);
  emit(ctx, "icwt", {{"c_psi", number(c)}, {"l2_norm", number(f.l2_norm())}, {"points", f.grid.size()}, {"out", out}});
}

// numerical checks ------------------------------------------------------------------------

struct QuadFlags {
  quadrature::Options q;
  void add(CLI::App* sub) {
    sub->add_option("--gauss-points", q.gauss_points, "Gauss nodes per panel")->capture_default_str();
    sub->add_option("--subpanels", q.subpanels, "Panels per shell")->capture_default_str();
    sub->add_option("--rel-tol", q.rel_tol, "Shell stopping tolerance")->capture_default_str();
    sub->add_option("--max-shells", q.max_shells, "Shell cap per direction")->capture_default_str();
  }
};

void cmd_haar_check(const Context& ctx, const std::string& path, double sigma, QuadFlags qf) {
  const GroupSpec g = load_group(path);
  qf.q.threads = workers(ctx);
  const double s2 = 2.0 * sigma * sigma;
  const auto r = orbit::haar_transfer_check(g, [s2](const Vector& xi) { return std::exp(-xi.squaredNorm() / s2); }, qf.q);
  emit(ctx, "haar-check", {{"function", "gaussian"},
                           {"sigma", number(sigma)},
                           {"lhs", number(r.lhs)},
                           {"rhs", number(r.rhs)},
                           {"relative_error", number(r.relative_error)},
                           {"converged", r.converged}});
}

void cmd_phi_check(const Context& ctx, const std::string& path, int ell, int samples, std::uint64_t seed, double box,
                   QuadFlags qf) {
  const GroupSpec g = load_group(path);
  if (ell < 0) ell = g.dim() + 2;
  qf.q.threads = workers(ctx);
  const auto chart = groups::haar_chart(g);
  json rows = json::array();
  double worst = 0.0;
  bool converged = true;
  std::uint64_t counter = 0;
  for (int i = 0; i < samples; ++i) {
    std::vector<double> p(chart.axes.size());
    for (auto& v : p) v = box * (2.0 * unit_uniform(seed, counter++) - 1.0);
    const int pattern = static_cast<int>(unit_uniform(seed, counter++) * chart.sign_patterns);
    const auto h = chart.element(std::min(pattern, chart.sign_patterns - 1), p);
    const auto a = embeddedness::phi_ell_direct(g, h, ell, qf.q);
    const auto b = embeddedness::phi_ell_convolution(g, h, ell, qf.q);
    const double rel = std::abs(a.value - b.value) / std::max(std::abs(a.value), 1e-300);
    worst = std::max(worst, rel);
    converged = converged && a.converged && b.converged;
    rows.push_back({{"h", json_io::matrix_to_json(h.matrix)},
                    {"direct", number(a.value)},
                    {"convolution", number(b.value)},
                    {"relative_error", number(rel)}});
  }
  emit(ctx, "phi-check", {{"ell", ell}, {"seed", seed}, {"samples", rows}, {"max_relative_error", number(worst)},
                          {"converged", converged}});
}

}  // namespace

void register_commands(CLI::App& app, Context& ctx) {
  {
    auto* sub = app.add_subcommand("describe", "Family, orbit, modular functions and differential operator");
    auto path = std::make_shared<std::string>();
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->callback([&ctx, path] { ctx.run = [&ctx, path] { cmd_describe(ctx, *path); }; });
  }
  {
    auto* sub = app.add_subcommand("validate", "Run the shearing and diagonal-complement validators");
    auto path = std::make_shared<std::string>();
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->callback([&ctx, path] { ctx.run = [&ctx, path] { cmd_validate(ctx, *path); }; });
  }
  {
    auto* sub = app.add_subcommand("classify", "Shearing groups of a dimension with separating invariants");
    auto dim = std::make_shared<int>(4);
    sub->add_option("--dim", *dim, "Ambient dimension (2, 3 or 4)")->required();
    sub->callback([&ctx, dim] { ctx.run = [&ctx, dim] { cmd_classify(ctx, *dim); }; });
  }
  {
    auto* sub = app.add_subcommand("exponents", "Exponent set, optionally checked empirically");
    auto path = std::make_shared<std::string>();
    auto wf = std::make_shared<WeightFlags>();
    auto ef = std::make_shared<EmpiricalFlags>();
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    wf->add(sub);
    ef->add(sub);
    sub->callback([&ctx, path, wf, ef] { ctx.run = [&ctx, path, wf, ef] { cmd_exponents(ctx, *path, *wf, *ef); }; });
  }
  {
    auto* sub = app.add_subcommand("moments", "Exponents, indices and vanishing-moment orders");
    auto path = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("both");
    auto wf = std::make_shared<WeightFlags>();
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--mode", *mode, "analyzing, atom or both")
        ->capture_default_str()
        ->check(CLI::IsMember({"analyzing", "atom", "both"}));
    wf->add(sub);
    sub->callback([&ctx, path, mode, wf] { ctx.run = [&ctx, path, mode, wf] { cmd_moments(ctx, *path, *wf, *mode); }; });
  }
  {
    auto* sub = app.add_subcommand("envelope", "Sample the envelope A on a frequency grid (CSV)");
    auto path = std::make_shared<std::string>();
    auto grid = std::make_shared<std::string>("-2:2:9");
    auto out = std::make_shared<std::string>();
    auto norm = std::make_shared<std::string>("euclidean");
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--grid", *grid, "lo:hi:n, or one triple per axis separated by commas")->capture_default_str();
    sub->add_option("--norm", *norm, "euclidean or max")->capture_default_str()->check(CLI::IsMember({"euclidean", "max"}));
    sub->add_option("--out", *out, "CSV output")->required();
    sub->callback([&ctx, path, grid, out, norm] {
      ctx.run = [&ctx, path, grid, out, norm] { cmd_envelope(ctx, *path, *grid, *out, *norm); };
    });
  }
  {
    auto* atom = app.add_subcommand("atom", "Build, verify and sample spline atoms");
    atom->require_subcommand(1);
    {
      auto* sub = atom->add_subcommand("build", "Build psi = D^r f from a tensor B-spline");
      auto f = std::make_shared<AtomBuildFlags>();
      sub->add_option("--group", f->group, "Group spec JSON")->required()->check(CLI::ExistingFile);
      sub->add_option("--order", f->order, "Moment order r")->capture_default_str()->check(CLI::NonNegativeNumber);
      sub->add_option("--spline-degree", f->degree, "Spline degree (default: smallest admissible, at least 3)");
      sub->add_option("--lo", f->lo, "Support lower end per axis")->capture_default_str();
      sub->add_option("--hi", f->hi, "Support upper end per axis")->capture_default_str();
      sub->add_option("--operator", f->op, "first-partial, mixed-partial or laplacian (default: from the orbit)");
      sub->add_option("--out", f->out, "Atom JSON output");
      sub->callback([&ctx, f] { ctx.run = [&ctx, f] { cmd_atom_build(ctx, *f); }; });
    }
    {
      auto* sub = atom->add_subcommand("verify", "Vanishing moments and admissibility of an atom");
      auto atom_path = std::make_shared<std::string>();
      auto group = std::make_shared<std::string>();
      auto order = std::make_shared<int>(-1);
      auto skip = std::make_shared<bool>(false);
      sub->add_option("--atom", *atom_path, "Atom JSON")->required()->check(CLI::ExistingFile);
      sub->add_option("--group", *group, "Group spec JSON")->required()->check(CLI::ExistingFile);
      sub->add_option("--order", *order, "Claimed moment order (default: the atom's)");
      sub->add_flag("--no-admissibility", *skip, "Skip the admissibility integral");
      sub->callback([&ctx, atom_path, group, order, skip] {
        ctx.run = [&ctx, atom_path, group, order, skip] { cmd_atom_verify(ctx, *atom_path, *group, *order, !*skip); };
      });
    }
    {
      auto* sub = atom->add_subcommand("sample", "Sample an atom on a centered grid");
      auto atom_path = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      auto n = std::make_shared<int>(64);
      auto hw = std::make_shared<double>(2.0);
      sub->add_option("--atom", *atom_path, "Atom JSON")->required()->check(CLI::ExistingFile);
      sub->add_option("--n", *n, "Points per axis")->capture_default_str()->check(CLI::Range(2, 4096));
      sub->add_option("--half-width", *hw, "Grid half width")->capture_default_str()->check(CLI::PositiveNumber);
      sub->add_option("--out", *out, "Signal output (.csv or binary)")->required();
      sub->callback([&ctx, atom_path, n, hw, out] {
        ctx.run = [&ctx, atom_path, n, hw, out] { cmd_atom_sample(ctx, *atom_path, *n, *hw, *out); };
      });
    }
  }
  {
    auto* sub = app.add_subcommand("admissibility", "Shell test of the admissibility integral");
    auto group = std::make_shared<std::string>();
    auto atom_path = std::make_shared<std::string>();
    auto shells = std::make_shared<int>(12);
    sub->add_option("--group", *group, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--atom", *atom_path, "Atom JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--shells", *shells, "Dyadic shells per direction")->capture_default_str()->check(CLI::Range(4, 60));
    sub->callback([&ctx, group, atom_path, shells] {
      ctx.run = [&ctx, group, atom_path, shells] { cmd_admissibility(ctx, *group, *atom_path, *shells); };
    });
  }
  {
    auto* sub = app.add_subcommand("cwt", "Continuous wavelet analysis of a sampled signal");
    auto group = std::make_shared<std::string>();
    auto atom_path = std::make_shared<std::string>();
    auto signal = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("auto");
    auto sf = std::make_shared<SamplingFlags>();
    auto wf = std::make_shared<WeightFlags>();
    sub->add_option("--group", *group, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--atom", *atom_path, "Atom JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--signal", *signal, "Signal (.csv or binary)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", *out, "Coefficient output (binary)")->required();
    sub->add_option("--method", *method, "auto, fft or direct")->capture_default_str();
    sf->add(sub);
    wf->add(sub);
    sub->callback([&ctx, group, atom_path, signal, out, method, sf, wf] {
      ctx.run = [&ctx, group, atom_path, signal, out, method, sf, wf] {
        cmd_cwt(ctx, *group, *atom_path, *signal, *sf, *wf, *method, *out);
      };
    });
  }
  {
    auto* sub = app.add_subcommand("icwt", "Synthesis from wavelet coefficients");
    auto coeffs = std::make_shared<std::string>();
    auto atom_path = std::make_shared<std::string>();
    auto group = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("auto");
    auto c = std::make_shared<double>(0.0);
    sub->add_option("--coeffs", *coeffs, "Coefficient file from cwt")->required()->check(CLI::ExistingFile);
    sub->add_option("--atom", *atom_path, "Atom JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--group", *group, "Group spec JSON, used to compute c_psi")->check(CLI::ExistingFile);
    sub->add_option("--c-psi", *c, "Admissibility constant (default: computed)");
    sub->add_option("--out", *out, "Signal output (.csv or binary)")->required();
    sub->add_option("--method", *method, "auto, fft or direct")->capture_default_str();
    sub->callback([&ctx, coeffs, atom_path, group, out, method, c] {
      ctx.run = [&ctx, coeffs, atom_path, group, out, method, c] {
        cmd_icwt(ctx, *coeffs, *atom_path, *group, *c, *method, *out);
      };
    });
  }
  {
    auto* sub = app.add_subcommand("haar-check", "Orbit integral versus Haar integral of a Gaussian");
    auto path = std::make_shared<std::string>();
    auto sigma = std::make_shared<double>(1.0);
    auto qf = std::make_shared<QuadFlags>();
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--sigma", *sigma, "Gaussian width")->capture_default_str()->check(CLI::PositiveNumber);
    qf->add(sub);
    sub->callback([&ctx, path, sigma, qf] { ctx.run = [&ctx, path, sigma, qf] { cmd_haar_check(ctx, *path, *sigma, *qf); }; });
  }
  {
    auto* sub = app.add_subcommand("phi-check", "Direct versus convolution evaluation of Phi_l");
    auto path = std::make_shared<std::string>();
    auto ell = std::make_shared<int>(-1);
    auto samples = std::make_shared<int>(10);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto box = std::make_shared<double>(1.0);
    auto qf = std::make_shared<QuadFlags>();
    sub->add_option("--group", *path, "Group spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--ell", *ell, "Exponent l (default: d + 2)");
    sub->add_option("--samples", *samples, "Random group elements")->capture_default_str()->check(CLI::Range(1, 10000));
    sub->add_option("--seed", *seed, "Random seed")->capture_default_str();
    sub->add_option("--box", *box, "Chart parameters drawn from [-box, box]")->capture_default_str();
    qf->add(sub);
    sub->callback([&ctx, path, ell, samples, seed, box, qf] {
      ctx.run = [&ctx, path, ell, samples, seed, box, qf] { cmd_phi_check(ctx, *path, *ell, *samples, *seed, *box, *qf); };
    });
  }
}

}  // namespace orbitlet::cli
