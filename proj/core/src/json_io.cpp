#include "orbitlet/json_io.hpp"

#include "orbitlet/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace orbitlet::json_io {

namespace {

const json& field(const json& j, const std::string& key) {
  if (!j.is_object()) throw ParseError("expected a JSON object while reading '" + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError("missing field '" + key + "'");
  return *it;
}

int int_field(const json& j, const std::string& key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw ParseError("field '" + key + "' must be an integer");
  return v.get<int>();
}

Rational rational_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return parse_rational(os.str());
  }
  throw ParseError("field '" + where + "' must hold numbers or rational strings");
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n')
      ++line, col = 1;
    else
      ++col;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + line_col(text, e.byte) + ": malformed JSON");
  }
}

json load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_text(ss.str(), path.string());
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j, const std::string& f) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
      return to_double(parse_rational(s));
    } catch (const Error&) {
      throw ParseError("field '" + f + "' is not a number: " + s);
    }
  }
  throw ParseError("field '" + f + "' must be a number");
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(number(m(i, k)));
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t n = j.size(), m = j[0].size();
  Eigen::MatrixXd out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != m) throw ParseError("matrix rows must have equal length");
    for (std::size_t k = 0; k < m; ++k) out(i, k) = number_from_json(j[i][k], "matrix");
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("vector must be a nonempty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number_from_json(j[i], "vector");
  return v;
}

algebra::StructureConstants algebra_from_json(const json& j) {
  if (j.is_object() && j.contains("nilpotent")) {
    const json& n = j["nilpotent"];
    algebra::NilpotentTensor nt;
    nt.dim = int_field(n, "dim");
    if (nt.dim < 1) throw ParseError("nilpotent dimension must be positive");
    const json& t = field(n, "tensor");
    for (int a = 0; a < nt.dim; ++a)
      for (int b = 0; b < nt.dim; ++b)
        for (int c = 0; c < nt.dim; ++c) {
          try {
            nt.tensor.push_back(rational_from_json(t.at(a).at(b).at(c), "tensor"));
          } catch (const json::exception&) {
            throw ParseError("nilpotent tensor must be dim x dim x dim");
          }
        }
    return algebra::unitization(nt);
  }
  const int n = int_field(j, "dim");
  if (n < 1 || n > 12) throw ParseError("algebra dimension must lie in [1, 12]");
  const json& t = field(j, "tensor");
  std::vector<Rational> tensor;
  tensor.reserve(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        try {
          tensor.push_back(rational_from_json(t.at(a).at(b).at(c), "tensor"));
        } catch (const json::exception&) {
          throw ParseError("tensor must be dim x dim x dim");
        }
      }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  if (j.contains("unit_index")) return algebra::StructureConstants::with_unit_index(n, tensor, int_field(j, "unit_index"), labels);
  QVector unit;
  for (const auto& v : field(j, "unit")) unit.push_back(rational_from_json(v, "unit"));
  if (static_cast<int>(unit.size()) != n) throw DimensionMismatch("unit length differs from algebra dimension");
  return algebra::StructureConstants(n, tensor, unit, labels);
}

json algebra_to_json(const algebra::StructureConstants& a) {
  const int n = a.dim();
  json t = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int k = 0; k < n; ++k) {
      json cell = json::array();
      for (int m = 0; m < n; ++m) cell.push_back(to_string(a.cq(i, k, m)));
      row.push_back(cell);
    }
    t.push_back(row);
  }
  json out{{"dim", n}, {"tensor", t}};
  json u = json::array();
  for (const auto& q : a.unit_exact()) u.push_back(to_string(q));
  out["unit"] = u;
  if (!a.labels().empty()) out["labels"] = a.labels();
  return out;
}

groups::GroupSpec group_from_json(const json& j) {
  const json& fam = field(j, "family");
  if (!fam.is_string()) throw ParseError("field 'family' must be a string");
  const std::string f = fam.get<std::string>();
  const std::string name = j.value("name", std::string{});
  if (f == "diagonal") return groups::GroupSpec(groups::Diagonal{int_field(j, "dim")}, name);
  if (f == "similitude") return groups::GroupSpec(groups::Similitude{int_field(j, "dim")}, name);
  if (f == "shearlet2d") return groups::GroupSpec(groups::Shearlet2D{number_from_json(field(j, "c"), "c")}, name);
  if (f == "catalog") {
    const int d = int_field(j, "dim");
    const std::string want = field(j, "name").get<std::string>();
    std::string known;
    for (auto& g : groups::enumerate_catalog(d)) {
      if (g.name() == want) return g;
      known += (known.empty() ? "" : ", ") + g.name();
    }
    throw ParseError("unknown catalog group '" + want + "' in dimension " + std::to_string(d) + " (known: " + known + ")");
  }
  if (f == "standard_shearlet") return groups::standard_shearlet(int_field(j, "dim"));
  if (f == "toeplitz_shearlet") return groups::toeplitz_shearlet(int_field(j, "dim"));
  if (f == "generalized_shearlet") {
    std::vector<Eigen::MatrixXd> basis;
    for (const auto& m : field(j, "basis")) basis.push_back(matrix_from_json(m));
    return groups::make_generalized_shearlet(basis, vector_from_json(field(j, "y")), name);
  }
  if (f == "algebra_shearlet") {
    const auto alg = algebra_from_json(field(j, "algebra"));
    return groups::make_generalized_shearlet(groups::build_shearing_from_algebra(alg), vector_from_json(field(j, "y")),
                                             name);
  }
  if (f == "abelian") return groups::GroupSpec(groups::AbelianFromAlgebra{algebra_from_json(field(j, "algebra"))}, name);
  if (f == "direct_product") {
    groups::DirectProduct p;
    for (const auto& g : field(j, "factors")) p.factors.push_back(group_from_json(g));
    return groups::GroupSpec(std::move(p), name);
  }
  throw ParseError("unknown group family '" + f + "'");
}

json group_to_json(const groups::GroupSpec& g) {
  json out{{"family", g.family_tag()}, {"dim", g.dim()}};
  if (!g.name().empty()) out["name"] = g.name();
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, groups::Shearlet2D>) {
          out.erase("dim");
          out["c"] = number(f.c);
        } else if constexpr (std::is_same_v<T, groups::GeneralizedShearlet>) {
          out.erase("dim");
          json b = json::array();
          for (const auto& m : f.basis) b.push_back(matrix_to_json(m));
          out["basis"] = b;
          out["y"] = vector_to_json(f.y);
        } else if constexpr (std::is_same_v<T, groups::AbelianFromAlgebra>) {
          out.erase("dim");
          out["algebra"] = algebra_to_json(f.alg);
        } else if constexpr (std::is_same_v<T, groups::DirectProduct>) {
          out.erase("dim");
          json fs = json::array();
          for (const auto& s : f.factors) fs.push_back(group_to_json(s));
          out["factors"] = fs;
        }
      },
      g.family());
  return out;
}

embeddedness::WeightSpec weight_from_json(const json& j) {
  embeddedness::WeightSpec w;
  if (!j.is_object()) throw ParseError("weight must be a JSON object");
  if (j.contains("p")) w.p = number_from_json(j["p"], "p");
  if (j.contains("q")) w.q = number_from_json(j["q"], "q");
  if (j.contains("s")) w.s = number_from_json(j["s"], "s");
  if (j.contains("weight")) {
    const json& b = j["weight"];
    if (b.is_string() && b.get<std::string>() == "max_delta")
      w.base = embeddedness::MaxDelta{};
    else if (b.is_object() && b.contains("power"))
      w.base = embeddedness::PowerWeight{number_from_json(b["power"], "power")};
    else
      throw ParseError("field 'weight' must be \"max_delta\" or {\"power\": k}");
  }
  w.validate();
  return w;
}

json weight_to_json(const embeddedness::WeightSpec& w) {
  json out{{"p", number(w.p)}, {"q", number(w.q)}, {"s", number(w.s)}};
  if (const auto* pw = std::get_if<embeddedness::PowerWeight>(&w.base))
    out["weight"] = json{{"power", number(pw->k)}};
  else
    out["weight"] = "max_delta";
  return out;
}

embeddedness::ExponentSet exponents_from_json(const json& j) {
  embeddedness::ExponentSet e;
  e.e1 = number_from_json(field(j, "e1"), "e1");
  e.e2 = number_from_json(field(j, "e2"), "e2");
  e.e3 = number_from_json(field(j, "e3"), "e3");
  e.e4 = number_from_json(field(j, "e4"), "e4");
  e.provenance = embeddedness::Provenance::User;
  e.validate();
  return e;
}

json to_json(const embeddedness::ExponentSet& e) {
  return {{"e1", number(e.e1)}, {"e2", number(e.e2)}, {"e3", number(e.e3)}, {"e4", number(e.e4)},
          {"provenance", embeddedness::to_string(e.provenance)}};
}

json to_json(const embeddedness::EmbeddingReport& r) {
  json out{{"dim", r.dim},
           {"exponents", to_json(r.exponents)},
           {"ell_temperate", r.ell_temperate},
           {"ell_strong", r.ell_strong},
           {"moments_analyzing", r.moments_analyzing},
           {"moments_atom", r.moments_atom},
           {"notes", r.notes}};
  out["closed_form_atom_order"] = r.closed_form_atom_order ? json(*r.closed_form_atom_order) : json(nullptr);
  return out;
}

json to_json(const embeddedness::EmpiricalReport& r) {
  json ineq = json::array();
  for (const auto& i : r.inequalities) {
    json s = json::array();
    for (double v : i.stage_sup) s.push_back(number(v));
    ineq.push_back({{"name", i.name},
                    {"exponent", number(i.exponent)},
                    {"verdict", embeddedness::to_string(i.verdict)},
                    {"stage_sup", s},
                    {"least_exponent", i.least_exponent ? number(*i.least_exponent) : json(nullptr)}});
  }
  return {{"verdict", embeddedness::to_string(r.verdict)}, {"samples", r.samples}, {"inequalities", ineq}};
}

json to_json(const algebra::InvariantRecord& r) {
  json out{{"dim", r.dim}, {"nilpotency_class", r.nilpotency_class}, {"power_dims", r.power_dims}};
  if (r.form_rank) out["form_rank"] = *r.form_rank;
  if (r.form_abs_signature) out["form_abs_signature"] = *r.form_abs_signature;
  return out;
}

json to_json(const groups::ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
  }
  return {{"passed", r.passed}, {"checks", checks}};
}

json to_json(const atoms::SpectrumProbe& p) {
  json lines = json::array();
  for (const auto& l : p.lines) {
    json mags = json::array();
    for (double m : l.magnitude) mags.push_back(number(m));
    lines.push_back({{"eta", vector_to_json(l.eta)},
                     {"direction", vector_to_json(l.direction)},
                     {"t", l.t},
                     {"magnitude", mags},
                     {"slope", number(l.slope)},
                     {"residual", number(l.residual)},
                     {"usable", l.usable}});
  }
  json moments = json::array();
  for (const auto& m : p.moments)
    moments.push_back({{"alpha", m.alpha},
                       {"eta", vector_to_json(m.eta)},
                       {"value", number(m.value)},
                       {"scale", number(m.scale)},
                       {"pass", m.pass}});
  return {{"fitted_order", number(p.fitted_order)}, {"residual", number(p.residual)}, {"verdict", p.verdict},
          {"moments_pass", p.moments_pass},         {"lines", lines},                 {"moments", moments}};
}

json to_json(const atoms::AdmissibilityReport& r) {
  json series = json::array();
  for (const auto& s : r.series) {
    json shells = json::array(), partial = json::array();
    for (double v : s.shells) shells.push_back(number(v));
    for (double v : s.partial_sums) partial.push_back(number(v));
    series.push_back({{"direction", s.direction},
                      {"axis", s.axis},
                      {"verdict", atoms::to_string(s.verdict)},
                      {"shells", shells},
                      {"partial_sums", partial}});
  }
  return {{"verdict", atoms::to_string(r.verdict)}, {"integral", number(r.integral)}, {"series", series}};
}

json to_json(const orbit::EnvelopeValue& v) {
  return {{"A", number(v.a)}, {"distance", number(v.distance)}, {"nearest", vector_to_json(v.nearest)}};
}

json atom_to_json(const atoms::Atom& a) {
  json base = json::array();
  for (const auto& ax : a.base.axes) base.push_back({{"degree", ax.degree}, {"lo", number(ax.lo)}, {"hi", number(ax.hi)}});
  return {{"schema", kSchema}, {"operator", atoms::to_string(a.plan.kind)}, {"r", a.r}, {"base", base}};
}

atoms::Atom atom_from_json(const json& j) {
  atoms::SplineBase base;
  for (const auto& ax : field(j, "base")) {
    bspline::Scaled s;
    s.degree = int_field(ax, "degree");
    s.lo = number_from_json(field(ax, "lo"), "lo");
    s.hi = number_from_json(field(ax, "hi"), "hi");
    base.axes.push_back(s);
  }
  const json& op = field(j, "operator");
  if (!op.is_string()) throw ParseError("field 'operator' must be a string");
  return atoms::make_atom(atoms::operator_kind_from_string(op.get<std::string>()), int_field(j, "r"), base);
}

transform::DilationSampling sampling_from_json(const json& j) {
  transform::DilationSampling s;
  if (!j.is_object()) throw ParseError("dilation sampling must be a JSON object");
  if (j.contains("scale_range")) s.scale_range = number_from_json(j["scale_range"], "scale_range");
  if (j.contains("scale_points")) s.scale_points = int_field(j, "scale_points");
  if (j.contains("shear_range")) s.shear_range = number_from_json(j["shear_range"], "shear_range");
  if (j.contains("shear_points")) s.shear_points = int_field(j, "shear_points");
  if (j.contains("angle_points")) s.angle_points = int_field(j, "angle_points");
  if (j.contains("both_signs")) s.both_signs = field(j, "both_signs").get<bool>();
  return s;
}

json sampling_to_json(const transform::DilationSampling& s) {
  return {{"scale_range", s.scale_range}, {"scale_points", s.scale_points}, {"shear_range", s.shear_range},
          {"shear_points", s.shear_points}, {"angle_points", s.angle_points}, {"both_signs", s.both_signs}};
}

}  // namespace orbitlet::json_io
