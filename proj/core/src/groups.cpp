#include "orbitlet/groups.hpp"

#include "orbitlet/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace orbitlet::groups {

namespace {

constexpr double kSpanTol = 1e-9;

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

// Orthonormal basis (columns) of the span of the given vectors.
Matrix orth(const std::vector<Vector>& vs, Eigen::Index len) {
  if (vs.empty()) return Matrix(len, 0);
  Matrix a(len, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = vs[i];
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  const double smax = s.size() ? s[0] : 0.0;
  while (r < s.size() && s[r] > kSpanTol * std::max(1.0, smax)) ++r;
  return svd.matrixU().leftCols(r);
}

double span_residual(const Matrix& q, const Vector& v) {
  if (q.cols() == 0) return v.norm();
  return (v - q * (q.transpose() * v)).norm();
}

std::vector<Vector> flat_all(const std::vector<Matrix>& ms) {
  std::vector<Vector> out;
  for (const auto& m : ms) out.push_back(flatten(m));
  return out;
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix m = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    m.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return m;
}

}  // namespace

void ValidationReport::add(std::string name, bool ok, std::string detail) {
  checks.push_back(Check{std::move(name), ok, std::move(detail)});
  passed = passed && ok;
}

std::string ValidationReport::summary() const {
  std::string s;
  for (const auto& c : checks)
    if (!c.passed) s += (s.empty() ? "" : "; ") + c.name + (c.detail.empty() ? "" : ": " + c.detail);
  return s.empty() ? "all checks passed" : s;
}

GroupSpec::GroupSpec(Family family, std::string name) : family_(std::move(family)), name_(std::move(name)) {
  dim_ = std::visit(
      [](const auto& f) -> int {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Diagonal> || std::is_same_v<T, Similitude>) {
          if (f.dim < 1) throw ParseError("group dimension must be positive");
          return f.dim;
        } else if constexpr (std::is_same_v<T, Shearlet2D>) {
          if (!std::isfinite(f.c)) throw ParseError("shearlet parameter c must be finite");
          return 2;
        } else if constexpr (std::is_same_v<T, GeneralizedShearlet>) {
          if (f.basis.empty()) throw ParseError("generalized shearlet needs d >= 2");
          return static_cast<int>(f.basis.size()) + 1;
        } else if constexpr (std::is_same_v<T, AbelianFromAlgebra>) {
          return f.alg.dim();
        } else {
          if (f.factors.empty()) throw ParseError("direct product needs at least one factor");
          int n = 0;
          for (const auto& g : f.factors) n += g.dim();
          return n;
        }
      },
      family_);
}

std::string GroupSpec::family_tag() const {
  static const char* tags[] = {"diagonal", "similitude", "shearlet2d", "generalized_shearlet", "abelian",
                               "direct_product"};
  return tags[family_.index()];
}

int GroupSpec::group_dim() const {
  return std::visit(
      [&](const auto& f) -> int {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Similitude>) {
          return 1 + f.dim * (f.dim - 1) / 2;
        } else if constexpr (std::is_same_v<T, DirectProduct>) {
          int n = 0;
          for (const auto& g : f.factors) n += g.group_dim();
          return n;
        } else {
          return dim_;
        }
      },
      family_);
}

Matrix ShearletView::shear(const Vector& t) const {
  const Eigen::Index d = static_cast<Eigen::Index>(basis.size()) + 1;
  Matrix x = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < basis.size(); ++i) x += t[static_cast<Eigen::Index>(i)] * basis[i];
  return x;
}

std::optional<ShearletView> shearlet_view(const GroupSpec& spec) {
  const auto& f = spec.family();
  if (const auto* s = std::get_if<Shearlet2D>(&f)) {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 1.0;
    Vector y(2);
    y << 1.0, s->c;
    return ShearletView{{x}, y, 2};
  }
  if (const auto* g = std::get_if<GeneralizedShearlet>(&f)) return ShearletView{g->basis, g->y, g->nilpotency_class};
  if (const auto* a = std::get_if<AbelianFromAlgebra>(&f)) {
    const auto& alg = a->alg;
    const int n = alg.dim();
    if (n < 2 || !alg.is_irreducible() || alg.unit_index() != 0) return std::nullopt;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k)
          if (alg.cq(i, j, k) != 0) return std::nullopt;
    ShearletView v;
    for (int i = 1; i < n; ++i) {
      Vector e = Vector::Zero(n);
      e[i] = 1.0;
      v.basis.push_back(algebra::regular_representation(alg, e).transpose());
    }
    v.y = Vector::Ones(n);
    v.nilpotency_class = alg.radical().nilpotency_class;
    return v;
  }
  return std::nullopt;
}

int lie_nilpotency_class(const std::vector<Matrix>& basis) {
  if (basis.empty()) return 1;
  const Eigen::Index len = basis.front().size();
  const Eigen::Index d = basis.front().rows();
  std::vector<Matrix> power = basis;
  int cls = 1;
  while (true) {
    Matrix q = orth(flat_all(power), len);
    if (q.cols() == 0) return cls;
    ++cls;
    std::vector<Matrix> next;
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      Matrix z = Eigen::Map<const Matrix>(q.col(c).data(), d, d);
      for (const auto& x : basis) next.push_back(x * z);
    }
    power = next;
    if (cls > d + 1) throw NotAShearingSubgroup("shear basis is not nilpotent");
  }
}

ValidationReport validate_shearing(const std::vector<Matrix>& basis) {
  ValidationReport rep;
  const int d = static_cast<int>(basis.size()) + 1;
  bool shapes = !basis.empty();
  for (const auto& x : basis) shapes = shapes && x.rows() == d && x.cols() == d;
  std::ostringstream dd;
  dd << basis.size() << " matrices, expected d-1 matrices of size d x d";
  if (!shapes) {
    rep.add("dimension", false, dd.str());
    return rep;
  }
  double scale = 1.0;
  for (const auto& x : basis) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  const double tol = kSpanTol * scale;

  bool upper = true;
  for (const auto& x : basis)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) upper = upper && std::abs(x(i, j)) <= tol;
  rep.add("strictly_upper_triangular", upper);

  bool commute = true;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      commute = commute && (basis[i] * basis[j] - basis[j] * basis[i]).cwiseAbs().maxCoeff() <= tol * scale;
  rep.add("commuting", commute);

  Matrix q = orth(flat_all(basis), static_cast<Eigen::Index>(d) * d);
  bool closed = true;
  for (const auto& a : basis)
    for (const auto& b : basis) closed = closed && span_residual(q, flatten(a * b)) <= tol * scale;
  rep.add("closed_under_products", closed);

  Matrix f(d - 1, d - 1);
  for (int i = 0; i < d - 1; ++i) f.row(i) = basis[i].row(0).tail(d - 1);
  Eigen::JacobiSVD<Matrix> svd(f);
  const auto& s = svd.singularValues();
  const bool injective = s[s.size() - 1] > kSpanTol * std::max(1.0, s[0]);
  rep.add("first_rows_canonical", injective, injective ? "" : "first-row map is not one-to-one");

  rep.add("dimension", q.cols() == d - 1, q.cols() == d - 1 ? "" : "basis matrices are linearly dependent");
  return rep;
}

ValidationReport validate_diagonal_complement(const Vector& y, const std::vector<Matrix>& basis) {
  ValidationReport rep;
  const int d = static_cast<int>(basis.size()) + 1;
  if (y.size() != d) {
    rep.add("dimension", false, "Y has the wrong size");
    return rep;
  }
  Matrix ym = y.asDiagonal();
  Matrix q = orth(flat_all(basis), static_cast<Eigen::Index>(d) * d);
  double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  for (const auto& x : basis) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  bool ok = true;
  for (const auto& x : basis) ok = ok && span_residual(q, flatten(x * ym - ym * x)) <= kSpanTol * scale * scale;
  rep.add("commutator_in_span", ok);
  rep.add("first_entry_nonzero", y[0] != 0.0);
  return rep;
}

Vector normalize_Y(const Vector& y) {
  if (y.size() == 0 || y[0] == 0.0) throw ParseError("Y must have a nonzero first diagonal entry");
  return y / y[0];
}

GroupSpec make_generalized_shearlet(const std::vector<Matrix>& basis, const Vector& y, std::string name) {
  ValidationReport rep = validate_shearing(basis);
  if (!rep.passed) throw NotAShearingSubgroup("invalid shearing basis: " + rep.summary());
  const int d = static_cast<int>(basis.size()) + 1;
  Matrix f(d - 1, d - 1);
  for (int i = 0; i < d - 1; ++i) f.row(i) = basis[i].row(0).tail(d - 1);
  Matrix m = f.inverse();
  std::vector<Matrix> canon(basis.size(), Matrix::Zero(d, d));
  for (int k = 0; k < d - 1; ++k)
    for (int i = 0; i < d - 1; ++i) canon[k] += m(k, i) * basis[i];
  for (auto& x : canon)  // clean round-off on exact patterns
    x = x.unaryExpr([](double v) { return std::abs(v - std::round(v)) < 1e-13 ? std::round(v) : v; });
  ValidationReport yrep = validate_diagonal_complement(y, canon);
  if (!yrep.passed) throw ParseError("Y is not a diagonal complement: " + yrep.summary());
  GeneralizedShearlet g{canon, normalize_Y(y), lie_nilpotency_class(canon)};
  return GroupSpec(std::move(g), std::move(name));
}

std::vector<Matrix> build_shearing_from_algebra(const algebra::StructureConstants& alg) {
  if (!alg.is_irreducible() || alg.dim() < 2)
    throw NotAShearingSubgroup("algebra is not irreducible with a nontrivial radical");
  algebra::StructureConstants adapted = algebra::change_basis(alg, algebra::adapted_basis(alg));
  const int n = adapted.dim();
  std::vector<Matrix> basis;
  for (int i = 1; i < n; ++i) {
    QVector e(n);
    e[i] = 1;
    QMatrix rho = algebra::regular_representation(adapted, e);
    Matrix x(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) x(c, r) = orbitlet::to_double(rho(r, c));
    basis.push_back(x);
  }
  ValidationReport rep = validate_shearing(basis);
  if (!rep.passed) throw NotAShearingSubgroup("degenerate algebra: " + rep.summary());
  return basis;
}

std::vector<Matrix> build_shearing_from_nilpotent(const algebra::NilpotentTensor& nil) {
  return build_shearing_from_algebra(algebra::unitization(nil));
}

namespace {

ShearletView require_view(const GroupSpec& spec) {
  auto v = shearlet_view(spec);
  if (!v) throw UnsupportedInput("operation needs a shearlet-type group, got " + spec.family_tag());
  return *v;
}

Matrix assemble(const ShearletView& v, int sign, double r, const Vector& t) {
  const Eigen::Index d = v.y.size();
  Vector e = (r * v.y).array().exp();
  return static_cast<double>(sign) * (Matrix::Identity(d, d) + v.shear(t)) * e.asDiagonal();
}

Factored factor_view(const ShearletView& v, const Matrix& h) {
  const Eigen::Index d = v.y.size();
  if (h.rows() != d || h.cols() != d) throw DimensionMismatch("factor: matrix size differs from group dimension");
  if (h(0, 0) == 0.0 || !std::isfinite(h(0, 0))) throw NotInGroup("first diagonal entry vanishes");
  Factored fz;
  fz.sign = h(0, 0) > 0 ? 1 : -1;
  fz.r = std::log(std::abs(h(0, 0)));
  Vector einv = (-fz.r * v.y).array().exp();
  Matrix u = static_cast<double>(fz.sign) * h * einv.asDiagonal();
  fz.t = u.row(0).tail(d - 1).transpose();
  Matrix resid = u - Matrix::Identity(d, d) - v.shear(fz.t);
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  if (resid.cwiseAbs().maxCoeff() > kSpanTol * scale) throw NotInGroup("matrix does not match the +-DS pattern");
  return fz;
}

}  // namespace

GroupElement element_from_factored(const GroupSpec& spec, int sign, double r, const Vector& t) {
  ShearletView v = require_view(spec);
  if (t.size() != v.y.size() - 1) throw DimensionMismatch("shear vector must have length d-1");
  if (sign != 1 && sign != -1) throw ParseError("sign must be +1 or -1");
  return GroupElement{assemble(v, sign, r, t), Factored{sign, r, t}};
}

Factored factor(const GroupSpec& spec, const Matrix& h) { return factor_view(require_view(spec), h); }

GroupElement shearlet2d_element(double c, int sign, double a, double b) {
  if (!(a > 0.0)) throw NotInGroup("shearlet parameter a must be positive");
  Matrix m(2, 2);
  m << a, b, 0.0, std::pow(a, c);
  m *= static_cast<double>(sign);
  Vector t(1);
  t[0] = b / std::pow(a, c);
  return GroupElement{m, Factored{sign, std::log(a), t}};
}

GroupElement make_element(const GroupSpec& spec, const Matrix& h) {
  if (h.rows() != spec.dim() || h.cols() != spec.dim()) throw DimensionMismatch("element size differs from group dimension");
  if (auto v = shearlet_view(spec)) return GroupElement{h, factor_view(*v, h)};
  if (!contains(spec, h)) throw NotInGroup("matrix is not an element of the " + spec.family_tag() + " group");
  return GroupElement{h, std::nullopt};
}

Matrix unipotent_inverse(const Matrix& x, int nilpotency_class) {
  const Eigen::Index d = x.rows();
  Matrix sum = Matrix::Identity(d, d);
  Matrix term = Matrix::Identity(d, d);
  for (int j = 1; j < nilpotency_class; ++j) {
    term = -term * x;
    sum += term;
  }
  return sum;
}

GroupElement group_inverse(const GroupSpec& spec, const GroupElement& h) {
  if (auto v = shearlet_view(spec)) {
    Factored fz = h.factored ? *h.factored : factor_view(*v, h.matrix);
    Vector einv = (-fz.r * v->y).array().exp();
    // X(t)^n = 0 for the nilpotency class n, so the Neumann series is finite.
    Matrix inv = static_cast<double>(fz.sign) * einv.asDiagonal() *
                 unipotent_inverse(v->shear(fz.t), v->nilpotency_class);
    return GroupElement{inv, factor_view(*v, inv)};
  }
  Eigen::PartialPivLU<Matrix> lu(h.matrix);
  if (std::abs(h.matrix.determinant()) == 0.0) throw SingularElement("singular group element");
  return GroupElement{lu.inverse(), std::nullopt};
}

GroupElement compose(const GroupSpec& spec, const GroupElement& a, const GroupElement& b) {
  Matrix m = a.matrix * b.matrix;
  if (auto v = shearlet_view(spec)) return GroupElement{m, factor_view(*v, m)};
  return GroupElement{m, std::nullopt};
}

bool contains(const GroupSpec& spec, const Matrix& h, double tol) {
  const int d = spec.dim();
  if (h.rows() != d || h.cols() != d || !h.allFinite()) return false;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const auto& f = spec.family();
  if (shearlet_view(spec)) {
    try {
      factor(spec, h);
      return true;
    } catch (const NotInGroup&) {
      return false;
    }
  }
  if (std::holds_alternative<Diagonal>(f)) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j ? std::abs(h(i, j)) > tol * scale : h(i, j) == 0.0) return false;
    return true;
  }
  if (std::holds_alternative<Similitude>(f)) {
    if (d == 1) return h(0, 0) != 0.0;
    Matrix g = h.transpose() * h;
    const double lam = g(0, 0);
    if (!(lam > 0.0) || h.determinant() <= 0.0) return false;
    return (g - lam * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol * lam;
  }
  if (const auto* a = std::get_if<AbelianFromAlgebra>(&f)) {
    Matrix basis(static_cast<Eigen::Index>(d) * d, d);
    for (int i = 0; i < d; ++i) {
      Vector e = Vector::Zero(d);
      e[i] = 1.0;
      Matrix rt = algebra::regular_representation(a->alg, e).transpose();
      basis.col(i) = flatten(rt);
    }
    Vector coeffs = basis.colPivHouseholderQr().solve(flatten(h));
    if ((basis * coeffs - flatten(h)).norm() > tol * scale) return false;
    return algebra::is_unit(a->alg, coeffs);
  }
  const auto& p = std::get<DirectProduct>(f);
  int off = 0;
  for (const auto& g : p.factors) {
    const int m = g.dim();
    for (int i = off; i < off + m; ++i)
      for (int j = 0; j < d; ++j)
        if ((j < off || j >= off + m) && std::abs(h(i, j)) > tol * scale) return false;
    if (!contains(g, h.block(off, off, m, m), tol)) return false;
    off += m;
  }
  return true;
}

ModularData modular_data(const GroupSpec& spec, const GroupElement& h) {
  ModularData md;
  const auto& f = spec.family();
  std::optional<double> tr;  // trace Y for shearlet-type presentations
  if (const auto* s = std::get_if<Shearlet2D>(&f)) tr = 1.0 + s->c;
  if (const auto* g = std::get_if<GeneralizedShearlet>(&f)) tr = g->y.sum();
  if (std::holds_alternative<AbelianFromAlgebra>(f) && shearlet_view(spec)) tr = spec.dim();
  if (tr) {
    // det(eps (I+X) exp(rY)) = eps^d exp(r tr Y), exact even where LU would underflow.
    const Factored fac = h.factored ? *h.factored : factor(spec, h.matrix);
    const double sign = (fac.sign < 0 && spec.dim() % 2 == 1) ? -1.0 : 1.0;
    md.det = sign * std::exp(fac.r * *tr);
    md.delta_h = std::exp(fac.r * (*tr - spec.dim()));
    md.delta_g = std::exp(-fac.r * spec.dim());
    return md;
  }
  md.det = h.matrix.determinant();
  if (md.det == 0.0) throw NotInGroup("singular matrix");
  if (const auto* p = std::get_if<DirectProduct>(&f)) {
    int off = 0;
    for (const auto& g : p->factors) {
      const int m = g.dim();
      GroupElement blk{h.matrix.block(off, off, m, m), std::nullopt};
      md.delta_h *= modular_data(g, blk).delta_h;
      off += m;
    }
  }
  md.delta_g = md.delta_h / std::abs(md.det);
  return md;
}

Vector dual_action(const Matrix& h, const Vector& xi) {
  if (h.cols() != xi.size()) throw DimensionMismatch("dual_action: dimensions differ");
  return h.transpose() * xi;
}

Vector base_point(const GroupSpec& spec) {
  if (const auto* p = std::get_if<DirectProduct>(&spec.family())) {
    Vector out(spec.dim());
    int off = 0;
    for (const auto& g : p->factors) {
      out.segment(off, g.dim()) = base_point(g);
      off += g.dim();
    }
    return out;
  }
  if (std::holds_alternative<Diagonal>(spec.family())) return Vector::Ones(spec.dim());
  if (const auto* a = std::get_if<AbelianFromAlgebra>(&spec.family())) {
    if (auto u = a->alg.unit_index()) return Vector::Unit(spec.dim(), *u);
    return a->alg.unit();
  }
  return Vector::Unit(spec.dim(), 0);
}

GroupSpec standard_shearlet(int d) {
  if (d < 2) throw UnsupportedInput("shearlet groups need d >= 2");
  Vector half = Vector::Constant(d, 0.5);
  half[0] = 1.0;
  return make_generalized_shearlet(build_shearing_from_algebra(algebra::trivial_extension(d)), half, "standard");
}

GroupSpec toeplitz_shearlet(int d) {
  if (d < 2) throw UnsupportedInput("shearlet groups need d >= 2");
  return make_generalized_shearlet(build_shearing_from_algebra(algebra::truncated_polynomial(d)), Vector::Ones(d),
                                   "toeplitz");
}

std::vector<GroupSpec> enumerate_catalog(int d) {
  if (d < 2 || d > 4) throw UnsupportedInput("catalog covers dimensions 2, 3 and 4");
  std::vector<GroupSpec> out{standard_shearlet(d)};
  if (d >= 3) out.push_back(toeplitz_shearlet(d));
  if (d == 4)
    for (int a : {-1, 0, 1})
      out.push_back(make_generalized_shearlet(build_shearing_from_algebra(algebra::h_algebra(Rational(a))),
                                              Vector::Ones(d), "H_" + std::to_string(a)));
  return out;
}

namespace {

Matrix givens_product(int d, std::span<const double> angles) {
  Matrix r = Matrix::Identity(d, d);
  std::size_t k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double c = std::cos(angles[k]), s = std::sin(angles[k]);
      ++k;
      Matrix g = Matrix::Identity(d, d);
      g(i, i) = c;
      g(j, j) = c;
      g(i, j) = -s;
      g(j, i) = s;
      r = r * g;
    }
  return r;
}

}  // namespace

HaarChart haar_chart(const GroupSpec& spec) {
  HaarChart ch;
  const int d = spec.dim();
  if (auto v = shearlet_view(spec)) {
    ch.axes.push_back({AxisRole::Scale, "r"});
    for (int i = 1; i < d; ++i) ch.axes.push_back({AxisRole::Shear, "t" + std::to_string(i)});
    ch.sign_patterns = 2;
    ch.has_density = true;
    const ShearletView view = *v;
    const double slope = view.y.sum() - d;
    ch.element = [view, d](int pattern, std::span<const double> p) {
      Vector t(d - 1);
      for (int i = 0; i < d - 1; ++i) t[i] = p[1 + i];
      const int sign = pattern == 0 ? 1 : -1;
      return GroupElement{assemble(view, sign, p[0], t), Factored{sign, p[0], t}};
    };
    ch.density = [slope](std::span<const double> p) { return std::exp(slope * p[0]); };
    return ch;
  }
  const auto& f = spec.family();
  if (std::holds_alternative<Diagonal>(f)) {
    for (int i = 0; i < d; ++i) ch.axes.push_back({AxisRole::Scale, "r" + std::to_string(i + 1)});
    ch.sign_patterns = 1 << d;
    ch.has_density = true;
    ch.element = [d](int pattern, std::span<const double> p) {
      Vector diag(d);
      for (int i = 0; i < d; ++i) diag[i] = ((pattern >> i) & 1 ? -1.0 : 1.0) * std::exp(p[i]);
      return GroupElement{Matrix(diag.asDiagonal()), std::nullopt};
    };
    ch.density = [](std::span<const double>) { return 1.0; };
    return ch;
  }
  if (std::holds_alternative<Similitude>(f)) {
    ch.axes.push_back({AxisRole::Scale, "r"});
    for (int i = 0; i < d * (d - 1) / 2; ++i) ch.axes.push_back({AxisRole::Angle, "theta" + std::to_string(i + 1)});
    ch.sign_patterns = d == 1 ? 2 : 1;
    ch.has_density = d <= 2;  // Givens angles are not Haar coordinates beyond SO(2)
    ch.element = [d](int pattern, std::span<const double> p) {
      Matrix m = std::exp(p[0]) * givens_product(d, p.subspan(1));
      if (pattern == 1) m = -m;
      return GroupElement{m, std::nullopt};
    };
    ch.density = [](std::span<const double>) { return 1.0; };
    return ch;
  }
  if (const auto* pr = std::get_if<DirectProduct>(&f)) {
    std::vector<HaarChart> sub;
    for (const auto& g : pr->factors) sub.push_back(haar_chart(g));
    ch.has_density = true;
    for (const auto& s : sub) {
      ch.axes.insert(ch.axes.end(), s.axes.begin(), s.axes.end());
      ch.sign_patterns *= s.sign_patterns;
      ch.has_density = ch.has_density && s.has_density;
    }
    ch.element = [sub](int pattern, std::span<const double> p) {
      std::vector<Matrix> blocks;
      std::size_t off = 0;
      for (const auto& s : sub) {
        const int pat = pattern % s.sign_patterns;
        pattern /= s.sign_patterns;
        blocks.push_back(s.element(pat, p.subspan(off, s.axes.size())).matrix);
        off += s.axes.size();
      }
      return GroupElement{block_diag(blocks), std::nullopt};
    };
    ch.density = [sub](std::span<const double> p) {
      double v = 1.0;
      std::size_t off = 0;
      for (const auto& s : sub) {
        v *= s.density(p.subspan(off, s.axes.size()));
        off += s.axes.size();
      }
      return v;
    };
    return ch;
  }
  throw UnsupportedInput("no parameter chart for this " + spec.family_tag() + " group presentation");
}

}  // namespace orbitlet::groups
