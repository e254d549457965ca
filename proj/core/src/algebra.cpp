#include "orbitlet/algebra.hpp"

#include "orbitlet/error.hpp"

#include <cmath>
#include <sstream>

namespace orbitlet::algebra {

namespace {

std::string idx3(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i << "," << j << "," << k << ")";
  return os.str();
}

std::vector<QVector> row_basis(const std::vector<QVector>& vs, int n) {
  if (vs.empty()) return {};
  RowEchelon e = rref(QMatrix::from_rows(vs, n));
  std::vector<QVector> out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) out.push_back(e.reduced.row(static_cast<int>(r)));
  return out;
}

QVector unit_vector(int n, int i) {
  QVector v(n);
  v[i] = 1;
  return v;
}

}  // namespace

QVector to_exact(const Vector& v) {
  QVector q(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) q[i] = snap_rational(v[i]);
  return q;
}

Vector to_double(const QVector& v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) d[static_cast<Eigen::Index>(i)] = orbitlet::to_double(v[i]);
  return d;
}

StructureConstants::StructureConstants(int dim, std::vector<Rational> tensor, QVector unit,
                                       std::vector<std::string> labels) {
  n_ = dim;
  exact_input_ = true;
  tq_ = std::move(tensor);
  unit_q_ = std::move(unit);
  labels_ = std::move(labels);
  if (n_ <= 0) throw ParseError("algebra dimension must be positive");
  if (tq_.size() != static_cast<std::size_t>(n_) * n_ * n_)
    throw ParseError("tensor must have dim^3 entries");
  if (static_cast<int>(unit_q_.size()) != n_) throw ParseError("unit vector has wrong length");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
    throw ParseError("labels must have one entry per basis vector");
  validate_exact();
  finish();
}

StructureConstants StructureConstants::with_unit_index(int dim, std::vector<Rational> tensor,
                                                       int unit_index,
                                                       std::vector<std::string> labels) {
  if (unit_index < 0 || unit_index >= dim) throw ParseError("unit_index out of range");
  return StructureConstants(dim, std::move(tensor), unit_vector(dim, unit_index), std::move(labels));
}

StructureConstants StructureConstants::from_doubles(int dim, const std::vector<double>& tensor,
                                                    const Vector& unit,
                                                    std::vector<std::string> labels) {
  if (dim <= 0) throw ParseError("algebra dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(dim);
  if (tensor.size() != n * n * n) throw ParseError("tensor must have dim^3 entries");
  if (unit.size() != dim) throw ParseError("unit vector has wrong length");
  auto at = [&](int i, int j, int k) { return tensor[(static_cast<std::size_t>(i) * n + j) * n + k]; };
  double scale = 1.0;
  for (double x : tensor) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * scale * scale;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (std::abs(at(i, j, k) - at(j, i, k)) > 1e-12 * scale)
          throw ParseError("commutativity fails at " + idx3(i, j, k));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int m = 0; m < dim; ++m) {
          double lhs = 0, rhs = 0;
          for (int p = 0; p < dim; ++p) {
            lhs += at(i, j, p) * at(p, k, m);
            rhs += at(j, k, p) * at(i, p, m);
          }
          if (std::abs(lhs - rhs) > tol)
            throw ParseError("associativity fails for basis triple " + idx3(i, j, k));
        }
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      double s = 0;
      for (int u = 0; u < dim; ++u) s += unit[u] * at(u, i, k);
      if (std::abs(s - (i == k ? 1.0 : 0.0)) > 1e-12 * scale * std::max(1.0, unit.cwiseAbs().sum()))
        throw ParseError("unit law fails on basis vector " + std::to_string(i));
    }
  StructureConstants out;
  out.n_ = dim;
  out.exact_input_ = false;
  out.tq_.resize(tensor.size());
  for (std::size_t i = 0; i < tensor.size(); ++i) out.tq_[i] = snap_rational(tensor[i]);
  out.unit_q_ = to_exact(unit);
  out.labels_ = std::move(labels);
  if (!out.labels_.empty() && static_cast<int>(out.labels_.size()) != dim)
    throw ParseError("labels must have one entry per basis vector");
  out.finish();
  out.td_ = tensor;  // keep the caller's floats for arithmetic
  return out;
}

void StructureConstants::validate_exact() const {
  const int n = n_;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (cq(i, j, k) != cq(j, i, k)) throw ParseError("commutativity fails at " + idx3(i, j, k));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          Rational lhs = 0, rhs = 0;
          for (int p = 0; p < n; ++p) {
            if (cq(i, j, p) != 0) lhs += cq(i, j, p) * cq(p, k, m);
            if (cq(j, k, p) != 0) rhs += cq(j, k, p) * cq(i, p, m);
          }
          if (lhs != rhs) throw ParseError("associativity fails for basis triple " + idx3(i, j, k));
        }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Rational s = 0;
      for (int u = 0; u < n; ++u)
        if (unit_q_[u] != 0) s += unit_q_[u] * cq(u, i, k);
      if (s != (i == k ? 1 : 0)) throw ParseError("unit law fails on basis vector " + std::to_string(i));
    }
}

void StructureConstants::finish() {
  const int n = n_;
  td_.resize(tq_.size());
  for (std::size_t i = 0; i < tq_.size(); ++i) td_[i] = orbitlet::to_double(tq_[i]);

  // Radical = kernel of the trace form T_ij = tr rho(b_i b_j) (characteristic zero).
  QVector tr(n);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) tr[k] += cq(k, m, m);
  QMatrix t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (cq(i, j, k) != 0) t(i, j) += cq(i, j, k) * tr[k];
  std::vector<QVector> ker = row_basis(nullspace(t), n);

  // Aligned if the coordinate vectors inside ker already span it.
  std::vector<QVector> coord;
  for (int i = 0; i < n; ++i) {
    QVector e = unit_vector(n, i);
    if (in_span(ker, e, n)) coord.push_back(e);
  }
  radical_.aligned = coord.size() == ker.size();
  radical_.basis = radical_.aligned ? coord : ker;

  radical_.power_dims.clear();
  std::vector<QVector> power = radical_.basis;
  while (!power.empty()) {
    radical_.power_dims.push_back(static_cast<int>(power.size()));
    std::vector<QVector> prods;
    for (const auto& x : radical_.basis)
      for (const auto& y : power) prods.push_back(multiply(*this, x, y));
    power = row_basis(prods, n);
  }
  radical_.power_dims.push_back(0);
  // power_dims = (dim N, ..., dim N^m, 0) has m+1 entries and N^{m+1} = 0.
  radical_.nilpotency_class = static_cast<int>(radical_.power_dims.size());
}

Vector StructureConstants::unit() const { return to_double(unit_q_); }

std::optional<int> StructureConstants::unit_index() const {
  std::optional<int> idx;
  for (int i = 0; i < n_; ++i) {
    if (unit_q_[i] == 0) continue;
    if (unit_q_[i] != 1 || idx) return std::nullopt;
    idx = i;
  }
  return idx;
}

Vector multiply(const StructureConstants& alg, const Vector& a, const Vector& b) {
  const int n = alg.dim();
  if (a.size() != n || b.size() != n) throw DimensionMismatch("multiply: element length differs from algebra dimension");
  Vector out = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = a[i] * b[j];
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out[k] += w * alg.c(i, j, k);
    }
  }
  return out;
}

QVector multiply(const StructureConstants& alg, const QVector& a, const QVector& b) {
  const int n = alg.dim();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw DimensionMismatch("multiply: element length differs from algebra dimension");
  QVector out(n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j] == 0) continue;
      Rational w = a[i] * b[j];
      for (int k = 0; k < n; ++k)
        if (alg.cq(i, j, k) != 0) out[k] += w * alg.cq(i, j, k);
    }
  }
  return out;
}

Matrix regular_representation(const StructureConstants& alg, const Vector& a) {
  const int n = alg.dim();
  if (a.size() != n) throw DimensionMismatch("regular_representation: wrong element length");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m(k, j) += a[i] * alg.c(i, j, k);
  }
  return m;
}

QMatrix regular_representation(const StructureConstants& alg, const QVector& a) {
  const int n = alg.dim();
  if (static_cast<int>(a.size()) != n) throw DimensionMismatch("regular_representation: wrong element length");
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (alg.cq(i, j, k) != 0) m(k, j) += a[i] * alg.cq(i, j, k);
  }
  return m;
}

bool is_unit(const StructureConstants& alg, const Vector& a) {
  Matrix r = regular_representation(alg, a);
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  return std::abs(r.determinant()) > 1e-12 * std::pow(scale, alg.dim());
}

bool is_unit(const StructureConstants& alg, const QVector& a) {
  return rank(regular_representation(alg, a)) == alg.dim();
}

namespace {

// Splits a = r 1 + x with x in the radical when the basis is unit + aligned radical.
std::optional<int> split_unit(const StructureConstants& alg) {
  if (!alg.is_irreducible() || !alg.radical().aligned) return std::nullopt;
  return alg.unit_index();
}

}  // namespace

Vector invert(const StructureConstants& alg, const Vector& a) {
  if (a.size() != alg.dim()) throw DimensionMismatch("invert: wrong element length");
  if (!is_unit(alg, a)) throw SingularElement("element is not invertible");
  if (auto u = split_unit(alg)) {
    // Truncated Neumann series: (r + x)^{-1} = r^{-1} sum_{j<n} (-x/r)^j.
    const double r = a[*u];
    Vector x = a;
    x[*u] = 0.0;
    Vector term = alg.unit();
    Vector sum = term;
    Vector step = -x / r;
    for (int j = 1; j < alg.radical().nilpotency_class; ++j) {
      term = multiply(alg, term, step);
      sum += term;
    }
    return sum / r;
  }
  Matrix rho = regular_representation(alg, a);
  return rho.fullPivLu().solve(alg.unit());
}

QVector invert(const StructureConstants& alg, const QVector& a) {
  if (static_cast<int>(a.size()) != alg.dim()) throw DimensionMismatch("invert: wrong element length");
  if (!is_unit(alg, a)) throw SingularElement("element is not invertible");
  if (auto u = split_unit(alg)) {
    const Rational r = a[*u];
    QVector step = a;
    step[*u] = 0;
    for (auto& s : step) s = -s / r;
    QVector term = alg.unit_exact();
    QVector sum = term;
    for (int j = 1; j < alg.radical().nilpotency_class; ++j) {
      term = multiply(alg, term, step);
      for (int k = 0; k < alg.dim(); ++k) sum[k] += term[k];
    }
    for (auto& s : sum) s /= r;
    return sum;
  }
  auto x = solve(regular_representation(alg, a), alg.unit_exact());
  if (!x) throw SingularElement("element is not invertible");
  return *x;
}

NilradicalData nilradical(const StructureConstants& alg) {
  const RadicalCache& rc = alg.radical();
  if (!rc.aligned)
    throw UnsupportedInput("the radical is not spanned by basis vectors; supply an adapted basis");
  if (!alg.unit_index() && alg.is_irreducible())
    throw UnsupportedInput("the basis does not split as unit plus nilpotent directions");
  return NilradicalData{rc.basis, rc.power_dims, rc.nilpotency_class};
}

std::vector<QVector> adapted_basis(const StructureConstants& alg) {
  if (!alg.is_irreducible())
    throw UnsupportedInput("adapted basis requires an irreducible algebra (A/N one-dimensional)");
  const int n = alg.dim();
  const RadicalCache& rc = alg.radical();

  // Filtration N = N^1 > N^2 > ... as row bases.
  std::vector<std::vector<QVector>> layers;
  std::vector<QVector> power = rc.basis;
  while (!power.empty()) {
    layers.push_back(power);
    std::vector<QVector> prods;
    for (const auto& x : rc.basis)
      for (const auto& y : power) prods.push_back(multiply(alg, x, y));
    power = row_basis(prods, n);
  }

  std::vector<QVector> basis{alg.unit_exact()};
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::vector<QVector> next = k + 1 < layers.size() ? layers[k + 1] : std::vector<QVector>{};
    const std::size_t need = layers[k].size() - next.size();
    std::vector<QVector> candidates;
    for (int i = 0; i < n; ++i) {
      QVector e = unit_vector(n, i);
      if (in_span(layers[k], e, n)) candidates.push_back(e);
    }
    for (const auto& v : layers[k]) candidates.push_back(v);
    std::vector<QVector> chosen;
    for (const auto& c : candidates) {
      if (chosen.size() == need) break;
      std::vector<QVector> span = next;
      span.insert(span.end(), chosen.begin(), chosen.end());
      if (!in_span(span, c, n)) chosen.push_back(c);
    }
    basis.insert(basis.end(), chosen.begin(), chosen.end());
  }
  return basis;
}

StructureConstants change_basis(const StructureConstants& alg, const std::vector<QVector>& basis) {
  const int n = alg.dim();
  if (static_cast<int>(basis.size()) != n) throw DimensionMismatch("change_basis: need dim vectors");
  QMatrix p(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) p(i, j) = basis[j][i];
  auto pinv = inverse(p);
  if (!pinv) throw SingularElement("change_basis: vectors are linearly dependent");
  std::vector<Rational> t(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      QVector prod = (*pinv) * multiply(alg, basis[i], basis[j]);
      for (int k = 0; k < n; ++k) t[(static_cast<std::size_t>(i) * n + j) * n + k] = prod[k];
    }
  std::vector<std::string> labels;
  if (!alg.labels().empty()) {
    for (int j = 0; j < n; ++j) {
      int hit = -1, nonzero = 0;
      for (int i = 0; i < n; ++i)
        if (basis[j][i] != 0) { ++nonzero; hit = i; }
      labels.push_back(nonzero == 1 && basis[j][hit] == 1 ? alg.labels()[hit] : "Y" + std::to_string(j + 1));
    }
  }
  return StructureConstants(n, std::move(t), (*pinv) * alg.unit_exact(), std::move(labels));
}

InvariantRecord isomorphism_invariants(const StructureConstants& alg) {
  const int n = alg.dim();
  if (n > 4) throw UnsupportedInput("isomorphism invariants are implemented for dim <= 4");
  if (!alg.is_irreducible()) throw UnsupportedInput("isomorphism invariants require an irreducible algebra");
  const RadicalCache& rc = alg.radical();
  InvariantRecord rec;
  rec.dim = n;
  rec.nilpotency_class = rc.nilpotency_class;
  rec.power_dims = rc.power_dims;
  if (n == 4 && rc.nilpotency_class == 3) {
    // Basis (1, u1, u2, z) with z spanning N^2 and u1, u2 spanning N/N^2.
    std::vector<QVector> b = adapted_basis(alg);
    const QVector& z = b[3];
    int piv = 0;
    while (z[piv] == 0) ++piv;
    QMatrix form(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) form(i, j) = multiply(alg, b[1 + i], b[1 + j])[piv] / z[piv];
    Inertia in = inertia(form);
    rec.form_rank = in.rank();
    rec.form_abs_signature = in.abs_signature();
  }
  return rec;
}

StructureConstants direct_sum(const std::vector<StructureConstants>& algs) {
  if (algs.empty()) throw ParseError("direct_sum of an empty list");
  if (algs.size() == 1) return algs.front();
  int n = 0;
  for (const auto& a : algs) n += a.dim();
  std::vector<Rational> t(static_cast<std::size_t>(n) * n * n);
  QVector unit(n);
  std::vector<std::string> labels;
  bool any_labels = false;
  for (const auto& a : algs) any_labels = any_labels || !a.labels().empty();
  int off = 0;
  for (std::size_t s = 0; s < algs.size(); ++s) {
    const auto& a = algs[s];
    const int m = a.dim();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          t[(static_cast<std::size_t>(off + i) * n + off + j) * n + off + k] = a.cq(i, j, k);
    for (int i = 0; i < m; ++i) unit[off + i] = a.unit_exact()[i];
    if (any_labels)
      for (int i = 0; i < m; ++i)
        labels.push_back((a.labels().empty() ? "b" + std::to_string(i + 1) : a.labels()[i]) + "_" +
                         std::to_string(s + 1));
    off += m;
  }
  return StructureConstants(n, std::move(t), std::move(unit), std::move(labels));
}

namespace {

std::vector<Rational> zero_tensor(int n) { return std::vector<Rational>(static_cast<std::size_t>(n) * n * n); }

void set(std::vector<Rational>& t, int n, int i, int j, int k, const Rational& v) {
  t[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
  t[(static_cast<std::size_t>(j) * n + i) * n + k] = v;
}

}  // namespace

StructureConstants reals() {
  auto t = zero_tensor(1);
  t[0] = 1;
  return StructureConstants::with_unit_index(1, std::move(t), 0, {"1"});
}

StructureConstants truncated_polynomial(int d) {
  if (d < 1) throw ParseError("truncated_polynomial: d must be positive");
  auto t = zero_tensor(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i + j < d) t[(static_cast<std::size_t>(i) * d + j) * d + i + j] = 1;
  std::vector<std::string> labels{"1"};
  for (int i = 1; i < d; ++i) labels.push_back(i == 1 ? "X" : "X^" + std::to_string(i));
  return StructureConstants::with_unit_index(d, std::move(t), 0, std::move(labels));
}

StructureConstants trivial_extension(int d) {
  if (d < 1) throw ParseError("trivial_extension: d must be positive");
  auto t = zero_tensor(d);
  for (int i = 0; i < d; ++i) set(t, d, 0, i, i, 1);
  std::vector<std::string> labels{"1"};
  for (int i = 1; i < d; ++i) labels.push_back("N" + std::to_string(i));
  return StructureConstants::with_unit_index(d, std::move(t), 0, std::move(labels));
}

StructureConstants h_algebra(const Rational& a) {
  const int n = 4;
  auto t = zero_tensor(n);
  for (int i = 0; i < n; ++i) set(t, n, 0, i, i, 1);
  set(t, n, 1, 1, 3, 1);  // X.X = X^2
  set(t, n, 2, 2, 3, a);  // Y.Y = a X^2
  return StructureConstants::with_unit_index(n, std::move(t), 0, {"1", "X", "Y", "X^2"});
}

StructureConstants unitization(const NilpotentTensor& nil) {
  const int m = nil.dim;
  if (m < 0 || nil.tensor.size() != static_cast<std::size_t>(m) * m * m)
    throw ParseError("nilpotent tensor must have dim^3 entries");
  const int n = m + 1;
  auto t = zero_tensor(n);
  for (int i = 0; i < n; ++i) set(t, n, 0, i, i, 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        t[(static_cast<std::size_t>(i + 1) * n + j + 1) * n + k + 1] =
            nil.tensor[(static_cast<std::size_t>(i) * m + j) * m + k];
  StructureConstants alg = StructureConstants::with_unit_index(n, std::move(t), 0);
  if (!alg.is_irreducible())
    throw NotAShearingSubgroup("the supplied algebra is not nilpotent");
  return alg;
}

}  // namespace orbitlet::algebra
