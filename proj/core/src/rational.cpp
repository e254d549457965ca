#include "orbitlet/rational.hpp"

#include "orbitlet/error.hpp"

#include <cmath>
#include <utility>

namespace orbitlet {

namespace mp = boost::multiprecision;
using Int = mp::cpp_int;

namespace {

Int parse_int(const std::string& s, const std::string& context) {
  if (s.empty()) throw ParseError("empty integer in rational literal '" + context + "'");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw ParseError("bad rational literal '" + context + "'");
  for (std::size_t k = i; k < s.size(); ++k)
    if (s[k] < '0' || s[k] > '9') throw ParseError("bad rational literal '" + context + "'");
  // Strip leading zeros: cpp_int reads a leading 0 as an octal prefix.
  std::size_t first = i;
  while (first + 1 < s.size() && s[first] == '0') ++first;
  Int v(s.substr(first));
  return s[0] == '-' ? Int(-v) : v;
}

Int pow10(int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Int p = parse_int(s.substr(0, slash), text);
    Int q = parse_int(s.substr(slash + 1), text);
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    return Rational(p, q);
  }
  // Exact decimal: [sign] digits [. digits] [e exp]
  std::string mant = s;
  int exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    exp10 = static_cast<int>(parse_int(s.substr(e + 1), text));
  }
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    std::string frac = mant.substr(dot + 1);
    exp10 -= static_cast<int>(frac.size());
    mant = mant.substr(0, dot) + frac;
    if (mant == "-" || mant == "+" || mant.empty()) throw ParseError("bad number '" + text + "'");
  }
  Int m = parse_int(mant, text);
  if (exp10 >= 0) return Rational(m * pow10(exp10));
  return Rational(m, pow10(-exp10));
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::int64_t floor_to_int(const Rational& q) {
  Int n = mp::numerator(q);
  Int d = mp::denominator(q);
  Int f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f.convert_to<std::int64_t>();
}

Rational snap_rational(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) throw ParseError("non-finite value where a real number is required");
  const double scale = std::max(1.0, std::abs(x));
  // Continued-fraction convergents.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    if (std::abs(a) > 9e15) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t h2 = ai * h1 + h0;
    std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den || k2 <= 0) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol * scale)
      return Rational(Int(h1), Int(k1));
    double frac = r - a;
    if (frac == 0.0) break;
    r = 1.0 / frac;
  }
  return Rational(x);
}

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rs, int c) {
  QMatrix m(static_cast<int>(rs.size()), c);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rs[i][j];
  return m;
}

QVector QMatrix::row(int i) const {
  return QVector(data.begin() + static_cast<std::ptrdiff_t>(i) * cols,
                 data.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols);
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols != o.rows) throw DimensionMismatch("exact matrix product: inner dimensions differ");
  QMatrix p(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols; ++j) p(i, j) += a * o(k, j);
    }
  return p;
}

QVector QMatrix::operator*(const QVector& v) const {
  if (static_cast<int>(v.size()) != cols) throw DimensionMismatch("exact matrix-vector product");
  QVector out(rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

bool QMatrix::is_zero() const {
  for (const auto& x : data)
    if (x != 0) return false;
  return true;
}

RowEchelon rref(QMatrix m) {
  RowEchelon out;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (m(i, c) != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (int j = c; j < m.cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

int rank(const QMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<QVector> nullspace(const QMatrix& m) {
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(m.cols);
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows != m.cols) throw DimensionMismatch("inverse of a non-square matrix");
  const int n = m.rows;
  QMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RowEchelon e = rref(aug);
  if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] >= n) return std::nullopt;
  QMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

std::optional<QVector> solve(const QMatrix& m, const QVector& b) {
  auto inv = inverse(m);
  if (!inv) return std::nullopt;
  return (*inv) * b;
}

bool in_span(const std::vector<QVector>& span, const QVector& v, int dim) {
  if (span.empty()) {
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }
  QMatrix a = QMatrix::from_rows(span, dim);
  std::vector<QVector> ext = span;
  ext.push_back(v);
  return rank(QMatrix::from_rows(ext, dim)) == rank(a);
}

Inertia inertia(QMatrix m) {
  if (m.rows != m.cols) throw DimensionMismatch("inertia of a non-square matrix");
  const int n = m.rows;
  Inertia out;
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (m(i, i) != 0) { p = i; break; }
    if (p < 0) {
      // No diagonal pivot: combine two indices with a nonzero coupling (congruence x_i += x_j).
      int pi = -1, pj = -1;
      for (int i = k; i < n && pi < 0; ++i)
        for (int j = i + 1; j < n; ++j)
          if (m(i, j) != 0) { pi = i; pj = j; break; }
      if (pi < 0) break;  // remaining block is zero
      for (int c = 0; c < n; ++c) m(pi, c) += m(pj, c);
      for (int r = 0; r < n; ++r) m(r, pi) += m(r, pj);
      p = pi;
    }
    if (p != k) {
      for (int c = 0; c < n; ++c) std::swap(m(p, c), m(k, c));
      for (int r = 0; r < n; ++r) std::swap(m(r, p), m(r, k));
    }
    const Rational piv = m(k, k);
    if (piv > 0) ++out.positive; else ++out.negative;
    for (int i = k + 1; i < n; ++i) {
      if (m(i, k) == 0) continue;
      Rational f = m(i, k) / piv;
      for (int c = k; c < n; ++c) m(i, c) -= f * m(k, c);
      m(k, i) = 0;
    }
    // The trailing block is now the (symmetric) Schur complement.
  }
  return out;
}

}  // namespace orbitlet
