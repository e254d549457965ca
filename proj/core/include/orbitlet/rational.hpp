#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbitlet {

// Expression templates off: keeps Rational well-behaved inside std containers and lambdas.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using QVector = std::vector<Rational>;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
std::int64_t floor_to_int(const Rational& q);

// Best rational with denominator <= max_den within tol of x (relative to max(1,|x|));
// falls back to the exact binary value of x.
Rational snap_rational(double x, std::int64_t max_den = 1000000, double tol = 1e-12);

// Dense exact matrix, row-major.
struct QMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> data;

  QMatrix() = default;
  QMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
  static QMatrix identity(int n);
  static QMatrix from_rows(const std::vector<QVector>& rows, int cols);

  Rational& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const Rational& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  QVector row(int i) const;
  QMatrix transpose() const;
  QMatrix operator*(const QMatrix& o) const;
  QVector operator*(const QVector& v) const;
  bool is_zero() const;
};

struct RowEchelon {
  QMatrix reduced;          // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
};

RowEchelon rref(QMatrix m);
int rank(const QMatrix& m);
// Basis of {x : m x = 0}.
std::vector<QVector> nullspace(const QMatrix& m);
std::optional<QMatrix> inverse(const QMatrix& m);
// Solves m x = b for square nonsingular m.
std::optional<QVector> solve(const QMatrix& m, const QVector& b);
// Is v in the row span of the given vectors?
bool in_span(const std::vector<QVector>& span, const QVector& v, int dim);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int rank() const { return positive + negative; }
  int abs_signature() const { return positive > negative ? positive - negative : negative - positive; }
};
// Sylvester inertia of a symmetric matrix by exact congruence elimination.
Inertia inertia(QMatrix m);

}  // namespace orbitlet
