#pragma once

#include "orbitlet/rational.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace orbitlet::algebra {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Radical data computed once per algebra. `aligned` records whether N is spanned by a
// subset of the basis vectors.
struct RadicalCache {
  std::vector<QVector> basis;
  std::vector<int> power_dims;
  int nilpotency_class = 1;
  bool aligned = false;
};

// Commutative associative algebra with unity given by b_i b_j = sum_k c[i][j][k] b_k.
// The exact tensor is authoritative for every structural question; float input is
// validated at 1e-12 and then snapped to nearby rationals.
class StructureConstants {
 public:
  StructureConstants(int dim, std::vector<Rational> tensor, QVector unit,
                     std::vector<std::string> labels = {});
  static StructureConstants with_unit_index(int dim, std::vector<Rational> tensor, int unit_index,
                                            std::vector<std::string> labels = {});
  static StructureConstants from_doubles(int dim, const std::vector<double>& tensor,
                                         const Vector& unit, std::vector<std::string> labels = {});

  int dim() const { return n_; }
  bool exact_input() const { return exact_input_; }
  double c(int i, int j, int k) const { return td_[index(i, j, k)]; }
  const Rational& cq(int i, int j, int k) const { return tq_[index(i, j, k)]; }
  const QVector& unit_exact() const { return unit_q_; }
  Vector unit() const;
  // Position u with 1_A = b_u, when the unit is a basis vector.
  std::optional<int> unit_index() const;
  const std::vector<std::string>& labels() const { return labels_; }
  const RadicalCache& radical() const { return radical_; }
  // A/N is one-dimensional (A is local with residue field R).
  bool is_irreducible() const { return static_cast<int>(radical_.basis.size()) == n_ - 1; }

 private:
  StructureConstants() = default;
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  void validate_exact() const;
  void finish();

  int n_ = 0;
  bool exact_input_ = true;
  std::vector<Rational> tq_;
  std::vector<double> td_;
  QVector unit_q_;
  std::vector<std::string> labels_;
  RadicalCache radical_;
};

struct NilradicalData {
  std::vector<QVector> basis;
  std::vector<int> power_dims;  // dim N, dim N^2, ..., 0
  int nilpotency_class = 1;     // smallest n with N^n = 0
};

struct InvariantRecord {
  int dim = 0;
  int nilpotency_class = 1;
  std::vector<int> power_dims;
  std::optional<int> form_rank;
  std::optional<int> form_abs_signature;
  bool operator==(const InvariantRecord&) const = default;
};

Vector multiply(const StructureConstants& alg, const Vector& a, const Vector& b);
QVector multiply(const StructureConstants& alg, const QVector& a, const QVector& b);

Matrix regular_representation(const StructureConstants& alg, const Vector& a);
QMatrix regular_representation(const StructureConstants& alg, const QVector& a);

bool is_unit(const StructureConstants& alg, const Vector& a);
bool is_unit(const StructureConstants& alg, const QVector& a);

Vector invert(const StructureConstants& alg, const Vector& a);
QVector invert(const StructureConstants& alg, const QVector& a);

NilradicalData nilradical(const StructureConstants& alg);
std::vector<QVector> adapted_basis(const StructureConstants& alg);
// Structure constants of the same algebra in the basis given by `basis` (old coordinates).
StructureConstants change_basis(const StructureConstants& alg, const std::vector<QVector>& basis);
InvariantRecord isomorphism_invariants(const StructureConstants& alg);
StructureConstants direct_sum(const std::vector<StructureConstants>& algs);

// Small catalog used by the dimension 2..4 classification.
StructureConstants reals();
StructureConstants truncated_polynomial(int d);  // R[X]/(X^d), basis 1, X, ..., X^{d-1}
StructureConstants trivial_extension(int d);     // R1 + N with N^2 = 0, dim N = d-1
StructureConstants h_algebra(const Rational& a);  // R[X,Y]/(X^3, Y^2 - aX^2, XY), basis 1,X,Y,X^2

// Nilpotent algebra without unit: products of the d-1 basis vectors of N.
struct NilpotentTensor {
  int dim = 0;
  std::vector<Rational> tensor;  // dim^3 entries, same layout as StructureConstants
};
StructureConstants unitization(const NilpotentTensor& nil);

QVector to_exact(const Vector& v);
Vector to_double(const QVector& v);

}  // namespace orbitlet::algebra
