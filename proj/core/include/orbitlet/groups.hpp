#pragma once

#include "orbitlet/algebra.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace orbitlet::groups {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Check> checks;
  void add(std::string name, bool ok, std::string detail = {});
  std::string summary() const;  // names of failed checks
};

// h = sign * (I + X(t)) * exp(r Y)
struct Factored {
  int sign = 1;
  double r = 0.0;
  Vector t;
};

struct GroupElement {
  Matrix matrix;
  std::optional<Factored> factored;
};

class GroupSpec;

struct Diagonal {
  int dim = 1;
};
// R^+ . SO(d); for d = 1 the sign is included so that the orbit is dense.
struct Similitude {
  int dim = 2;
};
struct Shearlet2D {
  double c = 0.5;
};
struct GeneralizedShearlet {
  std::vector<Matrix> basis;  // X_2..X_d, first row of X_i is e_i
  Vector y;                   // diagonal of Y, y[0] = 1
  int nilpotency_class = 2;
};
struct AbelianFromAlgebra {
  algebra::StructureConstants alg;
};
struct DirectProduct {
  std::vector<GroupSpec> factors;
};

class GroupSpec {
 public:
  using Family =
      std::variant<Diagonal, Similitude, Shearlet2D, GeneralizedShearlet, AbelianFromAlgebra, DirectProduct>;

  GroupSpec(Family family, std::string name = {});

  const Family& family() const { return family_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  std::string family_tag() const;
  // Dimension of H as a Lie group.
  int group_dim() const;

 private:
  Family family_;
  int dim_ = 0;
  std::string name_;
};

// Shearlet-type view (S and Y) of specs that are generalized shearlet groups in their
// given coordinates: Shearlet2D, GeneralizedShearlet, and AbelianFromAlgebra on an
// irreducible algebra in adapted coordinates with unit index 0.
struct ShearletView {
  std::vector<Matrix> basis;
  Vector y;
  int nilpotency_class = 2;
  Matrix shear(const Vector& t) const;  // X(t) = sum t_i X_{i+2}
};
std::optional<ShearletView> shearlet_view(const GroupSpec& spec);

ValidationReport validate_shearing(const std::vector<Matrix>& basis);
ValidationReport validate_diagonal_complement(const Vector& y, const std::vector<Matrix>& basis);
Vector normalize_Y(const Vector& y);
int lie_nilpotency_class(const std::vector<Matrix>& basis);

// Validates, normalizes Y and rewrites the basis so that first rows are canonical.
GroupSpec make_generalized_shearlet(const std::vector<Matrix>& basis, const Vector& y, std::string name = {});
// Transposed regular representation of an irreducible algebra in an adapted basis.
std::vector<Matrix> build_shearing_from_algebra(const algebra::StructureConstants& alg);
std::vector<Matrix> build_shearing_from_nilpotent(const algebra::NilpotentTensor& nil);

GroupElement element_from_factored(const GroupSpec& spec, int sign, double r, const Vector& t);
Factored factor(const GroupSpec& spec, const Matrix& h);
// Shearlet2D in its native (sign, a, b) parameters, a > 0.
GroupElement shearlet2d_element(double c, int sign, double a, double b);

GroupElement make_element(const GroupSpec& spec, const Matrix& h);
Matrix unipotent_inverse(const Matrix& x, int nilpotency_class);
GroupElement group_inverse(const GroupSpec& spec, const GroupElement& h);
GroupElement compose(const GroupSpec& spec, const GroupElement& a, const GroupElement& b);
bool contains(const GroupSpec& spec, const Matrix& h, double tol = 1e-9);

struct ModularData {
  double det = 1.0;
  double delta_h = 1.0;
  double delta_g = 1.0;
};
ModularData modular_data(const GroupSpec& spec, const GroupElement& h);

Vector dual_action(const Matrix& h, const Vector& xi);
Vector base_point(const GroupSpec& spec);

// Trivial-extension shearing with Y = diag(1, 1/2, ..., 1/2), and the truncated-polynomial
// (Toeplitz) shearing with Y = I; defined for every d >= 2.
GroupSpec standard_shearlet(int d);
GroupSpec toeplitz_shearlet(int d);
std::vector<GroupSpec> enumerate_catalog(int d);

// Coordinates on H used for Monte Carlo sampling and Haar integrals.
enum class AxisRole { Scale, Shear, Angle };

struct ChartAxis {
  AxisRole role;
  std::string name;
};

struct HaarChart {
  std::vector<ChartAxis> axes;
  int sign_patterns = 1;
  bool has_density = false;
  std::function<GroupElement(int pattern, std::span<const double> params)> element;
  // Left Haar density in chart coordinates (valid when has_density).
  std::function<double(std::span<const double> params)> density;
};
HaarChart haar_chart(const GroupSpec& spec);

}  // namespace orbitlet::groups
