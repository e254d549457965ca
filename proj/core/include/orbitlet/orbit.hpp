#pragma once

#include "orbitlet/groups.hpp"
#include "orbitlet/quadrature.hpp"

#include <functional>
#include <vector>

namespace orbitlet::orbit {

using groups::GroupElement;
using groups::GroupSpec;
using groups::Matrix;
using groups::Vector;

enum class OrbitKind { PuncturedSpace, FirstCoordinateNonzero, CoordinateCross, BlockProduct, SubspaceUnion };
enum class Norm { Euclidean, Max };

std::string to_string(OrbitKind k);

// O in closed form. SubspaceUnion describes O^c as a finite union of linear subspaces
// (orthonormal column bases); it arises from conjugated presentations.
struct OrbitDescriptor {
  OrbitKind kind = OrbitKind::FirstCoordinateNonzero;
  int dim = 1;
  Vector base_point;
  std::vector<OrbitDescriptor> blocks;
  std::vector<Matrix> complement;
};

struct Nearest {
  double distance = 0.0;
  Vector point;
};

struct EnvelopeValue {
  double a = 0.0;
  double distance = 0.0;
  Vector nearest;
};

OrbitDescriptor orbit_of(const GroupSpec& spec);
bool contains(const OrbitDescriptor& o, const Vector& xi);
Nearest dist_to_complement(const OrbitDescriptor& o, const Vector& xi, Norm norm = Norm::Euclidean);
EnvelopeValue envelope_A(const OrbitDescriptor& o, const Vector& xi, Norm norm = Norm::Euclidean);
// Fast path: the value a only, no allocation of the nearest point where avoidable.
double envelope_a(const OrbitDescriptor& o, const Vector& xi, Norm norm = Norm::Euclidean);
double envelope_AH(const GroupSpec& spec, const GroupElement& h);
double envelope_AH(const OrbitDescriptor& o, const Matrix& h);

// Orbit of the conjugated group g^{-1} H g, which is g^T O.
OrbitDescriptor conjugate(const OrbitDescriptor& o, const Matrix& g);

GroupElement orbit_section(const GroupSpec& spec, const Vector& xi);

using OrbitFunction = std::function<double(const Vector&)>;
using GroupFunction = std::function<double(const GroupElement&)>;

quadrature::Result orbit_integral(const OrbitDescriptor& o, const OrbitFunction& f,
                                  const quadrature::Options& opts = {});
// Integral over H against left Haar measure in the group's parameter chart.
quadrature::Result group_integral(const GroupSpec& spec, const GroupFunction& f,
                                  const quadrature::Options& opts = {});

struct TransferCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
  bool converged = true;
};
TransferCheck haar_transfer_check(const GroupSpec& spec, const OrbitFunction& f,
                                  const quadrature::Options& opts = {});

}  // namespace orbitlet::orbit
