#include "orbitlet/orbit.hpp"

#include "orbitlet/error.hpp"

#include <cmath>
#include <numbers>

namespace orbitlet::orbit {

using quadrature::Axis;

std::string to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::PuncturedSpace: return "punctured-space";
    case OrbitKind::FirstCoordinateNonzero: return "first-coordinate-nonzero";
    case OrbitKind::CoordinateCross: return "coordinate-cross";
    case OrbitKind::BlockProduct: return "block-product";
    case OrbitKind::SubspaceUnion: return "subspace-union";
  }
  return "unknown";
}

OrbitDescriptor orbit_of(const GroupSpec& spec) {
  OrbitDescriptor o;
  o.dim = spec.dim();
  o.base_point = groups::base_point(spec);
  const auto& f = spec.family();
  if (groups::shearlet_view(spec)) {
    o.kind = OrbitKind::FirstCoordinateNonzero;
  } else if (std::holds_alternative<groups::Similitude>(f)) {
    o.kind = OrbitKind::PuncturedSpace;
  } else if (std::holds_alternative<groups::Diagonal>(f)) {
    o.kind = OrbitKind::CoordinateCross;
  } else if (const auto* p = std::get_if<groups::DirectProduct>(&f)) {
    o.kind = OrbitKind::BlockProduct;
    for (const auto& g : p->factors) o.blocks.push_back(orbit_of(g));
  } else {
    throw UnsupportedInput(
        "abelian group is not presented in adapted coordinates (irreducible algebra, unit first, "
        "radical tails as ideals); no closed-form orbit is available");
  }
  return o;
}

namespace {

double norm_of(const Vector& v, Norm n) { return n == Norm::Euclidean ? v.norm() : v.cwiseAbs().maxCoeff(); }

Nearest nearest_impl(const OrbitDescriptor& o, const Vector& xi, Norm norm) {
  switch (o.kind) {
    case OrbitKind::PuncturedSpace:
      return {norm_of(xi, norm), Vector::Zero(xi.size())};
    case OrbitKind::FirstCoordinateNonzero: {
      Vector eta = xi;
      eta[0] = 0.0;
      return {std::abs(xi[0]), eta};
    }
    case OrbitKind::CoordinateCross: {
      Eigen::Index arg = 0;
      for (Eigen::Index i = 1; i < xi.size(); ++i)
        if (std::abs(xi[i]) < std::abs(xi[arg])) arg = i;
      Vector eta = xi;
      eta[arg] = 0.0;
      return {std::abs(xi[arg]), eta};
    }
    case OrbitKind::BlockProduct: {
      Nearest best{std::numeric_limits<double>::infinity(), xi};
      int off = 0;
      for (const auto& b : o.blocks) {
        Nearest nb = nearest_impl(b, xi.segment(off, b.dim), norm);
        if (nb.distance < best.distance) {
          best.distance = nb.distance;
          best.point = xi;
          best.point.segment(off, b.dim) = nb.point;
        }
        off += b.dim;
      }
      return best;
    }
    case OrbitKind::SubspaceUnion: {
      if (norm != Norm::Euclidean) throw UnsupportedInput("max-norm distance is not available for conjugated orbits");
      Nearest best{std::numeric_limits<double>::infinity(), xi};
      for (const auto& q : o.complement) {
        Vector eta = q.cols() ? Vector(q * (q.transpose() * xi)) : Vector::Zero(xi.size());
        const double dist = (xi - eta).norm();
        if (dist < best.distance) best = {dist, eta};
      }
      return best;
    }
  }
  throw UnsupportedInput("unknown orbit kind");
}

void check_dim(const OrbitDescriptor& o, const Vector& xi) {
  if (xi.size() != o.dim) throw DimensionMismatch("frequency vector size differs from orbit dimension");
}

}  // namespace

bool contains(const OrbitDescriptor& o, const Vector& xi) {
  check_dim(o, xi);
  if (!xi.allFinite()) return false;
  const double d = nearest_impl(o, xi, Norm::Euclidean).distance;
  return d > 1e-14 * std::max(1.0, xi.norm());
}

Nearest dist_to_complement(const OrbitDescriptor& o, const Vector& xi, Norm norm) {
  check_dim(o, xi);
  Nearest n = nearest_impl(o, xi, norm);
  if (!(n.distance > 0.0)) throw NotInOrbit("frequency lies in the complement of the orbit");
  return n;
}

EnvelopeValue envelope_A(const OrbitDescriptor& o, const Vector& xi, Norm norm) {
  Nearest n = dist_to_complement(o, xi, norm);
  const double a = std::min(n.distance / (1.0 + norm_of(n.point, norm)), 1.0 / (1.0 + norm_of(xi, norm)));
  return {a, n.distance, std::move(n.point)};
}

double envelope_a(const OrbitDescriptor& o, const Vector& xi, Norm norm) {
  if (norm == Norm::Euclidean && o.kind == OrbitKind::FirstCoordinateNonzero) {
    if (xi.size() != o.dim) throw DimensionMismatch("frequency vector size differs from orbit dimension");
    const double x1 = std::abs(xi[0]);
    if (!(x1 > 0.0)) throw NotInOrbit("frequency lies in the complement of the orbit");
    const double sq = xi.squaredNorm();
    const double eta = std::sqrt(std::max(0.0, sq - xi[0] * xi[0]));
    return std::min(x1 / (1.0 + eta), 1.0 / (1.0 + std::sqrt(sq)));
  }
  return envelope_A(o, xi, norm).a;
}

double envelope_AH(const OrbitDescriptor& o, const Matrix& h) {
  return envelope_a(o, Vector(h.transpose() * o.base_point));
}

double envelope_AH(const GroupSpec& spec, const GroupElement& h) { return envelope_AH(orbit_of(spec), h.matrix); }

namespace {

void collect_complement(const OrbitDescriptor& o, std::vector<Matrix>& out) {
  const int d = o.dim;
  switch (o.kind) {
    case OrbitKind::PuncturedSpace:
      out.push_back(Matrix(d, 0));
      break;
    case OrbitKind::FirstCoordinateNonzero:
      out.push_back(Matrix::Identity(d, d).rightCols(d - 1));
      break;
    case OrbitKind::CoordinateCross:
      for (int i = 0; i < d; ++i) {
        Matrix q(d, d - 1);
        int c = 0;
        for (int j = 0; j < d; ++j)
          if (j != i) q.col(c++) = Vector::Unit(d, j);
        out.push_back(q);
      }
      break;
    case OrbitKind::SubspaceUnion:
      out.insert(out.end(), o.complement.begin(), o.complement.end());
      break;
    case OrbitKind::BlockProduct: {
      int off = 0;
      for (const auto& b : o.blocks) {
        std::vector<Matrix> sub;
        collect_complement(b, sub);
        for (const auto& s : sub) {
          Matrix q = Matrix::Zero(d, s.cols() + d - b.dim);
          q.block(off, 0, b.dim, s.cols()) = s;
          int c = static_cast<int>(s.cols());
          for (int j = 0; j < d; ++j)
            if (j < off || j >= off + b.dim) q(j, c++) = 1.0;
          out.push_back(q);
        }
        off += b.dim;
      }
      break;
    }
  }
}

}  // namespace

OrbitDescriptor conjugate(const OrbitDescriptor& o, const Matrix& g) {
  if (g.rows() != o.dim || g.cols() != o.dim) throw DimensionMismatch("conjugating matrix has the wrong size");
  std::vector<Matrix> comps;
  collect_complement(o, comps);
  OrbitDescriptor c;
  c.kind = OrbitKind::SubspaceUnion;
  c.dim = o.dim;
  c.base_point = g.transpose() * o.base_point;
  for (const auto& q : comps) {
    if (q.cols() == 0) {
      c.complement.push_back(q);
      continue;
    }
    Matrix img = g.transpose() * q;
    Eigen::HouseholderQR<Matrix> qr(img);
    c.complement.push_back(qr.householderQ() * Matrix::Identity(o.dim, q.cols()));
  }
  return c;
}

GroupElement orbit_section(const GroupSpec& spec, const Vector& xi) {
  if (xi.size() != spec.dim()) throw DimensionMismatch("frequency vector size differs from group dimension");
  const int d = spec.dim();
  if (auto v = groups::shearlet_view(spec)) {
    if (!(xi[0] != 0.0) || !xi.allFinite()) throw NotInOrbit("first coordinate vanishes");
    const int sign = xi[0] > 0 ? 1 : -1;
    const double r = std::log(std::abs(xi[0]));
    Vector t(d - 1);
    for (int i = 1; i < d; ++i) t[i - 1] = sign * xi[i] * std::exp(-r * v->y[i]);
    return groups::element_from_factored(spec, sign, r, t);
  }
  const auto& f = spec.family();
  if (std::holds_alternative<groups::Diagonal>(f)) {
    for (int i = 0; i < d; ++i)
      if (xi[i] == 0.0) throw NotInOrbit("a coordinate vanishes");
    return GroupElement{Matrix(xi.asDiagonal()), std::nullopt};
  }
  if (std::holds_alternative<groups::Similitude>(f)) {
    const double rho = xi.norm();
    if (!(rho > 0.0)) throw NotInOrbit("zero frequency");
    if (d == 1) return GroupElement{Matrix::Constant(1, 1, xi[0]), std::nullopt};
    // Rotation Q with Q e1 = xi/|xi|; h = rho Q^T has h^T e1 = xi.
    Matrix basis(d, d);
    basis.col(0) = xi / rho;
    basis.rightCols(d - 1) = Matrix::Identity(d, d).leftCols(d - 1);
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix q = qr.householderQ();
    if (q.col(0).dot(xi) < 0) q.col(0) = -q.col(0);
    if (q.determinant() < 0) q.col(d - 1) = -q.col(d - 1);
    return GroupElement{rho * q.transpose(), std::nullopt};
  }
  if (const auto* p = std::get_if<groups::DirectProduct>(&f)) {
    Matrix m = Matrix::Zero(d, d);
    int off = 0;
    for (const auto& g : p->factors) {
      m.block(off, off, g.dim(), g.dim()) = orbit_section(g, xi.segment(off, g.dim())).matrix;
      off += g.dim();
    }
    return GroupElement{m, std::nullopt};
  }
  throw UnsupportedInput("orbit section needs adapted coordinates");
}

namespace {

// Quadrature axes for O plus the map from parameters to xi (returns the Jacobian).
struct CoordPiece {
  std::vector<Axis> axes;
  OrbitKind kind;
  int dim;
};

void pieces_of(const OrbitDescriptor& o, std::vector<CoordPiece>& out) {
  CoordPiece p{{}, o.kind, o.dim};
  switch (o.kind) {
    case OrbitKind::FirstCoordinateNonzero:
      p.axes.push_back(Axis::punctured());
      for (int i = 1; i < o.dim; ++i) p.axes.push_back(Axis::line());
      break;
    case OrbitKind::PuncturedSpace:
      if (o.dim == 1) {
        p.axes.push_back(Axis::punctured());
      } else if (o.dim == 2) {
        p.axes.push_back(Axis::half_line());
        p.axes.push_back(Axis::interval(0.0, 2.0 * std::numbers::pi));
      } else {
        for (int i = 0; i < o.dim; ++i) p.axes.push_back(Axis::line());
      }
      break;
    case OrbitKind::CoordinateCross:
      for (int i = 0; i < o.dim; ++i) p.axes.push_back(Axis::punctured());
      break;
    case OrbitKind::SubspaceUnion:
      for (int i = 0; i < o.dim; ++i) p.axes.push_back(Axis::line());
      break;
    case OrbitKind::BlockProduct:
      for (const auto& b : o.blocks) pieces_of(b, out);
      return;
  }
  out.push_back(std::move(p));
}

}  // namespace

quadrature::Result orbit_integral(const OrbitDescriptor& o, const OrbitFunction& f, const quadrature::Options& opts) {
  std::vector<CoordPiece> pieces;
  pieces_of(o, pieces);
  std::vector<Axis> axes;
  for (const auto& p : pieces) axes.insert(axes.end(), p.axes.begin(), p.axes.end());
  const int d = o.dim;
  auto integrand = [&](std::span<const double> x) {
    Vector xi(d);
    double jac = 1.0;
    std::size_t k = 0;
    int off = 0;
    for (const auto& p : pieces) {
      if (p.kind == OrbitKind::PuncturedSpace && p.dim == 2) {
        const double rho = x[k], th = x[k + 1];
        xi[off] = rho * std::cos(th);
        xi[off + 1] = rho * std::sin(th);
        jac *= rho;
      } else {
        for (int i = 0; i < p.dim; ++i) xi[off + i] = x[k + i];
      }
      k += p.axes.size();
      off += p.dim;
    }
    if (!contains(o, xi)) return 0.0;  // measure-zero set hit by a node
    return f(xi) * jac;
  };
  return quadrature::integrate(axes, integrand, opts);
}

quadrature::Result group_integral(const GroupSpec& spec, const GroupFunction& f, const quadrature::Options& opts) {
  groups::HaarChart chart = groups::haar_chart(spec);
  if (!chart.has_density) throw UnsupportedInput("no Haar density is available for this group's parameter chart");
  std::vector<Axis> axes;
  for (const auto& a : chart.axes)
    axes.push_back(a.role == groups::AxisRole::Angle ? Axis::interval(0.0, 2.0 * std::numbers::pi) : Axis::line());
  quadrature::Result total;
  for (int pat = 0; pat < chart.sign_patterns; ++pat) {
    quadrature::Result r = quadrature::integrate(
        axes, [&](std::span<const double> p) { return f(chart.element(pat, p)) * chart.density(p); }, opts);
    total.value += r.value;
    total.converged = total.converged && r.converged;
    total.evaluations += r.evaluations;
  }
  return total;
}

TransferCheck haar_transfer_check(const GroupSpec& spec, const OrbitFunction& f, const quadrature::Options& opts) {
  OrbitDescriptor o = orbit_of(spec);
  const Vector xi0 = o.base_point;
  quadrature::Result lhs = orbit_integral(o, f, opts);
  quadrature::Result rhs = group_integral(
      spec,
      [&](const GroupElement& g) {
        const groups::ModularData md = groups::modular_data(spec, g);
        return f(Vector(g.matrix.transpose() * xi0)) / md.delta_g;
      },
      opts);
  TransferCheck tc;
  tc.lhs = lhs.value;
  tc.rhs = rhs.value;
  tc.relative_error = std::abs(lhs.value - rhs.value) / std::max(std::abs(lhs.value), 1e-300);
  tc.converged = lhs.converged && rhs.converged;
  return tc;
}

}  // namespace orbitlet::orbit
