#include "polarisac/manifold.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "polarisac/errors.hpp"
#include "polarisac/rng.hpp"

namespace polarisac {

namespace {

constexpr std::uint64_t kInitStream = 3;
constexpr const char* kPointMagic = "polarisac-point";
constexpr int kPointVersion = 1;

void RequireSameShape(const Blocks& x, const Blocks& y, const char* what) {
  if (!x.SameShape(y)) {
    throw DimensionError(std::string(what) + ": block shapes differ");
  }
}

double RealTrace(const CMatrix& x, const CMatrix& y) {
  // Re Tr(X^H Y)
  return (x.conjugate().cwiseProduct(y)).real().sum();
}

PolarizationSet DiagonalColumns(int n) {
  PolarizationSet p(2, n);
  p.colwise() = DiagonalPolarization();
  return p;
}

PolarizationSet ProjectColumns(const PolarizationSet& base, const PolarizationSet& ambient) {
  PolarizationSet out = ambient;
  for (Eigen::Index m = 0; m < base.cols(); ++m) {
    out.col(m) -= base.col(m).dot(ambient.col(m)) * base.col(m);
  }
  return out;
}

PolarizationSet NormalizeColumns(const PolarizationSet& p, const char* name) {
  PolarizationSet out = p;
  for (Eigen::Index m = 0; m < p.cols(); ++m) {
    const double norm = p.col(m).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DegenerateRetraction(std::string("zero ") + name + " polarization block " +
                                 std::to_string(m));
    }
    out.col(m) /= norm;
  }
  return out;
}

template <typename Matrix>
void WriteMatrix(std::ostream& out, const char* name, const Matrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if constexpr (std::is_same_v<typename Matrix::Scalar, Complex>) {
        out << m(r, c).real() << ' ' << m(r, c).imag();
      } else {
        out << m(r, c);
      }
      out << (c + 1 == m.cols() ? '\n' : ' ');
    }
  }
}

template <typename Matrix>
void ReadMatrix(std::istream& in, const char* name, Matrix& m) {
  std::string tag;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(in >> tag >> rows >> cols) || tag != name || rows < 0 || cols < 0) {
    throw ConfigError(std::string("point checkpoint: expected block '") + name + "'");
  }
  if constexpr (Matrix::RowsAtCompileTime == 2) {
    if (rows != 2) {
      throw DimensionError(std::string("point checkpoint: block '") + name + "' must have 2 rows");
    }
  }
  m.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if constexpr (std::is_same_v<typename Matrix::Scalar, Complex>) {
        double re = 0.0;
        double im = 0.0;
        in >> re >> im;
        m(r, c) = Complex(re, im);
      } else {
        in >> m(r, c);
      }
    }
  }
  if (!in) {
    throw ConfigError(std::string("point checkpoint: truncated block '") + name + "'");
  }
}

}  // namespace

Blocks Blocks::Zero(const ScenarioConfig& cfg) {
  Blocks z;
  z.w = CMatrix::Zero(cfg.m_tx, cfg.n_streams());
  z.p_tx = PolarizationSet::Zero(2, cfg.m_tx);
  z.p_rx = PolarizationSet::Zero(2, cfg.m_rx);
  z.p_users = PolarizationSet::Zero(2, cfg.n_users);
  z.f = CMatrix::Zero(cfg.m_rx, cfg.n_targets);
  return z;
}

Blocks Blocks::ZeroLike(const Blocks& like) {
  Blocks z;
  z.w = CMatrix::Zero(like.w.rows(), like.w.cols());
  z.p_tx = PolarizationSet::Zero(2, like.p_tx.cols());
  z.p_rx = PolarizationSet::Zero(2, like.p_rx.cols());
  z.p_users = PolarizationSet::Zero(2, like.p_users.cols());
  z.f = CMatrix::Zero(like.f.rows(), like.f.cols());
  return z;
}

bool Blocks::SameShape(const Blocks& other) const {
  return w.rows() == other.w.rows() && w.cols() == other.w.cols() &&
         p_tx.cols() == other.p_tx.cols() && p_rx.cols() == other.p_rx.cols() &&
         p_users.cols() == other.p_users.cols() && f.rows() == other.f.rows() &&
         f.cols() == other.f.cols();
}

Blocks& Blocks::operator+=(const Blocks& other) {
  RequireSameShape(*this, other, "addition");
  w += other.w;
  p_tx += other.p_tx;
  p_rx += other.p_rx;
  p_users += other.p_users;
  f += other.f;
  a += other.a;
  b += other.b;
  return *this;
}

Blocks& Blocks::operator-=(const Blocks& other) {
  RequireSameShape(*this, other, "subtraction");
  w -= other.w;
  p_tx -= other.p_tx;
  p_rx -= other.p_rx;
  p_users -= other.p_users;
  f -= other.f;
  a -= other.a;
  b -= other.b;
  return *this;
}

Blocks& Blocks::operator*=(double scale) {
  w *= scale;
  p_tx *= scale;
  p_rx *= scale;
  p_users *= scale;
  f *= scale;
  a *= scale;
  b *= scale;
  return *this;
}

bool Blocks::operator==(const Blocks& other) const {
  return SameShape(other) && w == other.w && p_tx == other.p_tx && p_rx == other.p_rx &&
         p_users == other.p_users && f == other.f && a == other.a && b == other.b;
}

Blocks operator+(Blocks lhs, const Blocks& rhs) { return lhs += rhs; }
Blocks operator-(Blocks lhs, const Blocks& rhs) { return lhs -= rhs; }
Blocks operator*(double scale, Blocks rhs) { return rhs *= scale; }

Eigen::Vector2d DiagonalPolarization() { return Eigen::Vector2d::Constant(1.0 / std::sqrt(2.0)); }

ProductPoint RandomPoint(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.Validate();
  RandomStream rng(DeriveSeed(seed, {kInitStream}));
  ProductPoint x;
  x.w.resize(cfg.m_tx, cfg.n_streams());
  for (Eigen::Index j = 0; j < x.w.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.w.rows(); ++i) {
      x.w(i, j) = rng.ComplexNormal(1.0);
    }
  }
  x.w *= std::sqrt(cfg.power()) / x.w.norm();
  x.p_tx = DiagonalColumns(cfg.m_tx);
  x.p_rx = DiagonalColumns(cfg.m_rx);
  x.p_users = DiagonalColumns(cfg.n_users);
  x.f.resize(cfg.m_rx, cfg.n_targets);
  for (Eigen::Index t = 0; t < x.f.cols(); ++t) {
    for (Eigen::Index i = 0; i < x.f.rows(); ++i) {
      x.f(i, t) = rng.ComplexNormal(1.0);
    }
  }
  x.a = 0.0;
  x.b = 0.0;
  return x;
}

TangentVector ProjectToTangent(const ProductPoint& base, const Blocks& ambient, double power) {
  RequireSameShape(base, ambient, "projection");
  TangentVector xi(ambient);
  xi.w -= (RealTrace(base.w, ambient.w) / power) * base.w;
  xi.p_tx = ProjectColumns(base.p_tx, ambient.p_tx);
  xi.p_rx = ProjectColumns(base.p_rx, ambient.p_rx);
  xi.p_users = ProjectColumns(base.p_users, ambient.p_users);
  return xi;
}

ProductPoint Retract(const ProductPoint& base, const Blocks& direction, double step, double power) {
  RequireSameShape(base, direction, "retraction");
  if (step == 0.0) {
    return base;
  }
  ProductPoint next(base - step * direction);
  const double w_norm = next.w.norm();
  if (!(w_norm > 0.0) || !std::isfinite(w_norm)) {
    throw DegenerateRetraction("zero beamformer block");
  }
  next.w *= std::sqrt(power) / w_norm;
  next.p_tx = NormalizeColumns(next.p_tx, "transmit");
  next.p_rx = NormalizeColumns(next.p_rx, "receive");
  next.p_users = NormalizeColumns(next.p_users, "user");
  return next;
}

double InnerProduct(const Blocks& x, const Blocks& y) {
  RequireSameShape(x, y, "inner product");
  return RealTrace(x.w, y.w) + x.p_tx.cwiseProduct(y.p_tx).sum() +
         x.p_rx.cwiseProduct(y.p_rx).sum() + x.p_users.cwiseProduct(y.p_users).sum() +
         RealTrace(x.f, y.f) + x.a * y.a + x.b * y.b;
}

double Norm(const Blocks& x) { return std::sqrt(InnerProduct(x, x)); }

double PointDistance(const Blocks& x, const Blocks& y) {
  RequireSameShape(x, y, "distance");
  return Norm(x - y);
}

double FeasibilityResidual(const ProductPoint& x, const ScenarioConfig& cfg) {
  return FeasibilityResidual(x, cfg.power());
}

double FeasibilityResidual(const ProductPoint& x, double power) {
  double residual = std::abs(x.w.norm() - std::sqrt(power));
  for (const PolarizationSet* set : {&x.p_tx, &x.p_rx, &x.p_users}) {
    for (Eigen::Index m = 0; m < set->cols(); ++m) {
      residual = std::max(residual, std::abs(set->col(m).norm() - 1.0));
    }
  }
  return residual;
}

void WritePoint(std::ostream& out, const Blocks& x) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << kPointMagic << ' ' << kPointVersion << '\n';
  WriteMatrix(out, "w", x.w);
  WriteMatrix(out, "p_tx", x.p_tx);
  WriteMatrix(out, "p_rx", x.p_rx);
  WriteMatrix(out, "p_users", x.p_users);
  WriteMatrix(out, "f", x.f);
  out << "a " << x.a << "\nb " << x.b << '\n';
  out.precision(old_precision);
}

ProductPoint ReadPoint(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kPointMagic || version != kPointVersion) {
    throw ConfigError("point checkpoint: bad header");
  }
  ProductPoint x;
  ReadMatrix(in, "w", x.w);
  ReadMatrix(in, "p_tx", x.p_tx);
  ReadMatrix(in, "p_rx", x.p_rx);
  ReadMatrix(in, "p_users", x.p_users);
  ReadMatrix(in, "f", x.f);
  std::string tag_a;
  std::string tag_b;
  if (!(in >> tag_a >> x.a >> tag_b >> x.b) || tag_a != "a" || tag_b != "b") {
    throw ConfigError("point checkpoint: missing scalar blocks");
  }
  if (x.f.rows() != x.p_rx.cols() || x.w.rows() != x.p_tx.cols()) {
    throw DimensionError("point checkpoint: inconsistent block shapes");
  }
  return x;
}

}  // namespace polarisac
