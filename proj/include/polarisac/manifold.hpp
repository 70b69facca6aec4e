#pragma once

#include <cstdint>
#include <iosfwd>

#include "polarisac/scenario.hpp"
#include "polarisac/types.hpp"

namespace polarisac {

/// The block layout shared by points, tangent vectors and ambient gradients of the
/// product manifold: power sphere (w) x unit circles (p_tx, p_rx, p_users) x flat (f, a, b).
struct Blocks {
  CMatrix w;                // M_tx x (K + L_r)
  PolarizationSet p_tx;     // 2 x M_tx
  PolarizationSet p_rx;     // 2 x M_rx
  PolarizationSet p_users;  // 2 x K
  CMatrix f;                // M_rx x T
  double a = 0.0;
  double b = 0.0;

  /// All-zero blocks shaped after `cfg`.
  static Blocks Zero(const ScenarioConfig& cfg);
  /// All-zero blocks shaped like `like`.
  static Blocks ZeroLike(const Blocks& like);

  bool SameShape(const Blocks& other) const;

  Blocks& operator+=(const Blocks& other);
  Blocks& operator-=(const Blocks& other);
  Blocks& operator*=(double scale);

  bool operator==(const Blocks& other) const;
};

Blocks operator+(Blocks lhs, const Blocks& rhs);
Blocks operator-(Blocks lhs, const Blocks& rhs);
Blocks operator*(double scale, Blocks rhs);

/// A point of the product manifold: ||w||_F = sqrt(P), every polarization column unit-norm.
struct ProductPoint : Blocks {
  ProductPoint() = default;
  explicit ProductPoint(Blocks blocks) : Blocks(std::move(blocks)) {}
};

/// An element of the tangent space at some base point.
struct TangentVector : Blocks {
  TangentVector() = default;
  explicit TangentVector(Blocks blocks) : Blocks(std::move(blocks)) {}
};

/// The fixed polarization value (1/sqrt 2, 1/sqrt 2) used to initialize and by the
/// fixed-polarization baseline.
Eigen::Vector2d DiagonalPolarization();

/// Complex-Gaussian W rescaled to the power sphere, diagonal polarizations,
/// unit-variance complex-Gaussian F and a = b = 0. Deterministic in `seed`.
ProductPoint RandomPoint(const ScenarioConfig& cfg, std::uint64_t seed);

/// Orthogonal projection of ambient blocks onto the tangent space at `base`.
TangentVector ProjectToTangent(const ProductPoint& base, const Blocks& ambient, double power);

/// Normalization retraction of base - step * direction.
/// Throws DegenerateRetraction if a block to be normalized vanishes.
ProductPoint Retract(const ProductPoint& base, const Blocks& direction, double step, double power);

/// Re-trace / dot-product metric summed over all blocks.
double InnerProduct(const Blocks& x, const Blocks& y);
double Norm(const Blocks& x);

/// Ambient Euclidean distance over all blocks.
double PointDistance(const Blocks& x, const Blocks& y);

/// max(| ||w||_F - sqrt(P) |, | ||p|| - 1 | over every polarization column).
double FeasibilityResidual(const ProductPoint& x, const ScenarioConfig& cfg);
double FeasibilityResidual(const ProductPoint& x, double power);

/// Text checkpoint: a shape header followed by row-major block data at full precision.
void WritePoint(std::ostream& out, const Blocks& x);
ProductPoint ReadPoint(std::istream& in);

}  // namespace polarisac
