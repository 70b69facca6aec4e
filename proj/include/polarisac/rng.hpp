#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "polarisac/types.hpp"

namespace polarisac {

/// Bijective 64-bit finalizer (SplitMix64). Distinct inputs give distinct outputs.
std::uint64_t Mix64(std::uint64_t x);

/// Derives an independent substream seed from a root seed and a path of tags.
///
/// The derivation is s = Mix64(root); for each tag: s = Mix64(s ^ Mix64(tag + 0x9e3779b97f4a7c15)).
/// Scenario synthesis uses the tag paths {1, k, l} for communication path l of user k,
/// {2, q} for sensing object q, and {3} for the initial optimization point, so every
/// random quantity is reproducible independently of evaluation order or threading.
std::uint64_t DeriveSeed(std::uint64_t root, std::initializer_list<std::uint64_t> tags);

/// Random stream with platform-independent transforms on top of mt19937_64
/// (standard library distributions are implementation-defined, these are not).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double Uniform();
  /// Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Standard normal via Box-Muller.
  double Normal();
  /// Circularly-symmetric complex normal CN(0, variance).
  Complex ComplexNormal(double variance = 1.0);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace polarisac
