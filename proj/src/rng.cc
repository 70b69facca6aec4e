#include "polarisac/rng.hpp"

#include <cmath>
#include <numbers>

namespace polarisac {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = Mix64(root);
  for (std::uint64_t tag : tags) {
    s = Mix64(s ^ Mix64(tag + 0x9e3779b97f4a7c15ULL));
  }
  return s;
}

double RandomStream::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::Normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex RandomStream::ComplexNormal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = Normal();
  const double im = Normal();
  return {scale * re, scale * im};
}

}  // namespace polarisac
