#pragma once

#include <cmath>

namespace fracsynth {

/// w + x i + y j + z k
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Quaternion operator+(const Quaternion &a, const Quaternion &b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr bool operator==(const Quaternion &, const Quaternion &) = default;

  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double magnitude() const { return std::sqrt(norm2()); }
};

/// General Hamilton product.
constexpr Quaternion hamilton(const Quaternion &a, const Quaternion &b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

/// q*q; the cross terms of the imaginary part cancel.
constexpr Quaternion quat_square(const Quaternion &q) {
  return {q.w * q.w - q.x * q.x - q.y * q.y - q.z * q.z, 2.0 * q.w * q.x,
          2.0 * q.w * q.y, 2.0 * q.w * q.z};
}

}  // namespace fracsynth
