#pragma once

#include <cmath>

namespace orchid {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec2 horizontal() const { return {x, y}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double squared_distance(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Distance from an elevated point to a ground-level point.
inline double distance(const Vec3& a, const Vec2& ground) {
  return distance(a, Vec3{ground.x, ground.y, 0.0});
}

inline double horizontal_distance(const Vec3& a, const Vec2& b) {
  return distance(a.horizontal(), b);
}

}  // namespace orchid
