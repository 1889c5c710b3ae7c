#pragma once

#include <algorithm>
#include <cmath>

namespace latus {

/// Horizontal position or displacement in metres.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double norm_sq(const Vec2 &a) { return dot(a, a); }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }
constexpr double dist_sq(const Vec2 &a, const Vec2 &b) { return norm_sq(a - b); }
inline double dist(const Vec2 &a, const Vec2 &b) { return norm(a - b); }

/// Euclidean projection of `p` onto the closed disc of radius `r` around `c`.
inline Vec2 project_to_disc(const Vec2 &p, const Vec2 &c, double r) {
  const Vec2 d = p - c;
  const double n = norm(d);
  if (n <= r) return p;
  if (r <= 0.0) return c;
  return c + d * (r / n);
}

/// Euclidean projection onto the intersection of two discs, which must not be
/// empty.
inline Vec2 project_to_lens(const Vec2 &p, const Vec2 &c1, double r1, const Vec2 &c2, double r2) {
  const bool in1 = dist(p, c1) <= r1;
  const bool in2 = dist(p, c2) <= r2;
  if (in1 && in2) return p;
  if (!in1) {
    const Vec2 q = project_to_disc(p, c1, r1);
    if (dist(q, c2) <= r2 * (1.0 + 1e-12)) return q;
  }
  if (!in2) {
    const Vec2 q = project_to_disc(p, c2, r2);
    if (dist(q, c1) <= r1 * (1.0 + 1e-12)) return q;
  }
  // nearest corner of the lens
  const double d = dist(c1, c2);
  if (d <= 0.0) return project_to_disc(p, c1, std::min(r1, r2));
  const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
  const double h = std::sqrt(std::max(r1 * r1 - a * a, 0.0));
  const Vec2 e = (c2 - c1) * (1.0 / d);
  const Vec2 m = c1 + e * a;
  const Vec2 n{-e.y, e.x};
  const Vec2 k1 = m + n * h;
  const Vec2 k2 = m - n * h;
  return dist_sq(p, k1) <= dist_sq(p, k2) ? k1 : k2;
}

}  // namespace latus
