#include "scl_lab/circle_lift.hpp"

#include <cmath>
#include <numbers>

#include "scl_lab/error.hpp"

namespace scl_lab {

namespace {

constexpr double kDetTolerance = 1e-9;

// Projective angle of a nonzero vector, as a point of [0,1).
double projective_angle(double x, double y) {
  double t = std::atan2(y, x) / std::numbers::pi;
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

}  // namespace

Mat2 Mat2::inverse() const {
  const double det_value = det();
  return {d / det_value, -b / det_value, -c / det_value, a / det_value};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 rotation_matrix(double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c, -s, s, c};
}

CircleLift::CircleLift(const Mat2& m, double base_value) : m_(m), base_(base_value) {
  if (std::abs(m.det() - 1.0) > kDetTolerance) {
    throw InvalidInput("circle lift needs a determinant-1 matrix, got det = " + std::to_string(m.det()));
  }
}

double CircleLift::operator()(double x) const {
  const double whole = std::floor(x);
  const double t = x - whole;
  // Walk from 0 to t summing the angle between consecutive image lines. The
  // cross product of M u and M v is det(M) sin(pi dt) > 0, so each increment
  // lies in (0, 1) and no branch choice is needed.
  double value = base_;
  double prev = 0.0;
  double px = m_.a;
  double py = m_.c;
  for (int j = 1; j <= kSubdivisions && prev < t; ++j) {
    const double next = std::min(t, static_cast<double>(j) / kSubdivisions);
    const double theta = std::numbers::pi * next;
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);
    const double qx = m_.a * ux + m_.b * uy;
    const double qy = m_.c * ux + m_.d * uy;
    const double cross = m_.det() * std::sin(std::numbers::pi * (next - prev));
    const double dot = px * qx + py * qy;
    value += std::atan2(cross, dot) / std::numbers::pi;
    px = qx;
    py = qy;
    prev = next;
  }
  return value + whole;
}

CircleLift lift_from_matrix(const Mat2& m, std::int64_t branch) {
  if (std::abs(m.det() - 1.0) > kDetTolerance) {
    throw InvalidInput("circle lift needs a determinant-1 matrix, got det = " + std::to_string(m.det()));
  }
  return {m, projective_angle(m.a, m.c) + static_cast<double>(branch)};
}

CircleLift compose(const CircleLift& f, const CircleLift& g) {
  return {f.matrix() * g.matrix(), f(g(0.0))};
}

CircleLift inverse(const CircleLift& f) {
  const Mat2 inv = f.matrix().inverse();
  const double candidate = projective_angle(inv.a, inv.c);
  // f(candidate) is an integer up to rounding; shift it to 0.
  return {inv, candidate - std::round(f(candidate))};
}

RotationEstimate rotation_number(const CircleLift& f, std::int64_t n) {
  if (n < 1) throw InvalidInput("rotation number estimate needs n >= 1");
  double x = 0.0;
  for (std::int64_t i = 0; i < n; ++i) x = f(x);
  return {x / static_cast<double>(n), 1.0 / static_cast<double>(n)};
}

}  // namespace scl_lab
