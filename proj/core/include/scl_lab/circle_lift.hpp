#pragma once

#include <cstdint>

namespace scl_lab {

/// Row-major 2x2 real matrix.
struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  [[nodiscard]] double det() const { return a * d - b * c; }
  [[nodiscard]] Mat2 inverse() const;
  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 rotation_matrix(double radians);

/// Lift to R of the projective action of an SL(2,R) matrix on RP^1 = R/Z.
///
/// The circle coordinate theta in [0,1) names the line through
/// (cos(pi theta), sin(pi theta)). The lift is pinned by its value at 0;
/// everything else follows from continuity and f(x + 1) = f(x) + 1.
class CircleLift {
 public:
  CircleLift() = default;
  CircleLift(const Mat2& m, double base_value);

  [[nodiscard]] const Mat2& matrix() const { return m_; }
  [[nodiscard]] double base_value() const { return base_; }

  [[nodiscard]] double operator()(double x) const;

  /// Number of sub-intervals of [0,1) used when tracking the lift.
  static constexpr int kSubdivisions = 64;

 private:
  Mat2 m_{};
  double base_ = 0;
};

/// Lift with f(0) = (projective angle of M e1) + branch, the angle taken in [0,1).
CircleLift lift_from_matrix(const Mat2& m, std::int64_t branch);

/// f after g: matrix product, base value f(g(0)).
CircleLift compose(const CircleLift& f, const CircleLift& g);

/// The lift g with f(g(x)) = x.
CircleLift inverse(const CircleLift& f);

struct RotationEstimate {
  double value;        // f^n(0) / n
  double error_bound;  // 1/n, from the defect-1 homogenization bound
};

RotationEstimate rotation_number(const CircleLift& f, std::int64_t n);

}  // namespace scl_lab
