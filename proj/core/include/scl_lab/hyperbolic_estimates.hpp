#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scl_lab/rational.hpp"

namespace scl_lab {

// Closed-form estimates relating scl to hyperbolic geometry: tube
// quasimorphisms, Dehn surgery length bounds, cusp-shape genus bounds and
// the spectral-gap length inequalities. All functions are pure.

/// Printed constants of the Dehn surgery estimates.
namespace surgery_constants {
inline constexpr double kHodgsonKerckhoff = 0.5404;
inline constexpr double kTheoremA = 3.993;
inline constexpr double kCoshTanhRatio = 1.0376;
inline constexpr double kSinhRatio = 0.9816;
inline constexpr double kRadiusLength = 1.0206;
}  // namespace surgery_constants

struct TubeParams {
  double core_length;  // hyperbolic length of the core geodesic, >= 0 (0 is the degenerate limit)
  double radius;       // tube radius T > 0

  static TubeParams make(double core_length, double radius);
};

struct SurfaceData {
  std::int64_t chi;           // Euler characteristic of the bounding surface, <= -1
  std::int64_t multiplicity;  // times the boundary wraps the longitude, >= 1

  static SurfaceData make(std::int64_t chi, std::int64_t multiplicity);
  [[nodiscard]] Rational chi_q() const { return Rational(chi, multiplicity); }
};

struct CuspShape {
  std::complex<double> meridian;
  std::complex<double> longitude;

  /// Requires |Im(conj(m) l)| = 1 within 1e-9 (unit-area cusp torus).
  static CuspShape make(std::complex<double> meridian, std::complex<double> longitude);
};

struct SurgeryCoeffs {
  std::int64_t p;
  std::int64_t q;

  /// Requires gcd(p, q) = 1.
  static SurgeryCoeffs make(std::int64_t p, std::int64_t q);
};

struct GapParams {
  std::int64_t m;                     // boundary wrapping number
  std::int64_t g;                     // genus
  double epsilon;                     // thin-part parameter
  std::optional<double> margulis_n;   // epsilon(n); theorem_c requires 4 epsilon <= epsilon(n)
  std::optional<double> margulis_2;   // optional cap: epsilon below the 2-dimensional constant
};

enum class GapVariant { theorem_c, theorem_d };
enum class GenusVariant { paper, boroczky };

/// pi - alpha - beta - gamma.
double ideal_triangle_area(double alpha, double beta, double gamma);

/// 0.5404 tanh(T) / cosh(2T): least core length compatible with a tube of radius T.
double hk_min_core_length(double radius);

struct TubeQuasimorphism {
  double value;         // length * sinh(T) * T/(T+1)
  double defect_upper;  // 2 pi
};
TubeQuasimorphism tube_qm_value(const TubeParams& t);

/// value / (2 * 2 pi)
double scl_lower_from_tube(const TubeParams& t);

/// -chi_Q / (2p)
Rational scl_upper_from_surgery(const SurfaceData& s, std::int64_t p);

/// (3.993 pi |chi_Q| (T+1) / (T p))^2; needs T >= 2, p >= 1.
double theorem_a_length_bound(const SurfaceData& s, double radius, std::int64_t p);

struct TheoremAAuditPoint {
  double radius;
  double cosh_tanh_margin;  // 1.0376 e^{2T} - 2 cosh(2T)/tanh(T)
  double sinh_margin;       // 2 sinh(T) - 0.9816 e^T
  double radius_margin;     // e^T - 1.0206 L^{-1/2} at L = hk_min_core_length(T)
};

struct TheoremAAudit {
  std::vector<TheoremAAuditPoint> points;
  double min_cosh_tanh_margin = 0;
  double min_sinh_margin = 0;
  double min_radius_margin = 0;
  std::size_t violations = 0;

  [[nodiscard]] bool passed() const { return violations == 0; }
};

/// Evaluates the proof inequalities of the surgery length bound on a grid of
/// radii. Throws InvalidInput when a grid point is not > 2.
TheoremAAudit theorem_a_audit(std::span<const double> radii);

/// 1000 evenly spaced radii 2 + 8k/1000, k = 1..1000.
std::vector<double> default_theorem_a_grid();

/// |p m + q l|^2 on the unit-area cusp.
double nz_quadratic_form(const CuspShape& c, std::int64_t p, std::int64_t q);
double nz_quadratic_form(const CuspShape& c, const SurgeryCoeffs& s);

struct ApproximateValue {
  double value;
  bool approximate;  // true: asymptotic formula with an unquantified error term
};
/// 2 pi / Q(p, q), asymptotic in (p, q).
ApproximateValue nz_core_length(const CuspShape& c, const SurgeryCoeffs& s);

/// Lower bound on -chi_Q: 1/(2 pi len^2), or 1/(6 len^2) with the circle-packing constant.
double theorem_b_genus_bound(double meridian_length, GenusVariant variant);

/// 2 pi length sinh(T) cosh(T)
double tube_area(const TubeParams& t);

/// (4 eps + pi/(6 eps)) / (m/(12g - 6) - k), k = 2 (theorem_c) or 1 (theorem_d).
double length_gap_bound(const GapParams& gp, GapVariant variant);

struct EpsilonChoice {
  double epsilon;
  double min_constant;  // 4 eps + pi/(6 eps)
};
/// Minimizer of 4 eps + pi/(6 eps) over (0, cap].
EpsilonChoice optimal_epsilon(double cap);

struct SpectralGap {
  Rational lower;
  Rational upper;
};
/// The interval [1/12, 1/2] containing the first accumulation point of scl
/// on a closed hyperbolic manifold.
SpectralGap spectral_gap_constants();

/// Least tube radius allowed by e^T >= C_n length^{-2/(n+1)}; C_n must be supplied.
double reznikov_radius_lower_bound(double core_length, int dimension, double c_n);

/// Long double evaluations of the printed tube and surgery formulas.
namespace extended {
long double hk_min_core_length(long double radius);
long double tube_qm_value(long double core_length, long double radius);
long double scl_lower_from_tube(long double core_length, long double radius);
long double tube_area(long double core_length, long double radius);
long double theorem_a_length_bound(long double chi_q, long double radius, long double p);
}  // namespace extended

std::string to_string(GapVariant v);
std::string to_string(GenusVariant v);

}  // namespace scl_lab
