#include "scl_lab/hyperbolic_estimates.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "scl_lab/error.hpp"

namespace scl_lab {

namespace {

constexpr double kCuspAreaTolerance = 1e-9;

template <class Real>
Real hk_formula(Real radius) {
  return Real(surgery_constants::kHodgsonKerckhoff) * std::tanh(radius) / std::cosh(2 * radius);
}

template <class Real>
Real tube_qm_formula(Real core_length, Real radius) {
  return core_length * std::sinh(radius) * radius / (radius + 1);
}

template <class Real>
Real tube_area_formula(Real core_length, Real radius) {
  return 2 * std::numbers::pi_v<Real> * core_length * std::sinh(radius) * std::cosh(radius);
}

template <class Real>
Real theorem_a_formula(Real chi_q_abs, Real radius, Real p) {
  const Real root = Real(surgery_constants::kTheoremA) * std::numbers::pi_v<Real> * chi_q_abs * (radius + 1) / (radius * p);
  return root * root;
}

void check_finite(double x, const char* name) {
  if (!std::isfinite(x)) throw InvalidInput(std::string(name) + " must be finite");
}

}  // namespace

TubeParams TubeParams::make(double core_length, double radius) {
  check_finite(core_length, "core length");
  check_finite(radius, "tube radius");
  if (core_length < 0) throw InvalidInput("core length must be >= 0");
  if (radius <= 0) throw InvalidInput("tube radius must be > 0");
  return {core_length, radius};
}

SurfaceData SurfaceData::make(std::int64_t chi, std::int64_t multiplicity) {
  if (chi > -1) throw InvalidInput("surface Euler characteristic must be <= -1");
  if (multiplicity < 1) throw InvalidInput("surface multiplicity must be >= 1");
  return {chi, multiplicity};
}

CuspShape CuspShape::make(std::complex<double> meridian, std::complex<double> longitude) {
  const double area = std::abs((std::conj(meridian) * longitude).imag());
  if (std::abs(area - 1.0) > kCuspAreaTolerance) {
    throw InvalidInput("cusp shape must have unit area, |Im(conj(m) l)| = " + std::to_string(area));
  }
  return {meridian, longitude};
}

SurgeryCoeffs SurgeryCoeffs::make(std::int64_t p, std::int64_t q) {
  if (std::gcd(p, q) != 1) throw InvalidInput("surgery coefficients must be coprime");
  return {p, q};
}

double ideal_triangle_area(double alpha, double beta, double gamma) {
  if (alpha < 0 || beta < 0 || gamma < 0) throw InvalidInput("triangle angles must be >= 0");
  if (alpha + beta + gamma >= std::numbers::pi) throw InvalidInput("hyperbolic triangle angle sum must be < pi");
  return std::numbers::pi - alpha - beta - gamma;
}

double hk_min_core_length(double radius) {
  check_finite(radius, "tube radius");
  if (radius <= 0) throw InvalidInput("tube radius must be > 0");
  return hk_formula(radius);
}

TubeQuasimorphism tube_qm_value(const TubeParams& t) {
  return {tube_qm_formula(t.core_length, t.radius), 2 * std::numbers::pi};
}

double scl_lower_from_tube(const TubeParams& t) {
  const auto qm = tube_qm_value(t);
  return qm.value / (2 * qm.defect_upper);
}

Rational scl_upper_from_surgery(const SurfaceData& s, std::int64_t p) {
  if (p < 1) throw InvalidInput("surgery coefficient p must be >= 1");
  return -s.chi_q() / Rational(2 * p);
}

double theorem_a_length_bound(const SurfaceData& s, double radius, std::int64_t p) {
  check_finite(radius, "tube radius");
  if (radius < 2) throw InvalidInput("surgery length bound needs tube radius T >= 2");
  if (p < 1) throw InvalidInput("surgery coefficient p must be >= 1");
  return theorem_a_formula(std::abs(s.chi_q().to_double()), radius, static_cast<double>(p));
}

TheoremAAudit theorem_a_audit(std::span<const double> radii) {
  using namespace surgery_constants;
  TheoremAAudit audit;
  bool first = true;
  for (double t : radii) {
    check_finite(t, "audit radius");
    if (!(t > 2)) throw InvalidInput("audit radius must be > 2, got " + std::to_string(t));
    TheoremAAuditPoint pt{};
    pt.radius = t;
    pt.cosh_tanh_margin = kCoshTanhRatio * std::exp(2 * t) - 2 * std::cosh(2 * t) / std::tanh(t);
    pt.sinh_margin = 2 * std::sinh(t) - kSinhRatio * std::exp(t);
    pt.radius_margin = std::exp(t) - kRadiusLength / std::sqrt(hk_min_core_length(t));
    if (pt.cosh_tanh_margin < 0 || !(pt.sinh_margin > 0) || pt.radius_margin < 0) ++audit.violations;
    if (first) {
      audit.min_cosh_tanh_margin = pt.cosh_tanh_margin;
      audit.min_sinh_margin = pt.sinh_margin;
      audit.min_radius_margin = pt.radius_margin;
      first = false;
    } else {
      audit.min_cosh_tanh_margin = std::min(audit.min_cosh_tanh_margin, pt.cosh_tanh_margin);
      audit.min_sinh_margin = std::min(audit.min_sinh_margin, pt.sinh_margin);
      audit.min_radius_margin = std::min(audit.min_radius_margin, pt.radius_margin);
    }
    audit.points.push_back(pt);
  }
  return audit;
}

std::vector<double> default_theorem_a_grid() {
  std::vector<double> grid;
  grid.reserve(1000);
  for (int k = 1; k <= 1000; ++k) grid.push_back(2.0 + 8.0 * k / 1000.0);
  return grid;
}

double nz_quadratic_form(const CuspShape& c, std::int64_t p, std::int64_t q) {
  return std::norm(static_cast<double>(p) * c.meridian + static_cast<double>(q) * c.longitude);
}

double nz_quadratic_form(const CuspShape& c, const SurgeryCoeffs& s) {
  return nz_quadratic_form(c, s.p, s.q);
}

ApproximateValue nz_core_length(const CuspShape& c, const SurgeryCoeffs& s) {
  const double q = nz_quadratic_form(c, s);
  if (!(q > 0) || !std::isfinite(q)) throw InvalidInput("degenerate Neumann-Zagier form value");
  return {2 * std::numbers::pi / q, true};
}

double theorem_b_genus_bound(double meridian_length, GenusVariant variant) {
  check_finite(meridian_length, "meridian length");
  if (meridian_length <= 0) throw InvalidInput("meridian length must be > 0");
  const double constant = variant == GenusVariant::paper ? 2 * std::numbers::pi : 6.0;
  return 1.0 / (constant * meridian_length * meridian_length);
}

double tube_area(const TubeParams& t) {
  return tube_area_formula(t.core_length, t.radius);
}

double length_gap_bound(const GapParams& gp, GapVariant variant) {
  check_finite(gp.epsilon, "epsilon");
  if (gp.m < 1 || gp.g < 1) throw InvalidInput("gap bound needs m >= 1 and g >= 1");
  if (gp.epsilon <= 0) throw InvalidInput("epsilon must be > 0");
  if (variant == GapVariant::theorem_c && gp.margulis_n && 4 * gp.epsilon > *gp.margulis_n) {
    throw InvalidInput("theorem_c needs 4 epsilon <= margulis_n");
  }
  if (gp.margulis_2 && !(gp.epsilon < *gp.margulis_2)) {
    throw InvalidInput("epsilon must be below the 2-dimensional Margulis cap");
  }
  const double k = variant == GapVariant::theorem_c ? 2.0 : 1.0;
  const double denominator = static_cast<double>(gp.m) / static_cast<double>(12 * gp.g - 6) - k;
  if (!(denominator > 0)) {
    throw InvalidInput("m/(12g-6) - " + std::to_string(static_cast<int>(k)) + " must be > 0");
  }
  return (4 * gp.epsilon + std::numbers::pi / (6 * gp.epsilon)) / denominator;
}

EpsilonChoice optimal_epsilon(double cap) {
  check_finite(cap, "epsilon cap");
  if (cap <= 0) throw InvalidInput("epsilon cap must be > 0");
  // 4 - pi/(6 eps^2) = 0 at eps = sqrt(pi/24); the function is convex.
  const double eps = std::min(cap, std::sqrt(std::numbers::pi / 24.0));
  return {eps, 4 * eps + std::numbers::pi / (6 * eps)};
}

SpectralGap spectral_gap_constants() {
  return {Rational(1, 12), Rational(1, 2)};
}

double reznikov_radius_lower_bound(double core_length, int dimension, double c_n) {
  if (core_length <= 0) throw InvalidInput("core length must be > 0");
  if (dimension < 3) throw InvalidInput("dimension must be >= 3");
  if (c_n <= 0) throw InvalidInput("Reznikov constant C_n must be supplied and > 0");
  return std::log(c_n) - 2.0 / (dimension + 1) * std::log(core_length);
}

namespace extended {

long double hk_min_core_length(long double radius) {
  if (radius <= 0) throw InvalidInput("tube radius must be > 0");
  return hk_formula(radius);
}

long double tube_qm_value(long double core_length, long double radius) {
  return tube_qm_formula(core_length, radius);
}

long double scl_lower_from_tube(long double core_length, long double radius) {
  return tube_qm_formula(core_length, radius) / (4 * std::numbers::pi_v<long double>);
}

long double tube_area(long double core_length, long double radius) {
  return tube_area_formula(core_length, radius);
}

long double theorem_a_length_bound(long double chi_q, long double radius, long double p) {
  if (radius < 2) throw InvalidInput("surgery length bound needs tube radius T >= 2");
  return theorem_a_formula(std::abs(chi_q), radius, p);
}

}  // namespace extended

std::string to_string(GapVariant v) {
  return v == GapVariant::theorem_c ? "theorem_c" : "theorem_d";
}

std::string to_string(GenusVariant v) {
  return v == GenusVariant::paper ? "paper" : "boroczky";
}

}  // namespace scl_lab
