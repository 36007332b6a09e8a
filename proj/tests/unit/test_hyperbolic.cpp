#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "precise_oracle.hpp"
#include "scl_lab/error.hpp"
#include "scl_lab/hyperbolic_estimates.hpp"

using namespace scl_lab;
namespace precise = scl_lab::testing::precise;

namespace {

bool near(double x, double y, double tol) { return std::abs(x - y) <= tol; }

double oracle(const precise::Real& r) { return r.convert_to<double>(); }

}  // namespace

TEST_CASE("ideal_triangle_area") {
  CHECK(ideal_triangle_area(0, 0, 0) == doctest::Approx(std::numbers::pi));
  CHECK(ideal_triangle_area(std::numbers::pi / 2, std::numbers::pi / 4, 0) == doctest::Approx(std::numbers::pi / 4));
  CHECK_THROWS_AS(ideal_triangle_area(std::numbers::pi / 3, std::numbers::pi / 3, std::numbers::pi / 3), InvalidInput);
  CHECK_THROWS_AS(ideal_triangle_area(-0.1, 0, 0), InvalidInput);
}

TEST_CASE("hk_min_core_length") {
  CHECK(near(hk_min_core_length(2), 0.019077, 1e-6));
  CHECK(near(hk_min_core_length(1), 0.10940, 1e-5));
  CHECK(near(hk_min_core_length(2), oracle(precise::hk(2)), 1e-15));
  CHECK_THROWS_AS(hk_min_core_length(0), InvalidInput);
  CHECK_THROWS_AS(hk_min_core_length(-1), InvalidInput);
  double prev = hk_min_core_length(1.0);
  for (int k = 1; k <= 1000; ++k) {
    const double t = 1.0 + 9.0 * k / 1000.0;
    const double v = hk_min_core_length(t);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("tube quasimorphism and scl lower bound") {
  auto qm = tube_qm_value(TubeParams::make(0.1, 2));
  CHECK(near(qm.value, 0.241791, 1e-6));
  CHECK(qm.defect_upper == doctest::Approx(2 * std::numbers::pi));
  CHECK(near(tube_qm_value(TubeParams::make(1, 1)).value, 0.587600, 1e-6));
  CHECK(tube_qm_value(TubeParams::make(0, 3)).value == 0.0);
  // Values frozen from the 50-digit evaluation of value / (4 pi).
  CHECK(near(scl_lower_from_tube(TubeParams::make(0.1, 2)), 0.0192410921, 1e-9));
  CHECK(near(scl_lower_from_tube(TubeParams::make(1, 1)), 0.0467597698, 1e-9));
  CHECK(scl_lower_from_tube(TubeParams::make(0, 2)) == 0.0);
  CHECK_THROWS_AS(TubeParams::make(-0.1, 2), InvalidInput);
  CHECK_THROWS_AS(TubeParams::make(0.1, 0), InvalidInput);
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> len(0.001, 2), rad(0.1, 8);
  for (int i = 0; i < 200; ++i) {
    const double l = len(rng), t = rad(rng);
    const auto p = TubeParams::make(l, t);
    CHECK(near(tube_qm_value(p).value, oracle(precise::tube_qm(l, t)), 1e-12 * std::max(1.0, tube_qm_value(p).value)));
    CHECK(near(tube_area(p), oracle(precise::tube_area(l, t)), 1e-12 * std::max(1.0, tube_area(p))));
  }
}

TEST_CASE("extended-precision entry points agree with double") {
  CHECK(near(static_cast<double>(extended::hk_min_core_length(2.0L)), hk_min_core_length(2), 1e-15));
  CHECK(near(static_cast<double>(extended::scl_lower_from_tube(0.1L, 2.0L)),
             scl_lower_from_tube(TubeParams::make(0.1, 2)), 1e-15));
  CHECK(near(static_cast<double>(extended::tube_area(0.1L, 2.0L)), tube_area(TubeParams::make(0.1, 2)), 1e-13));
  CHECK(near(static_cast<double>(extended::theorem_a_length_bound(-1.0L, 2.0L, 50.0L)),
             theorem_a_length_bound(SurfaceData::make(-1, 1), 2, 50), 1e-15));
}

TEST_CASE("scl_upper_from_surgery") {
  CHECK(scl_upper_from_surgery(SurfaceData::make(-1, 1), 50) == Rational(1, 100));
  CHECK(scl_upper_from_surgery(SurfaceData::make(-2, 2), 1) == Rational(1, 2));
  CHECK_THROWS_AS(scl_upper_from_surgery(SurfaceData::make(-1, 1), 0), InvalidInput);
  CHECK_THROWS_AS(SurfaceData::make(0, 1), InvalidInput);
  CHECK_THROWS_AS(SurfaceData::make(-1, 0), InvalidInput);
  Rational prev = scl_upper_from_surgery(SurfaceData::make(-3, 2), 1);
  for (std::int64_t p = 2; p < 100; ++p) {
    const Rational v = scl_upper_from_surgery(SurfaceData::make(-3, 2), p);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("theorem_a_length_bound") {
  CHECK(near(theorem_a_length_bound(SurfaceData::make(-1, 1), 2, 50), 0.141625, 1e-6));
  // Direct evaluation of (3.993 pi * 2 * 4/300)^2.
  CHECK(near(theorem_a_length_bound(SurfaceData::make(-2, 1), 3, 100), 0.1119014800, 1e-9));
  CHECK(near(theorem_a_length_bound(SurfaceData::make(-2, 1), 3, 100), oracle(precise::length_bound(2, 3, 100)), 1e-15));
  const double a = theorem_a_length_bound(SurfaceData::make(-3, 2), 4.5, 20);
  const double b = theorem_a_length_bound(SurfaceData::make(-3, 2), 4.5, 40);
  CHECK(b == doctest::Approx(a / 4).epsilon(1e-14));
  CHECK_THROWS_AS(theorem_a_length_bound(SurfaceData::make(-1, 1), 1.99, 50), InvalidInput);
  CHECK_THROWS_AS(theorem_a_length_bound(SurfaceData::make(-1, 1), 2, 0), InvalidInput);
}

TEST_CASE("theorem_a_audit") {
  const std::vector<double> grid{2.01, 3, 5, 10};
  const auto audit = theorem_a_audit(grid);
  CHECK(audit.passed());
  CHECK(audit.points.size() == 4);
  CHECK(audit.min_cosh_tanh_margin > 0);
  CHECK(audit.min_sinh_margin > 0);
  CHECK(audit.min_radius_margin > 0);
  const auto full = theorem_a_audit(default_theorem_a_grid());
  CHECK(full.passed());
  CHECK(full.points.size() == 1000);
  CHECK_THROWS_AS(theorem_a_audit(std::vector<double>{2.0}), InvalidInput);
  CHECK_THROWS_AS(theorem_a_audit(std::vector<double>{1.5, 3}), InvalidInput);
}

TEST_CASE("theorem_a_audit flags the thin sliver just above T = 2") {
  // Both 1.0376 e^{2T} >= 2 cosh(2T)/tanh(T) and e^T >= 1.0206 hk(T)^{-1/2}
  // fail for T slightly above 2; the audit reports it instead of passing.
  const auto audit = theorem_a_audit(std::vector<double>{2.0005});
  CHECK_FALSE(audit.passed());
  CHECK(audit.min_cosh_tanh_margin < 0);
  CHECK(audit.min_radius_margin < 0);
  CHECK(audit.min_sinh_margin > 0);
  CHECK(theorem_a_audit(std::vector<double>{2.001}).passed());
}

TEST_CASE("surgery consistency chain") {
  // With L = hk(T) the radius inequality of the audit holds, so whenever the
  // surgery upper bound dominates the tube lower bound, L obeys the length bound.
  std::size_t implications = 0;
  for (double t : default_theorem_a_grid()) {
    const double len = hk_min_core_length(t);
    const double lower = scl_lower_from_tube(TubeParams::make(len, t));
    for (std::int64_t chi : {-1, -2, -5}) {
      const SurfaceData s = SurfaceData::make(chi, 1);
      for (std::int64_t p = 1; p <= 400; p += 7) {
        if (scl_upper_from_surgery(s, p).to_double() >= lower) {
          CHECK(len <= theorem_a_length_bound(s, t, p));
          ++implications;
        }
      }
    }
  }
  CHECK(implications > 1000);
}

TEST_CASE("Neumann-Zagier form") {
  const CuspShape c = CuspShape::make({0.3, 0}, {0, 1 / 0.3});
  CHECK(near(nz_quadratic_form(c, SurgeryCoeffs::make(10, 1)), 20.1111111111, 1e-9));
  CHECK(near(nz_quadratic_form(c, SurgeryCoeffs::make(0, 1)), std::norm(c.longitude), 1e-12));
  CHECK(near(nz_quadratic_form(c, 30, 3), 9 * nz_quadratic_form(c, 10, 1), 1e-9));
  const auto len = nz_core_length(c, SurgeryCoeffs::make(10, 1));
  CHECK(len.approximate);
  CHECK(near(len.value, 0.3124235788, 1e-9));
  const CuspShape unit = CuspShape::make({1, 0}, {0, 1});
  CHECK(near(nz_core_length(unit, SurgeryCoeffs::make(1, 0)).value, 2 * std::numbers::pi, 1e-12));
  CHECK_THROWS_AS(CuspShape::make({1, 0}, {0, 2}), InvalidInput);
  CHECK_THROWS_AS(SurgeryCoeffs::make(4, 2), InvalidInput);
  CHECK_THROWS_AS(SurgeryCoeffs::make(0, 0), InvalidInput);
}

TEST_CASE("Neumann-Zagier limit for fixed q") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> modulus(0.7, 1.5), angle(0, 2 * std::numbers::pi), shear(-0.5, 0.5);
  for (int i = 0; i < 10; ++i) {
    const std::complex<double> m = std::polar(modulus(rng), angle(rng));
    const std::complex<double> l = m * std::complex<double>(shear(rng), 1.0) / std::norm(m);
    const CuspShape c = CuspShape::make(m, l);
    const double limit = 2 * std::numbers::pi / std::norm(m);
    CHECK(std::abs(1e6 * nz_core_length(c, SurgeryCoeffs::make(1000, 1)).value - limit) / limit < 0.01);
  }
}

TEST_CASE("theorem_b_genus_bound") {
  CHECK(near(theorem_b_genus_bound(0.3, GenusVariant::paper), 1.76839, 1e-5));
  CHECK(near(theorem_b_genus_bound(0.3, GenusVariant::boroczky), 1.85185, 1e-5));
  for (int k = 1; k <= 100; ++k) {
    const double len = k / 20.0;
    CHECK(theorem_b_genus_bound(len, GenusVariant::boroczky) >= theorem_b_genus_bound(len, GenusVariant::paper));
  }
  CHECK_THROWS_AS(theorem_b_genus_bound(0, GenusVariant::paper), InvalidInput);
}

TEST_CASE("maximal cusp area proxy exceeds one for short meridians") {
  for (int k = 1; k < 100; ++k) {
    const double len = k / 100.0;
    CHECK(1 / (len * len) > 1);
  }
}

TEST_CASE("tube_area") {
  // Frozen from the 50-digit evaluation of 2 pi 0.1 sinh 2 cosh 2.
  CHECK(near(tube_area(TubeParams::make(0.1, 2)), 8.5733803384, 1e-9));
  CHECK(tube_area(TubeParams::make(0.1, 1e-9)) < 1e-9);
  const auto p = TubeParams::make(0.1, 10);
  CHECK(std::abs(tube_area(p) / (std::numbers::pi / 2 * 0.1 * std::exp(20.0)) - 1) < 1e-3);
}

TEST_CASE("length_gap_bound") {
  const GapParams gp{100, 1, 0.3618, std::nullopt, std::nullopt};
  CHECK(near(length_gap_bound(gp, GapVariant::theorem_c), 0.197346, 1e-5));
  CHECK(near(length_gap_bound(gp, GapVariant::theorem_d), 2.894405 / (100.0 / 6 - 1), 1e-5));
  CHECK_THROWS_AS(length_gap_bound(GapParams{12, 1, 0.3, {}, {}}, GapVariant::theorem_c), InvalidInput);
  CHECK(length_gap_bound(GapParams{13, 1, 0.3, {}, {}}, GapVariant::theorem_c) > 0);
  CHECK_THROWS_AS(length_gap_bound(GapParams{100, 1, 0.3618, 1.0, {}}, GapVariant::theorem_c), InvalidInput);
  CHECK(length_gap_bound(GapParams{100, 1, 0.3618, 1.0, {}}, GapVariant::theorem_d) > 0);
  CHECK_THROWS_AS(length_gap_bound(GapParams{100, 1, 0.3618, {}, 0.2}, GapVariant::theorem_c), InvalidInput);
  CHECK_THROWS_AS(length_gap_bound(GapParams{100, 1, 0, {}, {}}, GapVariant::theorem_c), InvalidInput);
  double prev = length_gap_bound(GapParams{20, 1, 0.3, {}, {}}, GapVariant::theorem_c);
  for (std::int64_t m = 21; m < 500; ++m) {
    const double v = length_gap_bound(GapParams{m, 1, 0.3, {}, {}}, GapVariant::theorem_c);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("optimal_epsilon") {
  auto e = optimal_epsilon(1);
  CHECK(near(e.epsilon, 0.361801, 1e-6));
  CHECK(near(e.min_constant, 2.894405, 1e-6));
  CHECK(near(e.min_constant, 2 * std::sqrt(2 * std::numbers::pi / 3), 1e-12));
  e = optimal_epsilon(0.1);
  CHECK(e.epsilon == 0.1);
  CHECK(near(e.min_constant, 5.6359877560, 1e-9));
  double prev = optimal_epsilon(0.01).min_constant;
  for (int k = 2; k <= 100; ++k) {
    const double v = optimal_epsilon(0.01 * k).min_constant;
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(optimal_epsilon(0), InvalidInput);
}

TEST_CASE("spectral gap constants and Reznikov radius") {
  const auto gap = spectral_gap_constants();
  CHECK(gap.lower == Rational(1, 12));
  CHECK(gap.upper == Rational(1, 2));
  const double t = reznikov_radius_lower_bound(0.01, 3, 2.0);
  CHECK(near(std::exp(t), 2.0 * std::pow(0.01, -0.5), 1e-9));
  CHECK_THROWS_AS(reznikov_radius_lower_bound(0.01, 3, 0), InvalidInput);
  CHECK_THROWS_AS(reznikov_radius_lower_bound(0.01, 2, 1), InvalidInput);
}

TEST_CASE("formulas are deterministic") {
  const auto p = TubeParams::make(0.37, 2.9);
  CHECK(tube_area(p) == tube_area(p));
  CHECK(scl_lower_from_tube(p) == scl_lower_from_tube(p));
  CHECK(hk_min_core_length(3.3) == hk_min_core_length(3.3));
}
