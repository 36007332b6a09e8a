#pragma once

// Independent 50-digit evaluation of the closed-form tube and surgery formulas.

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace scl_lab::testing::precise {

using Real = boost::multiprecision::cpp_dec_float_50;

inline Real pi() { return boost::math::constants::pi<Real>(); }

inline Real hk(Real t) { return Real("0.5404") * tanh(t) / cosh(2 * t); }

inline Real tube_qm(Real len, Real t) { return len * sinh(t) * t / (t + 1); }

inline Real scl_lower(Real len, Real t) { return tube_qm(len, t) / (4 * pi()); }

inline Real tube_area(Real len, Real t) { return 2 * pi() * len * sinh(t) * cosh(t); }

inline Real length_bound(Real chi_q_abs, Real t, Real p) {
  const Real root = Real("3.993") * pi() * chi_q_abs * (t + 1) / (t * p);
  return root * root;
}

}  // namespace scl_lab::testing::precise
