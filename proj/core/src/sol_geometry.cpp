#include "scl_lab/sol_geometry.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "scl_lab/error.hpp"

namespace scl_lab {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Sol arithmetic overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Sol arithmetic overflow");
  return r;
}

IntVec2 mat_apply(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, IntVec2 v) {
  return {checked_add(checked_mul(a, v.x), checked_mul(b, v.y)), checked_add(checked_mul(c, v.x), checked_mul(d, v.y))};
}

std::int64_t round_to_int(double x) {
  if (!std::isfinite(x) || std::abs(x) > 9.0e15) throw std::overflow_error("Sol decomposition coordinate out of range");
  return static_cast<std::int64_t>(std::llround(x));
}

}  // namespace

std::int64_t IntVec2::sup_norm() const {
  return std::max(x < 0 ? -x : x, y < 0 ? -y : y);
}

std::string IntVec2::str() const {
  return std::to_string(x) + "," + std::to_string(y);
}

IntVec2 operator+(IntVec2 a, IntVec2 b) {
  return {checked_add(a.x, b.x), checked_add(a.y, b.y)};
}

IntVec2 operator-(IntVec2 a) {
  return {checked_mul(-1, a.x), checked_mul(-1, a.y)};
}

IntVec2 operator-(IntVec2 a, IntVec2 b) {
  return a + (-b);
}

IntVec2 operator*(std::int64_t k, IntVec2 a) {
  return {checked_mul(k, a.x), checked_mul(k, a.y)};
}

AnosovMatrix AnosovMatrix::make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  const __int128 det = static_cast<__int128>(a) * d - static_cast<__int128>(b) * c;
  if (det != 1) throw InvalidInput("Anosov matrix must have determinant 1");
  const __int128 trace = static_cast<__int128>(a) + d;
  if (trace <= 2 && trace >= -2) throw InvalidInput("Anosov matrix must have |trace| > 2");
  AnosovMatrix m;
  m.a_ = a;
  m.b_ = b;
  m.c_ = c;
  m.d_ = d;
  return m;
}

std::string AnosovMatrix::str() const {
  return std::to_string(a_) + "," + std::to_string(b_) + "," + std::to_string(c_) + "," + std::to_string(d_);
}

IntVec2 AnosovMatrix::apply_power(std::int64_t k, IntVec2 v) const {
  if (k >= 0) {
    for (std::int64_t i = 0; i < k; ++i) v = mat_apply(a_, b_, c_, d_, v);
  } else {
    for (std::int64_t i = 0; i < -k; ++i) v = mat_apply(d_, -b_, -c_, a_, v);
  }
  return v;
}

double AnosovMatrix::expanding_eigenvalue() const {
  const double t = static_cast<double>(trace());
  const double root = std::sqrt(t * t - 4.0);
  return t > 0 ? (t + root) / 2.0 : (t - root) / 2.0;
}

std::string SolElement::str() const {
  return "(" + v.str() + ";" + std::to_string(t) + ")";
}

SolElement sol_identity() {
  return {};
}

SolElement sol_generator() {
  return {{0, 0}, 1};
}

SolElement sol_mul(const SolElement& a, const SolElement& b, const AnosovMatrix& A) {
  return {a.v + A.apply_power(a.t, b.v), checked_add(a.t, b.t)};
}

SolElement sol_inverse(const SolElement& a, const AnosovMatrix& A) {
  // (u, m)^-1 = (-A^-m u, -m)
  return {-A.apply_power(-a.t, a.v), checked_mul(-1, a.t)};
}

SolElement sol_commutator(const SolElement& x, const SolElement& y, const AnosovMatrix& A) {
  return sol_mul(sol_mul(x, y, A), sol_mul(sol_inverse(x, A), sol_inverse(y, A), A), A);
}

SolElement sol_power(const SolElement& a, std::int64_t n, const AnosovMatrix& A) {
  SolElement base = n < 0 ? sol_inverse(a, A) : a;
  SolElement out = sol_identity();
  for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) out = sol_mul(out, base, A);
  return out;
}

SolElement SolCommutatorExpression::evaluate(const AnosovMatrix& A) const {
  SolElement acc = sol_identity();
  for (const auto& [x, y] : factors) acc = sol_mul(acc, sol_commutator(x, y, A), A);
  return acc;
}

std::optional<IntVec2> membership_commutator_subgroup(IntVec2 a, const AnosovMatrix& A) {
  // (A - I) = [[p, q], [r, s]], invertible over Q since det = 2 - trace != 0.
  const std::int64_t p = A.a() - 1, q = A.b(), r = A.c(), s = A.d() - 1;
  const __int128 det = static_cast<__int128>(p) * s - static_cast<__int128>(q) * r;
  const __int128 nx = static_cast<__int128>(s) * a.x - static_cast<__int128>(q) * a.y;
  const __int128 ny = -static_cast<__int128>(r) * a.x + static_cast<__int128>(p) * a.y;
  if (nx % det != 0 || ny % det != 0) return std::nullopt;
  const __int128 ux = nx / det, uy = ny / det;
  constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (ux > lim || ux < -lim || uy > lim || uy < -lim) throw std::overflow_error("Sol arithmetic overflow");
  return IntVec2{static_cast<std::int64_t>(ux), static_cast<std::int64_t>(uy)};
}

SolCommutatorExpression commutator_certificate(IntVec2 a, const AnosovMatrix& A) {
  SolCommutatorExpression expr;
  expr.target = {a, 0};
  if (a.is_zero()) return expr;
  auto u = membership_commutator_subgroup(a, A);
  if (!u) throw InvalidInput("(" + a.str() + ") is not in the commutator subgroup for A = " + A.str());
  expr.factors.push_back({sol_generator(), {*u, 0}});
  if (!expr.verify(A)) throw CertificateFailure("Sol commutator certificate failed for (" + a.str() + ")");
  return expr;
}

SolCommutatorExpression commutator_certificate_power(IntVec2 a, std::int64_t n, const AnosovMatrix& A) {
  auto u = membership_commutator_subgroup(a, A);
  if (!u) throw InvalidInput("(" + a.str() + ") is not in the commutator subgroup for A = " + A.str());
  SolCommutatorExpression expr;
  expr.target = sol_power({a, 0}, n, A);
  if (expr.target == sol_identity()) return expr;
  expr.factors.push_back({sol_generator(), {n * *u, 0}});
  if (!expr.verify(A)) throw CertificateFailure("Sol power certificate failed for (" + a.str() + ")");
  return expr;
}

SolDecomposer::SolDecomposer(const AnosovMatrix& A) : A_(A) {
  const double lambda = A.expanding_eigenvalue();
  const double mu = 1.0 / lambda;
  // b != 0 for every Anosov matrix (b = 0 forces a = d = +-1), so (b, rho - a)
  // is an eigenvector for rho.
  const double a = static_cast<double>(A.a());
  const double b = static_cast<double>(A.b());
  auto unit = [](double x, double y, double* out) {
    const double n = std::max(std::abs(x), std::abs(y));
    out[0] = x / n;
    out[1] = y / n;
  };
  unit(b, lambda - a, v1_);
  unit(b, mu - a, v2_);
  const double det = v1_[0] * v2_[1] - v2_[0] * v1_[1];
  inv_[0][0] = v2_[1] / det;
  inv_[0][1] = -v2_[0] / det;
  inv_[1][0] = -v1_[1] / det;
  inv_[1][1] = v1_[0] / det;

  const double n1 = std::abs(inv_[0][0]) + std::abs(inv_[0][1]);
  const double n2 = std::abs(inv_[1][0]) + std::abs(inv_[1][1]);
  const double spread = std::abs(lambda) * (n1 * n1 + n2 * n2);
  constants_.lambda = lambda;
  constants_.conjugate_bound = static_cast<std::int64_t>(std::ceil(spread));
  constants_.contraction = spread / (2.0 * static_cast<double>(constants_.conjugate_bound));
  constants_.offset = n1 + n2;
  if (!(constants_.contraction < 1.0)) throw std::logic_error("Sol decomposition contraction constant is not < 1");
  constants_.base_bound = static_cast<std::int64_t>(
      std::ceil((2.0 * static_cast<double>(constants_.conjugate_bound) + constants_.offset) / (1.0 - constants_.contraction)));

  // Base table by exhaustive search: every member with sup norm <= base_bound
  // is (A - I) u for some u with |u| <= ||(A - I)^-1|| * base_bound.
  const double p = a - 1, q = b, r = static_cast<double>(A.c()), s = static_cast<double>(A.d()) - 1;
  const double det_m = std::abs(p * s - q * r);
  const double inv_norm = std::max(std::abs(s) + std::abs(q), std::abs(r) + std::abs(p)) / det_m;
  const auto search = static_cast<std::int64_t>(std::ceil(inv_norm * static_cast<double>(constants_.base_bound)));
  const std::int64_t bound = constants_.base_bound;
  for (std::int64_t ux = -search; ux <= search; ++ux) {
    for (std::int64_t uy = -search; uy <= search; ++uy) {
      const IntVec2 u{ux, uy};
      const IntVec2 image = A.apply_power(1, u) - u;
      if (image.sup_norm() > bound || image.is_zero()) continue;
      base_table_.try_emplace(image, u);
    }
  }
  for (std::int64_t x = -bound; x <= bound; ++x) {
    for (std::int64_t y = -bound; y <= bound; ++y) {
      const IntVec2 v{x, y};
      if (v.is_zero()) continue;
      if (membership_commutator_subgroup(v, A) && !base_table_.contains(v)) {
        throw std::logic_error("Sol base table is missing (" + v.str() + ")");
      }
    }
  }
}

DecompositionStep SolDecomposer::split(IntVec2 a) const {
  DecompositionStep step;
  step.input = a;
  const double ax = static_cast<double>(a.x), ay = static_cast<double>(a.y);
  const double alpha = inv_[0][0] * ax + inv_[0][1] * ay;
  const double beta = inv_[1][0] * ax + inv_[1][1] * ay;
  const double bound = static_cast<double>(constants_.conjugate_bound);
  const double lambda = constants_.lambda;

  // Least k >= 0 with |alpha| |lambda|^-k <= B; then b1 rounds A^-k (alpha v1).
  double scaled = alpha;
  while (std::abs(scaled) > bound) {
    scaled /= lambda;
    ++step.expand_power;
  }
  step.expand_part = {round_to_int(scaled * v1_[0]), round_to_int(scaled * v1_[1])};

  scaled = beta;
  while (std::abs(scaled) > bound) {
    scaled /= lambda;  // A^k v2 = lambda^-k v2
    ++step.contract_power;
  }
  step.contract_part = {round_to_int(scaled * v2_[0]), round_to_int(scaled * v2_[1])};

  const IntVec2 w1 = A_.apply_power(step.expand_power, step.expand_part);
  const IntVec2 w2 = A_.apply_power(-step.contract_power, step.contract_part);
  step.remainder = a - w1 - w2;
  step.next = step.expand_part + step.contract_part + step.remainder;
  return step;
}

LogDecomposition SolDecomposer::decompose(IntVec2 a, int max_depth) const {
  if (max_depth < 1) throw InvalidInput("max_depth must be >= 1");
  if (!membership_commutator_subgroup(a, A_)) {
    throw InvalidInput("(" + a.str() + ") is not in the commutator subgroup for A = " + A_.str());
  }
  LogDecomposition out;
  out.constants = constants_;
  IntVec2 current = a;
  while (current.sup_norm() > constants_.base_bound) {
    if (static_cast<int>(out.trace.size()) >= max_depth) {
      out.complete = false;
      break;
    }
    DecompositionStep step = split(current);
    if (step.next.sup_norm() >= current.sup_norm()) {
      throw std::logic_error("Sol decomposition failed to shrink (" + current.str() + ")");
    }
    if (step.expand_power > 0 && !step.expand_part.is_zero()) {
      out.expression.factors.push_back({{{0, 0}, step.expand_power}, {step.expand_part, 0}});
    }
    if (step.contract_power > 0 && !step.contract_part.is_zero()) {
      out.expression.factors.push_back({{{0, 0}, -step.contract_power}, {step.contract_part, 0}});
    }
    current = step.next;
    out.trace.push_back(step);
  }
  if (out.complete && !current.is_zero()) {
    out.expression.factors.push_back({sol_generator(), {base_table_.at(current), 0}});
  }
  out.expression.target = out.complete ? SolElement{a, 0} : SolElement{a - current, 0};
  if (!out.expression.verify(A_)) throw CertificateFailure("Sol log decomposition failed verification");
  return out;
}

LogDecomposition paper_log_decomposition(IntVec2 a, const AnosovMatrix& A, int max_depth) {
  return SolDecomposer(A).decompose(a, max_depth);
}

SolSclReport sol_scl_report(IntVec2 a, const AnosovMatrix& A) {
  SolSclReport report;
  report.element = a;
  if (auto u = membership_commutator_subgroup(a, A)) {
    report.member = true;
    report.scl = ExtRational::of(0);
    report.certificate = commutator_certificate(a, A);
    report.rational_solution = std::pair{Rational(u->x), Rational(u->y)};
    return report;
  }
  const std::int64_t p = A.a() - 1, q = A.b(), r = A.c(), s = A.d() - 1;
  const std::int64_t det = p * s - q * r;
  const Rational ux(s * a.x - q * a.y, det);
  const Rational uy(-r * a.x + p * a.y, det);
  report.member = false;
  report.scl = ExtRational::inf();
  report.rational_solution = std::pair{ux, uy};
  report.power_in_commutator_subgroup = std::lcm(ux.den(), uy.den());
  return report;
}

SolCommutatorExpression scl_zero_by_inverse_conjugacy(const SolElement& b, const SolElement& c, std::int64_t n,
                                                      const AnosovMatrix& A) {
  if (n < 1) throw InvalidInput("power must be >= 1");
  const SolElement conj = sol_mul(sol_mul(c, sol_inverse(b, A), A), sol_inverse(c, A), A);
  if (conj != b) throw InvalidInput("witness " + c.str() + " does not conjugate " + b.str() + " to its inverse");
  SolCommutatorExpression expr;
  expr.factors.push_back({sol_power(b, n, A), c});
  expr.target = sol_power(b, 2 * n, A);
  if (!expr.verify(A)) throw CertificateFailure("inverse-conjugacy certificate failed");
  return expr;
}

std::optional<SolElement> find_inverse_conjugator(const SolElement& b, const AnosovMatrix& A,
                                                  std::int64_t vector_bound, std::int64_t power_bound) {
  const SolElement b_inv = sol_inverse(b, A);
  for (std::int64_t t = -power_bound; t <= power_bound; ++t) {
    for (std::int64_t x = -vector_bound; x <= vector_bound; ++x) {
      for (std::int64_t y = -vector_bound; y <= vector_bound; ++y) {
        const SolElement c{{x, y}, t};
        if (sol_mul(sol_mul(c, b_inv, A), sol_inverse(c, A), A) == b) return c;
      }
    }
  }
  return std::nullopt;
}

}  // namespace scl_lab
