#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scl_lab/rational.hpp"

namespace scl_lab {

struct IntVec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;

  [[nodiscard]] std::int64_t sup_norm() const;
  [[nodiscard]] bool is_zero() const { return x == 0 && y == 0; }
  [[nodiscard]] std::string str() const;

  friend IntVec2 operator+(IntVec2 a, IntVec2 b);
  friend IntVec2 operator-(IntVec2 a, IntVec2 b);
  friend IntVec2 operator-(IntVec2 a);
  friend IntVec2 operator*(std::int64_t k, IntVec2 a);
  friend auto operator<=>(const IntVec2&, const IntVec2&) = default;
};

/// Integer 2x2 matrix with determinant 1 and |trace| > 2.
class AnosovMatrix {
 public:
  /// Throws InvalidInput unless det = 1 and |trace| > 2.
  static AnosovMatrix make(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  [[nodiscard]] std::int64_t a() const { return a_; }
  [[nodiscard]] std::int64_t b() const { return b_; }
  [[nodiscard]] std::int64_t c() const { return c_; }
  [[nodiscard]] std::int64_t d() const { return d_; }
  [[nodiscard]] std::int64_t trace() const { return a_ + d_; }
  [[nodiscard]] std::string str() const;

  /// A^k v for any integer k (A^-1 is integral). Throws std::overflow_error.
  [[nodiscard]] IntVec2 apply_power(std::int64_t k, IntVec2 v) const;

  /// Eigenvalue with |lambda| > 1.
  [[nodiscard]] double expanding_eigenvalue() const;

  friend bool operator==(const AnosovMatrix&, const AnosovMatrix&) = default;

 private:
  std::int64_t a_ = 2, b_ = 1, c_ = 1, d_ = 1;
};

/// (v, t) in Z^2 x| Z with (u, m)(v, n) = (u + A^m v, m + n).
struct SolElement {
  IntVec2 v;
  std::int64_t t = 0;

  [[nodiscard]] std::string str() const;
  friend auto operator<=>(const SolElement&, const SolElement&) = default;
};

SolElement sol_identity();
/// The generator g = ((0,0), 1) of the Z factor.
SolElement sol_generator();
SolElement sol_mul(const SolElement& a, const SolElement& b, const AnosovMatrix& A);
SolElement sol_inverse(const SolElement& a, const AnosovMatrix& A);
SolElement sol_commutator(const SolElement& x, const SolElement& y, const AnosovMatrix& A);
SolElement sol_power(const SolElement& a, std::int64_t n, const AnosovMatrix& A);

/// prod_i [x_i, y_i] together with the element it is claimed to equal.
struct SolCommutatorExpression {
  std::vector<std::pair<SolElement, SolElement>> factors;
  SolElement target;

  [[nodiscard]] SolElement evaluate(const AnosovMatrix& A) const;
  [[nodiscard]] bool verify(const AnosovMatrix& A) const { return evaluate(A) == target; }
};

/// Integral u with (A - I) u = a, when one exists. Such u exist exactly for
/// the fiber elements of [G, G].
std::optional<IntVec2> membership_commutator_subgroup(IntVec2 a, const AnosovMatrix& A);

/// a = [g, u] with (A - I) u = a: a single verified commutator.
/// Throws InvalidInput when a is not in [G, G].
SolCommutatorExpression commutator_certificate(IntVec2 a, const AnosovMatrix& A);

/// Certificate for n * a (the fiber element a^n), [g, n u].
SolCommutatorExpression commutator_certificate_power(IntVec2 a, std::int64_t n, const AnosovMatrix& A);

struct DecompositionStep {
  IntVec2 input;
  std::int64_t expand_power = 0;    // k1: w1 = A^{k1} b1
  IntVec2 expand_part;              // b1
  std::int64_t contract_power = 0;  // k2: w2 = A^{-k2} b2
  IntVec2 contract_part;            // b2
  IntVec2 remainder;                // v = a - w1 - w2
  IntVec2 next;                     // b1 + b2 + v
};

struct DecompositionConstants {
  double lambda;          // expanding eigenvalue
  double contraction;     // C: |v| <= C |a| + offset
  double offset;
  std::int64_t conjugate_bound;  // B: conjugated parts have sup norm <= B
  std::int64_t base_bound;       // remainders with sup norm <= this use the base table
};

struct LogDecomposition {
  SolCommutatorExpression expression;
  std::vector<DecompositionStep> trace;
  DecompositionConstants constants;
  bool complete = true;  // false when max_depth stopped the recursion
};

/// Eigen-direction splitting with bounded conjugates, per matrix.
///
/// Each step writes a = w1 + w2 + v with w1 = A^{k1} b1 close to the
/// expanding eigenline and w2 = A^{-k2} b2 close to the contracting one, the
/// b_i bounded by B. Then w1 = [g^{k1}, b1] b1 and w2 = [g^{-k2}, b2] b2, so a
/// costs at most two commutators plus b1 + b2 + v, which is shorter than a
/// whenever |a| exceeds the base bound. Remainders inside the base bound are
/// looked up in an exhaustively built table of single-commutator expressions.
class SolDecomposer {
 public:
  explicit SolDecomposer(const AnosovMatrix& A);

  [[nodiscard]] const AnosovMatrix& matrix() const { return A_; }
  [[nodiscard]] const DecompositionConstants& constants() const { return constants_; }
  [[nodiscard]] std::size_t base_table_size() const { return base_table_.size(); }

  /// Throws InvalidInput when a is not in [G, G].
  [[nodiscard]] LogDecomposition decompose(IntVec2 a, int max_depth) const;

 private:
  [[nodiscard]] DecompositionStep split(IntVec2 a) const;

  AnosovMatrix A_;
  DecompositionConstants constants_{};
  double v1_[2]{};       // expanding eigenvector, sup norm 1
  double v2_[2]{};       // contracting eigenvector, sup norm 1
  double inv_[2][2]{};   // eigen coordinates: (alpha, beta) = inv_ * z
  std::map<IntVec2, IntVec2> base_table_;  // member a -> u with a = [g, u]
};

LogDecomposition paper_log_decomposition(IntVec2 a, const AnosovMatrix& A, int max_depth);

struct SolSclReport {
  IntVec2 element;
  bool member = false;
  ExtRational scl;                                   // 0 or inf
  std::optional<SolCommutatorExpression> certificate;
  std::optional<std::pair<Rational, Rational>> rational_solution;  // (A - I)^-1 a
  std::int64_t power_in_commutator_subgroup = 1;     // least k with k a in [G, G]
};

SolSclReport sol_scl_report(IntVec2 a, const AnosovMatrix& A);

/// [b^n, c] = b^{2n} when c b^-1 c^-1 = b; throws InvalidInput otherwise.
SolCommutatorExpression scl_zero_by_inverse_conjugacy(const SolElement& b, const SolElement& c, std::int64_t n,
                                                      const AnosovMatrix& A);

/// Exhaustive search for c with c b^-1 c^-1 = b over |c.v| <= vector_bound, |c.t| <= power_bound.
std::optional<SolElement> find_inverse_conjugator(const SolElement& b, const AnosovMatrix& A,
                                                  std::int64_t vector_bound, std::int64_t power_bound);

}  // namespace scl_lab
