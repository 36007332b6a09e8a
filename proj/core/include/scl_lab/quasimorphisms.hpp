#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "scl_lab/free_words.hpp"
#include "scl_lab/rational.hpp"

namespace scl_lab {

/// A rational-valued function on a free group together with a certified
/// upper bound on its defect sup |phi(a) + phi(b) - phi(ab)|.
///
/// Only certified defects may feed scl lower bounds, so the bound is part of
/// the value and is never recomputed from samples.
class QuasimorphismHandle {
 public:
  using Evaluator = std::function<Rational(const ReducedWord&)>;

  QuasimorphismHandle(int domain_rank, Evaluator evaluate, ExtRational defect_upper, bool homogeneous,
                      std::string label);

  [[nodiscard]] Rational operator()(const ReducedWord& a) const;

  [[nodiscard]] int domain_rank() const { return rank_; }
  [[nodiscard]] const ExtRational& defect_upper() const { return defect_upper_; }
  [[nodiscard]] bool homogeneous() const { return homogeneous_; }
  [[nodiscard]] const std::string& label() const { return label_; }

 private:
  int rank_;
  Evaluator evaluate_;
  ExtRational defect_upper_;
  bool homogeneous_;
  std::string label_;
};

/// Certified defect of every Brooks counting quasimorphism.
inline const Rational kBrooksDefect{3};
/// Certified defect of a homogenized Brooks quasimorphism (twice the above).
inline const Rational kHomogenizedBrooksDefect{6};

/// phi_w(a) = #disjoint copies of w in a - #disjoint copies of w^-1 in a.
QuasimorphismHandle brooks(const ReducedWord& w);

/// Homogenization of brooks(w), evaluated exactly through cyclic counting.
QuasimorphismHandle brooks_homogeneous(const ReducedWord& w);

/// The exact homogenized Brooks value on a nontrivial word a.
Rational brooks_homogeneous_exact(const ReducedWord& w, const ReducedWord& a);

/// phi'(a) = (phi(a) - phi(a^-1)) / 2, same defect certificate.
QuasimorphismHandle symmetrize(const QuasimorphismHandle& phi);

struct HomogenizationEstimate {
  Rational value;
  Rational error_bound;  // |value - homogenization(a)| <= error_bound
};

/// phi(a^n)/n with the telescoping error bound D/n.
HomogenizationEstimate homogenize_estimate(const QuasimorphismHandle& phi, const ReducedWord& a, std::int64_t n);

/// Pair count above which defect_observed samples instead of scanning.
inline constexpr std::uint64_t kExhaustivePairLimit = 10'000'000;

struct DefectScan {
  Rational observed;
  std::uint64_t pairs_tested = 0;
  bool exhaustive = false;
  ReducedWord worst_a;
  ReducedWord worst_b;
};

/// Largest |phi(a) + phi(b) - phi(ab)| over pairs of reduced words of length
/// <= length_budget: all pairs when there are at most kExhaustivePairLimit,
/// otherwise `samples` seeded random pairs. A lower bound on the defect.
///
/// Throws CertificateFailure when the observation exceeds defect_upper().
DefectScan defect_observed(const QuasimorphismHandle& phi, int length_budget, std::uint64_t samples,
                           std::uint64_t seed);

/// Convenience handles.
QuasimorphismHandle zero_quasimorphism(int rank);
QuasimorphismHandle constant_function(int rank, Rational c);
/// Word length. Not a quasimorphism; its defect is recorded as infinite.
QuasimorphismHandle word_length_function(int rank);

}  // namespace scl_lab
