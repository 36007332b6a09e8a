#pragma once

#include <cstdint>

#include "scl_lab/free_words.hpp"
#include "scl_lab/rational.hpp"

namespace scl_lab::audit {

struct NzLimitResult {
  bool passed;
  double max_relative_error;
};

/// p^2 * core_length(p, q) against 2 pi / |m|^2 on random unit-area cusps
/// with |m| in [0.7, 1.5]; passes below 1% relative error.
NzLimitResult nz_limit_check(int cusps, std::int64_t p, std::int64_t q, std::uint64_t seed);

struct DefectCheckResult {
  bool passed;
  Rational observed;
  std::uint64_t pairs;
  std::uint64_t violations;
};

/// Every pair of reduced rank-r words with length <= budget against the Brooks defect bound 3.
DefectCheckResult brooks_defect_check(const ReducedWord& w, int budget);

struct OracleCheckResult {
  bool passed;
  std::uint64_t cases;
  std::uint64_t mismatches;
};

/// Greedy disjoint counting against a dynamic-programming maximum over all
/// (w, a) with 2 <= |w| <= max_w_len and |a| <= max_a_len.
OracleCheckResult greedy_oracle_check(int rank, int max_w_len, int max_a_len);

/// Maximum number of pairwise disjoint occurrences of w in a, by dynamic programming.
std::int64_t max_disjoint_occurrences(const ReducedWord& w, const ReducedWord& a);

}  // namespace scl_lab::audit
