#include "audit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "scl_lab/hyperbolic_estimates.hpp"
#include "scl_lab/quasimorphisms.hpp"

namespace scl_lab::audit {

NzLimitResult nz_limit_check(int cusps, std::int64_t p, std::int64_t q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> modulus(0.7, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  std::uniform_real_distribution<double> shear(-0.5, 0.5);
  const SurgeryCoeffs coeffs = SurgeryCoeffs::make(p, q);
  double worst = 0;
  for (int i = 0; i < cusps; ++i) {
    const std::complex<double> m = std::polar(modulus(rng), angle(rng));
    const std::complex<double> l = m * std::complex<double>(shear(rng), 1.0) / std::norm(m);
    const CuspShape cusp = CuspShape::make(m, l);
    const double limit = 2 * std::numbers::pi / std::norm(m);
    const double scaled = static_cast<double>(p) * static_cast<double>(p) * nz_core_length(cusp, coeffs).value;
    worst = std::max(worst, std::abs(scaled - limit) / limit);
  }
  return {worst < 0.01, worst};
}

DefectCheckResult brooks_defect_check(const ReducedWord& w, int budget) {
  const auto phi = brooks(w);
  const auto words = enumerate_reduced_words(w.rank(), budget);
  std::vector<Rational> values;
  values.reserve(words.size());
  for (const auto& u : words) values.push_back(phi(u));
  DefectCheckResult r{true, Rational(0), 0, 0};
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      const Rational d = (values[i] + values[j] - phi(concat(words[i], words[j]))).abs();
      if (d > r.observed) r.observed = d;
      if (d > kBrooksDefect) ++r.violations;
      ++r.pairs;
    }
  }
  r.passed = r.violations == 0;
  return r;
}

std::int64_t max_disjoint_occurrences(const ReducedWord& w, const ReducedWord& a) {
  const std::size_t k = w.size(), n = a.size();
  std::vector<std::int64_t> best(n + 1, 0);  // best[i]: maximum within a[0, i)
  for (std::size_t i = 1; i <= n; ++i) {
    best[i] = best[i - 1];
    if (i >= k && std::equal(w.letters().begin(), w.letters().end(), a.letters().begin() + (i - k))) {
      best[i] = std::max(best[i], best[i - k] + 1);
    }
  }
  return best[n];
}

OracleCheckResult greedy_oracle_check(int rank, int max_w_len, int max_a_len) {
  std::vector<ReducedWord> ws;
  for (auto& w : enumerate_reduced_words(rank, max_w_len)) {
    if (w.size() >= 2) ws.push_back(std::move(w));
  }
  const auto targets = enumerate_reduced_words(rank, max_a_len);
  OracleCheckResult r{true, 0, 0};
  for (const auto& w : ws) {
    for (const auto& a : targets) {
      if (count_disjoint_copies(w, a) != max_disjoint_occurrences(w, a)) ++r.mismatches;
      ++r.cases;
    }
  }
  r.passed = r.mismatches == 0;
  return r;
}

}  // namespace scl_lab::audit
