#include "scl_lab/quasimorphisms.hpp"

#include <random>
#include <utility>

#include "scl_lab/error.hpp"

namespace scl_lab {

QuasimorphismHandle::QuasimorphismHandle(int domain_rank, Evaluator evaluate, ExtRational defect_upper,
                                         bool homogeneous, std::string label)
    : rank_(domain_rank),
      evaluate_(std::move(evaluate)),
      defect_upper_(defect_upper),
      homogeneous_(homogeneous),
      label_(std::move(label)) {
  if (rank_ < 1) throw InvalidInput("quasimorphism domain rank must be >= 1");
  if (!defect_upper_.infinite && defect_upper_.value < Rational(0)) {
    throw InvalidInput("defect bound must be non-negative");
  }
}

Rational QuasimorphismHandle::operator()(const ReducedWord& a) const {
  if (a.rank() != rank_) throw InvalidInput("word rank does not match quasimorphism domain");
  return evaluate_(a);
}

QuasimorphismHandle brooks(const ReducedWord& w) {
  if (w.size() < 2) throw InvalidInput("Brooks word must have length >= 2, got '" + w.str() + "'");
  ReducedWord w_inv = invert(w);
  auto eval = [w, w_inv](const ReducedWord& a) -> Rational {
    return Rational(count_disjoint_copies(w, a) - count_disjoint_copies(w_inv, a));
  };
  return {w.rank(), eval, ExtRational::of(kBrooksDefect), false, "brooks(" + w.str() + ")"};
}

Rational brooks_homogeneous_exact(const ReducedWord& w, const ReducedWord& a) {
  if (w.size() < 2) throw InvalidInput("Brooks word must have length >= 2, got '" + w.str() + "'");
  if (a.empty()) throw InvalidInput("homogenized Brooks value needs a nontrivial word");
  const CyclicWord core = cyclically_reduce(a).core;
  return count_disjoint_copies_cyclic(w, core) - count_disjoint_copies_cyclic(invert(w), core);
}

QuasimorphismHandle brooks_homogeneous(const ReducedWord& w) {
  if (w.size() < 2) throw InvalidInput("Brooks word must have length >= 2, got '" + w.str() + "'");
  auto eval = [w](const ReducedWord& a) -> Rational {
    if (a.empty()) return Rational(0);
    return brooks_homogeneous_exact(w, a);
  };
  return {w.rank(), eval, ExtRational::of(kHomogenizedBrooksDefect), true, "brooks_hom(" + w.str() + ")"};
}

QuasimorphismHandle symmetrize(const QuasimorphismHandle& phi) {
  auto eval = [phi](const ReducedWord& a) -> Rational { return (phi(a) - phi(invert(a))) / Rational(2); };
  return {phi.domain_rank(), eval, phi.defect_upper(), phi.homogeneous(), "sym(" + phi.label() + ")"};
}

HomogenizationEstimate homogenize_estimate(const QuasimorphismHandle& phi, const ReducedWord& a, std::int64_t n) {
  if (n < 1) throw InvalidInput("homogenization needs n >= 1");
  if (phi.defect_upper().infinite) throw InvalidInput("homogenization needs a finite defect certificate");
  return {phi(power(a, n)) / Rational(n), phi.defect_upper().value / Rational(n)};
}

namespace {

ReducedWord random_reduced_word(std::mt19937_64& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<int> code_dist(0, 2 * rank - 1);
  const int len = len_dist(rng);
  std::vector<Letter> letters;
  while (static_cast<int>(letters.size()) < len) {
    Letter l = Letter::from_code(code_dist(rng));
    if (!letters.empty() && letters.back() == l.inverse()) continue;
    letters.push_back(l);
  }
  return ReducedWord::reduce(rank, letters);
}

}  // namespace

DefectScan defect_observed(const QuasimorphismHandle& phi, int length_budget, std::uint64_t samples,
                           std::uint64_t seed) {
  if (length_budget < 1) throw InvalidInput("defect scan needs length budget >= 1");
  const int rank = phi.domain_rank();

  // Number of reduced words of length <= L is 1 + 2r((2r-1)^L - 1)/(2r-2), or 1 + 2L for r = 1.
  long double words = 1;
  long double layer = 2.0L * rank;
  for (int len = 1; len <= length_budget; ++len) {
    words += layer;
    layer *= 2.0L * rank - 1;
  }

  DefectScan scan;
  auto consider = [&](const ReducedWord& a, const ReducedWord& b, const Rational& pa, const Rational& pb) {
    Rational gap = (pa + pb - phi(concat(a, b))).abs();
    ++scan.pairs_tested;
    if (gap > scan.observed || scan.pairs_tested == 1) {
      scan.observed = gap;
      scan.worst_a = a;
      scan.worst_b = b;
    }
  };

  if (words * words <= static_cast<long double>(kExhaustivePairLimit)) {
    scan.exhaustive = true;
    const auto all = enumerate_reduced_words(rank, length_budget);
    std::vector<Rational> values;
    values.reserve(all.size());
    for (const auto& a : all) values.push_back(phi(a));
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = 0; j < all.size(); ++j) consider(all[i], all[j], values[i], values[j]);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < samples; ++s) {
      ReducedWord a = random_reduced_word(rng, rank, length_budget);
      ReducedWord b = random_reduced_word(rng, rank, length_budget);
      consider(a, b, phi(a), phi(b));
    }
  }

  if (!le(scan.observed, phi.defect_upper())) {
    throw CertificateFailure("observed defect " + scan.observed.str() + " of " + phi.label() + " on (" +
                             scan.worst_a.str() + ", " + scan.worst_b.str() + ") exceeds certificate " +
                             phi.defect_upper().str());
  }
  return scan;
}

QuasimorphismHandle zero_quasimorphism(int rank) {
  return {rank, [](const ReducedWord&) { return Rational(0); }, ExtRational::of(0), true, "zero"};
}

QuasimorphismHandle constant_function(int rank, Rational c) {
  return {rank, [c](const ReducedWord&) { return c; }, ExtRational::of(c.abs()), false, "const(" + c.str() + ")"};
}

QuasimorphismHandle word_length_function(int rank) {
  return {rank, [](const ReducedWord& a) { return Rational(static_cast<std::int64_t>(a.size())); },
          ExtRational::inf(), false, "length"};
}

}  // namespace scl_lab
