#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "scl_lab/free_words.hpp"
#include "scl_lab/sol_geometry.hpp"

namespace scl_lab::testing {

/// Uniform letter over the 2 * rank signed generators.
inline Letter random_letter(std::mt19937_64& rng, int rank) {
  std::uniform_int_distribution<int> code(0, 2 * rank - 1);
  return Letter::from_code(code(rng));
}

/// Arbitrary (usually unreduced) letter sequence.
inline std::vector<Letter> random_letters(std::mt19937_64& rng, int rank, std::size_t len) {
  std::vector<Letter> out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back(random_letter(rng, rank));
  return out;
}

/// Reduced word of exactly `len` letters, each letter avoiding the inverse of its predecessor.
inline ReducedWord random_reduced(std::mt19937_64& rng, int rank, std::size_t len) {
  std::vector<Letter> out;
  while (out.size() < len) {
    const Letter l = random_letter(rng, rank);
    if (!out.empty() && out.back() == l.inverse()) continue;
    out.push_back(l);
  }
  return ReducedWord::reduce(rank, out);
}

inline ReducedWord random_reduced_upto(std::mt19937_64& rng, int rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  return random_reduced(rng, rank, len(rng));
}

/// Random element of [F, F]: a product of one or two commutators of short words, nontrivial.
inline ReducedWord random_commutator_word(std::mt19937_64& rng, int rank, std::size_t max_len) {
  while (true) {
    const ReducedWord w = commutator(random_reduced_upto(rng, rank, 3), random_reduced_upto(rng, rank, 3));
    if (!w.empty() && w.size() <= max_len) return w;
  }
}

inline IntVec2 random_vec(std::mt19937_64& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  return {d(rng), d(rng)};
}

inline SolElement random_sol(std::mt19937_64& rng, std::int64_t vbound, std::int64_t tbound) {
  std::uniform_int_distribution<std::int64_t> t(-tbound, tbound);
  return {random_vec(rng, vbound), t(rng)};
}

}  // namespace scl_lab::testing
