#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "generators.hpp"
#include "scl_lab/error.hpp"
#include "scl_lab/free_words.hpp"

using namespace scl_lab;
using scl_lab::testing::random_letters;
using scl_lab::testing::random_reduced;
using scl_lab::testing::random_reduced_upto;

namespace {

ReducedWord W(const char* s, int rank = 2) { return parse_word(s, rank); }

/// Maximum set of pairwise disjoint occurrences by exhaustive subset search.
std::int64_t brute_force_max(const ReducedWord& w, const ReducedWord& a) {
  std::vector<std::size_t> occ;
  for (std::size_t i = 0; i + w.size() <= a.size(); ++i) {
    if (std::equal(w.letters().begin(), w.letters().end(), a.letters().begin() + i)) occ.push_back(i);
  }
  std::int64_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << occ.size()); ++mask) {
    std::int64_t count = 0;
    std::size_t last_end = 0;
    bool ok = true;
    for (std::size_t k = 0; k < occ.size() && ok; ++k) {
      if (!(mask & (1u << k))) continue;
      if (count > 0 && occ[k] < last_end) ok = false;
      last_end = occ[k] + w.size();
      ++count;
    }
    if (ok) best = std::max(best, count);
  }
  return best;
}

/// Free reduction by repeatedly cancelling a random adjacent inverse pair.
std::vector<Letter> random_order_reduce(std::vector<Letter> s, std::mt19937_64& rng) {
  while (true) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == s[i + 1].inverse()) spots.push_back(i);
    }
    if (spots.empty()) return s;
    const std::size_t i = spots[std::uniform_int_distribution<std::size_t>(0, spots.size() - 1)(rng)];
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(i) + 2);
  }
}

}  // namespace

TEST_CASE("parse_word examples") {
  CHECK(W("abAB").str() == "abAB");
  CHECK(W("abAB").size() == 4);
  CHECK(W("aA", 1).empty());
  CHECK(W("[a,b]^2").str() == "abABabAB");
  CHECK(W("(ab)^-2").str() == "BABA");
  CHECK(W(" a b  A ").str() == "abA");
  CHECK(W("[a,[b,a]]").str() == commutator(W("a"), commutator(W("b"), W("a"))).str());
  CHECK(W("").empty());
  CHECK(W("a^0").empty());
}

TEST_CASE("parse_word errors report a position") {
  try {
    (void)W("ab(c");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);  // generator c is outside rank 2
  }
  try {
    (void)W("a(b");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 3);
  }
  CHECK_THROWS_AS(W("[a b]"), ParseError);
  CHECK_THROWS_AS(W("a^"), ParseError);
  CHECK_THROWS_AS(W("a^x"), ParseError);
  CHECK_THROWS_AS(W("1"), ParseError);
  CHECK_THROWS_AS(W("ab", 0), InvalidInput);
}

TEST_CASE("parse then print then parse is idempotent") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const ReducedWord u = random_reduced_upto(rng, 3, 20);
    CHECK(parse_word(u.str(), 3) == u);
  }
}

TEST_CASE("ranks beyond the alphabet use indexed tokens") {
  const ReducedWord u = parse_word("g27 G1 g2", 30);
  CHECK(u.size() == 3);
  CHECK(parse_word(u.str(), 30) == u);
  CHECK_THROWS_AS(parse_word("g31", 30), ParseError);
}

TEST_CASE("concat examples and laws") {
  CHECK(concat(W("ab"), W("BA")).empty());
  CHECK(concat(W("ab"), W("ba")).str() == "abba");
  CHECK(concat(W("abA"), W("aB")).str() == "a");
  CHECK_THROWS_AS(concat(W("a", 1), W("a", 2)), InvalidInput);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto u = random_reduced_upto(rng, 2, 10), v = random_reduced_upto(rng, 2, 10), w = random_reduced_upto(rng, 2, 10);
    CHECK(concat(concat(u, v), w) == concat(u, concat(v, w)));
    const auto uv = concat(u, v);
    CHECK(uv.size() >= static_cast<std::size_t>(std::abs(static_cast<long>(u.size()) - static_cast<long>(v.size()))));
  }
}

TEST_CASE("group operations") {
  CHECK(invert(W("abA")).str() == "aBA");
  CHECK(power(W("ab"), 0).empty());
  CHECK(commutator(W("a"), W("b")).str() == "abAB");
  CHECK(conjugate(W("b"), W("a")).str() == "abA");
  CHECK(power(W("ab"), -2).str() == "BABA");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto u = random_reduced_upto(rng, 2, 10);
    CHECK(invert(invert(u)) == u);
    CHECK(commutator(u, u).empty());
    const int m = static_cast<int>(rng() % 7) - 3, n = static_cast<int>(rng() % 7) - 3;
    CHECK(power(u, m + n) == concat(power(u, m), power(u, n)));
  }
}

TEST_CASE("free reduction is confluent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto letters = random_letters(rng, 2, 30);
    const auto stack = ReducedWord::reduce(2, letters);
    const auto other = random_order_reduce(letters, rng);
    CHECK(std::equal(other.begin(), other.end(), stack.letters().begin(), stack.letters().end()));
  }
}

TEST_CASE("cyclically_reduce examples") {
  auto cr = cyclically_reduce(W("abA"));
  CHECK(cr.core.str() == "b");
  CHECK(cr.conjugator.str() == "a");
  cr = cyclically_reduce(W("abAB"));
  CHECK(cr.core.str() == "abAB");
  CHECK(cr.conjugator.empty());
  cr = cyclically_reduce(W("aabAA"));
  CHECK(cr.core.str() == "b");
  CHECK(cr.conjugator.str() == "aa");
  cr = cyclically_reduce(W(""));
  CHECK(cr.core.empty());
}

TEST_CASE("cyclically_reduce reconstructs the word with a least-rotation core") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto u = random_reduced_upto(rng, 2, 16);
    const auto cr = cyclically_reduce(u);
    CHECK(conjugate(cr.core.as_word(), cr.conjugator) == u);
    const auto core = cr.core.as_word();
    if (core.size() > 1) CHECK(core[0] != core[core.size() - 1].inverse());
    for (std::size_t r = 1; r < core.size(); ++r) {
      std::vector<Letter> rot(core.letters().begin() + static_cast<std::ptrdiff_t>(r), core.letters().end());
      rot.insert(rot.end(), core.letters().begin(), core.letters().begin() + static_cast<std::ptrdiff_t>(r));
      CHECK(core <= ReducedWord::reduce(2, rot));
    }
  }
}

TEST_CASE("abelianization examples") {
  CHECK(abelianization(W("abAB")) == std::vector<std::int64_t>{0, 0});
  CHECK(abelianization(W("aab")) == std::vector<std::int64_t>{2, 1});
  CHECK(abelianization(W("a^3 B^2")) == std::vector<std::int64_t>{3, -2});
  CHECK(in_commutator_subgroup(W("abAB")));
  CHECK_FALSE(in_commutator_subgroup(W("ab")));
  CHECK(in_commutator_subgroup(W("")));
}

TEST_CASE("count_disjoint_copies examples") {
  CHECK(count_disjoint_copies(W("ab"), W("abab")) == 2);
  CHECK(count_disjoint_copies(W("ab"), W("ba")) == 0);
  CHECK(count_disjoint_copies(W("aa"), W("aaa")) == 1);
  CHECK(count_disjoint_copies(W("ab"), W("")) == 0);
  CHECK_THROWS_AS(count_disjoint_copies(W("a"), W("aaa")), InvalidInput);
}

TEST_CASE("greedy counting equals the brute-force maximum") {
  // The acceptance suite covers |a| <= 12; this is the faster slice.
  std::vector<ReducedWord> ws;
  for (auto& w : enumerate_reduced_words(2, 4)) {
    if (w.size() >= 2) ws.push_back(w);
  }
  const auto targets = enumerate_reduced_words(2, 8);
  std::size_t mismatches = 0;
  for (const auto& w : ws) {
    for (const auto& a : targets) {
      const auto c = count_disjoint_copies(w, a);
      if (c != brute_force_max(w, a)) ++mismatches;
      if (c > static_cast<std::int64_t>(a.size() / w.size())) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("count_disjoint_copies_cyclic examples") {
  const auto cyc = [](const char* s, int rank = 2) { return cyclically_reduce(parse_word(s, rank)).core; };
  CHECK(count_disjoint_copies_cyclic(W("abAB"), cyc("abAB")) == Rational(1));
  CHECK(count_disjoint_copies_cyclic(W("ba"), cyc("ab")) == Rational(1));
  CHECK(count_disjoint_copies_cyclic(parse_word("ab", 4), cyc("cd", 4)) == Rational(0));
  CHECK_THROWS_AS(count_disjoint_copies_cyclic(W("ab"), cyc("")), InvalidInput);
  // Densities that are periodic over several periods of the cyclic word.
  CHECK(count_disjoint_copies_cyclic(W("aa"), cyc("a")) == Rational(1, 2));
  CHECK(count_disjoint_copies_cyclic(W("abab"), cyc("ab")) == Rational(1, 2));
  CHECK(count_disjoint_copies_cyclic(W("aaa"), cyc("aa")) == Rational(2, 3));
}

TEST_CASE("cyclic density matches long power counts") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const auto w = random_reduced(rng, 2, 2 + rng() % 3);
    const auto a = random_reduced(rng, 2, 1 + rng() % 6);
    const auto core = cyclically_reduce(a).core;
    if (core.empty()) continue;
    const Rational density = count_disjoint_copies_cyclic(w, core);
    const std::int64_t n = 240;
    const auto count = count_disjoint_copies(w, power(core.as_word(), n));
    // Boundary effects cost at most one copy at each end.
    CHECK((Rational(count, n) - density).abs() <= Rational(2, n));
  }
}

TEST_CASE("cyclic counting is conjugation invariant") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const auto w = random_reduced(rng, 2, 2 + rng() % 3);
    const auto u = random_reduced(rng, 2, 1 + rng() % 8);
    const auto c = random_reduced_upto(rng, 2, 6);
    const auto core_u = cyclically_reduce(u).core;
    const auto core_cu = cyclically_reduce(conjugate(u, c)).core;
    if (core_u.empty()) continue;
    CHECK(core_u == core_cu);
    CHECK(count_disjoint_copies_cyclic(w, core_u) == count_disjoint_copies_cyclic(w, core_cu));
  }
}

TEST_CASE("power length formula") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 300; ++i) {
    const auto u = random_reduced(rng, 2, 1 + rng() % 10);
    const auto cr = cyclically_reduce(u);
    for (std::int64_t n = 1; n <= 6; ++n) {
      CHECK(power(u, n).size() == static_cast<std::size_t>(n) * cr.core.size() + (u.size() - cr.core.size()));
    }
    // When the peeled middle is already the canonical rotation the conjugator
    // is exactly the peeled prefix, and |u^n| = n |core| + 2 |conjugator|.
    if (2 * cr.conjugator.size() + cr.core.size() == u.size()) {
      for (std::int64_t n = 1; n <= 6; ++n) {
        CHECK(power(u, n).size() == static_cast<std::size_t>(n) * cr.core.size() + 2 * cr.conjugator.size());
      }
    }
  }
}

TEST_CASE("enumerate_reduced_words counts and order") {
  const auto words = enumerate_reduced_words(2, 5);
  CHECK(words.size() == 1 + 4 + 12 + 36 + 108 + 324);
  CHECK(words.front().empty());
  CHECK(std::is_sorted(words.begin(), words.end()));
  CHECK(std::set<ReducedWord>(words.begin(), words.end()).size() == words.size());
}
