#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scl_lab/rational.hpp"

namespace scl_lab {

/// One generator or inverse generator of a free group.
///
/// Stored as a signed index: +g is generator g, -g its inverse (g >= 1).
/// Letters order as a < A < b < B < ..., which is the order used for
/// canonical cyclic representatives and shortlex enumeration.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, int sign) : value_(sign < 0 ? -generator : generator) {}

  static constexpr Letter from_signed(int value) {
    Letter l;
    l.value_ = value;
    return l;
  }

  [[nodiscard]] constexpr int generator() const { return value_ < 0 ? -value_ : value_; }
  [[nodiscard]] constexpr int sign() const { return value_ < 0 ? -1 : 1; }
  [[nodiscard]] constexpr int signed_value() const { return value_; }
  [[nodiscard]] constexpr Letter inverse() const { return from_signed(-value_); }
  /// Dense code 0, 1, 2, ... in letter order: a=0, A=1, b=2, B=3, ...
  [[nodiscard]] constexpr int code() const { return 2 * (generator() - 1) + (value_ < 0 ? 1 : 0); }
  static constexpr Letter from_code(int code) { return Letter(code / 2 + 1, (code % 2) ? -1 : 1); }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr std::strong_ordering operator<=>(Letter a, Letter b) { return a.code() <=> b.code(); }

 private:
  int value_ = 1;
};

/// Maximum rank printable with single letters a-z / A-Z.
inline constexpr int kLetterAlphabetRank = 26;

/// A freely reduced word in the free group of the given rank.
///
/// The empty word is the identity. Every constructor path reduces, so no
/// instance ever holds a cancelling adjacent pair.
class ReducedWord {
 public:
  ReducedWord() = default;
  explicit ReducedWord(int rank);

  /// Free reduction of an arbitrary letter sequence (stack reduction).
  static ReducedWord reduce(int rank, std::span<const Letter> letters);

  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] std::span<const Letter> letters() const { return letters_; }
  [[nodiscard]] Letter operator[](std::size_t i) const { return letters_[i]; }

  /// Lowercase/uppercase letters, or g<i>/G<i> tokens above rank 26.
  [[nodiscard]] std::string str() const;

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }
  /// Shortlex order (length first, then letter order).
  friend std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b);

 private:
  int rank_ = 1;
  std::vector<Letter> letters_;
};

/// A cyclically reduced word stored as its least rotation.
class CyclicWord {
 public:
  CyclicWord() = default;

  /// Canonical rotation of a letter sequence that is already cyclically
  /// reduced; throws InvalidInput otherwise.
  static CyclicWord canonical(int rank, std::span<const Letter> letters);

  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] std::size_t size() const { return letters_.size(); }
  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] std::span<const Letter> letters() const { return letters_; }
  /// The canonical representative as an ordinary reduced word.
  [[nodiscard]] ReducedWord as_word() const;
  [[nodiscard]] std::string str() const { return as_word().str(); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  int rank_ = 1;
  std::vector<Letter> letters_;
};

struct CyclicReduction {
  CyclicWord core;
  ReducedWord conjugator;  // u == conjugator * core * conjugator^-1
};

/// Parses the word grammar:
///   word := item* ; item := letter | '[' word ',' word ']' | '(' word ')' | item '^' signed-int
/// with letter [a-z] a generator and [A-Z] its inverse (g<i>/G<i> tokens when
/// rank > 26). Whitespace is ignored. Throws ParseError or InvalidInput.
ReducedWord parse_word(std::string_view text, int rank);

ReducedWord concat(const ReducedWord& u, const ReducedWord& v);
ReducedWord invert(const ReducedWord& u);
ReducedWord power(const ReducedWord& u, std::int64_t n);
/// c u c^-1
ReducedWord conjugate(const ReducedWord& u, const ReducedWord& c);
/// u v u^-1 v^-1
ReducedWord commutator(const ReducedWord& u, const ReducedWord& v);

CyclicReduction cyclically_reduce(const ReducedWord& u);

/// Signed exponent sum of each generator; index g-1 holds generator g.
std::vector<std::int64_t> abelianization(const ReducedWord& u);
bool in_commutator_subgroup(const ReducedWord& u);

/// Maximum number of pairwise non-overlapping occurrences of w as a contiguous
/// subword of a. Requires |w| >= 2.
///
/// All occurrences have the same length, so the earliest-endpoint greedy scan
/// is optimal: any maximum family can be exchanged, left to right, for the
/// greedy one without losing members.
std::int64_t count_disjoint_copies(const ReducedWord& w, const ReducedWord& a);

/// lim_n count_disjoint_copies(w, a^n) / n, exact.
///
/// The greedy scan on the infinite periodic word a a a ... is a deterministic
/// walk whose state is the scan position modulo |a|; once a state repeats the
/// scan is periodic and the density over that cycle is the limit.
Rational count_disjoint_copies_cyclic(const ReducedWord& w, const CyclicWord& a);

/// All reduced words of length <= max_len in shortlex order.
std::vector<ReducedWord> enumerate_reduced_words(int rank, int max_len);

struct ReducedWordHash {
  std::size_t operator()(const ReducedWord& w) const noexcept;
};

}  // namespace scl_lab
