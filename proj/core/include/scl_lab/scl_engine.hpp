#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scl_lab/free_words.hpp"
#include "scl_lab/quasimorphisms.hpp"
#include "scl_lab/rational.hpp"

namespace scl_lab {

/// A product of commutators prod_i [x_i, y_i] that reduces to `target`.
///
/// Instances built through make() have been re-verified by free reduction.
class CommutatorCertificate {
 public:
  using Pair = std::pair<ReducedWord, ReducedWord>;

  /// Throws CertificateFailure when the product does not reduce to target.
  static CommutatorCertificate make(std::vector<Pair> pairs, ReducedWord target);

  [[nodiscard]] const std::vector<Pair>& pairs() const { return pairs_; }
  [[nodiscard]] const ReducedWord& target() const { return target_; }
  [[nodiscard]] std::size_t genus() const { return pairs_.size(); }

  /// Recomputes the product and compares with the target.
  [[nodiscard]] bool verify() const;

  /// Unchecked construction, for tests that need to tamper with certificates.
  static CommutatorCertificate unchecked(std::vector<Pair> pairs, ReducedWord target);

 private:
  std::vector<Pair> pairs_;
  ReducedWord target_;
};

ReducedWord evaluate_commutator_product(int rank, const std::vector<CommutatorCertificate::Pair>& pairs);

struct SearchOptions {
  /// Worker threads; 0 selects the hardware concurrency.
  unsigned threads = 0;
  /// Refuse to build a commutator index with more entries than this.
  std::size_t max_index_entries = 60'000'000;
};

/// Hash index of every nontrivial commutator [u, v] with u, v reduced of
/// length in [1, max_len] and u < v in shortlex order. [v, u] is the inverse
/// of [u, v], so the other orientation is recovered by looking up inverses.
class CommutatorIndex {
 public:
  CommutatorIndex(int rank, int max_len, const SearchOptions& options = {});

  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] int max_len() const { return max_len_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<ReducedWord>& words() const { return words_; }

  /// Least pair (x, y), ordered by word indices, with [x, y] == target.
  [[nodiscard]] std::optional<CommutatorCertificate::Pair> find(const ReducedWord& target) const;

  /// Least (x1, y1, x2, y2) with [x1, y1][x2, y2] == target, meet in the middle.
  [[nodiscard]] std::optional<std::vector<CommutatorCertificate::Pair>> find_genus2(const ReducedWord& target) const;

 private:
  struct Entry {
    std::uint64_t hash;
    std::uint32_t first;   // index into words_
    std::uint32_t second;  // index into words_
  };
  using PairIndex = std::pair<std::uint32_t, std::uint32_t>;

  [[nodiscard]] std::optional<PairIndex> find_indices(std::span<const int> target) const;

  int rank_;
  int max_len_;
  unsigned threads_;
  std::vector<ReducedWord> words_;  // nonempty words of length <= max_len, shortlex
  std::vector<std::vector<int>> signed_;
  std::vector<Entry> entries_;      // sorted by (hash, first, second)
  [[nodiscard]] std::size_t bucket_of(std::uint64_t hash) const { return static_cast<std::size_t>(hash >> (64 - bucket_bits_)); }
  unsigned bucket_bits_ = 1;
  std::vector<std::uint32_t> bucket_start_;  // entries_ offset of each leading-bits bucket
};

struct ClResult {
  int genus;
  CommutatorCertificate certificate;
};

/// Smallest genus g <= max_genus such that a is a product of g commutators
/// of words of length <= max_len. Absence only means nothing was found
/// within the budget. Throws InvalidInput when a is not in [F, F] or the
/// budget is outside max_genus in {1, 2}, max_len in [1, 8].
std::optional<ClResult> cl_upper(const ReducedWord& a, int max_genus, int max_len, const SearchOptions& options = {});

/// Same search against a prebuilt index (reused across powers).
std::optional<ClResult> cl_upper(const ReducedWord& a, int max_genus, const CommutatorIndex& index);

/// ceil((|phi(a)|/D + 1)/2) from |phi(a)| <= (2n - 1) D for a product of n commutators.
std::int64_t cl_lower_from_qm(const ReducedWord& a, const QuasimorphismHandle& homogeneous_phi);

/// (2 cl - 1)/(2n), the bound from a genus-cl surface whose boundary wraps n times.
Rational scl_upper_from_power(std::int64_t n, std::int64_t cl_n);
/// As above, after checking that the certificate is valid for a^n.
Rational scl_upper_from_power(const ReducedWord& a, std::int64_t n, const ClResult& certified);

struct BavardBound {
  Rational bound;       // max |phi_w(a)| / (2 * 6)
  Rational value;       // homogenized Brooks value at the witness
  ReducedWord witness;  // the maximizing Brooks word
};

/// Lower bound on scl(a) from homogenized Brooks quasimorphisms. Ties prefer
/// the longer word, then the shortlex-least.
BavardBound scl_lower_bavard(const ReducedWord& a, const std::vector<ReducedWord>& brooks_words);

/// Default Brooks dictionary for a word: every reduced word of length 2 (and
/// lengths 3, 4 when rank <= 4), plus the cyclic subwords of core(a) with
/// length in [2, min(6, |core|)] and core(a) itself.
std::vector<ReducedWord> default_brooks_dictionary(const ReducedWord& a);

struct SclBudget {
  int n_max = 4;
  int max_len = 6;
  int max_genus = 2;
  SearchOptions search{};
};

enum class SclStatus { bounded, not_in_commutator_subgroup, inconclusive };
std::string to_string(SclStatus s);

struct PowerAttempt {
  std::int64_t n;
  std::optional<int> genus;  // absent when the search found nothing in budget
  ExtRational running_min;   // best upper bound over powers 1..n
};

struct SclReport {
  ReducedWord word;
  ExtRational lower;  // infinite only for words outside [F, F]
  std::optional<BavardBound> lower_witness;
  ExtRational upper;
  std::optional<std::pair<std::int64_t, ClResult>> upper_witness;
  std::vector<PowerAttempt> attempts;
  SclStatus status = SclStatus::inconclusive;
  std::vector<std::string> flags;
};

/// Two-sided scl bounds. Fails with CertificateFailure if lower > upper or a
/// nontrivial word would get a certified upper bound below 1/2.
SclReport scl_report(const ReducedWord& a, const SclBudget& budget = {});

/// [b^n, c] == b^{2n} whenever c b^-1 c^-1 == b. Throws InvalidInput when the
/// conjugacy check fails.
CommutatorCertificate scl_zero_by_inverse_conjugacy(const ReducedWord& b, const ReducedWord& c, std::int64_t n);

}  // namespace scl_lab
