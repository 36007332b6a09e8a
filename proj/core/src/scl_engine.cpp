#include "scl_lab/scl_engine.hpp"

#include <algorithm>
#include <array>
#include <span>
#include <limits>
#include <set>
#include <thread>
#include <tuple>

#include "scl_lab/error.hpp"
#include "scl_lab/hyperbolic_estimates.hpp"

namespace scl_lab {

namespace {

using Seq = std::vector<int>;

void push_reduced(Seq& s, int l) {
  if (!s.empty() && s.back() == -l) {
    s.pop_back();
  } else {
    s.push_back(l);
  }
}

void append(Seq& s, std::span<const int> w) {
  for (int l : w) push_reduced(s, l);
}

void append_inverse(Seq& s, std::span<const int> w) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) push_reduced(s, -*it);
}

// out = [u, v] = u v u^-1 v^-1, reduced.
void commutator_into(Seq& out, std::span<const int> u, std::span<const int> v) {
  out.clear();
  append(out, u);
  append(out, v);
  append_inverse(out, u);
  append_inverse(out, v);
}

std::uint64_t hash_seq(std::span<const int> s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int l : s) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(l));
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

Seq to_seq(const ReducedWord& w) {
  Seq s;
  s.reserve(w.size());
  for (Letter l : w.letters()) s.push_back(l.signed_value());
  return s;
}

Seq inverse_seq(std::span<const int> w) {
  Seq s;
  append_inverse(s, w);
  return s;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs body(begin, end, worker) over [0, n) split into contiguous chunks.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, n)));
  if (threads <= 1) {
    body(std::size_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&body, begin, end, t] { body(begin, end, t); });
  }
  for (auto& th : pool) th.join();
}

void check_budget(int max_genus, int max_len) {
  if (max_genus < 1 || max_genus > 2) throw InvalidInput("max_genus must be 1 or 2");
  if (max_len < 1 || max_len > 8) throw InvalidInput("max_len must be in [1, 8]");
}

void check_in_commutator_subgroup(const ReducedWord& a) {
  if (!in_commutator_subgroup(a)) {
    throw InvalidInput("word '" + a.str() + "' is not in the commutator subgroup (nonzero abelianization); cl = inf");
  }
}

}  // namespace

ReducedWord evaluate_commutator_product(int rank, const std::vector<CommutatorCertificate::Pair>& pairs) {
  ReducedWord product(rank);
  for (const auto& [x, y] : pairs) product = concat(product, commutator(x, y));
  return product;
}

CommutatorCertificate CommutatorCertificate::make(std::vector<Pair> pairs, ReducedWord target) {
  CommutatorCertificate c = unchecked(std::move(pairs), std::move(target));
  if (!c.verify()) throw CertificateFailure("commutator certificate does not reduce to " + c.target_.str());
  return c;
}

CommutatorCertificate CommutatorCertificate::unchecked(std::vector<Pair> pairs, ReducedWord target) {
  CommutatorCertificate c;
  c.pairs_ = std::move(pairs);
  c.target_ = std::move(target);
  return c;
}

bool CommutatorCertificate::verify() const {
  for (const auto& [x, y] : pairs_) {
    if (x.rank() != target_.rank() || y.rank() != target_.rank()) return false;
  }
  return evaluate_commutator_product(target_.rank(), pairs_) == target_;
}

CommutatorIndex::CommutatorIndex(int rank, int max_len, const SearchOptions& options)
    : rank_(rank), max_len_(max_len), threads_(resolve_threads(options.threads)) {
  if (max_len < 1) throw InvalidInput("commutator index needs max_len >= 1");
  auto all = enumerate_reduced_words(rank, max_len);
  words_.assign(std::make_move_iterator(all.begin() + 1), std::make_move_iterator(all.end()));
  const auto w = static_cast<long double>(words_.size());
  if (w * (w - 1) / 2 > static_cast<long double>(options.max_index_entries)) {
    throw BudgetExhausted("commutator index for rank " + std::to_string(rank) + ", max_len " +
                          std::to_string(max_len) + " exceeds " + std::to_string(options.max_index_entries) +
                          " entries");
  }
  if (words_.size() >= std::numeric_limits<std::uint32_t>::max()) throw BudgetExhausted("too many words");
  signed_.reserve(words_.size());
  for (const auto& word : words_) signed_.push_back(to_seq(word));

  std::vector<std::vector<Entry>> partial(threads_);
  parallel_chunks(words_.size(), threads_, [&](std::size_t begin, std::size_t end, unsigned worker) {
    Seq buf;
    auto& out = partial[worker];
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < words_.size(); ++j) {
        commutator_into(buf, signed_[i], signed_[j]);
        if (buf.empty()) continue;
        out.push_back({hash_seq(buf), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
  });
  std::size_t total = 0;
  for (const auto& p : partial) total += p.size();
  entries_.reserve(total);
  for (auto& p : partial) {
    entries_.insert(entries_.end(), p.begin(), p.end());
    std::vector<Entry>().swap(p);
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
    return std::tie(x.hash, x.first, x.second) < std::tie(y.hash, y.first, y.second);
  });

  bucket_bits_ = 1;
  while (bucket_bits_ < 30 && (std::size_t{1} << bucket_bits_) < entries_.size()) ++bucket_bits_;
  bucket_start_.assign((std::size_t{1} << bucket_bits_) + 1, 0);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < (std::size_t{1} << bucket_bits_); ++b) {
    bucket_start_[b] = static_cast<std::uint32_t>(pos);
    while (pos < entries_.size() && bucket_of(entries_[pos].hash) == b) ++pos;
  }
  bucket_start_.back() = static_cast<std::uint32_t>(entries_.size());
}

std::optional<CommutatorIndex::PairIndex> CommutatorIndex::find_indices(std::span<const int> target) const {
  // A nontrivial commutator of words of length <= max_len has even length in [4, 4 max_len].
  if (target.size() < 4 || target.size() % 2 != 0 || target.size() > 4 * static_cast<std::size_t>(max_len_)) {
    return std::nullopt;
  }
  const std::uint64_t h = hash_seq(target);
  const std::size_t b = bucket_of(h);
  const auto bucket_end = entries_.begin() + bucket_start_[b + 1];
  auto lo = std::lower_bound(entries_.begin() + bucket_start_[b], bucket_end, h,
                             [](const Entry& e, std::uint64_t key) { return e.hash < key; });
  Seq buf;
  std::optional<PairIndex> best;
  for (auto it = lo; it != bucket_end && it->hash == h; ++it) {
    commutator_into(buf, signed_[it->first], signed_[it->second]);
    if (std::equal(buf.begin(), buf.end(), target.begin(), target.end())) {
      best = PairIndex{it->first, it->second};
      break;  // entries with equal hash are sorted by (first, second)
    }
  }
  return best;
}

std::optional<CommutatorCertificate::Pair> CommutatorIndex::find(const ReducedWord& target) const {
  if (target.rank() != rank_) throw InvalidInput("target rank does not match index rank");
  const Seq t = to_seq(target);
  std::optional<PairIndex> best;
  if (auto direct = find_indices(t)) best = direct;
  if (auto flipped = find_indices(inverse_seq(t))) {
    PairIndex swapped{flipped->second, flipped->first};
    if (!best || swapped < *best) best = swapped;
  }
  if (!best) return std::nullopt;
  return CommutatorCertificate::Pair{words_[best->first], words_[best->second]};
}

std::optional<std::vector<CommutatorCertificate::Pair>> CommutatorIndex::find_genus2(const ReducedWord& target) const {
  if (target.rank() != rank_) throw InvalidInput("target rank does not match index rank");
  const Seq t = to_seq(target);
  using Key = std::array<std::uint32_t, 4>;
  std::vector<std::optional<Key>> best(threads_);

  parallel_chunks(entries_.size(), threads_, [&](std::size_t begin, std::size_t end, unsigned worker) {
    Seq rest;
    Seq rest_inv;
    std::optional<Key> local;
    for (std::size_t k = begin; k < end; ++k) {
      const Entry& e = entries_[k];
      for (int orientation = 0; orientation < 2; ++orientation) {
        const std::uint32_t x1 = orientation == 0 ? e.first : e.second;
        const std::uint32_t y1 = orientation == 0 ? e.second : e.first;
        // [x1, y1]^-1 * target = [y1, x1] * target
        commutator_into(rest, signed_[y1], signed_[x1]);
        append(rest, t);
        if (rest.empty()) continue;
        std::optional<PairIndex> second;
        if (auto direct = find_indices(rest)) second = direct;
        rest_inv.clear();
        append_inverse(rest_inv, rest);
        if (auto flipped = find_indices(rest_inv)) {
          PairIndex swapped{flipped->second, flipped->first};
          if (!second || swapped < *second) second = swapped;
        }
        if (!second) continue;
        Key key{x1, y1, second->first, second->second};
        if (!local || key < *local) local = key;
      }
    }
    best[worker] = local;
  });

  std::optional<Key> chosen;
  for (const auto& b : best) {
    if (b && (!chosen || *b < *chosen)) chosen = b;
  }
  if (!chosen) return std::nullopt;
  const Key& k = *chosen;
  return std::vector<CommutatorCertificate::Pair>{{words_[k[0]], words_[k[1]]}, {words_[k[2]], words_[k[3]]}};
}

std::optional<ClResult> cl_upper(const ReducedWord& a, int max_genus, const CommutatorIndex& index) {
  check_budget(max_genus, index.max_len());
  check_in_commutator_subgroup(a);
  if (a.empty()) return ClResult{0, CommutatorCertificate::make({}, a)};
  if (auto pair = index.find(a)) return ClResult{1, CommutatorCertificate::make({*pair}, a)};
  if (max_genus >= 2) {
    if (auto pairs = index.find_genus2(a)) return ClResult{2, CommutatorCertificate::make(*pairs, a)};
  }
  return std::nullopt;
}

std::optional<ClResult> cl_upper(const ReducedWord& a, int max_genus, int max_len, const SearchOptions& options) {
  check_budget(max_genus, max_len);
  check_in_commutator_subgroup(a);
  if (a.empty()) return ClResult{0, CommutatorCertificate::make({}, a)};
  CommutatorIndex index(a.rank(), max_len, options);
  return cl_upper(a, max_genus, index);
}

std::int64_t cl_lower_from_qm(const ReducedWord& a, const QuasimorphismHandle& homogeneous_phi) {
  if (!homogeneous_phi.homogeneous()) throw InvalidInput("cl lower bound needs a homogeneous quasimorphism");
  if (homogeneous_phi.defect_upper().infinite) throw InvalidInput("cl lower bound needs a finite defect certificate");
  if (a.empty()) return 0;
  const Rational value = homogeneous_phi(a).abs();
  const Rational defect = homogeneous_phi.defect_upper().value;
  if (defect.is_zero()) {
    if (!value.is_zero()) {
      throw InvalidInput("defect-0 quasimorphism is a homomorphism nonzero on '" + a.str() +
                         "'; the word is not in [F, F] and cl = inf");
    }
    return 1;
  }
  return ((value / defect + Rational(1)) / Rational(2)).ceil();
}

Rational scl_upper_from_power(std::int64_t n, std::int64_t cl_n) {
  if (n < 1) throw InvalidInput("power must be >= 1");
  if (cl_n < 1) throw InvalidInput("certified commutator length must be >= 1");
  return Rational(2 * cl_n - 1, 2 * n);
}

Rational scl_upper_from_power(const ReducedWord& a, std::int64_t n, const ClResult& certified) {
  if (!certified.certificate.verify() || certified.certificate.target() != power(a, n) ||
      static_cast<std::size_t>(certified.genus) != certified.certificate.genus()) {
    throw InvalidInput("no valid commutator certificate for power " + std::to_string(n) + " of '" + a.str() + "'");
  }
  return scl_upper_from_power(n, certified.genus);
}

BavardBound scl_lower_bavard(const ReducedWord& a, const std::vector<ReducedWord>& brooks_words) {
  check_in_commutator_subgroup(a);
  if (brooks_words.empty()) throw InvalidInput("Brooks word set is empty");
  std::optional<BavardBound> best;
  for (const auto& w : brooks_words) {
    if (w.size() < 2) throw InvalidInput("Brooks word '" + w.str() + "' has length < 2");
    const Rational value = a.empty() ? Rational(0) : brooks_homogeneous_exact(w, a);
    const Rational bound = value.abs() / (Rational(2) * kHomogenizedBrooksDefect);
    bool better = !best;
    if (best) {
      if (bound != best->bound) {
        better = bound > best->bound;
      } else if (w.size() != best->witness.size()) {
        better = w.size() > best->witness.size();
      } else {
        better = w < best->witness;
      }
    }
    if (better) best = BavardBound{bound, value, w};
  }
  return *best;
}

std::vector<ReducedWord> default_brooks_dictionary(const ReducedWord& a) {
  std::set<ReducedWord> dict;
  const int full_len = a.rank() <= 4 ? 4 : 2;
  for (auto& w : enumerate_reduced_words(a.rank(), full_len)) {
    if (w.size() >= 2) dict.insert(std::move(w));
  }
  if (!a.empty()) {
    const CyclicWord core = cyclically_reduce(a).core;
    const auto letters = core.letters();
    const std::size_t n = letters.size();
    const std::size_t max_len = std::min<std::size_t>(6, n);
    std::vector<Letter> buf;
    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t len = 2; len <= max_len; ++len) {
        buf.clear();
        for (std::size_t k = 0; k < len; ++k) buf.push_back(letters[(start + k) % n]);
        dict.insert(ReducedWord::reduce(a.rank(), buf));
      }
    }
    if (n >= 2) dict.insert(core.as_word());
  }
  return {dict.begin(), dict.end()};
}

std::string to_string(SclStatus s) {
  switch (s) {
    case SclStatus::bounded:
      return "bounded";
    case SclStatus::not_in_commutator_subgroup:
      return "not_in_commutator_subgroup";
    case SclStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

SclReport scl_report(const ReducedWord& a, const SclBudget& budget) {
  if (budget.n_max < 1) throw InvalidInput("n_max must be >= 1");
  check_budget(budget.max_genus, budget.max_len);
  SclReport report;
  report.word = a;

  if (a.empty()) {
    report.lower = ExtRational::of(0);
    report.upper = ExtRational::of(0);
    report.status = SclStatus::bounded;
    return report;
  }
  if (!in_commutator_subgroup(a)) {
    report.lower = ExtRational::inf();
    report.upper = ExtRational::inf();
    report.status = SclStatus::not_in_commutator_subgroup;
    return report;
  }

  BavardBound lower = scl_lower_bavard(a, default_brooks_dictionary(a));
  report.lower = ExtRational::of(lower.bound);
  report.lower_witness = lower;

  const CommutatorIndex index(a.rank(), budget.max_len, budget.search);
  ExtRational running = ExtRational::inf();
  for (std::int64_t n = 1; n <= budget.n_max; ++n) {
    PowerAttempt attempt{n, std::nullopt, running};
    if (auto found = cl_upper(power(a, n), budget.max_genus, index)) {
      attempt.genus = found->genus;
      const Rational bound = scl_upper_from_power(a, n, *found);
      if (running.infinite || bound < running.value) {
        running = ExtRational::of(bound);
        report.upper_witness = std::pair{n, std::move(*found)};
      }
      attempt.running_min = running;
    }
    report.attempts.push_back(attempt);
    // Nontrivial elements of [F, F] have scl >= 1/2, so no later power can improve.
    if (!running.infinite && running.value == Rational(1, 2)) break;
  }
  report.upper = running;

  if (!report.upper.infinite && report.upper.value < Rational(1, 2)) {
    throw CertificateFailure("certified upper bound " + report.upper.value.str() + " below 1/2 for nontrivial '" +
                             a.str() + "' in a free group");
  }
  if (!le(lower.bound, report.upper)) {
    throw CertificateFailure("lower bound " + lower.bound.str() + " exceeds upper bound " + report.upper.str());
  }
  report.status = report.upper.infinite ? SclStatus::inconclusive : SclStatus::bounded;
  if (report.upper.infinite) report.flags.emplace_back("budget-exhausted");
  if (lower.bound >= spectral_gap_constants().lower) report.flags.emplace_back("above-homological-margulis-constant");
  return report;
}

CommutatorCertificate scl_zero_by_inverse_conjugacy(const ReducedWord& b, const ReducedWord& c, std::int64_t n) {
  if (b.rank() != c.rank()) throw InvalidInput("rank mismatch");
  if (n < 1) throw InvalidInput("power must be >= 1");
  if (conjugate(invert(b), c) != b) {
    throw InvalidInput("witness '" + c.str() + "' does not conjugate '" + b.str() + "' to its inverse");
  }
  return CommutatorCertificate::make({{power(b, n), c}}, power(b, 2 * n));
}

}  // namespace scl_lab
