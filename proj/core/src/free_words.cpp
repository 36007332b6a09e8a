#include "scl_lab/free_words.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "scl_lab/error.hpp"

namespace scl_lab {

namespace {

constexpr std::size_t kMaxParsedLength = std::size_t{1} << 24;

void check_rank(int rank) {
  if (rank < 1) throw InvalidInput("rank must be >= 1, got " + std::to_string(rank));
}

void check_same_rank(const ReducedWord& u, const ReducedWord& v) {
  if (u.rank() != v.rank()) {
    throw InvalidInput("rank mismatch: " + std::to_string(u.rank()) + " vs " + std::to_string(v.rank()));
  }
}

void push_reduced(std::vector<Letter>& stack, Letter l) {
  if (!stack.empty() && stack.back() == l.inverse()) {
    stack.pop_back();
  } else {
    stack.push_back(l);
  }
}

// Index of the least rotation of a nonempty sequence (two-candidate scan).
std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    Letter a = s[(i + k) % n];
    Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i = i + k + 1;
    } else {
      j = j + k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

// Number of letters peeled from each end: u = p * mid * p^-1.
std::size_t peel_length(std::span<const Letter> s) {
  std::size_t i = 0;
  std::size_t j = s.size();
  while (j - i >= 2 && s[i] == s[j - 1].inverse()) {
    ++i;
    --j;
  }
  return i;
}

class WordParser {
 public:
  WordParser(std::string_view text, int rank) : text_(text), rank_(rank) {}

  std::vector<Letter> parse_all() {
    std::vector<Letter> out = parse_sequence();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_item_start() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '[' || c == '(';
  }

  std::vector<Letter> parse_sequence() {
    std::vector<Letter> out;
    while (at_item_start()) {
      for (Letter l : parse_item()) push_reduced(out, l);
      if (out.size() > kMaxParsedLength) fail("word too long");
    }
    return out;
  }

  std::vector<Letter> parse_item() {
    std::vector<Letter> base;
    skip_ws();
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      std::vector<Letter> x = parse_sequence();
      expect(',');
      std::vector<Letter> y = parse_sequence();
      expect(']');
      for (Letter l : x) push_reduced(base, l);
      for (Letter l : y) push_reduced(base, l);
      for (auto it = x.rbegin(); it != x.rend(); ++it) push_reduced(base, it->inverse());
      for (auto it = y.rbegin(); it != y.rend(); ++it) push_reduced(base, it->inverse());
    } else if (c == '(') {
      ++pos_;
      base = parse_sequence();
      expect(')');
    } else {
      base.push_back(parse_letter());
    }
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      std::int64_t e = parse_exponent();
      const ReducedWord powered = power(ReducedWord::reduce(rank_, base), e);
      base.assign(powered.letters().begin(), powered.letters().end());
      skip_ws();
    }
    return base;
  }

  Letter parse_letter() {
    const std::size_t start = pos_;
    const char c = text_[pos_++];
    const int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    int gen = 0;
    if (rank_ > kLetterAlphabetRank) {
      if (c != 'g' && c != 'G') {
        pos_ = start;
        fail("expected indexed generator token g<i> or G<i>");
      }
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("expected generator index");
      }
      std::int64_t v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_++] - '0');
        if (v > std::numeric_limits<int>::max()) fail("generator index too large");
      }
      gen = static_cast<int>(v);
    } else {
      gen = std::tolower(static_cast<unsigned char>(c)) - 'a' + 1;
    }
    if (gen < 1 || gen > rank_) {
      pos_ = start;
      fail("generator outside rank " + std::to_string(rank_));
    }
    return Letter(gen, sign);
  }

  std::int64_t parse_exponent() {
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected integer exponent");
    }
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_++] - '0');
      if (v > static_cast<std::int64_t>(kMaxParsedLength)) fail("exponent too large");
    }
    return negative ? -v : v;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  int rank_;
  std::size_t pos_ = 0;
};

}  // namespace

ReducedWord::ReducedWord(int rank) : rank_(rank) {
  check_rank(rank);
}

ReducedWord ReducedWord::reduce(int rank, std::span<const Letter> letters) {
  ReducedWord w(rank);
  w.letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l.generator() < 1 || l.generator() > rank) {
      throw InvalidInput("generator " + std::to_string(l.generator()) + " outside rank " + std::to_string(rank));
    }
    push_reduced(w.letters_, l);
  }
  return w;
}

std::string ReducedWord::str() const {
  std::string out;
  for (Letter l : letters_) {
    if (rank_ <= kLetterAlphabetRank) {
      const char base = l.sign() > 0 ? 'a' : 'A';
      out.push_back(static_cast<char>(base + l.generator() - 1));
    } else {
      out.push_back(l.sign() > 0 ? 'g' : 'G');
      out += std::to_string(l.generator());
    }
  }
  return out;
}

std::strong_ordering operator<=>(const ReducedWord& a, const ReducedWord& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                b.letters_.end());
}

CyclicWord CyclicWord::canonical(int rank, std::span<const Letter> letters) {
  check_rank(rank);
  if (!letters.empty()) {
    for (std::size_t i = 0; i < letters.size(); ++i) {
      if (letters[i] == letters[(i + 1) % letters.size()].inverse()) {
        throw InvalidInput("letter sequence is not cyclically reduced");
      }
    }
  }
  CyclicWord w;
  w.rank_ = rank;
  if (letters.empty()) return w;
  const std::size_t r = least_rotation(letters);
  w.letters_.reserve(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) w.letters_.push_back(letters[(r + i) % letters.size()]);
  return w;
}

ReducedWord CyclicWord::as_word() const {
  return ReducedWord::reduce(rank_, letters_);
}

ReducedWord parse_word(std::string_view text, int rank) {
  check_rank(rank);
  WordParser parser(text, rank);
  return ReducedWord::reduce(rank, parser.parse_all());
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v) {
  check_same_rank(u, v);
  std::vector<Letter> buf(u.letters().begin(), u.letters().end());
  for (Letter l : v.letters()) push_reduced(buf, l);
  return ReducedWord::reduce(u.rank(), buf);
}

ReducedWord invert(const ReducedWord& u) {
  std::vector<Letter> buf;
  buf.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) buf.push_back(it->inverse());
  return ReducedWord::reduce(u.rank(), buf);
}

ReducedWord power(const ReducedWord& u, std::int64_t n) {
  if (n < 0) return power(invert(u), -n);
  if (n == 0 || u.empty()) return ReducedWord(u.rank());
  const auto s = u.letters();
  const std::size_t p = peel_length(s);
  const auto prefix = s.subspan(0, p);
  const auto mid = s.subspan(p, s.size() - 2 * p);
  const auto total = static_cast<unsigned __int128>(mid.size()) * static_cast<unsigned __int128>(n) + 2 * p;
  if (total > kMaxParsedLength) throw InvalidInput("power too long: exceeds " + std::to_string(kMaxParsedLength) + " letters");
  std::vector<Letter> buf;
  buf.reserve(static_cast<std::size_t>(total));
  buf.insert(buf.end(), prefix.begin(), prefix.end());
  for (std::int64_t i = 0; i < n; ++i) buf.insert(buf.end(), mid.begin(), mid.end());
  buf.insert(buf.end(), s.end() - static_cast<std::ptrdiff_t>(p), s.end());
  return ReducedWord::reduce(u.rank(), buf);
}

ReducedWord conjugate(const ReducedWord& u, const ReducedWord& c) {
  check_same_rank(u, c);
  return concat(concat(c, u), invert(c));
}

ReducedWord commutator(const ReducedWord& u, const ReducedWord& v) {
  check_same_rank(u, v);
  return concat(concat(u, v), concat(invert(u), invert(v)));
}

CyclicReduction cyclically_reduce(const ReducedWord& u) {
  const auto s = u.letters();
  const std::size_t p = peel_length(s);
  const auto mid = s.subspan(p, s.size() - 2 * p);
  CyclicReduction out{CyclicWord::canonical(u.rank(), mid), ReducedWord::reduce(u.rank(), s.subspan(0, p))};
  if (mid.empty()) return out;
  // mid = x y with canonical core y x; then mid = x (y x) x^-1.
  const std::size_t r = least_rotation(mid);
  out.conjugator = concat(out.conjugator, ReducedWord::reduce(u.rank(), mid.subspan(0, r)));
  return out;
}

std::vector<std::int64_t> abelianization(const ReducedWord& u) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(u.rank()), 0);
  for (Letter l : u.letters()) out[static_cast<std::size_t>(l.generator() - 1)] += l.sign();
  return out;
}

bool in_commutator_subgroup(const ReducedWord& u) {
  const auto ab = abelianization(u);
  return std::all_of(ab.begin(), ab.end(), [](std::int64_t x) { return x == 0; });
}

std::int64_t count_disjoint_copies(const ReducedWord& w, const ReducedWord& a) {
  check_same_rank(w, a);
  if (w.size() < 2) throw InvalidInput("counting word must have length >= 2");
  const auto ws = w.letters();
  const auto as = a.letters();
  std::int64_t count = 0;
  std::size_t i = 0;
  while (i + ws.size() <= as.size()) {
    if (std::equal(ws.begin(), ws.end(), as.begin() + static_cast<std::ptrdiff_t>(i))) {
      ++count;
      i += ws.size();
    } else {
      ++i;
    }
  }
  return count;
}

Rational count_disjoint_copies_cyclic(const ReducedWord& w, const CyclicWord& a) {
  if (w.rank() != a.rank()) throw InvalidInput("rank mismatch");
  if (w.size() < 2) throw InvalidInput("counting word must have length >= 2");
  if (a.empty()) throw InvalidInput("cyclic word must be nonempty");
  const auto ws = w.letters();
  const auto as = a.letters();
  const std::size_t period = as.size();

  auto matches_at = [&](std::size_t pos) {
    for (std::size_t k = 0; k < ws.size(); ++k) {
      if (as[(pos + k) % period] != ws[k]) return false;
    }
    return true;
  };

  struct Visit {
    std::int64_t pos = -1;
    std::int64_t count = 0;
  };
  std::vector<Visit> seen(period);
  std::int64_t pos = 0;
  std::int64_t count = 0;
  while (true) {
    const auto residue = static_cast<std::size_t>(pos % static_cast<std::int64_t>(period));
    if (seen[residue].pos >= 0) {
      const std::int64_t letters = pos - seen[residue].pos;
      const std::int64_t hits = count - seen[residue].count;
      return Rational(hits * static_cast<std::int64_t>(period), letters);
    }
    seen[residue] = {pos, count};
    if (matches_at(residue)) {
      ++count;
      pos += static_cast<std::int64_t>(ws.size());
    } else {
      ++pos;
    }
  }
}

std::vector<ReducedWord> enumerate_reduced_words(int rank, int max_len) {
  check_rank(rank);
  std::vector<ReducedWord> out;
  out.emplace_back(rank);
  std::size_t layer_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (int code = 0; code < 2 * rank; ++code) {
        const Letter l = Letter::from_code(code);
        const auto prev = out[i].letters();
        if (!prev.empty() && prev.back() == l.inverse()) continue;
        std::vector<Letter> buf(prev.begin(), prev.end());
        buf.push_back(l);
        out.push_back(ReducedWord::reduce(rank, buf));
      }
    }
    layer_begin = layer_end;
  }
  // Extending each word of a shortlex-sorted layer by letters in order keeps
  // the next layer sorted, so no sort is needed.
  return out;
}

std::size_t ReducedWordHash::operator()(const ReducedWord& w) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(w.rank());
  for (Letter l : w.letters()) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(l.signed_value()));
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace scl_lab
