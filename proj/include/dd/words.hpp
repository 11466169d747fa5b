#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dd/common.hpp"
#include "dd/cyclotomic.hpp"

namespace dd {

/// A product X_{i_1} X_{i_2} ... X_{i_m} over the alphabet {0, 1}. Position 0
/// is the leftmost letter and corresponds to the latest-acting operator
/// factor; cancellation results do not depend on this orientation but
/// falsification witnesses do.
class OperatorWord {
 public:
  OperatorWord(int length, std::uint32_t bits) : length_(length), bits_(bits) {
    if (length < 1 || length > 30) throw std::invalid_argument("OperatorWord: bad length");
    if (length < 30 && (bits >> length) != 0)
      throw std::invalid_argument("OperatorWord: bits exceed length");
  }

  static OperatorWord from_string(const std::string& s) {
    std::uint32_t bits = 0;
    for (char ch : s) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("OperatorWord: bad letter");
      bits = (bits << 1) | static_cast<std::uint32_t>(ch == '1');
    }
    return OperatorWord(static_cast<int>(s.size()), bits);
  }

  int length() const { return length_; }
  std::uint32_t bits() const { return bits_; }

  /// Letter at `position` counted from the left (0 = latest factor).
  int letter(int position) const {
    return static_cast<int>((bits_ >> (length_ - 1 - position)) & 1u);
  }

  int weight() const { return __builtin_popcount(bits_); }

  std::string str() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (int j = 0; j < length_; ++j)
      if (letter(j)) s[static_cast<std::size_t>(j)] = '1';
    return s;
  }

 private:
  int length_;
  std::uint32_t bits_;
};

/// Sign carried by X1 during the k-th interval (1-based): s_k = (-1)^(k-1).
inline int interval_sign(int k) { return (k % 2 == 1) ? +1 : -1; }

/// Integerized word coefficient. `value` is m! times the coefficient of the
/// word in the expansion of U+, over the exact interval representation named
/// by the backend; the physical coefficient of the word in Delta = U+ - U- is
///   (1 - (-1)^weight) * value * scale * t^m,
/// so even-weight words short-circuit to an exact zero without enumeration.
/// `scale` is 1/(4^m m!) for the cyclotomic backend (whose interval elements
/// are 4 tau_j/t) and 1/m! for backends using interval fractions tau_j/t.
template <typename Ring>
struct CoefficientValue {
  Ring value;
  int word_length = 0;
  mpq_class scale;
};

namespace detail {

/// Enumerates all weakly decreasing interval assignments of the word letters
/// (leftmost letter takes the latest interval) and folds them through Ops.
/// Equivalent to iterating weak compositions of m into `interval_count`
/// parts; memory is O(m) ring elements.
///
/// Ops must provide:
///   using Value = ...;                                  default-constructible scratch
///   void multiply_into(Value& dst, const Value& src, int interval);  dst = src * tau_k
///   void accumulate(const Value& v, unsigned long multinomial, int sign);
template <class Ops>
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(const OperatorWord& word, int interval_count, Ops& ops)
      : word_(word), intervals_(interval_count), ops_(ops) {
    if (interval_count < 1) throw std::invalid_argument("assignment enumeration: no intervals");
    if (word.length() > 20)
      throw ResourceError("word length > 20 overflows the multinomial accumulator");
  }

  void run(std::vector<typename Ops::Value>& scratch) {
    // scratch[p] holds the partial interval product after p assigned letters
    descend(intervals_, 0, 0, 1ul, +1, scratch);
  }

 private:
  void descend(int k, int pos, int run, unsigned long multinomial, int sign,
               std::vector<typename Ops::Value>& scratch) {
    if (pos == word_.length()) {
      ops_.accumulate(scratch[static_cast<std::size_t>(pos)], multinomial, sign);
      return;
    }
    // assign the next letter to interval k and stay
    const unsigned long next_multinomial =
        multinomial * static_cast<unsigned long>(pos + 1) / static_cast<unsigned long>(run + 1);
    const int next_sign =
        (word_.letter(pos) == 1) ? sign * interval_sign(k) : sign;
    ops_.multiply_into(scratch[static_cast<std::size_t>(pos + 1)],
                       scratch[static_cast<std::size_t>(pos)], k);
    descend(k, pos + 1, run + 1, next_multinomial, next_sign, scratch);
    // or move to the previous interval
    if (k > 1) descend(k - 1, pos, 0, multinomial, sign, scratch);
  }

  const OperatorWord& word_;
  int intervals_;
  Ops& ops_;
};

struct CyclotomicAssignmentOps {
  using Value = Cyclotomic;

  explicit CyclotomicAssignmentOps(int n) : order(n), acc(n) {
    // tau_k as the 4-term element x^{k-1} + x^{-(k-1)} - x^k - x^{-k}
    terms.resize(static_cast<std::size_t>(n) + 2);
    for (int k = 1; k <= n + 1; ++k) {
      auto& t = terms[static_cast<std::size_t>(k)];
      t = {{{k - 1, +1}, {-(k - 1), +1}, {k, -1}, {-k, -1}}};
    }
  }

  void multiply_into(Value& dst, const Value& src, int k) const {
    dst.set_zero();
    for (const auto& [exponent, sign] : terms[static_cast<std::size_t>(k)])
      dst.add_shifted(src, exponent, sign);
  }

  void accumulate(const Value& v, unsigned long multinomial, int sign) {
    acc.add_scaled(v, multinomial, sign);
  }

  int order;
  std::vector<std::array<std::pair<int, int>, 4>> terms;
  Cyclotomic acc;
};

struct RationalAssignmentOps {
  using Value = mpq_class;

  explicit RationalAssignmentOps(const std::vector<mpq_class>& fractions_in)
      : fractions(fractions_in) {}

  void multiply_into(Value& dst, const Value& src, int k) const {
    dst = src * fractions[static_cast<std::size_t>(k - 1)];
  }

  void accumulate(const Value& v, unsigned long multinomial, int sign) {
    mpq_class term = v * static_cast<unsigned long>(multinomial);
    if (sign < 0)
      acc -= term;
    else
      acc += term;
  }

  const std::vector<mpq_class>& fractions;
  mpq_class acc = 0;
};

inline mpq_class power_scale(int m, unsigned base) {
  // 1 / (base^m * m!)
  mpz_class denom = 1;
  for (int i = 2; i <= m; ++i) denom *= i;
  mpz_class b(base);
  for (int i = 0; i < m; ++i) denom *= b;
  mpq_class s(1);
  s /= denom;
  return s;
}

}  // namespace detail

/// Exact coefficient of `word` in the n-pulse UDD expansion, in the ring
/// Z[x]/(x^{n+1}+1) with interval elements 4 tau_j/t.
inline CoefficientValue<Cyclotomic> udd_word_coefficient(const OperatorWord& word, int n) {
  if (n < 0) throw std::invalid_argument("udd_word_coefficient: order must be >= 0");
  CoefficientValue<Cyclotomic> out{Cyclotomic(n), word.length(),
                                   detail::power_scale(word.length(), 4)};
  if (word.weight() % 2 == 0) return out;  // even weight: Delta coefficient vanishes
  detail::CyclotomicAssignmentOps ops(n);
  std::vector<Cyclotomic> scratch(static_cast<std::size_t>(word.length()) + 1, Cyclotomic(n));
  scratch[0] = Cyclotomic::constant(n, 1);
  detail::AssignmentEnumerator<detail::CyclotomicAssignmentOps> e(word, n + 1, ops);
  e.run(scratch);
  out.value = std::move(ops.acc);
  return out;
}

/// Exact coefficient of `word` for a sequence given by positive interval
/// fractions tau_j/t summing to 1.
inline CoefficientValue<mpq_class> rational_word_coefficient(
    const OperatorWord& word, const std::vector<mpq_class>& fractions) {
  if (fractions.empty()) throw std::invalid_argument("rational_word_coefficient: no intervals");
  CoefficientValue<mpq_class> out{mpq_class(0), word.length(),
                                  detail::power_scale(word.length(), 1)};
  if (word.weight() % 2 == 0) return out;
  detail::RationalAssignmentOps ops(fractions);
  std::vector<mpq_class> scratch(static_cast<std::size_t>(word.length()) + 1, mpq_class(0));
  scratch[0] = 1;
  detail::AssignmentEnumerator<detail::RationalAssignmentOps> e(
      word, static_cast<int>(fractions.size()), ops);
  e.run(scratch);
  out.value = std::move(ops.acc);
  return out;
}

/// Floating-point word coefficient plus the total magnitude of the expansion
/// (the sum of |term| over all interval assignments), which scales the
/// relative zero test.
struct FloatCoefficient {
  double value = 0.0;
  double magnitude = 0.0;
  int word_length = 0;
};

/// Same sum as the exact backends, accumulated per interval by convolving
/// binomially-weighted powers; exact per-assignment enumeration is infeasible
/// beyond n ~ 10 while this runs in O(K m^2).
inline FloatCoefficient float_word_coefficient(const OperatorWord& word,
                                               const std::vector<double>& fractions) {
  const int m = word.length();
  const int intervals = static_cast<int>(fractions.size());
  if (intervals < 1) throw std::invalid_argument("float_word_coefficient: no intervals");
  FloatCoefficient out{0.0, 0.0, m};
  if (word.weight() % 2 == 0) return out;

  // ones_prefix[i] = number of 1-letters among positions [0, i)
  std::vector<int> ones_prefix(static_cast<std::size_t>(m) + 1, 0);
  for (int j = 0; j < m; ++j)
    ones_prefix[static_cast<std::size_t>(j) + 1] = ones_prefix[static_cast<std::size_t>(j)] + word.letter(j);

  std::vector<std::vector<double>> binom(static_cast<std::size_t>(m) + 1,
                                         std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  for (int c = 0; c <= m; ++c) {
    binom[static_cast<std::size_t>(c)][0] = 1.0;
    for (int p = 1; p <= c; ++p)
      binom[static_cast<std::size_t>(c)][static_cast<std::size_t>(p)] =
          binom[static_cast<std::size_t>(c) - 1][static_cast<std::size_t>(p) - 1] +
          binom[static_cast<std::size_t>(c) - 1][static_cast<std::size_t>(p)];
  }

  // value[c]: m!-normalized sum over assignments of the rightmost c letters
  // to intervals processed so far; mag[c] tracks absolute values.
  std::vector<double> value(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> mag(static_cast<std::size_t>(m) + 1, 0.0);
  value[0] = 1.0;
  mag[0] = 1.0;
  std::vector<double> next_value(value.size()), next_mag(mag.size());
  std::vector<double> tau_pow(static_cast<std::size_t>(m) + 1, 1.0);

  for (int k = 1; k <= intervals; ++k) {
    const double tau = fractions[static_cast<std::size_t>(k - 1)];
    for (int p = 1; p <= m; ++p)
      tau_pow[static_cast<std::size_t>(p)] = tau_pow[static_cast<std::size_t>(p) - 1] * tau;
    const bool negative_interval = interval_sign(k) < 0;
    for (int c = 0; c <= m; ++c) {
      KahanSum sum, sum_mag;
      for (int p = 0; p <= c; ++p) {
        const double base = binom[static_cast<std::size_t>(c)][static_cast<std::size_t>(p)] *
                            tau_pow[static_cast<std::size_t>(p)];
        // letters consumed at this interval sit at positions [m-c, m-c+p)
        const int ones = ones_prefix[static_cast<std::size_t>(m - c + p)] -
                         ones_prefix[static_cast<std::size_t>(m - c)];
        const double sgn = (negative_interval && (ones % 2 == 1)) ? -1.0 : 1.0;
        sum.add(sgn * base * value[static_cast<std::size_t>(c - p)]);
        sum_mag.add(base * mag[static_cast<std::size_t>(c - p)]);
      }
      next_value[static_cast<std::size_t>(c)] = sum.value();
      next_mag[static_cast<std::size_t>(c)] = sum_mag.value();
    }
    value.swap(next_value);
    mag.swap(next_mag);
  }
  out.value = value[static_cast<std::size_t>(m)];
  out.magnitude = mag[static_cast<std::size_t>(m)];
  return out;
}

}  // namespace dd
