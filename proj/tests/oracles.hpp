// Independent reference computations used only by the test suite. These
// deliberately avoid the library's enumeration and evolution code paths.
#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

#include "dd/cyclotomic.hpp"
#include "dd/words.hpp"

namespace oracle {

/// m! * (coefficient of `word` in U+ or U-, by leading_sign) by direct
/// enumeration of all weakly decreasing interval assignments, assembling run
/// factorials explicitly. O(K^m); keep m small.
inline mpq_class brute_force_word_coefficient(const dd::OperatorWord& word,
                                              const std::vector<mpq_class>& fractions,
                                              int leading_sign = +1) {
  const int m = word.length();
  const int intervals = static_cast<int>(fractions.size());
  std::vector<int> assign(static_cast<std::size_t>(m), 0);
  mpq_class total = 0;

  mpz_class m_factorial = 1;
  for (int i = 2; i <= m; ++i) m_factorial *= i;

  auto emit = [&]() {
    // product of intervals and X1 signs
    mpq_class term = 1;
    for (int j = 0; j < m; ++j) {
      const int k = assign[static_cast<std::size_t>(j)];
      term *= fractions[static_cast<std::size_t>(k - 1)];
      // X1 carries leading_sign * (-1)^(k-1) during interval k
      const int sign = (k % 2 == 1) ? leading_sign : -leading_sign;
      if (word.letter(j) == 1 && sign < 0) term = -term;
    }
    // m! / (product over runs of equal interval of run!)
    mpz_class denom = 1;
    int run = 1;
    for (int j = 1; j <= m; ++j) {
      if (j < m && assign[static_cast<std::size_t>(j)] == assign[static_cast<std::size_t>(j - 1)]) {
        ++run;
      } else {
        for (int r = 2; r <= run; ++r) denom *= r;
        run = 1;
      }
    }
    total += term * mpq_class(m_factorial) / mpq_class(denom);
  };

  // nested weakly decreasing loops via recursion lambda
  auto rec = [&](auto&& self, int pos, int upper) -> void {
    if (pos == m) {
      emit();
      return;
    }
    for (int k = upper; k >= 1; --k) {
      assign[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, k);
    }
  };
  rec(rec, 0, intervals);
  return total;
}

/// |value| of an integer-coefficient polynomial at alpha = exp(i pi/(n+1))
/// using MPFR with `prec` bits; the high-precision zero-test reference.
inline double abs_value_at_alpha(const std::vector<mpz_class>& coeffs, int n, int prec = 320) {
  mpfr_t pi, angle, c, s, re, im, tmp;
  mpfr_inits2(prec, pi, angle, c, s, re, im, tmp, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    mpfr_mul_ui(angle, pi, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_div_ui(angle, angle, static_cast<unsigned long>(n) + 1, MPFR_RNDN);
    mpfr_cos(c, angle, MPFR_RNDN);
    mpfr_sin(s, angle, MPFR_RNDN);
    mpfr_mul_z(tmp, c, coeffs[k].get_mpz_t(), MPFR_RNDN);
    mpfr_add(re, re, tmp, MPFR_RNDN);
    mpfr_mul_z(tmp, s, coeffs[k].get_mpz_t(), MPFR_RNDN);
    mpfr_add(im, im, tmp, MPFR_RNDN);
  }
  mpfr_hypot(tmp, re, im, MPFR_RNDN);
  const double out = mpfr_get_d(tmp, MPFR_RNDN);
  mpfr_clears(pi, angle, c, s, re, im, tmp, static_cast<mpfr_ptr>(nullptr));
  return out;
}

/// Multiplicities of the literal (uncancelled) CDD pulse list on the dyadic
/// grid j/2^level, j = 1..2^level, built by the doubling recursion on index
/// arrays rather than timed lists.
inline std::vector<int> cdd_literal_multiplicities(int level) {
  std::vector<int> mult(1u << level, 0);  // index j-1 <-> time j/2^level
  if (level == 0) return mult;
  const std::vector<int> prev = cdd_literal_multiplicities(level - 1);
  const std::size_t half = 1u << (level - 1);
  for (std::size_t i = 0; i < prev.size(); ++i) {
    mult[i] += prev[i];          // first copy, scaled into [0, 1/2]
    mult[half + i] += prev[i];   // second copy, shifted into [1/2, 1]
  }
  mult[half - 1] += 1;  // pi at 1/2
  mult.back() += 1;     // pi at 1
  return mult;
}

/// Matrix-valued polynomial in the total time t, truncated at fixed degree;
/// the series route for short-time expansions of sequence propagators.
struct MatrixSeries {
  std::vector<Eigen::MatrixXcd> coeff;  // coeff[p] multiplies t^p

  static MatrixSeries identity(int dim, int degree) {
    MatrixSeries s;
    s.coeff.assign(static_cast<std::size_t>(degree) + 1,
                   Eigen::MatrixXcd::Zero(dim, dim));
    s.coeff[0] = Eigen::MatrixXcd::Identity(dim, dim);
    return s;
  }

  /// exp(-i H f t) truncated: sum_p (-i f)^p H^p / p! t^p.
  static MatrixSeries exponential(const Eigen::MatrixXcd& h, double fraction, int degree) {
    MatrixSeries s = identity(static_cast<int>(h.rows()), degree);
    Eigen::MatrixXcd hp = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
    std::complex<double> scale(1.0, 0.0);
    double factorial = 1.0;
    for (int p = 1; p <= degree; ++p) {
      hp = hp * h;
      scale *= std::complex<double>(0.0, -fraction);
      factorial *= p;
      s.coeff[static_cast<std::size_t>(p)] = (scale / factorial) * hp;
    }
    return s;
  }

  MatrixSeries multiply(const MatrixSeries& rhs) const {
    const int degree = static_cast<int>(coeff.size()) - 1;
    MatrixSeries out;
    out.coeff.assign(coeff.size(), Eigen::MatrixXcd::Zero(coeff[0].rows(), coeff[0].cols()));
    for (int p = 0; p <= degree; ++p)
      for (int q = 0; p + q <= degree; ++q)
        out.coeff[static_cast<std::size_t>(p + q)] +=
            coeff[static_cast<std::size_t>(p)] * rhs.coeff[static_cast<std::size_t>(q)];
    return out;
  }

  MatrixSeries adjoint() const {
    MatrixSeries out;
    out.coeff.reserve(coeff.size());
    for (const auto& c : coeff) out.coeff.push_back(c.adjoint());
    return out;
  }
};

/// Series for U+ or U- of a pulse sequence with the given interval fractions:
/// ordered product of interval exponentials with alternating H+/H-.
inline MatrixSeries propagator_series(const Eigen::MatrixXcd& x0, const Eigen::MatrixXcd& x1,
                                      const std::vector<double>& fractions, int leading_sign,
                                      int degree) {
  MatrixSeries u = MatrixSeries::identity(static_cast<int>(x0.rows()), degree);
  int sign = leading_sign;
  for (const double f : fractions) {
    const Eigen::MatrixXcd h = x0 + static_cast<double>(sign) * x1;
    u = MatrixSeries::exponential(h, f, degree).multiply(u);  // later factors act from the left
    sign = -sign;
  }
  return u;
}

}  // namespace oracle
