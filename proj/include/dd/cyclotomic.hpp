#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dd {

namespace poly {

/// Dense integer polynomials, index = degree. Trailing zeros allowed.
using IntPoly = std::vector<mpz_class>;

inline int degree(const IntPoly& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

/// Quotient of num by a monic divisor; throws if the division is not exact.
inline IntPoly divide_exact(IntPoly num, const IntPoly& den) {
  const int dn = degree(num);
  const int dd = degree(den);
  if (dd < 0 || den[static_cast<std::size_t>(dd)] != 1)
    throw std::invalid_argument("divide_exact: divisor must be monic");
  if (dn < dd) throw std::invalid_argument("divide_exact: degree underflow");
  IntPoly quot(static_cast<std::size_t>(dn - dd) + 1);
  for (int i = dn; i >= dd; --i) {
    const mpz_class c = num[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    quot[static_cast<std::size_t>(i - dd)] = c;
    for (int j = 0; j <= dd; ++j)
      num[static_cast<std::size_t>(i - dd + j)] -= c * den[static_cast<std::size_t>(j)];
  }
  if (degree(num) >= 0) throw std::invalid_argument("divide_exact: nonzero remainder");
  return quot;
}

/// In-place remainder of p modulo a monic divisor.
inline void reduce_mod_monic(IntPoly& p, const IntPoly& den) {
  const int dd = degree(den);
  for (int i = degree(p); i >= dd; --i) {
    const mpz_class c = p[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    for (int j = 0; j <= dd; ++j)
      p[static_cast<std::size_t>(i - dd + j)] -= c * den[static_cast<std::size_t>(j)];
  }
}

}  // namespace poly

/// Coefficients of the N-th cyclotomic polynomial, built by dividing all
/// Phi_d with d a proper divisor of N out of x^N - 1.
inline poly::IntPoly cyclotomic_polynomial(int n) {
  if (n < 1) throw std::invalid_argument("cyclotomic_polynomial: N must be >= 1");
  std::vector<poly::IntPoly> phi(static_cast<std::size_t>(n) + 1);
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    poly::IntPoly p(static_cast<std::size_t>(d) + 1);
    p[0] = -1;
    p[static_cast<std::size_t>(d)] = 1;
    for (int e = 1; e < d; ++e)
      if (d % e == 0) p = poly::divide_exact(std::move(p), phi[static_cast<std::size_t>(e)]);
    phi[static_cast<std::size_t>(d)] = std::move(p);
  }
  return phi[static_cast<std::size_t>(n)];
}

/// Exact element of Z[x]/(x^{n+1} + 1) where x stands for the primitive
/// 2(n+1)-th root of unity exp(i pi/(n+1)). Coefficients are arbitrary
/// precision integers; every operation reduces eagerly with x^{n+1} = -1.
///
/// operator== compares reduced coefficient vectors (the representation);
/// is_zero() decides whether the element vanishes as a complex number, which
/// requires divisibility by Phi_{2(n+1)} and is the test certification code
/// must use.
class Cyclotomic {
 public:
  explicit Cyclotomic(int order) : order_(order), coeff_(static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw std::invalid_argument("Cyclotomic: order must be >= 0");
  }

  /// x^exponent as a ring element; exponent may be any integer.
  static Cyclotomic power(int order, long exponent) {
    Cyclotomic r(order);
    r.add_power(exponent, +1);
    return r;
  }

  static Cyclotomic constant(int order, long value) {
    Cyclotomic r(order);
    r.coeff_[0] = value;
    return r;
  }

  int order() const { return order_; }
  /// Degree of the defining modulus x^{n+1} + 1.
  int modulus_degree() const { return order_ + 1; }

  const std::vector<mpz_class>& coefficients() const { return coeff_; }
  const mpz_class& coefficient(int k) const { return coeff_.at(static_cast<std::size_t>(k)); }

  void set_zero() {
    for (auto& c : coeff_) c = 0;
  }

  /// Adds sign * x^exponent, reducing the exponent into [0, n+1).
  void add_power(long exponent, int sign) {
    const long m = 2L * modulus_degree();
    long e = exponent % m;
    if (e < 0) e += m;
    if (e >= modulus_degree()) {
      e -= modulus_degree();
      sign = -sign;
    }
    if (sign > 0)
      ++coeff_[static_cast<std::size_t>(e)];
    else
      --coeff_[static_cast<std::size_t>(e)];
  }

  /// this += sign * x^shift * v, the workhorse of sparse multiplication.
  void add_shifted(const Cyclotomic& v, long shift, int sign) {
    check_same_ring(v);
    const int deg = modulus_degree();
    long s = shift % (2L * deg);
    if (s < 0) s += 2L * deg;
    if (s >= deg) {
      s -= deg;
      sign = -sign;
    }
    for (int i = 0; i < deg; ++i) {
      long j = i + s;
      int sg = sign;
      if (j >= deg) {
        j -= deg;
        sg = -sg;
      }
      if (sg > 0)
        coeff_[static_cast<std::size_t>(j)] += v.coeff_[static_cast<std::size_t>(i)];
      else
        coeff_[static_cast<std::size_t>(j)] -= v.coeff_[static_cast<std::size_t>(i)];
    }
  }

  /// this += sign * scale * v with an unsigned machine-word scale.
  void add_scaled(const Cyclotomic& v, unsigned long scale, int sign) {
    check_same_ring(v);
    const int deg = modulus_degree();
    for (int i = 0; i < deg; ++i) {
      if (sign > 0)
        mpz_addmul_ui(coeff_[static_cast<std::size_t>(i)].get_mpz_t(),
                      v.coeff_[static_cast<std::size_t>(i)].get_mpz_t(), scale);
      else
        mpz_submul_ui(coeff_[static_cast<std::size_t>(i)].get_mpz_t(),
                      v.coeff_[static_cast<std::size_t>(i)].get_mpz_t(), scale);
    }
  }

  Cyclotomic& operator+=(const Cyclotomic& rhs) {
    check_same_ring(rhs);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += rhs.coeff_[i];
    return *this;
  }

  Cyclotomic& operator-=(const Cyclotomic& rhs) {
    check_same_ring(rhs);
    for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= rhs.coeff_[i];
    return *this;
  }

  Cyclotomic& operator*=(const mpz_class& s) {
    for (auto& c : coeff_) c *= s;
    return *this;
  }

  friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
  friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }

  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    a.check_same_ring(b);
    const int deg = a.modulus_degree();
    Cyclotomic r(a.order_);
    for (int i = 0; i < deg; ++i) {
      if (a.coeff_[static_cast<std::size_t>(i)] == 0) continue;
      for (int j = 0; j < deg; ++j) {
        if (b.coeff_[static_cast<std::size_t>(j)] == 0) continue;
        int k = i + j;
        bool wrap = false;
        if (k >= deg) {
          k -= deg;
          wrap = true;
        }
        if (wrap)
          r.coeff_[static_cast<std::size_t>(k)] -=
              a.coeff_[static_cast<std::size_t>(i)] * b.coeff_[static_cast<std::size_t>(j)];
        else
          r.coeff_[static_cast<std::size_t>(k)] +=
              a.coeff_[static_cast<std::size_t>(i)] * b.coeff_[static_cast<std::size_t>(j)];
      }
    }
    return r;
  }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    return a.order_ == b.order_ && a.coeff_ == b.coeff_;
  }

  bool coefficients_all_zero() const {
    for (const auto& c : coeff_)
      if (c != 0) return false;
    return true;
  }

  /// True iff the element is zero as a complex number, i.e. the coefficient
  /// polynomial is divisible by Phi_{2(n+1)}. Raw coefficient vectors can be
  /// nonzero while still evaluating to zero at the root of unity.
  bool is_zero() const {
    if (coefficients_all_zero()) return true;
    const poly::IntPoly phi = cyclotomic_polynomial(2 * modulus_degree());
    if (poly::degree(phi) > order_) return false;
    poly::IntPoly work(coeff_.begin(), coeff_.end());
    poly::reduce_mod_monic(work, phi);
    return poly::degree(work) < 0;
  }

  /// True iff this and rhs represent the same complex number.
  bool equivalent(const Cyclotomic& rhs) const { return (*this - rhs).is_zero(); }

  /// Numeric value at x = exp(i pi/(n+1)). Double precision only; meant for
  /// reports and sanity checks, not for zero decisions.
  std::complex<double> evaluate() const {
    const double step = M_PI / modulus_degree();
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
      if (coeff_[k] == 0) continue;
      const double c = mpz_get_d(coeff_[k].get_mpz_t());
      const double a = step * static_cast<double>(k);
      acc += std::complex<double>(c * std::cos(a), c * std::sin(a));
    }
    return acc;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t k = 0; k < coeff_.size(); ++k) {
      if (k) os << ", ";
      os << coeff_[k].get_str();
    }
    os << ']';
    return os.str();
  }

 private:
  void check_same_ring(const Cyclotomic& rhs) const {
    if (order_ != rhs.order_)
      throw std::invalid_argument("Cyclotomic: mixed ring orders");
  }

  int order_;
  std::vector<mpz_class> coeff_;
};

/// Exact value of 4*tau_j/t for the n-pulse UDD sequence, as the ring element
/// x^{j-1} + x^{-(j-1)} - x^j - x^{-j}. Summing over j = 1..n+1 telescopes
/// to the constant 4.
inline Cyclotomic udd_interval_element(int j, int n) {
  if (n < 0) throw std::invalid_argument("udd_interval_element: order must be >= 0");
  if (j < 1 || j > n + 1) throw std::out_of_range("udd_interval_element: interval index");
  Cyclotomic r(n);
  r.add_power(j - 1, +1);
  r.add_power(-(j - 1), +1);
  r.add_power(j, -1);
  r.add_power(-j, -1);
  return r;
}

}  // namespace dd
