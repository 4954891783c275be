// Exact arithmetic in the cyclotomic fields Q(zeta_N).
//
// An element is a polynomial in zeta of degree < phi(N) with rational
// coefficients, reduced modulo the N-th cyclotomic polynomial, so equality
// is coefficientwise. Elements of Q(zeta_a) and Q(zeta_b) combine in
// Q(zeta_lcm(a,b)); plain rationals live in Q(zeta_1) = Q and mix freely.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "kleppner/numeric.hpp"

namespace kleppner {

struct CyclotomicField;

class Cyclotomic {
public:
  Cyclotomic() : Cyclotomic(Rational(0)) {}
  Cyclotomic(int v) : Cyclotomic(Rational(v)) {}  // NOLINT(implicit)
  Cyclotomic(const Rational& v);                   // NOLINT(implicit)

  /// zeta_n^k.
  static Cyclotomic root_of_unity(std::int64_t n, std::int64_t k);
  /// exp(2*pi*i*r) for a rational r.
  static Cyclotomic from_turns(const Rational& r);

  std::int64_t order() const;
  /// Coefficients in the power basis 1, zeta, ..., zeta^(phi(N)-1).
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_rational() const;
  /// Meaningful only when is_rational().
  Rational rational_value() const;

  /// this * zeta_n^k, without a general multiplication.
  Cyclotomic times_root(std::int64_t n, std::int64_t k) const;

  /// Complex conjugate (zeta -> zeta^-1).
  Cyclotomic conj() const;

  Cyclotomic operator-() const;
  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
  Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
  Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }
  Cyclotomic& operator/=(const Cyclotomic& b) { return *this = *this / b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  Cyclotomic inverse() const;

  std::string str() const;

private:
  Cyclotomic(const CyclotomicField* f, std::vector<Rational> c) : f_(f), c_(std::move(c)) {}
  Cyclotomic lifted(const CyclotomicField* to) const;
  static const CyclotomicField* join(const CyclotomicField* a, const CyclotomicField* b);

  const CyclotomicField* f_ = nullptr;  // nullptr means Q
  std::vector<Rational> c_;
};

std::ostream& operator<<(std::ostream& os, const Cyclotomic& x);

/// Euler's totient.
std::int64_t euler_phi(std::int64_t n);
/// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
const std::vector<Integer>& cyclotomic_polynomial(std::int64_t n);

}  // namespace kleppner

namespace Eigen {
template <>
struct NumTraits<kleppner::Cyclotomic> : GenericNumTraits<kleppner::Cyclotomic> {
  using Real = kleppner::Cyclotomic;
  using NonInteger = kleppner::Cyclotomic;
  using Literal = kleppner::Cyclotomic;
  using Nested = kleppner::Cyclotomic;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
