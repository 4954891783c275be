// Scalar types shared by every module: arbitrary precision integers and
// rationals (GMP backed), checked machine integers for group coordinates,
// and the Eigen matrix aliases built on top of them.
#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

namespace kleppner {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using IntVector = Vector<Integer>;

/// Thrown whenever a machine-integer computation would overflow.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("int64 overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw OverflowError("int64 overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("int64 overflow in multiplication");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) { return checked_sub(0, a); }

/// Narrowing conversion that refuses values outside the int64 range.
inline std::int64_t to_int64(const Integer& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw OverflowError("integer does not fit in int64: " + v.str());
  return v.convert_to<std::int64_t>();
}

/// Floor division and non-negative remainder for Integers.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    q -= 1;
  return q;
}

inline Integer mod_floor(const Integer& a, const Integer& b) {
  return a - b * floor_div(a, b);
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0)
    return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace kleppner
