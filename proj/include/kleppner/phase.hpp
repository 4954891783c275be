// Exact circle-group arithmetic.
//
// A circle value exp(2*pi*i*x) is stored through its exponent x, a rational
// plus a Q-linear combination of formal irrational symbols. The symbols are
// declared independent over Q together with 1, which makes equality with 1
// decidable: x must be an integer with no symbol terms.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kleppner/numeric.hpp"

namespace kleppner {

/// Ordered list of distinct formal irrational symbols.
class IrrationalBasis {
public:
  IrrationalBasis() = default;
  explicit IrrationalBasis(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const IrrationalBasis&, const IrrationalBasis&) = default;

private:
  std::vector<std::string> symbols_;
};

using BasisPtr = std::shared_ptr<const IrrationalBasis>;

BasisPtr make_basis(std::vector<std::string> symbols);

class BasisMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class PhaseParseError : public std::invalid_argument {
public:
  PhaseParseError(const std::string& what, std::size_t column)
      : std::invalid_argument(what), column_(column) {}
  std::size_t column() const { return column_; }

private:
  std::size_t column_;
};

/// A real number of the form  c + sum_j a_j * symbol_j  with rational c, a_j.
/// Not reduced; used for parameters such as theta that get scaled by 1/2.
class Exponent {
public:
  Exponent() = default;
  Exponent(Rational constant) : constant_(std::move(constant)) {}  // NOLINT(implicit)
  Exponent(Rational constant, std::vector<Rational> coeffs, BasisPtr basis);

  static Exponent symbol(const BasisPtr& basis, std::size_t index);

  const Rational& constant() const { return constant_; }
  /// Coefficient of basis symbol i (zero when absent).
  Rational coeff(std::size_t i) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const BasisPtr& basis() const { return basis_; }
  bool has_irrational_part() const;
  bool is_zero() const { return constant_ == 0 && !has_irrational_part(); }

  Exponent operator-() const;
  friend Exponent operator+(const Exponent& a, const Exponent& b);
  friend Exponent operator-(const Exponent& a, const Exponent& b) { return a + (-b); }
  friend Exponent operator*(const Rational& s, const Exponent& a);
  friend bool operator==(const Exponent& a, const Exponent& b);

private:
  friend class Phase;
  void trim();

  Rational constant_{0};
  std::vector<Rational> coeffs_;  // indexed like basis_; empty when no symbol occurs
  BasisPtr basis_;
};

/// exp(2*pi*i*x) stored as x reduced mod 1: the rational part lies in [0,1)
/// and symbol coefficients are kept exactly.
class Phase {
public:
  Phase() = default;
  explicit Phase(Exponent x);
  explicit Phase(const Rational& r) : Phase(Exponent(r)) {}

  static Phase zero() { return Phase(); }

  const Rational& rational_part() const { return value_.constant(); }
  /// Nonzero symbol coefficients keyed by symbol name.
  std::map<std::string, Rational> irr_coeffs() const;
  Rational coeff(std::size_t i) const { return value_.coeff(i); }
  const BasisPtr& basis() const { return value_.basis(); }
  bool has_irrational_part() const { return value_.has_irrational_part(); }
  /// Canonical exponent with rational part in [0,1).
  const Exponent& exponent() const { return value_; }

  /// exp(2*pi*i*x) == 1.
  bool is_one() const { return value_.is_zero(); }

  Phase operator-() const;
  friend Phase operator+(const Phase& a, const Phase& b);
  friend Phase operator-(const Phase& a, const Phase& b) { return a + (-b); }
  Phase& operator+=(const Phase& b) { return *this = *this + b; }
  Phase& operator-=(const Phase& b) { return *this = *this - b; }
  friend Phase operator*(const Integer& k, const Phase& a);
  friend Phase operator*(std::int64_t k, const Phase& a) { return Integer(k) * a; }
  friend bool operator==(const Phase& a, const Phase& b) { return a.value_ == b.value_; }
  friend bool operator<(const Phase& a, const Phase& b);

private:
  Exponent value_;
};

inline Phase phase_add(const Phase& p, const Phase& q) { return p + q; }
inline bool phase_is_one(const Phase& p) { return p.is_one(); }

/// Dimension over Q of span{1, values...} viewed as real numbers.
std::size_t qdim(const std::vector<Phase>& values);
std::size_t qdim(const std::vector<Exponent>& values);

/// Formatting as "a/b + (c/d)theta - theta2".
std::string to_string(const Exponent& x);
std::string to_string(const Phase& p);

/// Resolves an identifier to an exponent (a basis symbol or a named parameter).
using SymbolResolver = std::function<std::optional<Exponent>(std::string_view)>;

/// Parses the linear-form grammar
///   expr := ['-'] term (('+'|'-') term)*
///   term := rational [['*'] ident] | '(' rational ')' ['*'] ident | ident ['/' int]
Exponent parse_exponent(std::string_view text, const SymbolResolver& resolve);
Exponent parse_exponent(std::string_view text, const BasisPtr& basis);
Phase parse_phase(std::string_view text, const BasisPtr& basis);

/// Combined basis of two operands; throws BasisMismatch when incompatible.
BasisPtr common_basis(const BasisPtr& a, const BasisPtr& b);

}  // namespace kleppner
