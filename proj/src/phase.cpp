#include "kleppner/phase.hpp"

#include <cctype>
#include <set>

#include "kleppner/linalg.hpp"

namespace kleppner {

IrrationalBasis::IrrationalBasis(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty())
      throw std::invalid_argument("empty irrational symbol name");
    if (!seen.insert(s).second)
      throw std::invalid_argument("duplicate irrational symbol '" + s + "'");
  }
}

std::optional<std::size_t> IrrationalBasis::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == name)
      return i;
  return std::nullopt;
}

BasisPtr make_basis(std::vector<std::string> symbols) {
  return std::make_shared<const IrrationalBasis>(std::move(symbols));
}

BasisPtr common_basis(const BasisPtr& a, const BasisPtr& b) {
  if (!a || a->empty())
    return b;
  if (!b || b->empty() || a == b || *a == *b)
    return a;
  throw BasisMismatch("phases over different irrational bases");
}

// ---------------------------------------------------------------------------

Exponent::Exponent(Rational constant, std::vector<Rational> coeffs, BasisPtr basis)
    : constant_(std::move(constant)), coeffs_(std::move(coeffs)), basis_(std::move(basis)) {
  const std::size_t n = basis_ ? basis_->size() : 0;
  if (coeffs_.size() > n)
    throw BasisMismatch("more coefficients than basis symbols");
  trim();
}

Exponent Exponent::symbol(const BasisPtr& basis, std::size_t index) {
  if (!basis || index >= basis->size())
    throw std::out_of_range("symbol index outside basis");
  std::vector<Rational> c(basis->size(), Rational(0));
  c[index] = 1;
  return Exponent(0, std::move(c), basis);
}

Rational Exponent::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

bool Exponent::has_irrational_part() const { return !coeffs_.empty(); }

void Exponent::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0)
    coeffs_.pop_back();
}

Exponent Exponent::operator-() const {
  Exponent r = *this;
  r.constant_ = -r.constant_;
  for (auto& c : r.coeffs_)
    c = -c;
  return r;
}

Exponent operator+(const Exponent& a, const Exponent& b) {
  Exponent r;
  r.basis_ = common_basis(a.basis_, b.basis_);
  r.constant_ = a.constant_ + b.constant_;
  r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i)
    r.coeffs_[i] = a.coeff(i) + b.coeff(i);
  r.trim();
  return r;
}

Exponent operator*(const Rational& s, const Exponent& a) {
  Exponent r = a;
  r.constant_ *= s;
  for (auto& c : r.coeffs_)
    c *= s;
  r.trim();
  return r;
}

bool operator==(const Exponent& a, const Exponent& b) {
  if (a.constant_ != b.constant_ || a.coeffs_.size() != b.coeffs_.size())
    return false;
  if (!a.coeffs_.empty())
    common_basis(a.basis_, b.basis_);
  return a.coeffs_ == b.coeffs_;
}

// ---------------------------------------------------------------------------

namespace {

Rational frac(const Rational& x) {
  const Integer fl = floor_div(numerator(x), denominator(x));
  return x - Rational(fl);
}

}  // namespace

Phase::Phase(Exponent x) : value_(std::move(x)) { value_.constant_ = frac(value_.constant_); }

std::map<std::string, Rational> Phase::irr_coeffs() const {
  std::map<std::string, Rational> out;
  for (std::size_t i = 0; i < value_.coeffs().size(); ++i)
    if (value_.coeffs()[i] != 0)
      out.emplace(value_.basis()->symbol(i), value_.coeffs()[i]);
  return out;
}

Phase Phase::operator-() const { return Phase(-value_); }

Phase operator+(const Phase& a, const Phase& b) { return Phase(a.value_ + b.value_); }

Phase operator*(const Integer& k, const Phase& a) { return Phase(Rational(k) * a.value_); }

bool operator<(const Phase& a, const Phase& b) {
  if (a.rational_part() != b.rational_part())
    return a.rational_part() < b.rational_part();
  const std::size_t n = std::max(a.value_.coeffs().size(), b.value_.coeffs().size());
  for (std::size_t i = 0; i < n; ++i)
    if (a.coeff(i) != b.coeff(i))
      return a.coeff(i) < b.coeff(i);
  return false;
}

std::size_t qdim(const std::vector<Exponent>& values) {
  BasisPtr basis;
  for (const auto& v : values)
    basis = common_basis(basis, v.basis());
  const std::size_t n = basis ? basis->size() : 0;
  if (values.empty() || n == 0)
    return 1;
  RatMatrix m(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < values.size(); ++r)
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r].coeff(c);
  return 1 + rank(m);
}

std::size_t qdim(const std::vector<Phase>& values) {
  std::vector<Exponent> xs;
  xs.reserve(values.size());
  for (const auto& p : values)
    xs.push_back(p.exponent());
  return qdim(xs);
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

std::string coeff_term(const Rational& c, const std::string& sym) {
  if (c == 1)
    return sym;
  return "(" + c.str() + ")" + sym;
}

}  // namespace

std::string to_string(const Exponent& x) {
  std::string out;
  const bool has_const = x.constant() != 0;
  if (has_const || !x.has_irrational_part())
    out = x.constant().str();
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
    const Rational& c = x.coeffs()[i];
    if (c == 0)
      continue;
    const std::string& sym = x.basis()->symbol(i);
    if (out.empty())
      out = c < 0 ? "-" + coeff_term(-c, sym) : coeff_term(c, sym);
    else
      out += c < 0 ? " - " + coeff_term(-c, sym) : " + " + coeff_term(c, sym);
  }
  return out;
}

std::string to_string(const Phase& p) { return to_string(p.exponent()); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
  Parser(std::string_view text, const SymbolResolver& resolve) : s_(text), resolve_(resolve) {}

  Exponent parse() {
    skip_ws();
    if (at_end())
      fail("empty phase expression");
    Exponent acc;
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      Exponent t = term();
      acc = acc + (sign < 0 ? -t : t);
      first = false;
      skip_ws();
      if (at_end())
        break;
    }
    return acc;
  }

private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw PhaseParseError(msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'",
                          pos_ + 1);
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Integer integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      ++pos_;
    if (start == pos_)
      fail("expected integer");
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  Rational rational() {
    skip_ws();
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
      skip_ws();
    }
    Rational r(integer());
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      const Integer d = integer();
      if (d == 0)
        fail("zero denominator");
      r /= Rational(d);
    }
    return neg ? Rational(-r) : r;
  }

  Exponent ident() {
    const std::size_t start = pos_;
    if (!ident_start(peek()))
      fail("expected symbol");
    while (!at_end() && ident_char(peek()))
      ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    auto v = resolve_(name);
    if (!v) {
      pos_ = start;
      fail("undeclared symbol '" + std::string(name) + "'");
    }
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      const Integer d = integer();
      if (d == 0)
        fail("zero denominator");
      return Rational(1, 1) / Rational(d) * *v;
    }
    return *v;
  }

  // A coefficient followed optionally by '*' and a symbol.
  Exponent scaled(const Rational& c, bool symbol_required) {
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      skip_ws();
      return c * ident();
    }
    if (ident_start(peek()))
      return c * ident();
    if (symbol_required)
      fail("expected symbol after parenthesized coefficient");
    return Exponent(c);
  }

  Exponent term() {
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      const Rational c = rational();
      skip_ws();
      if (peek() != ')')
        fail("expected ')'");
      ++pos_;
      return scaled(c, true);
    }
    if (std::isdigit(static_cast<unsigned char>(peek())))
      return scaled(rational(), false);
    return ident();
  }

  std::string_view s_;
  const SymbolResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

Exponent parse_exponent(std::string_view text, const SymbolResolver& resolve) {
  return Parser(text, resolve).parse();
}

Exponent parse_exponent(std::string_view text, const BasisPtr& basis) {
  SymbolResolver r = [&](std::string_view name) -> std::optional<Exponent> {
    if (!basis)
      return std::nullopt;
    auto i = basis->index_of(name);
    if (!i)
      return std::nullopt;
    return Exponent::symbol(basis, *i);
  };
  return parse_exponent(text, r);
}

Phase parse_phase(std::string_view text, const BasisPtr& basis) { return Phase(parse_exponent(text, basis)); }

}  // namespace kleppner
