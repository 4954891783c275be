#include "kleppner/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace kleppner {

struct CyclotomicField {
  std::int64_t n;
  std::size_t phi;
  std::vector<Integer> poly;                         // monic, degree phi
  std::vector<std::pair<std::size_t, Integer>> tail;  // nonzero poly coefficients below degree phi
};

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

std::int64_t mod64(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

// Exact division of integer polynomials by a monic divisor.
std::vector<Integer> divide_monic(std::vector<Integer> num, const std::vector<Integer>& den) {
  const std::size_t dn = den.size() - 1;
  std::vector<Integer> q(num.size() - dn, Integer(0));
  for (std::size_t i = num.size(); i-- > dn;) {
    const Integer t = num[i];
    q[i - dn] = t;
    if (t != 0)
      for (std::size_t j = 0; j <= dn; ++j)
        num[i - dn + j] -= t * den[j];
  }
  return q;
}

struct Registry {
  std::mutex mu;
  std::map<std::int64_t, std::unique_ptr<CyclotomicField>> fields;
};

Registry& registry() {
  static Registry r;
  return r;
}

const CyclotomicField* field_locked(Registry& reg, std::int64_t n);

std::vector<Integer> compute_poly(Registry& reg, std::int64_t n) {
  std::vector<Integer> p(static_cast<std::size_t>(n) + 1, Integer(0));
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0)
      p = divide_monic(std::move(p), field_locked(reg, d)->poly);
  return p;
}

const CyclotomicField* field_locked(Registry& reg, std::int64_t n) {
  auto it = reg.fields.find(n);
  if (it != reg.fields.end())
    return it->second.get();
  auto f = std::make_unique<CyclotomicField>();
  f->n = n;
  f->poly = compute_poly(reg, n);
  f->phi = f->poly.size() - 1;
  for (std::size_t i = 0; i < f->phi; ++i)
    if (f->poly[i] != 0)
      f->tail.emplace_back(i, f->poly[i]);
  auto* raw = f.get();
  reg.fields.emplace(n, std::move(f));
  return raw;
}

const CyclotomicField* field(std::int64_t n) {
  if (n < 1)
    throw std::invalid_argument("cyclotomic order must be positive");
  if (n == 1)
    return nullptr;
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mu);
  return field_locked(reg, n);
}

std::int64_t order_of(const CyclotomicField* f) { return f ? f->n : 1; }
std::size_t degree_of(const CyclotomicField* f) { return f ? f->phi : 1; }

// Reduces a coefficient vector of any length modulo the field polynomial.
std::vector<Rational> reduce(const CyclotomicField* f, std::vector<Rational> c) {
  const std::size_t phi = degree_of(f);
  if (!f) {
    Rational s(0);
    for (auto& v : c)
      s += v;  // zeta_1 = 1
    return {s};
  }
  for (std::size_t i = c.size(); i-- > phi;) {
    if (c[i] == 0)
      continue;
    const Rational t = c[i];
    for (const auto& [j, a] : f->tail)
      c[i - phi + j] -= t * Rational(a);
    c[i] = 0;
  }
  c.resize(phi, Rational(0));
  return c;
}

std::vector<Rational> poly_trim(std::vector<Rational> p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
  return p;
}

// (q, r) with a = q*b + r over Q[x].
std::pair<std::vector<Rational>, std::vector<Rational>> poly_divmod(std::vector<Rational> a,
                                                                    const std::vector<Rational>& b) {
  a = poly_trim(std::move(a));
  if (a.size() < b.size())
    return {{}, a};
  std::vector<Rational> q(a.size() - b.size() + 1, Rational(0));
  const Rational lead = b.back();
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const Rational t = a[i] / lead;
    q[i - (b.size() - 1)] = t;
    if (t != 0)
      for (std::size_t j = 0; j < b.size(); ++j)
        a[i - (b.size() - 1) + j] -= t * b[j];
    if (i == b.size() - 1)
      break;
  }
  a.resize(b.size() - 1);
  return {poly_trim(std::move(q)), poly_trim(std::move(a))};
}

std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.empty() || b.empty())
    return {};
  std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0)
        out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<Rational> poly_sub(std::vector<Rational> a, const std::vector<Rational>& b) {
  if (a.size() < b.size())
    a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] -= b[i];
  return poly_trim(std::move(a));
}

}  // namespace

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0)
      continue;
    while (n % p == 0)
      n /= p;
    result -= result / p;
  }
  if (n > 1)
    result -= result / n;
  return result;
}

const std::vector<Integer>& cyclotomic_polynomial(std::int64_t n) {
  if (n == 1) {
    static const std::vector<Integer> phi1{Integer(-1), Integer(1)};
    return phi1;
  }
  return field(n)->poly;
}

// ---------------------------------------------------------------------------

Cyclotomic::Cyclotomic(const Rational& v) : f_(nullptr), c_{v} {}

Cyclotomic Cyclotomic::root_of_unity(std::int64_t n, std::int64_t k) {
  const std::int64_t g = gcd64(n, mod64(k, n));
  // zeta_n^k is a primitive (n/g)-th root: zeta_{n/g}^{k/g}
  const std::int64_t m = g == 0 ? 1 : n / g;
  const CyclotomicField* f = field(m);
  const std::int64_t e = m == 1 ? 0 : mod64(k, n) / g;
  std::vector<Rational> c(static_cast<std::size_t>(e) + 1, Rational(0));
  c[static_cast<std::size_t>(e)] = 1;
  return Cyclotomic(f, reduce(f, std::move(c)));
}

Cyclotomic Cyclotomic::from_turns(const Rational& r) {
  const Integer den = denominator(r);
  const Integer num = mod_floor(numerator(r), den);
  return root_of_unity(to_int64(den), to_int64(num));
}

std::int64_t Cyclotomic::order() const { return order_of(f_); }

bool Cyclotomic::is_zero() const {
  for (const auto& v : c_)
    if (v != 0)
      return false;
  return true;
}

bool Cyclotomic::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0)
      return false;
  return true;
}

Rational Cyclotomic::rational_value() const { return c_.front(); }

const CyclotomicField* Cyclotomic::join(const CyclotomicField* a, const CyclotomicField* b) {
  if (a == b || !b)
    return a;
  if (!a)
    return b;
  const std::int64_t l = a->n / gcd64(a->n, b->n) * b->n;
  return field(l);
}

Cyclotomic Cyclotomic::lifted(const CyclotomicField* to) const {
  if (to == f_)
    return *this;
  // zeta_from = zeta_to^(to/from)
  const std::int64_t step = order_of(to) / order_of(f_);
  std::vector<Rational> c(static_cast<std::size_t>(step) * (c_.size() - 1) + 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    c[i * static_cast<std::size_t>(step)] = c_[i];
  return Cyclotomic(to, reduce(to, std::move(c)));
}

Cyclotomic Cyclotomic::times_root(std::int64_t n, std::int64_t k) const {
  const CyclotomicField* target = join(f_, field(n));
  Cyclotomic x = lifted(target);
  if (!target)
    return x;
  const std::int64_t m = target->n;
  std::int64_t steps = mod64(k * (m / n), m);
  const std::size_t phi = target->phi;
  for (; steps > 0; --steps) {
    // multiply by zeta: shift up and fold the overflow coefficient back
    Rational top = std::move(x.c_[phi - 1]);
    for (std::size_t i = phi - 1; i > 0; --i)
      x.c_[i] = std::move(x.c_[i - 1]);
    x.c_[0] = 0;
    if (top != 0)
      for (const auto& [j, a] : target->tail)
        x.c_[j] -= top * Rational(a);
  }
  return x;
}

Cyclotomic Cyclotomic::conj() const {
  if (!f_)
    return *this;
  std::vector<Rational> c(static_cast<std::size_t>(f_->n), Rational(0));
  c[0] = c_[0];
  for (std::size_t i = 1; i < c_.size(); ++i)
    c[static_cast<std::size_t>(f_->n) - i] = c_[i];
  return Cyclotomic(f_, reduce(f_, std::move(c)));
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& v : r.c_)
    v = -v;
  return r;
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  const CyclotomicField* f = Cyclotomic::join(a.f_, b.f_);
  Cyclotomic x = a.lifted(f);
  const Cyclotomic y = b.lifted(f);
  for (std::size_t i = 0; i < x.c_.size(); ++i)
    x.c_[i] += y.c_[i];
  return x;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  const CyclotomicField* f = Cyclotomic::join(a.f_, b.f_);
  if (!f)
    return Cyclotomic(a.c_[0] * b.c_[0]);
  const Cyclotomic x = a.lifted(f), y = b.lifted(f);
  if (y.is_rational()) {
    Cyclotomic r = x;
    for (auto& v : r.c_)
      v *= y.c_[0];
    return r;
  }
  if (x.is_rational())
    return y * x;
  return Cyclotomic(f, reduce(f, poly_mul(x.c_, y.c_)));
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero())
    throw std::domain_error("division by zero in cyclotomic field");
  if (is_rational())
    return Cyclotomic(f_, [&] {
      std::vector<Rational> c(c_.size(), Rational(0));
      c[0] = Rational(1) / c_[0];
      return c;
    }());
  // Extended Euclid: s*a + t*Phi = 1.
  std::vector<Rational> phi(f_->poly.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = Rational(f_->poly[i]);
  std::vector<Rational> r0 = phi, r1 = poly_trim(c_);
  std::vector<Rational> s0{}, s1{Rational(1)};
  while (!(r1.size() == 1)) {
    if (r1.empty())
      throw std::logic_error("cyclotomic element not invertible");
    auto [q, r] = poly_divmod(r0, r1);
    auto s = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  const Rational k = r1[0];
  for (auto& v : s1)
    v /= k;
  return Cyclotomic(f_, reduce(f_, std::move(s1)));
}

Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) {
  const CyclotomicField* f = Cyclotomic::join(a.f_, b.f_);
  return a.lifted(f) * b.lifted(f).inverse();
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.f_ == b.f_)
    return a.c_ == b.c_;
  const CyclotomicField* f = Cyclotomic::join(a.f_, b.f_);
  return a.lifted(f).c_ == b.lifted(f).c_;
}

std::string Cyclotomic::str() const {
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0)
      continue;
    if (any)
      os << " + ";
    os << "(" << c_[i].str() << ")";
    if (i > 0)
      os << "*z" << order() << "^" << i;
    any = true;
  }
  if (!any)
    os << "0";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Cyclotomic& x) { return os << x.str(); }

}  // namespace kleppner
