#include "kleppner/group.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

namespace kleppner {

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False)
    return Tri::False;
  if (a == Tri::True && b == Tri::True)
    return Tri::True;
  return Tri::Unknown;
}

Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True)
    return Tri::True;
  if (a == Tri::False && b == Tri::False)
    return Tri::False;
  return Tri::Unknown;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::True:
      return "true";
    case Tri::False:
      return "false";
    default:
      return "unknown";
  }
}

// ---------------------------------------------------------------------------
// Element

Element Element::index(std::int64_t i) {
  Element e;
  e.kind_ = Kind::Index;
  e.data_ = {i};
  return e;
}

Element Element::vector(std::vector<std::int64_t> v) {
  Element e;
  e.kind_ = Kind::Vector;
  e.data_ = std::move(v);
  return e;
}

Element Element::word(std::vector<std::int64_t> letters) {
  Element e;
  e.kind_ = Kind::Word;
  e.data_ = std::move(letters);
  return e;
}

Element Element::pair(Element a, Element b) {
  Element e;
  e.kind_ = Kind::Pair;
  e.data_.clear();
  e.parts_ = std::make_shared<const std::pair<Element, Element>>(std::move(a), std::move(b));
  return e;
}

bool operator==(const Element& a, const Element& b) {
  if (a.kind_ != b.kind_)
    return false;
  if (a.kind_ == Element::Kind::Pair)
    return a.parts_ == b.parts_ || (a.first() == b.first() && a.second() == b.second());
  return a.data_ == b.data_;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (a.kind_ != b.kind_)
    return a.kind_ <=> b.kind_;
  if (a.kind_ == Element::Kind::Pair) {
    if (auto c = a.first() <=> b.first(); c != 0)
      return c;
    return a.second() <=> b.second();
  }
  if (a.kind_ == Element::Kind::Word && a.data_.size() != b.data_.size())
    return a.data_.size() <=> b.data_.size();
  if (a.kind_ == Element::Kind::Vector) {
    // order by max norm first so small witnesses sort first
    auto norm = [](const std::vector<std::int64_t>& v) {
      std::int64_t m = 0;
      for (auto x : v)
        m = std::max(m, x < 0 ? -x : x);
      return m;
    };
    if (auto c = norm(a.data_) <=> norm(b.data_); c != 0)
      return c;
  }
  return a.data_ <=> b.data_;
}

// ---------------------------------------------------------------------------
// Free words

std::vector<std::int64_t> free_reduce(const std::vector<std::int64_t>& letters) {
  std::vector<std::int64_t> out;
  out.reserve(letters.size());
  for (auto x : letters) {
    if (x == 0)
      throw GroupError("zero letter in free word");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

FreeRoot free_root(const std::vector<std::int64_t>& w) {
  if (w.empty())
    throw GroupError("root of the identity is undefined");
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  FreeRoot r;
  r.conjugator.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(lo));
  const std::vector<std::int64_t> c(w.begin() + static_cast<std::ptrdiff_t>(lo),
                                    w.begin() + static_cast<std::ptrdiff_t>(hi));
  const std::size_t n = c.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0)
      continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i)
      periodic = c[i] == c[i - d];
    if (periodic) {
      r.primitive.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(d));
      r.exponent = static_cast<std::int64_t>(n / d);
      break;
    }
  }
  return r;
}

std::int64_t exponent_sum(const std::vector<std::int64_t>& letters, int gen) {
  std::int64_t s = 0;
  for (auto x : letters) {
    if (x == gen + 1)
      ++s;
    else if (x == -(gen + 1))
      --s;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Builtin tables

namespace {

FiniteTable from_rule(std::string name, std::size_t n, const std::function<std::int32_t(std::int32_t, std::int32_t)>& mul,
                      std::vector<std::string> labels) {
  FiniteTable t;
  t.name = std::move(name);
  t.order = n;
  t.mul.resize(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      t.mul[a * n + b] = mul(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b));
  t.labels = std::move(labels);
  return t;
}

FiniteTable cyclic_product(const std::vector<std::int64_t>& moduli) {
  std::size_t n = 1;
  for (auto m : moduli)
    n *= static_cast<std::size_t>(m);
  std::vector<std::vector<std::int64_t>> coords(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = i;
    coords[i].resize(moduli.size());
    for (std::size_t k = moduli.size(); k-- > 0;) {
      coords[i][k] = static_cast<std::int64_t>(r % static_cast<std::size_t>(moduli[k]));
      r /= static_cast<std::size_t>(moduli[k]);
    }
  }
  auto encode = [&](const std::vector<std::int64_t>& c) {
    std::int64_t idx = 0;
    for (std::size_t k = 0; k < moduli.size(); ++k)
      idx = idx * moduli[k] + c[k];
    return static_cast<std::int32_t>(idx);
  };
  std::vector<std::string> labels;
  std::string name;
  for (std::size_t i = 0; i < n; ++i) {
    if (moduli.size() == 1) {
      labels.push_back(std::to_string(coords[i][0]));
    } else {
      std::string s = "(";
      for (std::size_t k = 0; k < moduli.size(); ++k)
        s += (k ? "," : "") + std::to_string(coords[i][k]);
      labels.push_back(s + ")");
    }
  }
  for (std::size_t k = 0; k < moduli.size(); ++k)
    name += (k ? " x Z_" : "Z_") + std::to_string(moduli[k]);
  auto t = from_rule(
      name, n,
      [&](std::int32_t a, std::int32_t b) {
        std::vector<std::int64_t> c(moduli.size());
        for (std::size_t k = 0; k < moduli.size(); ++k)
          c[k] = (coords[static_cast<std::size_t>(a)][k] + coords[static_cast<std::size_t>(b)][k]) % moduli[k];
        return encode(c);
      },
      std::move(labels));
  t.moduli = moduli;
  t.coords = std::move(coords);
  return t;
}

// r^i s^j stored at index i + n*j
FiniteTable dihedral(std::int64_t n) {
  std::vector<std::string> labels;
  for (std::int64_t j = 0; j < 2; ++j)
    for (std::int64_t i = 0; i < n; ++i) {
      std::string s;
      if (i == 0 && j == 0)
        s = "e";
      else {
        if (i > 0)
          s = i == 1 ? "r" : "r^" + std::to_string(i);
        if (j == 1)
          s += "s";
      }
      labels.push_back(s);
    }
  return from_rule(
      "D_" + std::to_string(n), static_cast<std::size_t>(2 * n),
      [n](std::int32_t a, std::int32_t b) {
        const std::int64_t i1 = a % n, j1 = a / n, i2 = b % n, j2 = b / n;
        const std::int64_t i = ((i1 + (j1 ? -i2 : i2)) % n + n) % n;
        return static_cast<std::int32_t>(i + n * ((j1 + j2) % 2));
      },
      std::move(labels));
}

FiniteTable quaternion() {
  // index = 2*unit + sign, units 1,i,j,k
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign_mul[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::string> labels{"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  return from_rule(
      "Q8", 8,
      [](std::int32_t a, std::int32_t b) {
        const int ua = a / 2, sa = a % 2, ub = b / 2, sb = b % 2;
        const int s = (sa + sb + sign_mul[ua][ub]) % 2;
        return static_cast<std::int32_t>(2 * unit_mul[ua][ub] + s);
      },
      std::move(labels));
}

FiniteTable symmetric(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do
    perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<std::vector<int>, std::int32_t> index;
  for (std::size_t i = 0; i < perms.size(); ++i)
    index[perms[i]] = static_cast<std::int32_t>(i);
  std::vector<std::string> labels;
  for (const auto& q : perms) {
    std::string s;
    std::vector<bool> seen(q.size(), false);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (seen[i] || q[i] == static_cast<int>(i))
        continue;
      s += "(";
      std::size_t j = i;
      bool first = true;
      while (!seen[j]) {
        seen[j] = true;
        s += (first ? "" : " ") + std::to_string(j + 1);
        first = false;
        j = static_cast<std::size_t>(q[j]);
      }
      s += ")";
    }
    labels.push_back(s.empty() ? "()" : s);
  }
  return from_rule(
      "S_" + std::to_string(n), perms.size(),
      [&](std::int32_t a, std::int32_t b) {
        // (a*b)(x) = a(b(x))
        std::vector<int> c(static_cast<std::size_t>(n));
        for (std::size_t x = 0; x < c.size(); ++x)
          c[x] = perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(perms[static_cast<std::size_t>(b)][x])];
        return index.at(c);
      },
      std::move(labels));
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

// Generator letter names skip 'e', which denotes the identity.
const std::string kLetters = "abcdfghijklmnopqrstuvwxyz";

std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(')
      ++depth;
    if (c == ')')
      --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string strip_parens(const std::string& s) {
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(')
        ++depth;
      if (s[i] == ')')
        --depth;
      if (depth == 0 && i + 1 < s.size())
        return s;  // outer parens do not wrap the whole string
    }
    return trim(std::string_view(s).substr(1, s.size() - 2));
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

GroupPtr Group::finite_table(FiniteTable t) {
  const std::size_t n = t.order;
  if (n == 0)
    throw GroupError("finite table must have positive order");
  if (t.mul.size() != n * n)
    throw GroupError("multiplication table has wrong size");
  for (auto v : t.mul)
    if (v < 0 || static_cast<std::size_t>(v) >= n)
      throw GroupError("multiplication table entry out of range");
  // identity: the unique e with e*x = x for all x
  std::optional<std::int32_t> id;
  for (std::size_t e = 0; e < n && !id; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      ok = t.product(static_cast<std::int32_t>(e), static_cast<std::int32_t>(x)) == static_cast<std::int32_t>(x) &&
           t.product(static_cast<std::int32_t>(x), static_cast<std::int32_t>(e)) == static_cast<std::int32_t>(x);
    if (ok)
      id = static_cast<std::int32_t>(e);
  }
  if (!id)
    throw GroupError("table has no identity element");
  t.identity = *id;
  // Latin square
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> row(n, false), col(n, false);
    for (std::size_t b = 0; b < n; ++b) {
      auto r = static_cast<std::size_t>(t.mul[a * n + b]);
      auto c = static_cast<std::size_t>(t.mul[b * n + a]);
      if (row[r] || col[c])
        throw GroupError("table is not a Latin square");
      row[r] = col[c] = true;
    }
  }
  t.inv.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (t.mul[a * n + b] == t.identity)
        t.inv[a] = static_cast<std::int32_t>(b);
  auto assoc = [&](std::int32_t a, std::int32_t b, std::int32_t c) {
    return t.product(t.product(a, b), c) == t.product(a, t.product(b, c));
  };
  if (n <= 64) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (!assoc(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b), static_cast<std::int32_t>(c)))
            throw GroupError("table is not associative at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                             std::to_string(c) + ")");
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<std::int32_t> d(0, static_cast<std::int32_t>(n - 1));
    for (int i = 0; i < 100000; ++i)
      if (!assoc(d(rng), d(rng), d(rng)))
        throw GroupError("table is not associative (sampled)");
  }
  if (t.labels.empty())
    for (std::size_t i = 0; i < n; ++i)
      t.labels.push_back(std::to_string(i));
  if (t.labels.size() != n)
    throw GroupError("label count does not match order");
  if (std::set<std::string>(t.labels.begin(), t.labels.end()).size() != n)
    throw GroupError("labels must be distinct");
  if (t.name.empty())
    t.name = "table(" + std::to_string(n) + ")";
  auto g = std::shared_ptr<Group>(new Group(Kind::FiniteTable));
  g->table_ = std::make_shared<const FiniteTable>(std::move(t));
  return g;
}

GroupPtr Group::builtin(std::string_view raw) {
  std::string name;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c)))
      name += c;
  // accept the multiplication sign as well as 'x'
  for (std::size_t pos; (pos = name.find("\xC3\x97")) != std::string::npos;)
    name.replace(pos, 2, "x");
  std::smatch m;
  auto positive = [&](const std::string& s) {
    const long v = std::stol(s);
    if (v < 1 || v > 64)
      throw GroupError("builtin parameter out of range in '" + std::string(raw) + "'");
    return static_cast<std::int64_t>(v);
  };
  if (std::regex_match(name, m, std::regex(R"(Z_?(\d+))")))
    return finite_table(cyclic_product({positive(m[1])}));
  if (std::regex_match(name, m, std::regex(R"(Z_?(\d+)xZ_?(\d+))"))) {
    const auto a = positive(m[1]), b = positive(m[2]);
    if (a * b > 4096)
      throw GroupError("builtin too large");
    return finite_table(cyclic_product({a, b}));
  }
  if (std::regex_match(name, m, std::regex(R"(D_?(\d+))"))) {
    const auto n = positive(m[1]);
    if (n < 2)
      throw GroupError("dihedral groups need n >= 2");
    return finite_table(dihedral(n));
  }
  if (name == "Q8" || name == "Q_8")
    return finite_table(quaternion());
  if (std::regex_match(name, m, std::regex(R"(S_?(\d+))"))) {
    const auto n = positive(m[1]);
    if (n > 5)
      throw GroupError("symmetric groups are built in up to S_5");
    return finite_table(symmetric(static_cast<int>(n)));
  }
  throw GroupError("unknown builtin group '" + std::string(raw) + "'");
}

GroupPtr Group::free_abelian(int rank) {
  if (rank < 0)
    throw GroupError("negative rank");
  auto g = std::shared_ptr<Group>(new Group(Kind::FreeAbelian));
  g->rank_ = rank;
  return g;
}

GroupPtr Group::heisenberg() { return std::shared_ptr<Group>(new Group(Kind::Heisenberg)); }

GroupPtr Group::free(int rank) {
  if (rank < 1 || rank > static_cast<int>(kLetters.size()))
    throw GroupError("free group rank must be between 1 and 25");
  auto g = std::shared_ptr<Group>(new Group(Kind::Free));
  g->rank_ = rank;
  return g;
}

GroupPtr Group::direct_product(GroupPtr a, GroupPtr b) {
  if (!a || !b)
    throw GroupError("null factor");
  auto g = std::shared_ptr<Group>(new Group(Kind::DirectProduct));
  g->left_ = std::move(a);
  g->right_ = std::move(b);
  return g;
}

const FiniteTable& Group::table() const {
  if (kind_ != Kind::FiniteTable)
    throw GroupError("not a finite table group");
  return *table_;
}

std::string Group::name() const {
  switch (kind_) {
    case Kind::FiniteTable:
      return table_->name;
    case Kind::FreeAbelian:
      return "Z^" + std::to_string(rank_);
    case Kind::Heisenberg:
      return "Heisenberg";
    case Kind::Free:
      return "F_" + std::to_string(rank_);
    case Kind::DirectProduct:
      return "(" + left_->name() + ") x (" + right_->name() + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Arithmetic

Element Group::identity() const {
  switch (kind_) {
    case Kind::FiniteTable:
      return Element::index(table_->identity);
    case Kind::FreeAbelian:
      return Element::vector(std::vector<std::int64_t>(static_cast<std::size_t>(rank_), 0));
    case Kind::Heisenberg:
      return Element::vector({0, 0, 0});
    case Kind::Free:
      return Element::word({});
    case Kind::DirectProduct:
      return Element::pair(left_->identity(), right_->identity());
  }
  return {};
}

Element Group::mul(const Element& a, const Element& b) const {
  if (a.kind() != b.kind())
    throw GroupError("elements of different kinds in " + name());
  switch (kind_) {
    case Kind::FiniteTable:
      if (a.idx() < 0 || b.idx() < 0 || static_cast<std::size_t>(std::max(a.idx(), b.idx())) >= table_->order)
        throw GroupError("table index out of range in " + name());
      return Element::index(
          table_->product(static_cast<std::int32_t>(a.idx()), static_cast<std::int32_t>(b.idx())));
    case Kind::FreeAbelian: {
      if (a.coords().size() != static_cast<std::size_t>(rank_) || b.coords().size() != a.coords().size())
        throw GroupError("wrong number of coordinates in " + name());
      std::vector<std::int64_t> c(a.coords().size());
      for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = checked_add(a.coords()[i], b.coords()[i]);
      return Element::vector(std::move(c));
    }
    case Kind::Heisenberg: {
      const auto& x = a.coords();
      const auto& y = b.coords();
      if (x.size() != 3 || y.size() != 3)
        throw GroupError("Heisenberg elements have three coordinates");
      return Element::vector({checked_add(x[0], y[0]), checked_add(x[1], y[1]),
                              checked_add(checked_add(x[2], y[2]), checked_mul(x[0], y[1]))});
    }
    case Kind::Free: {
      std::vector<std::int64_t> w = a.letters();
      w.insert(w.end(), b.letters().begin(), b.letters().end());
      return Element::word(free_reduce(w));
    }
    case Kind::DirectProduct:
      return Element::pair(left_->mul(a.first(), b.first()), right_->mul(a.second(), b.second()));
  }
  return {};
}

Element Group::inv(const Element& a) const {
  switch (kind_) {
    case Kind::FiniteTable:
      return Element::index(table_->inv[static_cast<std::size_t>(a.idx())]);
    case Kind::FreeAbelian: {
      std::vector<std::int64_t> c(a.coords().size());
      for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = checked_neg(a.coords()[i]);
      return Element::vector(std::move(c));
    }
    case Kind::Heisenberg: {
      const auto& x = a.coords();
      return Element::vector({checked_neg(x[0]), checked_neg(x[1]), checked_add(checked_neg(x[2]), checked_mul(x[0], x[1]))});
    }
    case Kind::Free: {
      std::vector<std::int64_t> w(a.letters().rbegin(), a.letters().rend());
      for (auto& x : w)
        x = -x;
      return Element::word(std::move(w));
    }
    case Kind::DirectProduct:
      return Element::pair(left_->inv(a.first()), right_->inv(a.second()));
  }
  return {};
}

Element Group::conj(const Element& h, const Element& g) const { return mul(mul(h, g), inv(h)); }

Element Group::pow(const Element& g, std::int64_t k) const {
  Element base = k < 0 ? inv(g) : g;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  Element result = identity();
  while (e > 0) {
    if (e & 1)
      result = mul(result, base);
    e >>= 1;
    if (e > 0)
      base = mul(base, base);
  }
  return result;
}

bool Group::is_element(const Element& g) const {
  switch (kind_) {
    case Kind::FiniteTable:
      return g.kind() == Element::Kind::Index && g.idx() >= 0 && static_cast<std::size_t>(g.idx()) < table_->order;
    case Kind::FreeAbelian:
      return g.kind() == Element::Kind::Vector && g.coords().size() == static_cast<std::size_t>(rank_);
    case Kind::Heisenberg:
      return g.kind() == Element::Kind::Vector && g.coords().size() == 3;
    case Kind::Free: {
      if (g.kind() != Element::Kind::Word)
        return false;
      const auto& w = g.letters();
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0 || w[i] > rank_ || w[i] < -rank_)
          return false;
        if (i > 0 && w[i] == -w[i - 1])
          return false;
      }
      return true;
    }
    case Kind::DirectProduct:
      return g.kind() == Element::Kind::Pair && left_->is_element(g.first()) && right_->is_element(g.second());
  }
  return false;
}

void Group::check(const Element& g) const {
  if (!is_element(g))
    throw GroupError("malformed element for group " + name());
}

bool Group::is_finite() const {
  switch (kind_) {
    case Kind::FiniteTable:
      return true;
    case Kind::FreeAbelian:
      return rank_ == 0;
    case Kind::DirectProduct:
      return left_->is_finite() && right_->is_finite();
    default:
      return false;
  }
}

std::optional<std::int64_t> Group::order() const {
  if (!is_finite())
    return std::nullopt;
  switch (kind_) {
    case Kind::FiniteTable:
      return static_cast<std::int64_t>(table_->order);
    case Kind::DirectProduct:
      return checked_mul(*left_->order(), *right_->order());
    default:
      return 1;
  }
}

std::vector<Element> Group::elements() const {
  if (!is_finite())
    throw GroupError("cannot enumerate the infinite group " + name());
  std::vector<Element> out;
  switch (kind_) {
    case Kind::FiniteTable:
      for (std::size_t i = 0; i < table_->order; ++i)
        out.push_back(Element::index(static_cast<std::int64_t>(i)));
      break;
    case Kind::DirectProduct:
      for (const auto& a : left_->elements())
        for (const auto& b : right_->elements())
          out.push_back(Element::pair(a, b));
      break;
    default:
      out.push_back(identity());
  }
  return out;
}

std::vector<Element> Group::generators() const {
  std::vector<Element> gens;
  switch (kind_) {
    case Kind::FiniteTable: {
      std::set<std::int32_t> closure{table_->identity};
      for (std::size_t i = 0; i < table_->order; ++i) {
        const auto x = static_cast<std::int32_t>(i);
        if (closure.count(x))
          continue;
        gens.push_back(Element::index(x));
        std::vector<std::int32_t> frontier(closure.begin(), closure.end());
        while (!frontier.empty()) {
          std::vector<std::int32_t> next;
          for (auto y : frontier)
            for (const auto& g : gens) {
              const auto z = table_->product(y, static_cast<std::int32_t>(g.idx()));
              if (closure.insert(z).second)
                next.push_back(z);
            }
          frontier = std::move(next);
        }
      }
      break;
    }
    case Kind::FreeAbelian:
      for (int i = 0; i < rank_; ++i) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(rank_), 0);
        v[static_cast<std::size_t>(i)] = 1;
        gens.push_back(Element::vector(std::move(v)));
      }
      break;
    case Kind::Heisenberg:
      gens = {Element::vector({1, 0, 0}), Element::vector({0, 1, 0}), Element::vector({0, 0, 1})};
      break;
    case Kind::Free:
      for (int i = 1; i <= rank_; ++i)
        gens.push_back(Element::word({i}));
      break;
    case Kind::DirectProduct:
      for (const auto& a : left_->generators())
        gens.push_back(Element::pair(a, right_->identity()));
      for (const auto& b : right_->generators())
        gens.push_back(Element::pair(left_->identity(), b));
      break;
  }
  return gens;
}

bool Group::is_abelian() const {
  switch (kind_) {
    case Kind::FiniteTable: {
      const auto n = table_->order;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (table_->mul[a * n + b] != table_->mul[b * n + a])
            return false;
      return true;
    }
    case Kind::FreeAbelian:
      return true;
    case Kind::Heisenberg:
      return false;
    case Kind::Free:
      return rank_ <= 1;
    case Kind::DirectProduct:
      return left_->is_abelian() && right_->is_abelian();
  }
  return false;
}

bool Group::is_trivial() const {
  switch (kind_) {
    case Kind::FiniteTable:
      return table_->order == 1;
    case Kind::FreeAbelian:
      return rank_ == 0;
    case Kind::DirectProduct:
      return left_->is_trivial() && right_->is_trivial();
    default:
      return false;
  }
}

Element Group::random_element(std::mt19937_64& rng, int max_len) const {
  if (kind_ == Kind::FiniteTable) {
    std::uniform_int_distribution<std::int64_t> d(0, static_cast<std::int64_t>(table_->order) - 1);
    return Element::index(d(rng));
  }
  if (kind_ == Kind::DirectProduct) {
    Element a = left_->random_element(rng, max_len);
    Element b = right_->random_element(rng, max_len);
    return Element::pair(std::move(a), std::move(b));
  }
  const auto gens = generators();
  if (gens.empty())
    return identity();
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::bernoulli_distribution sign(0.5);
  Element g = identity();
  const int l = len(rng);
  for (int i = 0; i < l; ++i) {
    const Element& x = gens[pick(rng)];
    g = mul(g, sign(rng) ? x : inv(x));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Text form

std::string Group::format(const Element& g) const {
  check(g);
  switch (kind_) {
    case Kind::FiniteTable:
      return table_->labels[static_cast<std::size_t>(g.idx())];
    case Kind::FreeAbelian:
    case Kind::Heisenberg: {
      std::string s = "(";
      for (std::size_t i = 0; i < g.coords().size(); ++i)
        s += (i ? "," : "") + std::to_string(g.coords()[i]);
      return s + ")";
    }
    case Kind::Free: {
      const auto& w = g.letters();
      if (w.empty())
        return "e";
      std::string s;
      for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i])
          ++j;
        const auto run = static_cast<std::int64_t>(j - i) * (w[i] > 0 ? 1 : -1);
        s += kLetters[static_cast<std::size_t>((w[i] > 0 ? w[i] : -w[i]) - 1)];
        if (run != 1)
          s += "^" + std::to_string(run);
        i = j;
      }
      return s;
    }
    case Kind::DirectProduct:
      return "(" + left_->format(g.first()) + ", " + right_->format(g.second()) + ")";
  }
  return "";
}

Element Group::parse(std::string_view raw) const {
  const std::string text = trim(raw);
  auto fail = [&](const std::string& why) -> GroupError {
    return GroupError("cannot parse element '" + text + "' of " + name() + ": " + why);
  };
  switch (kind_) {
    case Kind::FiniteTable: {
      for (std::size_t i = 0; i < table_->order; ++i)
        if (table_->labels[i] == text)
          return Element::index(static_cast<std::int64_t>(i));
      if (text == "e") {
        return identity();
      }
      if (!text.empty() && text[0] == '#') {
        const long i = std::stol(text.substr(1));
        if (i < 0 || static_cast<std::size_t>(i) >= table_->order)
          throw fail("index out of range");
        return Element::index(i);
      }
      throw fail("unknown label");
    }
    case Kind::FreeAbelian:
    case Kind::Heisenberg: {
      if (text == "e")
        return identity();
      const auto parts = split_top_level(strip_parens(text));
      std::vector<std::int64_t> v;
      for (const auto& p : parts) {
        std::size_t used = 0;
        long long x = 0;
        try {
          x = std::stoll(p, &used);
        } catch (const std::exception&) {
          throw fail("expected integer coordinates");
        }
        if (used != p.size())
          throw fail("expected integer coordinates");
        v.push_back(x);
      }
      Element g = Element::vector(std::move(v));
      if (!is_element(g))
        throw fail("wrong number of coordinates");
      return g;
    }
    case Kind::Free: {
      std::vector<std::int64_t> w;
      std::size_t i = 0;
      auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*'))
          ++i;
      };
      skip();
      if (text == "e" || text == "1")
        return identity();
      while (i < text.size()) {
        const char c = text[i];
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        const auto pos = kLetters.find(lower);
        if (pos == std::string::npos || static_cast<int>(pos) >= rank_)
          throw fail(std::string("unknown generator '") + c + "'");
        std::int64_t letter = static_cast<std::int64_t>(pos) + 1;
        if (std::isupper(static_cast<unsigned char>(c)))
          letter = -letter;
        ++i;
        std::int64_t power = 1;
        if (i < text.size() && text[i] == '^') {
          ++i;
          std::size_t used = 0;
          try {
            power = std::stoll(text.substr(i), &used);
          } catch (const std::exception&) {
            throw fail("bad exponent");
          }
          i += used;
        }
        for (std::int64_t k = 0; k < (power < 0 ? -power : power); ++k)
          w.push_back(power < 0 ? -letter : letter);
        skip();
      }
      return Element::word(free_reduce(w));
    }
    case Kind::DirectProduct: {
      const auto parts = split_top_level(strip_parens(text));
      if (parts.size() != 2)
        throw fail("expected a pair '(x, y)'");
      return Element::pair(left_->parse(parts[0]), right_->parse(parts[1]));
    }
  }
  throw fail("unsupported");
}

// ---------------------------------------------------------------------------
// Catalog facts

Tri Group::is_prime() const {
  switch (kind_) {
    case Kind::FiniteTable:
      return tri(table_->order == 1);
    case Kind::FreeAbelian:
    case Kind::Heisenberg:
    case Kind::Free:
      return Tri::True;
    case Kind::DirectProduct:
      return tri_and(left_->is_prime(), right_->is_prime());
  }
  return Tri::Unknown;
}

Tri Group::is_fc_hypercentral() const {
  switch (kind_) {
    case Kind::FiniteTable:
    case Kind::FreeAbelian:
    case Kind::Heisenberg:
      return Tri::True;
    case Kind::Free:
      return tri(rank_ <= 1);
    case Kind::DirectProduct:
      return tri_and(left_->is_fc_hypercentral(), right_->is_fc_hypercentral());
  }
  return Tri::Unknown;
}

Tri Group::is_cstar_simple() const {
  switch (kind_) {
    case Kind::Free:
      return tri(rank_ >= 2);
    case Kind::FiniteTable:
    case Kind::FreeAbelian:
    case Kind::Heisenberg:
      return Tri::False;
    case Kind::DirectProduct:
      if (left_->is_trivial())
        return right_->is_cstar_simple();
      if (right_->is_trivial())
        return left_->is_cstar_simple();
      return tri_and(left_->is_cstar_simple(), right_->is_cstar_simple());
  }
  return Tri::Unknown;
}

}  // namespace kleppner
