#include "kleppner/cocycle.hpp"

#include <algorithm>
#include <bitset>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

namespace kleppner {

// ---------------------------------------------------------------------------
// Beta

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h *= 0xff51afd7ed558ccdULL;
  return h ^ (h >> 33);
}

std::uint64_t element_hash(std::uint64_t h, const Element& x) {
  h = mix(h, static_cast<std::uint64_t>(x.kind()));
  if (x.kind() == Element::Kind::Pair)
    return element_hash(element_hash(h, x.first()), x.second());
  for (auto v : x.coords())
    h = mix(h, static_cast<std::uint64_t>(v));
  return mix(h, x.coords().size());
}

}  // namespace

Beta Beta::table(std::vector<std::pair<Element, Phase>> values) {
  Beta b(Kind::Table);
  std::sort(values.begin(), values.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  b.table_ = std::move(values);
  return b;
}

Beta Beta::quadratic(std::vector<std::vector<Exponent>> quad, std::vector<Exponent> lin) {
  Beta b(Kind::Quadratic);
  b.quad_ = std::move(quad);
  b.lin_ = std::move(lin);
  return b;
}

Beta Beta::hashed(std::uint64_t seed, std::int64_t denominator) {
  if (denominator < 1)
    throw CocycleError("hashed beta needs a positive denominator");
  Beta b(Kind::Hashed);
  b.seed_ = seed;
  b.denominator_ = denominator;
  return b;
}

Phase Beta::operator()(const Group& g, const Element& x) const {
  switch (kind_) {
    case Kind::Zero:
      return Phase::zero();
    case Kind::Table: {
      auto it = std::lower_bound(table_.begin(), table_.end(), x, [](const auto& p, const Element& e) { return p.first < e; });
      if (it != table_.end() && it->first == x)
        return it->second;
      return Phase::zero();
    }
    case Kind::Quadratic: {
      if (g.kind() != Group::Kind::FreeAbelian && g.kind() != Group::Kind::Heisenberg)
        throw CocycleError("quadratic beta needs integer vector elements");
      const auto& c = x.coords();
      Exponent s;
      for (std::size_t j = 0; j < quad_.size() && j < c.size(); ++j)
        for (std::size_t k = j; k < quad_[j].size() && k < c.size(); ++k)
          if (c[j] != 0 && c[k] != 0)
            s = s + Rational(Integer(c[j]) * c[k]) * quad_[j][k];
      for (std::size_t j = 0; j < lin_.size() && j < c.size(); ++j)
        if (c[j] != 0)
          s = s + Rational(c[j]) * lin_[j];
      return Phase(s);
    }
    case Kind::Hashed: {
      if (g.is_identity(x))
        return Phase::zero();
      const auto k = element_hash(seed_, x) % static_cast<std::uint64_t>(denominator_);
      return Phase(Rational(static_cast<std::int64_t>(k), denominator_));
    }
  }
  return Phase::zero();
}

std::string Beta::describe() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::Table:
      return "table(" + std::to_string(table_.size()) + " values)";
    case Kind::Quadratic:
      return "quadratic";
    case Kind::Hashed:
      return "hashed(seed " + std::to_string(seed_) + ", denominator " + std::to_string(denominator_) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Construction

std::array<std::int64_t, 3> word_statistics(const Element& word) {
  std::array<std::int64_t, 3> s{0, 0, 0};
  for (auto l : word.letters()) {
    const std::int64_t sign = l > 0 ? 1 : -1;
    if (l == 1 || l == -1)
      s[0] += sign;
    else
      s[1] += sign;
    s[2] += sign;
  }
  return s;
}

CocyclePtr Cocycle::trivial(GroupPtr g) { return std::shared_ptr<Cocycle>(new Cocycle(std::move(g), Kind::Trivial)); }

CocyclePtr Cocycle::bicharacter(GroupPtr g, std::vector<std::vector<Exponent>> b) {
  if (g->kind() != Group::Kind::FreeAbelian)
    throw CocycleError("bicharacter cocycles live on free abelian groups");
  const auto n = static_cast<std::size_t>(g->rank());
  if (b.size() != n)
    throw CocycleError("bicharacter matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  for (const auto& row : b)
    if (row.size() != n)
      throw CocycleError("bicharacter matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  auto c = std::shared_ptr<Cocycle>(new Cocycle(std::move(g), Kind::Bicharacter));
  c->matrix_ = std::move(b);
  return c;
}

CocyclePtr Cocycle::rotation(GroupPtr g, const Exponent& theta) {
  const Exponent half = Rational(1, 2) * theta;
  return bicharacter(std::move(g), {{Exponent(), half}, {-half, Exponent()}});
}

CocyclePtr Cocycle::triple_product(GroupPtr g, const std::vector<Exponent>& theta) {
  if (theta.size() != 3)
    throw CocycleError("the triple product needs three parameters");
  // Theta . (x cross y) = sum_jk x_j y_k (sum_i Theta_i eps_ijk)
  std::vector<std::vector<Exponent>> b(3, std::vector<Exponent>(3));
  const Rational half(1, 2);
  b[1][2] = half * theta[0];
  b[2][1] = -(half * theta[0]);
  b[2][0] = half * theta[1];
  b[0][2] = -(half * theta[1]);
  b[0][1] = half * theta[2];
  b[1][0] = -(half * theta[2]);
  return bicharacter(std::move(g), std::move(b));
}

CocyclePtr Cocycle::heisenberg(GroupPtr g, Exponent gamma, Exponent theta) {
  if (g->kind() != Group::Kind::Heisenberg)
    throw CocycleError("the (gamma, theta) family lives on the Heisenberg group");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(std::move(g), Kind::HeisenbergGammaTheta));
  c->gamma_ = std::move(gamma);
  c->theta_ = std::move(theta);
  return c;
}

CocyclePtr Cocycle::f2z2(GroupPtr g, int j) {
  if (j < 1 || j > 3)
    throw CocycleError("the F2 x Z2 family is indexed by j = 1, 2, 3");
  const bool shape = g->kind() == Group::Kind::DirectProduct && g->factor(0)->kind() == Group::Kind::Free &&
                     g->factor(0)->rank() == 2 && g->factor(1)->is_finite() && g->factor(1)->order() == 2;
  if (!shape)
    throw CocycleError("the F2 x Z2 family needs the group F_2 x Z_2");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(std::move(g), Kind::F2Z2));
  c->j_ = j;
  return c;
}

CocyclePtr Cocycle::finite_table(GroupPtr g, std::vector<Phase> table) {
  if (!g->is_finite())
    throw CocycleError("table cocycles need a finite group");
  const auto n = static_cast<std::size_t>(*g->order());
  if (table.size() != n * n)
    throw CocycleError("cocycle table must have " + std::to_string(n * n) + " entries");
  for (const auto& p : table)
    if (p.has_irrational_part())
      throw CocycleError("cocycle tables take rational phases only");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(std::move(g), Kind::FiniteTablePhase));
  c->table_ = std::move(table);
  return c;
}

CocyclePtr Cocycle::product(GroupPtr g, CocyclePtr a, CocyclePtr b) {
  if (g->kind() != Group::Kind::DirectProduct)
    throw CocycleError("product cocycles need a direct product");
  if (a->group() != g->factor(0) || b->group() != g->factor(1))
    throw CocycleError("product cocycle factors live on other groups");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(std::move(g), Kind::Product));
  c->base_ = std::move(a);
  c->right_ = std::move(b);
  return c;
}

CocyclePtr Cocycle::restriction(CocyclePtr base, SubgroupPtr h) {
  if (h->parent() != base->group())
    throw CocycleError("restriction to a subgroup of another group");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(base->group(), Kind::Restriction));
  c->base_ = std::move(base);
  c->subgroup_ = std::move(h);
  return c;
}

CocyclePtr Cocycle::similarity(CocyclePtr base, Beta beta) {
  const Group& g = *base->group();
  if (!beta(g, g.identity()).is_one())
    throw CocycleError("similarity needs beta(e) = 0");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(base->group(), Kind::Similarity));
  c->base_ = std::move(base);
  c->beta_ = std::move(beta);
  return c;
}

CocyclePtr Cocycle::pullback(CocyclePtr base, const Realization& r) {
  if (r.image->parent() != base->group())
    throw CocycleError("pullback along an embedding into another group");
  auto c = std::shared_ptr<Cocycle>(new Cocycle(r.group, Kind::Pullback));
  c->base_ = std::move(base);
  c->subgroup_ = r.image;
  c->embed_ = r.embed;
  return c;
}

CocyclePtr similarity_transform(const CocyclePtr& sigma, const Beta& beta) { return Cocycle::similarity(sigma, beta); }

// ---------------------------------------------------------------------------
// Evaluation

BasisPtr Cocycle::basis() const {
  BasisPtr b;
  auto take = [&](const Exponent& x) { b = common_basis(b, x.basis()); };
  switch (kind_) {
    case Kind::Bicharacter:
      for (const auto& row : matrix_)
        for (const auto& x : row)
          take(x);
      break;
    case Kind::HeisenbergGammaTheta:
      take(gamma_);
      take(theta_);
      break;
    case Kind::Product:
      b = common_basis(base_->basis(), right_->basis());
      break;
    case Kind::Restriction:
    case Kind::Similarity:
    case Kind::Pullback:
      b = base_->basis();
      break;
    default:
      break;
  }
  return b;
}

Phase Cocycle::eval(const Element& g, const Element& h) const {
  switch (kind_) {
    case Kind::Trivial:
      group_->check(g);
      group_->check(h);
      return Phase::zero();
    case Kind::Bicharacter: {
      group_->check(g);
      group_->check(h);
      const auto& x = g.coords();
      const auto& y = h.coords();
      Exponent s;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0)
          continue;
        for (std::size_t k = 0; k < y.size(); ++k)
          if (y[k] != 0 && !matrix_[j][k].is_zero())
            s = s + Rational(Integer(x[j]) * y[k]) * matrix_[j][k];
      }
      return Phase(s);
    }
    case Kind::HeisenbergGammaTheta: {
      group_->check(g);
      group_->check(h);
      const Integer a1 = g.coords()[0], a2 = g.coords()[1];
      const Integer b2 = h.coords()[1], b3 = h.coords()[2];
      const Integer cg = b3 * a1 + b2 * (a1 * (a1 - 1) / 2);
      const Integer ct = a2 * (b3 + a1 * b2) + a1 * (b2 * (b2 - 1) / 2);
      return Phase(Rational(cg) * gamma_ + Rational(ct) * theta_);
    }
    case Kind::F2Z2: {
      group_->check(g);
      group_->check(h);
      if (g.second().idx() == 0)
        return Phase::zero();
      const auto s = word_statistics(h.first());
      return s[static_cast<std::size_t>(j_ - 1)] % 2 != 0 ? Phase(Rational(1, 2)) : Phase::zero();
    }
    case Kind::FiniteTablePhase: {
      group_->check(g);
      group_->check(h);
      const auto order = static_cast<std::size_t>(*group_->order());
      return table_[static_cast<std::size_t>(g.idx()) * order + static_cast<std::size_t>(h.idx())];
    }
    case Kind::Product:
      group_->check(g);
      group_->check(h);
      return base_->eval(g.first(), h.first()) + right_->eval(g.second(), h.second());
    case Kind::Restriction:
      if (subgroup_->contains(g) != Tri::True || subgroup_->contains(h) != Tri::True)
        throw CocycleError("restricted cocycle evaluated outside " + subgroup_->describe());
      return base_->eval(g, h);
    case Kind::Similarity:
      return beta_(*group_, g) + beta_(*group_, h) - beta_(*group_, group_->mul(g, h)) + base_->eval(g, h);
    case Kind::Pullback:
      group_->check(g);
      group_->check(h);
      return base_->eval(embed_(g), embed_(h));
  }
  return Phase::zero();
}

Phase Cocycle::tilde(const Element& h, const Element& g) const {
  return eval(h, g) - eval(group_->conj(h, g), h);
}

SubgroupPtr Cocycle::domain() const {
  if (kind_ == Kind::Restriction)
    return subgroup_;
  return Subgroup::full(group_);
}

Element Cocycle::sample(std::mt19937_64& rng, int max_len) const {
  if (kind_ != Kind::Restriction)
    return group_->random_element(rng, max_len);
  if (auto elems = subgroup_->elements())
    return (*elems)[std::uniform_int_distribution<std::size_t>(0, elems->size() - 1)(rng)];
  const auto gens = subgroup_->generators();
  Element x = group_->identity();
  if (gens.empty())
    return x;
  const int len = std::uniform_int_distribution<int>(0, max_len)(rng);
  std::uniform_int_distribution<std::size_t> pick(0, 2 * gens.size() - 1);
  for (int i = 0; i < len; ++i) {
    const auto k = pick(rng);
    const Element& s = gens[k / 2];
    x = group_->mul(x, k % 2 ? group_->inv(s) : s);
  }
  return x;
}

bool Cocycle::is_rational() const {
  switch (kind_) {
    case Kind::Trivial:
    case Kind::F2Z2:
    case Kind::FiniteTablePhase:
      return true;
    case Kind::Bicharacter:
      for (const auto& row : matrix_)
        for (const auto& x : row)
          if (x.has_irrational_part())
            return false;
      return true;
    case Kind::HeisenbergGammaTheta:
      return !gamma_.has_irrational_part() && !theta_.has_irrational_part();
    case Kind::Product:
      return base_->is_rational() && right_->is_rational();
    case Kind::Restriction:
    case Kind::Pullback:
      return base_->is_rational();
    case Kind::Similarity:
      if (!base_->is_rational())
        return false;
      if (beta_.kind() == Beta::Kind::Hashed || beta_.kind() == Beta::Kind::Zero)
        return true;
      if (group_->is_finite()) {
        for (const auto& x : group_->elements())
          if (beta_(*group_, x).has_irrational_part())
            return false;
        return true;
      }
      return false;
  }
  return false;
}

std::vector<Phase> Cocycle::tabulate() const {
  if (!group_->is_finite())
    throw CocycleError("only cocycles on finite groups can be tabulated");
  if (kind_ == Kind::FiniteTablePhase)
    return table_;
  const auto elems = group_->elements();
  const auto n = elems.size();
  std::vector<Phase> out(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (static_cast<std::size_t>(elems[i].idx()) != i || static_cast<std::size_t>(elems[j].idx()) != j)
        throw CocycleError("tabulation needs a table group");
      out[i * n + j] = eval(elems[i], elems[j]);
    }
  return out;
}

std::string Cocycle::describe() const {
  switch (kind_) {
    case Kind::Trivial:
      return "trivial";
    case Kind::Bicharacter: {
      std::string s = "bicharacter [";
      for (std::size_t j = 0; j < matrix_.size(); ++j) {
        s += j ? "; " : "";
        for (std::size_t k = 0; k < matrix_[j].size(); ++k)
          s += (k ? ", " : "") + to_string(matrix_[j][k]);
      }
      return s + "]";
    }
    case Kind::HeisenbergGammaTheta:
      return "heisenberg(gamma = " + to_string(gamma_) + ", theta = " + to_string(theta_) + ")";
    case Kind::F2Z2:
      return "f2z2(j = " + std::to_string(j_) + ")";
    case Kind::FiniteTablePhase:
      return "table";
    case Kind::Product:
      return "product(" + base_->describe() + ", " + right_->describe() + ")";
    case Kind::Restriction:
      return base_->describe() + " restricted to " + subgroup_->describe();
    case Kind::Similarity:
      return base_->describe() + " twisted by beta " + beta_.describe();
    case Kind::Pullback:
      return base_->describe() + " on " + subgroup_->describe();
  }
  return "";
}

// ---------------------------------------------------------------------------
// Realizations

std::optional<Realization> realize(const SubgroupPtr& h) {
  const GroupPtr& parent = h->parent();
  switch (h->kind()) {
    case Subgroup::Kind::Full:
      return Realization{parent, h, [](const Element& x) { return x; }};
    case Subgroup::Kind::Trivial: {
      const Element e = parent->identity();
      return Realization{Group::builtin("Z_1"), h, [e](const Element&) { return e; }};
    }
    case Subgroup::Kind::Finite: {
      const auto elems = *h->elements();
      std::map<Element, std::int32_t> index;
      for (std::size_t i = 0; i < elems.size(); ++i)
        index.emplace(elems[i], static_cast<std::int32_t>(i));
      FiniteTable t;
      t.name = h->describe();
      t.order = elems.size();
      t.mul.resize(t.order * t.order);
      t.inv.resize(t.order);
      for (std::size_t i = 0; i < t.order; ++i) {
        t.labels.push_back(parent->format(elems[i]));
        t.inv[i] = index.at(parent->inv(elems[i]));
        for (std::size_t j = 0; j < t.order; ++j)
          t.mul[i * t.order + j] = index.at(parent->mul(elems[i], elems[j]));
      }
      t.identity = index.at(parent->identity());
      return Realization{Group::finite_table(std::move(t)), h,
                         [elems](const Element& x) { return elems.at(static_cast<std::size_t>(x.idx())); }};
    }
    case Subgroup::Kind::FreeGenerated: {
      const auto basis = h->generators();
      if (basis.size() == 1)
        break;
      return Realization{Group::free(static_cast<int>(basis.size())), h, [basis, parent](const Element& x) {
                           Element y = parent->identity();
                           for (auto l : x.letters()) {
                             const Element& b = basis[static_cast<std::size_t>(std::abs(l) - 1)];
                             y = parent->mul(y, l > 0 ? b : parent->inv(b));
                           }
                           return y;
                         }};
    }
    case Subgroup::Kind::Product: {
      auto a = realize(h->factor(0)), b = realize(h->factor(1));
      if (!a || !b)
        return std::nullopt;
      auto ea = a->embed, eb = b->embed;
      return Realization{Group::direct_product(a->group, b->group), h,
                         [ea, eb](const Element& x) { return Element::pair(ea(x.first()), eb(x.second())); }};
    }
    case Subgroup::Kind::Heisenberg: {
      const auto box = h->as_box();
      if (!box || (*box)[2] != (*box)[0] * (*box)[1])
        return std::nullopt;
      const auto d = *box;
      return Realization{Group::heisenberg(), h, [d](const Element& x) {
                           const auto& c = x.coords();
                           return Element::vector(
                               {checked_mul(d[0], c[0]), checked_mul(d[1], c[1]), checked_mul(d[2], c[2])});
                         }};
    }
    default:
      break;
  }
  if (auto basis = h->free_abelian_basis()) {
    auto sub = h;
    auto b = *basis;
    return Realization{Group::free_abelian(static_cast<int>(b.size())), h, [sub, b](const Element& x) {
                         IntVector c(static_cast<Eigen::Index>(x.coords().size()));
                         for (std::size_t i = 0; i < x.coords().size(); ++i)
                           c(static_cast<Eigen::Index>(i)) = x.coords()[i];
                         return sub->from_basis_coords(b, c);
                       }};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Enumerable domain, when the exhaustive check applies.
std::optional<std::vector<Element>> small_domain(const Cocycle& sigma, std::size_t cap) {
  const auto dom = sigma.domain();
  auto elems = dom->elements();
  if (elems && elems->size() <= cap)
    return elems;
  return std::nullopt;
}

CheckResult fail(std::string identity, std::vector<Element> witness, std::size_t n) {
  return {false, std::move(identity), std::move(witness), n};
}

// A few random products of generators of C_K(x), or powers of x as a fallback.
Element sample_commuting(const Cocycle& sigma, const Element& x, std::mt19937_64& rng) {
  const Group& g = *sigma.group();
  auto gens = centralizer_generators(*sigma.domain(), x);
  std::vector<Element> pool;
  if (gens)
    pool = *gens;
  pool.push_back(x);
  Element y = g.identity();
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> expo(-2, 2);
  for (int i = 0; i < 3; ++i) {
    const int k = expo(rng);
    if (k != 0)
      y = g.mul(y, g.pow(pool[pick(rng)], k));
  }
  return y;
}

}  // namespace

CheckResult validate_cocycle(const Cocycle& sigma, const Budget& budget) {
  const Group& g = *sigma.group();
  const Element e = g.identity();
  std::size_t n = 0;
  auto triple = [&](const Element& a, const Element& b, const Element& c) -> bool {
    ++n;
    return sigma.eval(a, b) + sigma.eval(g.mul(a, b), c) == sigma.eval(a, g.mul(b, c)) + sigma.eval(b, c);
  };
  if (auto elems = small_domain(sigma, budget.exhaustive_order)) {
    for (const auto& a : *elems)
      if (!sigma.eval(a, e).is_one() || !sigma.eval(e, a).is_one())
        return fail("normalization", {a}, n);
    for (const auto& a : *elems)
      for (const auto& b : *elems)
        for (const auto& c : *elems)
          if (!triple(a, b, c))
            return fail("cocycle", {a, b, c}, n);
    return CheckResult::pass(n);
  }
  std::mt19937_64 rng(budget.seed);
  for (std::size_t i = 0; i < budget.samples; ++i) {
    const Element a = sigma.sample(rng, budget.max_len), b = sigma.sample(rng, budget.max_len),
                  c = sigma.sample(rng, budget.max_len);
    if (!sigma.eval(a, e).is_one() || !sigma.eval(e, a).is_one())
      return fail("normalization", {a}, n);
    if (!triple(a, b, c))
      return fail("cocycle", {a, b, c}, n);
  }
  return CheckResult::pass(n);
}

CheckResult check_tilde_identities(const Cocycle& sigma, const Budget& budget) {
  const Group& g = *sigma.group();
  std::size_t n = 0;
  auto t = [&](const Element& a, const Element& b) { return sigma.tilde(a, b); };
  // returns the name of the failed identity, or empty
  auto check = [&](const Element& r, const Element& s, const Element& u) -> std::string {
    ++n;
    if (t(g.mul(r, s), u) != t(r, g.conj(s, u)) + t(s, u))
      return "left-product";
    const Phase rhs = -sigma.eval(s, u) + sigma.eval(g.conj(r, s), g.conj(r, u)) + t(r, s) + t(r, u);
    if (t(r, g.mul(s, u)) != rhs)
      return "right-product";
    if (g.commutes(s, u) && t(g.mul(r, s), u) != t(r, u) + t(s, u))
      return "left-product-commuting";
    if (g.commutes(r, s) && g.commutes(r, u) && t(r, g.mul(s, u)) != t(r, s) + t(r, u))
      return "right-product-commuting";
    return {};
  };
  if (auto elems = small_domain(sigma, budget.exhaustive_order)) {
    for (const auto& r : *elems)
      for (const auto& s : *elems)
        for (const auto& u : *elems)
          if (auto f = check(r, s, u); !f.empty())
            return fail(f, {r, s, u}, n);
    return CheckResult::pass(n);
  }
  std::mt19937_64 rng(budget.seed);
  for (std::size_t i = 0; i < budget.samples; ++i) {
    const Element r = sigma.sample(rng, budget.max_len), s = sigma.sample(rng, budget.max_len),
                  u = sigma.sample(rng, budget.max_len);
    if (auto f = check(r, s, u); !f.empty())
      return fail(f, {r, s, u}, n);
    // commuting configurations are rare in random samples, so build them
    const Element s2 = sample_commuting(sigma, u, rng);
    if (auto f = check(r, s2, u); !f.empty())
      return fail(f, {r, s2, u}, n);
    const Element s3 = sample_commuting(sigma, r, rng), u3 = sample_commuting(sigma, r, rng);
    if (auto f = check(r, s3, u3); !f.empty())
      return fail(f, {r, s3, u3}, n);
  }
  return CheckResult::pass(n);
}

// ---------------------------------------------------------------------------
// Random cocycles on finite groups

namespace {

constexpr std::size_t kMaxBits = 1024;
using Bits = std::bitset<kMaxBits>;

// Basis of normalized {0,1/2}-valued cocycles: the GF(2) solution space of
// f(a,b) + f(ab,c) + f(a,bc) + f(b,c) = 0 with f(e,-) = f(-,e) = 0.
std::vector<Bits> z2_cocycle_basis(const Group& g) {
  static std::mutex mu;
  static std::map<std::vector<std::int32_t>, std::vector<Bits>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(g.table().mul); it != cache.end())
    return it->second;
  const auto n = static_cast<std::size_t>(*g.order());
  const auto& t = g.table();
  const auto id = static_cast<std::size_t>(t.identity);
  std::vector<std::int64_t> var(n * n, -1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != id && b != id) {
        var[a * n + b] = static_cast<std::int64_t>(pairs.size());
        pairs.emplace_back(a, b);
      }
  const std::size_t m = pairs.size();
  if (m > kMaxBits)
    throw CocycleError("group too large for the GF(2) cocycle sampler");
  std::vector<Bits> pivots(m);
  std::vector<bool> has(m, false);
  auto toggle = [&](Bits& row, std::size_t a, std::size_t b) {
    const auto v = var[a * n + b];
    if (v >= 0)
      row.flip(static_cast<std::size_t>(v));
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        Bits row;
        const auto ab = static_cast<std::size_t>(t.product(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)));
        const auto bc = static_cast<std::size_t>(t.product(static_cast<std::int32_t>(b), static_cast<std::int32_t>(c)));
        toggle(row, a, b);
        toggle(row, ab, c);
        toggle(row, a, bc);
        toggle(row, b, c);
        for (std::size_t p = row._Find_first(); p < m; p = row._Find_next(p)) {
          if (!has[p]) {
            pivots[p] = row;
            has[p] = true;
            break;
          }
          row ^= pivots[p];
        }
      }
  // back substitution into reduced form, then read off the kernel
  for (std::size_t p = m; p-- > 0;) {
    if (!has[p])
      continue;
    for (std::size_t q = 0; q < p; ++q)
      if (has[q] && pivots[q].test(p))
        pivots[q] ^= pivots[p];
  }
  std::vector<Bits> basis;
  for (std::size_t free = 0; free < m; ++free) {
    if (has[free])
      continue;
    Bits v;
    v.set(free);
    for (std::size_t p = 0; p < m; ++p)
      if (has[p] && pivots[p].test(free))
        v.set(p);
    basis.push_back(v);
  }
  cache.emplace(t.mul, basis);
  return basis;
}

std::int64_t group_exponent(const Group& g) {
  std::int64_t e = 1;
  for (const auto& x : g.elements()) {
    std::int64_t k = 1;
    for (Element y = x; !g.is_identity(y); y = g.mul(y, x))
      ++k;
    e = std::lcm(e, k);
  }
  return e;
}

}  // namespace

CocyclePtr random_finite_cocycle(const GroupPtr& g, std::mt19937_64& rng) {
  if (g->kind() != Group::Kind::FiniteTable)
    throw CocycleError("random cocycles need a finite table group");
  const auto& t = g->table();
  const auto n = t.order;
  const auto id = static_cast<std::size_t>(t.identity);
  std::vector<Phase> table(n * n);
  std::uniform_int_distribution<int> coin(0, 2);
  const int mode = coin(rng);
  if (mode == 0 && !t.moduli.empty()) {
    const auto d = t.moduli.size();
    std::vector<std::vector<std::int64_t>> a(d, std::vector<std::int64_t>(d));
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        a[j][k] = std::uniform_int_distribution<std::int64_t>(0, std::gcd(t.moduli[j], t.moduli[k]) - 1)(rng);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        Rational s = 0;
        for (std::size_t j = 0; j < d; ++j)
          for (std::size_t k = 0; k < d; ++k)
            s += Rational(a[j][k] * t.coords[x][j] * t.coords[y][k], std::gcd(t.moduli[j], t.moduli[k]));
        table[x * n + y] = Phase(s);
      }
  } else if (mode <= 1 && (n - 1) * (n - 1) <= kMaxBits) {
    const auto basis = z2_cocycle_basis(*g);
    Bits v;
    for (const auto& b : basis)
      if (rng() & 1)
        v ^= b;
    std::size_t k = 0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != id && y != id) {
          if (v.test(k))
            table[x * n + y] = Phase(Rational(1, 2));
          ++k;
        }
  }
  if (coin(rng) != 0) {
    // add the coboundary of a random beta with small denominators
    std::vector<std::int64_t> divisors;
    const auto ex = group_exponent(*g);
    for (std::int64_t d = 1; d <= ex; ++d)
      if (ex % d == 0)
        divisors.push_back(d);
    const auto den = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
    std::vector<Phase> beta(n);
    for (std::size_t x = 0; x < n; ++x)
      if (x != id)
        beta[x] = Phase(Rational(std::uniform_int_distribution<std::int64_t>(0, den - 1)(rng), den));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const auto xy = static_cast<std::size_t>(t.product(static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)));
        table[x * n + y] += beta[x] + beta[y] - beta[xy];
      }
  }
  return Cocycle::finite_table(g, std::move(table));
}

}  // namespace kleppner
