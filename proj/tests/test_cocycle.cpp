#include "doctest.h"

#include <random>

#include "kleppner/cocycle.hpp"

using namespace kleppner;

namespace {

Element v(std::initializer_list<std::int64_t> xs) { return Element::vector(xs); }

struct Fixture {
  BasisPtr basis = make_basis({"theta", "theta1", "theta2", "theta3"});
  Exponent theta = Exponent::symbol(basis, 0);
  GroupPtr z2 = Group::free_abelian(2);
  GroupPtr z3 = Group::free_abelian(3);
  GroupPtr heis = Group::heisenberg();
  GroupPtr c2 = Group::builtin("Z_2");
  GroupPtr f2z2 = Group::direct_product(Group::free(2), Group::builtin("Z_2"));

  std::vector<CocyclePtr> shipped() const {
    std::vector<CocyclePtr> out{
        Cocycle::trivial(z2),
        Cocycle::rotation(z2, theta),
        Cocycle::triple_product(z3, {Exponent::symbol(basis, 1), Exponent::symbol(basis, 2), Exponent::symbol(basis, 3)}),
        Cocycle::heisenberg(heis, Exponent(Rational(1, 3)), theta),
        Cocycle::heisenberg(heis, theta, Exponent(Rational(1, 2))),
        Cocycle::f2z2(f2z2, 1),
        Cocycle::f2z2(f2z2, 2),
        Cocycle::f2z2(f2z2, 3),
        Cocycle::product(Group::direct_product(z2, c2), Cocycle::rotation(z2, theta), Cocycle::trivial(c2)),
        Cocycle::restriction(Cocycle::heisenberg(heis, theta, theta), Subgroup::coordinate(heis, {0})),
        Cocycle::similarity(Cocycle::rotation(z2, theta), Beta::quadratic({{Exponent(), theta}, {Exponent(), Exponent()}}, {})),
        Cocycle::similarity(Cocycle::heisenberg(heis, Exponent(), theta), Beta::hashed(5, 12)),
    };
    std::mt19937_64 rng(2);
    for (const char* name : {"Z_2 x Z_2", "D_4", "Q8", "S_3"})
      out.push_back(random_finite_cocycle(Group::builtin(name), rng));
    return out;
  }
};

}  // namespace

TEST_CASE("evaluation examples") {
  Fixture f;
  auto rot = Cocycle::rotation(f.z2, f.theta);
  CHECK(rot->eval(v({1, 0}), v({0, 1})) == Phase(Rational(1, 2) * f.theta));
  CHECK(rot->eval(f.z2->identity(), v({4, 7})).is_one());

  auto s1 = Cocycle::f2z2(f.f2z2, 1);
  auto F = f.f2z2->factor(0);
  auto x = Element::pair(F->parse("bab"), Element::index(1));
  auto a = Element::pair(F->parse("a"), Element::index(0));
  CHECK(s1->eval(x, a) == Phase(Rational(1, 2)));
  CHECK(s1->eval(a, x).is_one());
  CHECK(Cocycle::f2z2(f.f2z2, 2)->eval(x, a).is_one());
  CHECK(Cocycle::f2z2(f.f2z2, 3)->eval(x, a) == Phase(Rational(1, 2)));

  // Heisenberg family restricted to the a1 = 0 plane only sees theta
  auto h = Cocycle::heisenberg(f.heis, Exponent(Rational(1, 5)), f.theta);
  CHECK(h->eval(v({0, 2, 1}), v({0, 3, 4})) == Phase(Rational(2 * 4) * f.theta));
}

TEST_CASE("tilde examples") {
  Fixture f;
  auto rot = Cocycle::rotation(f.z2, f.theta);
  CHECK(rot->tilde(v({0, 1}), v({1, 0})) == Phase(-f.theta));
  CHECK(rot->tilde(f.z2->identity(), v({3, 1})).is_one());
  CHECK(rot->tilde(v({3, 1}), f.z2->identity()).is_one());

  // Heisenberg, H = {(0,a2,a3)}: tilde((0,b2,b3),(0,a2,a3)) = theta (b2 a3 - b3 a2)
  auto h = Cocycle::heisenberg(f.heis, Exponent(), f.theta);
  CHECK(h->tilde(v({0, 1, 0}), v({0, 0, 1})) == Phase(f.theta));
  CHECK(h->tilde(v({0, 0, 1}), v({0, 1, 0})) == Phase(-f.theta));
}

TEST_CASE("validation of every shipped variant") {
  Fixture f;
  for (const auto& sigma : f.shipped()) {
    CAPTURE(sigma->describe());
    const auto r = validate_cocycle(*sigma, Budget{500, 6, 3});
    CHECK(r.ok);
    CHECK(r.checked > 0);
    const auto t = check_tilde_identities(*sigma, Budget{300, 5, 4, 16});
    CHECK_MESSAGE(t.ok, t.identity);
  }
}

TEST_CASE("corrupted table is caught") {
  auto k4 = Group::builtin("Z_2 x Z_2");
  std::vector<Phase> table(16);
  // (-1)^{a2 b1}
  for (std::int32_t x = 0; x < 4; ++x)
    for (std::int32_t y = 0; y < 4; ++y)
      if (k4->table().coords[static_cast<std::size_t>(x)][1] * k4->table().coords[static_cast<std::size_t>(y)][0] % 2)
        table[static_cast<std::size_t>(x * 4 + y)] = Phase(Rational(1, 2));
  CHECK(validate_cocycle(*Cocycle::finite_table(k4, table)).ok);
  table[5] = table[5] + Phase(Rational(1, 4));
  const auto r = validate_cocycle(*Cocycle::finite_table(k4, table));
  CHECK_FALSE(r.ok);
  CHECK(r.witness.size() >= 1);
}

TEST_CASE("bad declarations") {
  Fixture f;
  CHECK_THROWS_AS(Cocycle::rotation(f.z3, f.theta), CocycleError);
  CHECK_THROWS_AS(Cocycle::f2z2(f.f2z2, 4), CocycleError);
  CHECK_THROWS_AS(Cocycle::finite_table(Group::builtin("Z_2"), {Phase(), Phase(), Phase(), Phase(f.theta)}),
                  CocycleError);
  auto beta = Beta::table({{f.z2->identity(), Phase(Rational(1, 3))}});
  CHECK_THROWS_AS(similarity_transform(Cocycle::trivial(f.z2), beta), CocycleError);
  CHECK_THROWS_AS(Cocycle::restriction(Cocycle::rotation(f.z2, f.theta), Subgroup::coordinate(f.heis, {0})),
                  CocycleError);
}

TEST_CASE("restriction checks membership") {
  Fixture f;
  auto h = Subgroup::coordinate(f.heis, {0});
  auto r = Cocycle::restriction(Cocycle::heisenberg(f.heis, f.theta, f.theta), h);
  CHECK_NOTHROW(r->eval(v({0, 1, 2}), v({0, 3, 0})));
  CHECK_THROWS_AS(r->eval(v({1, 0, 0}), v({0, 3, 0})), CocycleError);
}

TEST_CASE("similarity") {
  Fixture f;
  auto rot = Cocycle::rotation(f.z2, f.theta);
  auto same = similarity_transform(rot, Beta::zero());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto a = f.z2->random_element(rng), b = f.z2->random_element(rng);
    CHECK(same->eval(a, b) == rot->eval(a, b));
  }
  // a coboundary never changes tilde on commuting pairs
  auto z4 = Group::builtin("Z_4");
  auto cob = similarity_transform(Cocycle::trivial(z4), Beta::hashed(9, 8));
  CHECK(validate_cocycle(*cob).ok);
  for (const auto& a : z4->elements())
    for (const auto& b : z4->elements())
      CHECK(cob->tilde(a, b).is_one());
}

TEST_CASE("random finite cocycles") {
  std::mt19937_64 rng(17);
  for (const char* name : {"Z_2 x Z_2", "Z_4 x Z_4", "D_4", "Q8", "S_3", "D_8", "Z_2 x Z_8"}) {
    auto g = Group::builtin(name);
    for (int i = 0; i < 10; ++i) {
      auto sigma = random_finite_cocycle(g, rng);
      const std::string label = name;
      CAPTURE(label);
      const auto r = validate_cocycle(*sigma);
      CHECK_MESSAGE(r.ok, r.identity);
      CHECK(sigma->is_rational());
    }
  }
}

TEST_CASE("realizations and pullbacks") {
  Fixture f;
  auto heis_sigma = Cocycle::heisenberg(f.heis, f.theta, f.theta);
  std::vector<SubgroupPtr> subs{Subgroup::coordinate(f.heis, {0}), Subgroup::heisenberg_box(f.heis, 2, 3, 6),
                                Subgroup::full(f.heis), Subgroup::trivial(f.heis)};
  for (const auto& h : subs) {
    CAPTURE(h->describe());
    auto r = realize(h);
    REQUIRE(r);
    auto pb = Cocycle::pullback(heis_sigma, *r);
    CHECK(validate_cocycle(*pb, Budget{300, 5, 2}).ok);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
      const auto a = r->group->random_element(rng, 4), b = r->group->random_element(rng, 4);
      CHECK(h->contains(r->embed(a)) == Tri::True);
      CHECK(r->embed(r->group->mul(a, b)) == f.heis->mul(r->embed(a), r->embed(b)));
    }
  }
  auto s4 = Group::builtin("S_4");
  auto a4 = Subgroup::generated(s4, {s4->parse("(1 2 3)"), s4->parse("(1 2)(3 4)")});
  auto r = realize(a4);
  REQUIRE(r);
  CHECK(r->group->order() == 12);
  auto f2 = f.f2z2->factor(0);
  auto free_sub = Subgroup::generated(f2, {f2->parse("aa"), f2->parse("ab"), f2->parse("ba")});
  auto rf = realize(free_sub);
  REQUIRE(rf);
  CHECK(rf->group->rank() == 3);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto a = rf->group->random_element(rng, 5);
    CHECK(free_sub->contains(rf->embed(a)) == Tri::True);
  }
}
