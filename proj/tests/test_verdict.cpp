#include "doctest.h"

#include <random>
#include <set>

#include "kleppner/oracle.hpp"
#include "kleppner/verdict.hpp"

using namespace kleppner;

namespace {

Element v(std::initializer_list<std::int64_t> xs) { return Element::vector(xs); }

IntMatrix diag(std::int64_t p, std::int64_t q) {
  IntMatrix m = IntMatrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = q;
  return m;
}

struct Fixture {
  BasisPtr basis = make_basis({"theta", "theta1", "theta2", "theta3"});
  Exponent theta = Exponent::symbol(basis, 0);
  Exponent t1 = Exponent::symbol(basis, 1), t2 = Exponent::symbol(basis, 2), t3 = Exponent::symbol(basis, 3);
  GroupPtr z2 = Group::free_abelian(2);
  GroupPtr z3 = Group::free_abelian(3);
  GroupPtr heis = Group::heisenberg();
  GroupPtr f2z2 = Group::direct_product(Group::free(2), Group::builtin("Z_2"));
  SubgroupPtr heis_h = Subgroup::coordinate(heis, {0});
  SubgroupPtr f2_h = Subgroup::coordinate(f2z2, {1});
  SubgroupPtr torus_h = Subgroup::coordinate(z3, {2});
};

const std::string& closing_rule(const Verdict& v) { return v.chain.back().rule; }

std::vector<SubgroupPtr> all_subgroups(const GroupPtr& g) {
  std::set<std::vector<Element>> seen;
  std::vector<SubgroupPtr> out;
  const auto elems = g->elements();
  for (const auto& a : elems)
    for (const auto& b : elems) {
      auto s = Subgroup::generated(g, {a, b});
      if (seen.insert(*s->elements()).second)
        out.push_back(s);
    }
  return out;
}

}  // namespace

TEST_CASE("twisted simplicity") {
  Fixture f;
  const auto a = twisted_simplicity(Cocycle::rotation(f.z2, f.theta));
  CHECK(a.conclusion == Conclusion::Holds);
  CHECK(closing_rule(a) == "fc-hypercentral-simplicity");

  const auto b = twisted_simplicity(Cocycle::trivial(Group::free(2)));
  CHECK(b.conclusion == Conclusion::Holds);
  CHECK(closing_rule(b) == "untwisted-simple");

  const auto c = twisted_simplicity(Cocycle::trivial(f.z2));
  CHECK(c.conclusion == Conclusion::Fails);
  CHECK_FALSE(c.witness.empty());

  const auto d = twisted_simplicity(Cocycle::rotation(f.z2, Exponent(Rational(1, 3))));
  CHECK(d.conclusion == Conclusion::Fails);

  // F2 x Z2 is neither FC-hypercentral nor C*-simple, but sigma_j is Kleppner only if ...
  const auto e = twisted_simplicity(Cocycle::trivial(f.f2z2));
  CHECK(e.conclusion == Conclusion::Fails);
  CHECK(closing_rule(e) == "kleppner-necessary");
}

TEST_CASE("irreducibility examples") {
  Fixture f;
  auto rot = Cocycle::rotation(f.z2, f.theta);
  for (auto [p, q] : {std::pair{1, 2}, {2, 3}, {3, 5}}) {
    const auto r = cstar_irreducible(Subgroup::lattice(f.z2, diag(p, q)), rot);
    CHECK(r.conclusion == Conclusion::Holds);
    CHECK(closing_rule(r) == "fc-or-simple-normal");
  }

  const auto third = cstar_irreducible(f.heis_h, Cocycle::heisenberg(f.heis, f.theta, Exponent(Rational(1, 3))));
  CHECK(third.conclusion == Conclusion::Fails);
  CHECK(closing_rule(third) == "fc-or-simple-normal");
  CHECK(cstar_irreducible(f.heis_h, Cocycle::heisenberg(f.heis, Exponent(), f.theta)).conclusion == Conclusion::Holds);

  for (int j = 1; j <= 3; ++j) {
    const auto r = cstar_irreducible(f.f2_h, Cocycle::f2z2(f.f2z2, j));
    CHECK(r.conclusion == Conclusion::Holds);
    CHECK(closing_rule(r) == "twisted-centralizer");
  }
  const auto plain = cstar_irreducible(f.f2_h, Cocycle::trivial(f.f2z2));
  CHECK(plain.conclusion == Conclusion::Fails);
  CHECK(plain.witness == std::vector<Element>{Element::pair(f.f2z2->factor(0)->identity(), Element::index(1))});

  CHECK(cstar_irreducible(f.torus_h, Cocycle::triple_product(f.z3, {f.t1, f.t2, f.t3})).conclusion == Conclusion::Holds);
  CHECK(cstar_irreducible(f.torus_h, Cocycle::triple_product(f.z3, {f.t1, f.t2, Exponent(Rational(1, 2))})).conclusion ==
        Conclusion::Fails);
  CHECK(cstar_irreducible(f.torus_h, Cocycle::triple_product(f.z3, {Exponent(Rational(1, 3)), Rational(1, 2) * f.t3, f.t3}))
            .conclusion == Conclusion::Fails);
}

TEST_CASE("non-normal subgroups are refused") {
  auto f2 = Group::free(2);
  const auto r = cstar_irreducible(Subgroup::generated(f2, {f2->parse("a")}), Cocycle::trivial(f2));
  CHECK(r.conclusion == Conclusion::Inconclusive);
  CHECK(r.missing == "normal(H)");
}

TEST_CASE("untwisted irreducibility is C*-simplicity plus trivial centralizer") {
  Fixture f;
  auto f2 = Group::free(2);
  auto f2f2 = Group::direct_product(Group::free(2), Group::free(2));
  const std::vector<SubgroupPtr> cases{
      Subgroup::full(f2),          f.f2_h,
      Subgroup::coordinate(f2f2, {1}), Subgroup::full(f2f2),
      Subgroup::lattice(f.z2, diag(1, 2)), f.heis_h,
      Subgroup::full(f.heis),      Subgroup::trivial(f.heis),
  };
  for (const auto& h : cases) {
    CAPTURE(h->describe());
    const auto r = cstar_irreducible(h, Cocycle::trivial(h->parent()));
    REQUIRE(r.conclusion != Conclusion::Inconclusive);
    const auto c = centralizer_of_subgroup(h);
    REQUIRE(c);
    const bool expected = h->is_cstar_simple() == Tri::True && (*c)->is_trivial();
    CHECK((r.conclusion == Conclusion::Holds) == expected);
  }
}

TEST_CASE("replay") {
  Fixture f;
  auto d4 = Group::builtin("D_4");
  const std::vector<std::pair<SubgroupPtr, CocyclePtr>> cases{
      {Subgroup::lattice(f.z2, diag(2, 3)), Cocycle::rotation(f.z2, f.theta)},
      {f.heis_h, Cocycle::heisenberg(f.heis, f.theta, Exponent(Rational(1, 2)))},
      {f.f2_h, Cocycle::f2z2(f.f2z2, 2)},
      {f.f2_h, Cocycle::trivial(f.f2z2)},
      {f.torus_h, Cocycle::triple_product(f.z3, {f.t1, f.t2, f.t3})},
      {Subgroup::full(d4), Cocycle::trivial(d4)},
  };
  for (const auto& [h, sigma] : cases) {
    CAPTURE(sigma->describe());
    const auto r = cstar_irreducible(h, sigma);
    CHECK(replay(r, h, sigma, &cstar_irreducible));
    const auto s = twisted_simplicity(h, sigma);
    Verdict (*simple)(const SubgroupPtr&, const CocyclePtr&) = &twisted_simplicity;
    CHECK(replay(s, h, sigma, simple));
  }
  // a tampered premise does not replay
  auto r = cstar_irreducible(f.f2_h, Cocycle::f2z2(f.f2z2, 1));
  r.chain.back().premises.back().value = "Fails";
  CHECK_FALSE(replay(r, f.f2_h, Cocycle::f2z2(f.f2z2, 1), &cstar_irreducible));
}

TEST_CASE("finite verdicts agree with the oracle") {
  std::mt19937_64 rng(13);
  for (const char* name : {"Z_2 x Z_2", "Z_4 x Z_2", "D_4", "Q8", "S_3"}) {
    auto g = Group::builtin(name);
    for (int i = 0; i < 5; ++i) {
      const auto sigma = i == 0 ? Cocycle::trivial(g) : random_finite_cocycle(g, rng);
      const auto rep = build_regular_rep(sigma);
      for (const auto& h : all_subgroups(g)) {
        CAPTURE(h->describe());
        const auto r = cstar_irreducible(h, sigma);
        const auto real = realize(h);
        REQUIRE(real);
        const bool oracle = relative_commutant_dim(rep, *h, *sigma).route_a == 1 &&
                            center_dim(Cocycle::pullback(sigma, *real)).route_a == 1;
        CHECK((r.conclusion == Conclusion::Holds) == oracle);
      }
    }
  }
}

TEST_CASE("verdicts are invariant under similarity") {
  Fixture f;
  std::mt19937_64 rng(77);
  const std::vector<std::pair<SubgroupPtr, CocyclePtr>> cases{
      {Subgroup::lattice(f.z2, diag(1, 3)), Cocycle::rotation(f.z2, f.theta)},
      {f.heis_h, Cocycle::heisenberg(f.heis, f.theta, Exponent(Rational(1, 2)))},
      {f.heis_h, Cocycle::heisenberg(f.heis, Exponent(), f.theta)},
      {f.heis_h, Cocycle::trivial(f.heis)},
  };
  for (const auto& [h, sigma] : cases) {
    const auto base = cstar_irreducible(h, sigma);
    for (int i = 0; i < 4; ++i) {
      const auto moved = similarity_transform(sigma, Beta::hashed(rng(), 6));
      const auto r = cstar_irreducible(h, moved);
      CHECK(r.conclusion == base.conclusion);
      CHECK(r.witness == base.witness);
    }
  }
}

TEST_CASE("intermediate lattices") {
  Fixture f;
  auto rot = Cocycle::rotation(f.z2, f.theta);
  for (int q : {2, 3, 5, 7}) {
    const auto l = intermediate_lattice(Subgroup::lattice(f.z2, diag(1, q)), rot);
    CHECK(l.kind == IntermediateLattice::Kind::Complete);
    CHECK(l.members.size() == 2);
  }
  const auto k = intermediate_lattice(Subgroup::lattice(f.z2, diag(2, 2)), rot);
  CHECK(k.members.size() == 5);
  CHECK(intermediate_lattice(Subgroup::lattice(f.z2, diag(4, 1)), rot).members.size() == 3);
  CHECK(intermediate_lattice(Subgroup::lattice(f.z2, diag(2, 3)), rot).members.size() == 4);

  const auto heis = intermediate_lattice(f.heis_h, Cocycle::heisenberg(f.heis, Exponent(), f.theta));
  CHECK(heis.kind == IntermediateLattice::Kind::Truncated);
  REQUIRE(heis.members.size() == 6);
  CHECK(subgroup_equal(*heis.members[0], *f.heis_h) == Tri::True);
  CHECK(heis.members[1]->is_full());
  CHECK(heis.members[3]->contains(v({3, 1, 1})) == Tri::True);
  CHECK(heis.members[3]->contains(v({2, 0, 0})) == Tri::False);

  const auto torus = intermediate_lattice(f.torus_h, Cocycle::triple_product(f.z3, {f.t1, f.t2, f.t3}));
  CHECK(torus.kind == IntermediateLattice::Kind::Truncated);
  REQUIRE(torus.members.size() == 6);
  CHECK(torus.members[2]->contains(v({5, -1, 2})) == Tri::True);
  CHECK(torus.members[2]->contains(v({0, 0, 1})) == Tri::False);

  CHECK(intermediate_lattice(f.heis_h, Cocycle::heisenberg(f.heis, f.theta, Exponent(Rational(1, 3)))).kind ==
        IntermediateLattice::Kind::Unknown);

  auto k4 = Group::builtin("Z_2 x Z_2");
  std::vector<Phase> table(16);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      if (k4->table().coords[x][1] * k4->table().coords[y][0] % 2)
        table[x * 4 + y] = Phase(Rational(1, 2));
  const auto twisted = Cocycle::finite_table(k4, table);
  const auto fin = intermediate_lattice(Subgroup::full(k4), twisted);
  CHECK(fin.kind == IntermediateLattice::Kind::Complete);
  CHECK(fin.members.size() == 1);

  const auto prod = intermediate_lattice(f.f2_h, Cocycle::f2z2(f.f2z2, 2));
  CHECK(prod.kind == IntermediateLattice::Kind::Complete);
  REQUIRE(prod.members.size() == 2);
  CHECK(subgroup_equal(*prod.members[0], *f.f2_h) == Tri::True);
  CHECK(prod.members[1]->is_full());
}
