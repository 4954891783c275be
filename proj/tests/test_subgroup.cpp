#include "doctest.h"

#include <random>
#include <set>

#include "kleppner/subgroup.hpp"

using namespace kleppner;

namespace {

IntMatrix diag(std::int64_t p, std::int64_t q) {
  IntMatrix m = IntMatrix::Zero(2, 2);
  m(0, 0) = p;
  m(1, 1) = q;
  return m;
}

Element v(std::initializer_list<std::int64_t> xs) { return Element::vector(xs); }

std::vector<std::pair<GroupPtr, SubgroupPtr>> finite_pairs() {
  std::vector<std::pair<GroupPtr, SubgroupPtr>> out;
  for (const char* name : {"S_3", "D_4", "Q8", "Z_2 x Z_4", "S_4", "D_6"}) {
    auto g = Group::builtin(name);
    out.push_back({g, Subgroup::full(g)});
    const auto elems = g->elements();
    out.push_back({g, Subgroup::generated(g, {elems[1]})});
    out.push_back({g, Subgroup::generated(g, {elems[elems.size() / 2]})});
    out.push_back({g, Subgroup::generated(g, {elems[2], elems[elems.size() - 1]})});
  }
  return out;
}

}  // namespace

TEST_CASE("conjugacy classes in finite tables") {
  auto s3 = Group::builtin("S_3");
  auto cls = h_conjugacy_class(s3->parse("(1 2)"), *Subgroup::full(s3));
  REQUIRE(cls.kind == Classification::Kind::Finite);
  CHECK(cls.elements.size() == 3);

  for (const auto& [g, h] : finite_pairs()) {
    CAPTURE(g->name());
    CAPTURE(h->describe());
    const auto hsize = h->elements()->size();
    for (const auto& x : g->elements()) {
      const auto c = h_conjugacy_class(x, *h);
      REQUIRE(c.kind == Classification::Kind::Finite);
      const std::set<Element> set(c.elements.begin(), c.elements.end());
      for (const auto& y : c.elements)
        for (const auto& s : h->generators())
          CHECK(set.count(g->conj(s, y)));
      // orbit-stabilizer: |g^H| = [H : C_H(g)]
      auto cg = centralizer_generators(*h, x);
      REQUIRE(cg);
      const auto centralizer = Subgroup::generated(g, *cg);
      CHECK(c.elements.size() * centralizer->elements()->size() == hsize);
    }
  }
}

TEST_CASE("conjugacy classes in infinite groups") {
  auto heis = Group::heisenberg();
  auto h = Subgroup::coordinate(heis, {0});
  CHECK(h_conjugacy_class(v({1, 0, 0}), *h).kind == Classification::Kind::Infinite);
  CHECK(h_conjugacy_class(v({0, 4, -2}), *h).kind == Classification::Kind::Finite);

  auto z2 = Group::free_abelian(2);
  auto c = h_conjugacy_class(v({3, 5}), *Subgroup::lattice(z2, diag(2, 3)));
  REQUIRE(c.kind == Classification::Kind::Finite);
  CHECK(c.elements == std::vector<Element>{v({3, 5})});

  auto f2 = Group::free(2);
  auto cyc = Subgroup::generated(f2, {f2->parse("ab")});
  CHECK(h_conjugacy_class(f2->parse("abab"), *cyc).kind == Classification::Kind::Finite);
  CHECK(h_conjugacy_class(f2->parse("a"), *cyc).kind == Classification::Kind::Infinite);
  CHECK(h_conjugacy_class(f2->parse("a"), *Subgroup::full(f2)).kind == Classification::Kind::Infinite);

  auto g = Group::direct_product(f2, Group::builtin("Z_2"));
  auto hf = Subgroup::coordinate(g, {1});
  auto z = Element::pair(f2->identity(), Element::index(1));
  auto cz = h_conjugacy_class(z, *hf);
  REQUIRE(cz.kind == Classification::Kind::Finite);
  CHECK(cz.elements.size() == 1);
}

TEST_CASE("bfs fallback reaches the cap") {
  // a diagonal generator in F2 x Z makes the subgroup a Generated kind
  auto g = Group::direct_product(Group::free(2), Group::free_abelian(1));
  auto f2 = g->factor(0);
  auto h = Subgroup::generated(g, {Element::pair(f2->parse("a"), v({0})), Element::pair(f2->identity(), v({1}))});
  CHECK(h->kind() == Subgroup::Kind::Product);
  auto diag_h = Subgroup::generated(g, {Element::pair(f2->parse("a"), v({1})), Element::pair(f2->parse("b"), v({1}))});
  CHECK(diag_h->kind() == Subgroup::Kind::Generated);
  auto c = h_conjugacy_class(Element::pair(f2->parse("ab"), v({0})), *diag_h, SearchCaps{200, 6});
  CHECK(c.kind == Classification::Kind::Unknown);
  auto e = h_conjugacy_class(Element::pair(f2->identity(), v({5})), *diag_h);
  CHECK(e.kind == Classification::Kind::Finite);
}

TEST_CASE("centralizers") {
  auto z2 = Group::free_abelian(2);
  auto hpq = Subgroup::lattice(z2, diag(2, 3));
  CHECK(*centralizer_generators(*hpq, v({1, 1})) == hpq->generators());
  CHECK((*centralizer_of_subgroup(hpq))->is_full());

  auto heis = Group::heisenberg();
  auto h = Subgroup::coordinate(heis, {0});
  auto cg = centralizer_generators(*h, v({0, 1, 0}));
  REQUIRE(cg);
  CHECK(subgroup_equal(*Subgroup::generated(heis, *cg), *h) == Tri::True);
  auto cgh = centralizer_of_subgroup(h);
  REQUIRE(cgh);
  CHECK(subgroup_equal(**cgh, *h) == Tri::True);
  CHECK(subgroup_equal(**centralizer_of_subgroup(Subgroup::full(heis)), *Subgroup::heisenberg_box(heis, 0, 0, 1)) ==
        Tri::True);

  auto k4 = Group::builtin("Z_2 x Z_2");
  CHECK(centralizer_generators(*Subgroup::full(k4), k4->parse("(1,0)"))->size() == 3);

  auto f2 = Group::free(2);
  auto g = Group::direct_product(f2, Group::builtin("Z_2"));
  auto c = centralizer_of_subgroup(Subgroup::coordinate(g, {1}));
  REQUIRE(c);
  CHECK(subgroup_equal(**c, *Subgroup::coordinate(g, {0})) == Tri::True);

  auto fc = centralizer_generators(*Subgroup::full(f2), f2->parse("ba^6B"));
  REQUIRE(fc);
  CHECK(*fc == std::vector<Element>{f2->parse("baB")});
  auto sub = Subgroup::generated(f2, {f2->parse("a^4"), f2->parse("b")});
  auto fs = centralizer_generators(*sub, f2->parse("ba^6B"));
  REQUIRE(fs);
  CHECK(*fs == std::vector<Element>{f2->parse("ba^4B")});
}

TEST_CASE("heisenberg centralizer property") {
  auto heis = Group::heisenberg();
  std::mt19937_64 rng(3);
  const std::vector<SubgroupPtr> subs = {Subgroup::full(heis), Subgroup::coordinate(heis, {0}),
                                         Subgroup::heisenberg_box(heis, 2, 3, 6), Subgroup::heisenberg_box(heis, 2, 0, 5),
                                         Subgroup::generated(heis, {v({1, 2, 0}), v({2, 4, 7})})};
  for (const auto& h : subs) {
    CAPTURE(h->describe());
    for (int i = 0; i < 50; ++i) {
      const Element g = heis->random_element(rng, 4);
      auto cg = centralizer_generators(*h, g);
      REQUIRE(cg);
      for (const auto& x : *cg) {
        CHECK(h->contains(x) == Tri::True);
        CHECK(heis->commutes(x, g));
      }
    }
  }
}

TEST_CASE("normality") {
  auto s3 = Group::builtin("S_3");
  CHECK(Subgroup::generated(s3, {s3->parse("(1 2)")})->is_normal() == Tri::False);
  CHECK(Subgroup::generated(s3, {s3->parse("(1 2 3)")})->is_normal() == Tri::True);
  CHECK(Subgroup::lattice(Group::free_abelian(2), diag(3, 4))->is_normal() == Tri::True);
  auto heis = Group::heisenberg();
  CHECK(Subgroup::coordinate(heis, {0})->is_normal() == Tri::True);
  CHECK(Subgroup::generated(heis, {v({0, 1, 0})})->is_normal() == Tri::False);
  auto f2 = Group::free(2);
  CHECK(Subgroup::generated(f2, {f2->parse("a")})->is_normal() == Tri::False);
  // kernel of F2 -> Z_2 counting letters mod 2
  auto even = Subgroup::generated(f2, {f2->parse("aa"), f2->parse("ab"), f2->parse("ba")});
  CHECK(even->is_normal() == Tri::True);
  CHECK(even->index().str() == "2");

  std::mt19937_64 rng(5);
  for (const auto& [g, h] : finite_pairs()) {
    if (h->is_normal() != Tri::True)
      continue;
    for (int i = 0; i < 50; ++i) {
      const Element x = g->random_element(rng), y = h->elements()->at(rng() % h->elements()->size());
      CHECK(h->contains(g->conj(x, y)) == Tri::True);
    }
  }
  for (int i = 0; i < 50; ++i) {
    const Element x = f2->random_element(rng), y = even->from_basis_coords(even->generators(), IntVector::Ones(3));
    CHECK(even->contains(f2->conj(x, y)) == Tri::True);
  }
}

TEST_CASE("index") {
  CHECK(Subgroup::lattice(Group::free_abelian(2), diag(2, 5))->index().str() == "10");
  CHECK(Subgroup::lattice(Group::free_abelian(2), diag(2, 0))->index().str() == "infinite");
  auto heis = Group::heisenberg();
  CHECK(Subgroup::coordinate(heis, {0})->index().str() == "infinite");
  CHECK(Subgroup::heisenberg_box(heis, 2, 3, 3)->index().str() == "18");
  auto k4 = Group::builtin("Z_2 x Z_2");
  CHECK(Subgroup::generated(k4, {k4->parse("(1,0)")})->index().str() == "2");
  auto f2 = Group::free(2);
  CHECK(Subgroup::generated(f2, {f2->parse("a^3"), f2->parse("b"), f2->parse("abA"), f2->parse("aabAA")})->index().str() == "3");
  CHECK(Subgroup::generated(f2, {f2->parse("ab")})->index().str() == "infinite");
}

TEST_CASE("heisenberg subgroups") {
  auto heis = Group::heisenberg();
  CHECK_THROWS_AS(Subgroup::heisenberg_box(heis, 1, 1, 0), GroupError);
  CHECK_THROWS_AS(Subgroup::heisenberg_box(heis, 2, 3, 4), GroupError);
  auto b = Subgroup::heisenberg_box(heis, 2, 3, 3);
  CHECK(b->as_box() == std::array<std::int64_t, 3>{2, 3, 3});
  CHECK(b->contains(v({2, 3, 3})) == Tri::True);
  CHECK(b->contains(v({2, 3, 1})) == Tri::False);
  CHECK(b->contains(v({1, 3, 3})) == Tri::False);

  // brute force membership: closure of generators inside a window
  auto gen = Subgroup::generated(heis, {v({1, 2, 0}), v({0, 3, 1})});
  std::set<Element> reach{heis->identity()};
  std::vector<Element> frontier{heis->identity()};
  std::vector<Element> moves;
  for (const auto& x : {v({1, 2, 0}), v({0, 3, 1})}) {
    moves.push_back(x);
    moves.push_back(heis->inv(x));
  }
  for (int depth = 0; depth < 7; ++depth) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& m : moves) {
        Element y = heis->mul(x, m);
        if (reach.insert(y).second)
          next.push_back(y);
      }
    frontier = std::move(next);
  }
  for (const auto& x : reach)
    CHECK(gen->contains(x) == Tri::True);
  int outside = 0;
  for (std::int64_t a = -2; a <= 2; ++a)
    for (std::int64_t c = -4; c <= 4; ++c)
      if (gen->contains(v({a, 2 * a + 1, c})) == Tri::False)
        ++outside;
  CHECK(outside > 0);

  auto ab = Subgroup::generated(heis, {v({2, 4, 1}), v({0, 0, 3})});
  CHECK(ab->kind() == Subgroup::Kind::HeisenbergAbelian);
  CHECK(ab->contains(heis->pow(v({2, 4, 1}), 5)) == Tri::True);
  CHECK(ab->contains(v({1, 2, 0})) == Tri::False);
}

TEST_CASE("stallings graphs") {
  auto f2 = Group::free(2);
  auto h = Subgroup::generated(f2, {f2->parse("aba"), f2->parse("aBa")});
  CHECK(h->graph().subgroup_rank() == 2);
  CHECK(h->contains(f2->parse("abaAbA")) == Tri::True);
  CHECK(h->contains(f2->parse("a")) == Tri::False);
  for (const auto& w : h->generators())
    CHECK(h->contains(w) == Tri::True);
  auto same = Subgroup::generated(f2, h->generators());
  CHECK(subgroup_equal(*same, *h) == Tri::True);

  // folding collapses redundant generators
  auto red = Subgroup::generated(f2, {f2->parse("a"), f2->parse("ab"), f2->parse("b")});
  CHECK(red->is_full());

  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Element x = h->generators()[rng() % 2], y = h->generators()[rng() % 2];
    CHECK(h->contains(f2->mul(x, f2->inv(y))) == Tri::True);
  }
}

TEST_CASE("catalog facts on subgroups") {
  auto f2 = Group::free(2);
  auto g = Group::direct_product(f2, Group::builtin("Z_2"));
  auto h = Subgroup::coordinate(g, {1});
  CHECK(h->is_prime() == Tri::True);
  CHECK(h->is_cstar_simple() == Tri::True);
  CHECK(h->is_fc_hypercentral() == Tri::False);
  CHECK(Subgroup::generated(f2, {f2->parse("ab")})->is_fc_hypercentral() == Tri::True);
  auto heis = Group::heisenberg();
  CHECK(Subgroup::coordinate(heis, {0})->is_prime() == Tri::True);
  auto s3 = Group::builtin("S_3");
  CHECK(Subgroup::generated(s3, {s3->parse("(1 2)")})->is_prime() == Tri::False);
}

TEST_CASE("intersections") {
  auto z2 = Group::free_abelian(2);
  auto a = Subgroup::lattice(z2, diag(2, 3)), b = Subgroup::lattice(z2, diag(3, 2));
  auto c = intersect(a, b);
  REQUIRE(c);
  CHECK(subgroup_equal(**c, *Subgroup::lattice(z2, diag(6, 6))) == Tri::True);
  auto heis = Group::heisenberg();
  auto d = intersect(Subgroup::heisenberg_box(heis, 2, 1, 1), Subgroup::heisenberg_box(heis, 1, 3, 1));
  REQUIRE(d);
  CHECK((*d)->as_box() == std::array<std::int64_t, 3>{2, 3, 1});
  auto s4 = Group::builtin("S_4");
  auto x = Subgroup::generated(s4, {s4->parse("(1 2)"), s4->parse("(3 4)")});
  auto y = Subgroup::generated(s4, {s4->parse("(1 2)(3 4)"), s4->parse("(1 3)(2 4)")});
  auto xy = intersect(x, y);
  REQUIRE(xy);
  CHECK((*xy)->elements()->size() == 2);
}

TEST_CASE("fc equals centralizer") {
  auto heis = Group::heisenberg();
  CHECK(fc_equals_centralizer(*Subgroup::coordinate(heis, {0})) == Tri::True);
  auto s3 = Group::builtin("S_3");
  CHECK(fc_equals_centralizer(*Subgroup::full(s3)) == Tri::False);
  CHECK(fc_equals_centralizer(*Subgroup::full(Group::builtin("Z_4"))) == Tri::True);
}
