#include "doctest.h"

#include <random>

#include "kleppner/kleppner.hpp"
#include "kleppner/oracle.hpp"

using namespace kleppner;

namespace {

CocyclePtr k4_twist(const GroupPtr& k4) {
  std::vector<Phase> table(16);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      if (k4->table().coords[x][1] * k4->table().coords[y][0] % 2)
        table[x * 4 + y] = Phase(Rational(1, 2));
  return Cocycle::finite_table(k4, table);
}

std::size_t idx(const GroupPtr& g, const char* label) { return static_cast<std::size_t>(g->parse(label).idx()); }

}  // namespace

TEST_CASE("regular representation") {
  auto z2 = Group::builtin("Z_2");
  const auto rep = build_regular_rep(Cocycle::trivial(z2));
  CHECK(rep.order() == 2);
  const auto s = rep.dense(idx(z2, "1"));
  CHECK(s(0, 1) == Cyclotomic(1));
  CHECK(s(1, 0) == Cyclotomic(1));
  CHECK(s(0, 0) == Cyclotomic(0));

  auto k4 = Group::builtin("Z_2 x Z_2");
  const auto sigma = k4_twist(k4);
  const auto r = build_regular_rep(sigma);
  const std::size_t a = idx(k4, "(1,0)"), b = idx(k4, "(0,1)");
  const Matrix<Cyclotomic> ab = r.dense(a) * r.dense(b), ba = r.dense(b) * r.dense(a);
  CHECK(ab == Matrix<Cyclotomic>(Cyclotomic(-1) * ba));
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      const Cyclotomic x = r.dense(a)(i, j);
      CHECK((x.is_zero() || x == Cyclotomic(1) || x == Cyclotomic(-1)));
    }
  const auto id = r.dense(r.identity());
  CHECK(id == Matrix<Cyclotomic>::Identity(4, 4));

  CHECK(check_conjugation(r, *sigma));
  std::mt19937_64 rng(3);
  for (const char* name : {"D_4", "Q8", "Z_4 x Z_4", "S_3"}) {
    auto g = Group::builtin(name);
    auto rho = random_finite_cocycle(g, rng);
    CHECK(check_conjugation(build_regular_rep(rho), *rho));
  }
}

TEST_CASE("oracle preconditions") {
  auto basis = make_basis({"theta"});
  CHECK_THROWS_AS(build_regular_rep(Cocycle::rotation(Group::free_abelian(2), Exponent::symbol(basis, 0))),
                  OracleError);
  CHECK_THROWS_AS(build_regular_rep(Cocycle::trivial(Group::builtin("S_5"))), OracleError);
}

TEST_CASE("commutant dimensions") {
  auto k4 = Group::builtin("Z_2 x Z_2");
  CHECK(center_dim(k4_twist(k4)).route_a == 1);
  CHECK(relative_commutant_dim(Subgroup::full(k4), k4_twist(k4)).route_b == 1);
  CHECK(center_dim(Cocycle::trivial(Group::builtin("Z_4"))).route_a == 4);
  CHECK(center_dim(Cocycle::trivial(Group::builtin("Z_2 x Z_4"))).route_a == 8);
  CHECK(center_dim(Cocycle::trivial(Group::builtin("Q8"))).route_a == 5);
  CHECK(center_dim(Cocycle::trivial(Group::builtin("S_3"))).route_a == 3);

  auto s3 = Group::builtin("S_3");
  auto a3 = Subgroup::generated(s3, {s3->parse("(1 2 3)")});
  const auto r = relative_commutant_dim(a3, Cocycle::trivial(s3));
  CHECK(r.route_a == 4);
  CHECK(r.route_b == 4);
  // trivial H: the whole span commutes
  CHECK(relative_commutant_dim(Subgroup::trivial(s3), Cocycle::trivial(s3)).route_a == 6);
}

TEST_CASE("route B against a broken route A") {
  // A route A result from the wrong cocycle must be caught as a mismatch.
  auto k4 = Group::builtin("Z_2 x Z_2");
  const auto twisted = build_regular_rep(k4_twist(k4));
  CHECK_THROWS_AS(relative_commutant_dim(twisted, *Subgroup::full(k4), *Cocycle::trivial(k4)), RouteMismatch);
}

TEST_CASE("canonical trace") {
  std::mt19937_64 rng(21);
  for (const char* name : {"Z_2 x Z_2", "D_4", "Q8"}) {
    auto g = Group::builtin(name);
    const auto sigma = random_finite_cocycle(g, rng);
    const auto rep = build_regular_rep(sigma);
    const auto n = static_cast<Eigen::Index>(rep.order());
    CHECK(canonical_trace(rep, Matrix<Cyclotomic>::Identity(n, n)) == Cyclotomic(1));
    for (std::size_t x = 0; x < rep.order(); ++x) {
      const auto l = rep.dense(x);
      CHECK(canonical_trace(rep, l) == Cyclotomic(x == rep.identity() ? 1 : 0));
      Matrix<Cyclotomic> star = l.transpose();
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          star(i, j) = star(i, j).conj();
      CHECK(canonical_trace(rep, l * star) == Cyclotomic(1));
    }
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Cyclotomic> f;
      for (std::size_t x = 0; x < rep.order(); ++x)
        f.push_back(Cyclotomic(coeff(rng)) * Cyclotomic::root_of_unity(8, coeff(rng)));
      const auto t = rep.span_element(f);
      CHECK(canonical_trace(rep, t) == normalized_trace(t));
      CHECK(canonical_trace(rep, t) == f[rep.identity()]);
    }
  }
}

TEST_CASE("center dimension matches the Kleppner engine") {
  std::mt19937_64 rng(31);
  for (const char* name : {"Z_6", "Z_2 x Z_2", "Z_4 x Z_2", "D_4", "Q8", "S_3", "D_6"}) {
    auto g = Group::builtin(name);
    for (int i = 0; i < 8; ++i) {
      const auto sigma = i == 0 ? Cocycle::trivial(g) : random_finite_cocycle(g, rng);
      const bool factor = center_dim(sigma).route_a == 1;
      CHECK(kleppner::kleppner(sigma).is_holds() == factor);
    }
  }
}
