// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kleppner/kleppner.hpp"
#include "kleppner/oracle.hpp"
#include "kleppner/verdict.hpp"

using namespace kleppner;

namespace {

constexpr int kCocyclesPerGroup = 50;
constexpr double kSweepBudgetSeconds = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (ok)
      return;
    pass = false;
    if (failures.size() < 5)
      failures.push_back(what);
  }
};

std::vector<std::string> sweep_groups() {
  std::vector<std::string> names;
  for (int n = 1; n <= 16; ++n)
    names.push_back("Z_" + std::to_string(n));
  for (int m = 2; m <= 4; ++m)
    for (int n = m; m * n <= 16; ++n)
      names.push_back("Z_" + std::to_string(m) + " x Z_" + std::to_string(n));
  for (int n = 3; n <= 8; ++n)
    names.push_back("D_" + std::to_string(n));
  names.push_back("Q8");
  names.push_back("S_3");
  return names;
}

/// Every subgroup, by closing the trivial subgroup under adjoining single elements.
std::vector<SubgroupPtr> all_subgroups(const GroupPtr& g) {
  const auto elems = g->elements();
  std::set<std::vector<Element>> seen;
  std::vector<SubgroupPtr> out{Subgroup::trivial(g)};
  seen.insert(*out[0]->elements());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto cur = *out[i]->elements();
    for (const auto& x : elems) {
      if (std::binary_search(cur.begin(), cur.end(), x))
        continue;
      auto gens = out[i]->generators();
      gens.push_back(x);
      auto next = Subgroup::generated(g, gens);
      if (seen.insert(*next->elements()).second)
        out.push_back(next);
    }
  }
  return out;
}

struct Instance {
  std::string group;
  GroupPtr g;
  std::vector<SubgroupPtr> subgroups;
  std::vector<CocyclePtr> cocycles;
};

std::vector<Instance> build_sweep(Outcome& validity) {
  std::vector<Instance> out;
  std::mt19937_64 rng(20260);
  for (const auto& name : sweep_groups()) {
    Instance inst{name, Group::builtin(name), {}, {}};
    inst.subgroups = all_subgroups(inst.g);
    inst.cocycles.push_back(Cocycle::trivial(inst.g));
    while (inst.cocycles.size() < kCocyclesPerGroup) {
      auto sigma = random_finite_cocycle(inst.g, rng);
      validity.expect(validate_cocycle(*sigma).ok, name + ": random cocycle failed validation");
      inst.cocycles.push_back(std::move(sigma));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

// FC_G^sigma(H) from the definitions; in a finite group every H-class is finite.
std::set<Element> brute_fc_sigma(const GroupPtr& g, const Subgroup& h, const Cocycle& sigma) {
  const auto hs = *h.elements();
  std::set<Element> out;
  for (const auto& x : g->elements()) {
    bool regular = true;
    for (const auto& k : hs)
      if (g->commutes(x, k) && !(sigma.eval(x, k) == sigma.eval(k, x)))
        regular = false;
    if (regular)
      out.insert(x);
  }
  return out;
}

std::string line(int n, const Outcome& o, const std::string& title) {
  std::ostringstream os;
  os << "criterion " << n << " " << (o.pass ? "PASS" : "FAIL") << "  " << title;
  if (!o.detail.empty())
    os << " (" << o.detail << ")";
  for (const auto& f : o.failures)
    os << "\n    " << f;
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome criterion_oracle(const std::vector<Instance>& sweep, const Outcome& validity, double build_seconds) {
  Outcome o = validity;
  const auto start = std::chrono::steady_clock::now();
  std::size_t count = 0;
  for (const auto& inst : sweep)
    for (const auto& sigma : inst.cocycles) {
      const auto rep = build_regular_rep(sigma);
      for (const auto& h : inst.subgroups) {
        const auto a = commutant_route_a(rep, *h).dimension;
        const auto b = commutant_route_b(*h, *sigma);
        o.expect(a == b, inst.group + " H=" + h->describe() + " sigma=" + sigma->describe() + ": route A " +
                             std::to_string(a) + " vs route B " + std::to_string(b));
        ++count;
      }
    }
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
  const double total = took.count() + build_seconds;
  o.expect(total < kSweepBudgetSeconds, "sweep exceeded the time budget");
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu groups, %zu (H, sigma) pairs, %.1f s", sweep.size(), count, total);
  o.detail = buf;
  return o;
}

Outcome criterion_center(const std::vector<Instance>& sweep) {
  Outcome o;
  std::size_t count = 0;
  for (const auto& inst : sweep)
    for (const auto& sigma : inst.cocycles) {
      const auto dim = center_dim(sigma);
      const TriBool k = kleppner::kleppner(sigma);
      o.expect(!k.is_unknown(), inst.group + ": Kleppner undecided for " + sigma->describe());
      o.expect(k.is_holds() == (dim.route_a == 1),
               inst.group + " sigma=" + sigma->describe() + ": Kleppner " + to_string(k.value) + ", center dim " +
                   std::to_string(dim.route_a));
      ++count;
    }
  o.detail = std::to_string(count) + " cocycles";
  return o;
}

Outcome criterion_examples() {
  Outcome o;
  const BasisPtr basis = make_basis({"theta", "theta1", "theta2", "theta3", "gamma"});
  const Exponent theta = Exponent::symbol(basis, 0);
  const Exponent t1 = Exponent::symbol(basis, 1), t2 = Exponent::symbol(basis, 2), t3 = Exponent::symbol(basis, 3);
  const Exponent gamma = Exponent::symbol(basis, 4);
  auto diag = [](std::int64_t p, std::int64_t q) {
    IntMatrix m = IntMatrix::Zero(2, 2);
    m(0, 0) = p;
    m(1, 1) = q;
    return m;
  };
  auto holds = [](const Verdict& v) { return v.conclusion == Conclusion::Holds; };
  auto fails = [](const Verdict& v) { return v.conclusion == Conclusion::Fails; };

  // noncommutative 2-torus
  auto z2 = Group::free_abelian(2);
  auto rot = Cocycle::rotation(z2, theta);
  for (auto [p, q] : {std::pair{1, 2}, {2, 3}, {3, 5}}) {
    const auto h = Subgroup::lattice(z2, diag(p, q));
    const std::string tag = "torus (" + std::to_string(p) + "," + std::to_string(q) + ")";
    o.expect(relative_kleppner(h, rot).is_holds(), tag + ": relative Kleppner");
    o.expect(holds(cstar_irreducible(h, rot)), tag + ": irreducibility");
  }
  o.expect(intermediate_lattice(Subgroup::lattice(z2, diag(1, 3)), rot).members.size() == 2,
           "torus (1,3): two intermediate algebras");

  // noncommutative 3-torus
  auto z3 = Group::free_abelian(3);
  const auto plane = Subgroup::coordinate(z3, {2});
  o.expect(holds(cstar_irreducible(plane, Cocycle::triple_product(z3, {t1, t2, t3}))), "3-torus: independent angles");
  o.expect(fails(cstar_irreducible(plane, Cocycle::triple_product(z3, {t1, t2, Exponent(Rational(1, 2))}))),
           "3-torus: theta3 = 1/2");
  o.expect(fails(cstar_irreducible(
               plane, Cocycle::triple_product(z3, {Exponent(Rational(1, 3)), Rational(1, 2) * t3, t3}))),
           "3-torus: two-dimensional angle span");
  o.expect(fails(cstar_irreducible(plane, Cocycle::triple_product(z3, {Rational(2, 3) * t3 + Exponent(Rational(1, 5)),
                                                                        Rational(-1, 4) * t3, t3}))),
           "3-torus: angles in span{1, theta3}");

  // Heisenberg group
  auto heis = Group::heisenberg();
  const auto hh = Subgroup::coordinate(heis, {0});
  o.expect(holds(cstar_irreducible(hh, Cocycle::heisenberg(heis, gamma, theta))), "Heisenberg: formal theta");
  o.expect(holds(cstar_irreducible(hh, Cocycle::heisenberg(heis, Exponent(), theta))), "Heisenberg: gamma = 0");
  for (const Rational& r : {Rational(1, 2), Rational(1, 3), Rational(2, 5), Rational(0)})
    o.expect(fails(cstar_irreducible(hh, Cocycle::heisenberg(heis, gamma, Exponent(r)))),
             "Heisenberg: rational theta " + r.str());
  const auto half = sigma_centralizer(hh, Cocycle::heisenberg(heis, gamma, Exponent(Rational(1, 2))));
  o.expect(half.is_trivial.is_fails() && half.is_trivial.witness == std::vector<Element>{Element::vector({0, 2, 0})},
           "Heisenberg: theta = 1/2 witness (0,2,0)");
  const auto lat = intermediate_lattice(hh, Cocycle::heisenberg(heis, gamma, theta));
  o.expect(lat.members.size() == 6, "Heisenberg: lattice prefix Gamma_0..Gamma_5");
  for (int n = 0; n < static_cast<int>(lat.members.size()); ++n)
    o.expect(subgroup_equal(*lat.members[static_cast<std::size_t>(n)], *Subgroup::heisenberg_box(heis, n, 1, 1)) ==
                 Tri::True,
             "Heisenberg: Gamma_" + std::to_string(n));

  // F_2 x Z_2
  auto f2z2 = Group::direct_product(Group::free(2), Group::builtin("Z_2"));
  const auto hf = Subgroup::coordinate(f2z2, {1});
  for (int j = 1; j <= 3; ++j) {
    const auto sigma = Cocycle::f2z2(f2z2, j);
    o.expect(sigma_centralizer(hf, sigma).is_trivial.is_holds(), "F2 x Z2: sigma-centralizer, j = " + std::to_string(j));
    o.expect(holds(cstar_irreducible(hf, sigma)), "F2 x Z2: irreducibility, j = " + std::to_string(j));
  }
  const auto plain = cstar_irreducible(hf, Cocycle::trivial(f2z2));
  o.expect(fails(plain) && plain.witness ==
                               std::vector<Element>{Element::pair(f2z2->factor(0)->identity(), Element::index(1))},
           "F2 x Z2: trivial cocycle fails with witness (e,1)");
  o.detail = "torus, 3-torus, Heisenberg, F2 x Z2";
  return o;
}

Outcome criterion_identities() {
  Outcome o;
  const BasisPtr basis = make_basis({"theta", "phi", "psi"});
  const Exponent theta = Exponent::symbol(basis, 0), phi = Exponent::symbol(basis, 1), psi = Exponent::symbol(basis, 2);
  std::mt19937_64 rng(404);
  auto z2 = Group::free_abelian(2);
  auto z3 = Group::free_abelian(3);
  auto heis = Group::heisenberg();
  auto f2z2 = Group::direct_product(Group::free(2), Group::builtin("Z_2"));
  auto d4 = Group::builtin("D_4");
  auto mixed = Group::direct_product(z2, d4);
  auto lattice = Subgroup::lattice(z2, [] {
    IntMatrix m(2, 2);
    m << 2, 1, 0, 3;
    return m;
  }());
  auto rot = Cocycle::rotation(z2, theta);

  const std::vector<std::pair<std::string, CocyclePtr>> variants{
      {"trivial", Cocycle::trivial(heis)},
      {"rotation", rot},
      {"bicharacter", Cocycle::bicharacter(z3, {{Exponent(Rational(1, 3)), theta, Exponent()},
                                                {phi, Exponent(), Rational(1, 2) * psi},
                                                {Exponent(Rational(2, 7)), Exponent(), theta + phi}})},
      {"triple product", Cocycle::triple_product(z3, {theta, phi, psi})},
      {"heisenberg", Cocycle::heisenberg(heis, theta, phi)},
      {"heisenberg rational", Cocycle::heisenberg(heis, Exponent(Rational(1, 5)), Exponent(Rational(1, 2)))},
      {"f2z2 j=1", Cocycle::f2z2(f2z2, 1)},
      {"f2z2 j=2", Cocycle::f2z2(f2z2, 2)},
      {"f2z2 j=3", Cocycle::f2z2(f2z2, 3)},
      {"finite table", random_finite_cocycle(d4, rng)},
      {"product", Cocycle::product(mixed, rot, random_finite_cocycle(d4, rng))},
      {"restriction", Cocycle::restriction(rot, lattice)},
      {"similarity", similarity_transform(Cocycle::heisenberg(heis, theta, phi), Beta::hashed(17, 12))},
      {"pullback", Cocycle::pullback(rot, *realize(lattice))},
  };
  Budget budget;
  budget.samples = 10000;
  budget.exhaustive_order = 0;
  std::size_t total = 0;
  for (const auto& [name, sigma] : variants) {
    budget.seed = rng();
    const auto c = validate_cocycle(*sigma, budget);
    const auto t = check_tilde_identities(*sigma, budget);
    o.expect(c.ok, name + ": cocycle identity fails (" + c.identity + ")");
    o.expect(t.ok, name + ": " + t.identity);
    o.expect(c.checked >= 10000 && t.checked >= 10000, name + ": fewer than 10000 tuples sampled");
    total += c.checked + t.checked;
  }
  o.detail = std::to_string(variants.size()) + " variants, " + std::to_string(total) + " tuples";
  return o;
}

Outcome criterion_closure(const std::vector<Instance>& sweep) {
  Outcome o;
  std::size_t count = 0;
  for (const auto& inst : sweep) {
    const GroupPtr& g = inst.g;
    const auto order = *g->order();
    for (const auto& sigma : inst.cocycles)
      for (const auto& h : inst.subgroups) {
        const auto fc = brute_fc_sigma(g, *h, *sigma);
        const auto engine = fc_sigma_elements(h, sigma);
        const std::string tag = inst.group + " H=" + h->describe() + " sigma=" + sigma->describe();
        o.expect(std::set<Element>(engine.begin(), engine.end()) == fc, tag + ": FC^sigma differs from definition");
        for (const auto& x : fc) {
          o.expect(fc.count(g->inv(x)) > 0, tag + ": not closed under inverse at " + g->format(x));
          for (const auto& y : fc) {
            const Element xy = g->mul(x, y);
            bool found = false;
            for (std::int64_t n = 1; n <= order && !found; ++n)
              found = fc.count(g->pow(xy, n)) > 0;
            o.expect(found, tag + ": no power of " + g->format(xy) + " inside");
          }
        }
        ++count;
      }
  }
  o.detail = std::to_string(count) + " instances";
  return o;
}

bool same(const TriBool& a, const TriBool& b) { return a.value == b.value && a.witness == b.witness; }

bool same(const Verdict& a, const Verdict& b) {
  if (a.conclusion != b.conclusion || a.witness != b.witness || a.chain.size() != b.chain.size())
    return false;
  for (std::size_t i = 0; i < a.chain.size(); ++i)
    if (a.chain[i].rule != b.chain[i].rule)
      return false;
  return true;
}

Outcome criterion_similarity() {
  Outcome o;
  const BasisPtr basis = make_basis({"theta", "gamma"});
  const Exponent theta = Exponent::symbol(basis, 0), gamma = Exponent::symbol(basis, 1);
  std::mt19937_64 rng(606);
  auto z2 = Group::free_abelian(2);
  auto heis = Group::heisenberg();
  IntMatrix d = IntMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 3;
  std::vector<std::tuple<std::string, SubgroupPtr, CocyclePtr>> cases{
      {"Z^2 formal", Subgroup::lattice(z2, d), Cocycle::rotation(z2, theta)},
      {"Z^2 rational", Subgroup::full(z2), Cocycle::rotation(z2, Exponent(Rational(1, 3)))},
      {"Heisenberg formal", Subgroup::coordinate(heis, {0}), Cocycle::heisenberg(heis, gamma, theta)},
      {"Heisenberg 1/2", Subgroup::coordinate(heis, {0}), Cocycle::heisenberg(heis, gamma, Exponent(Rational(1, 2)))},
  };
  for (int n : {4, 6, 12}) {
    auto zn = Group::builtin("Z_" + std::to_string(n));
    cases.emplace_back("Z_" + std::to_string(n), Subgroup::generated(zn, {zn->parse("2")}),
                       random_finite_cocycle(zn, rng));
    cases.emplace_back("Z_" + std::to_string(n) + " full", Subgroup::full(zn), Cocycle::trivial(zn));
  }
  std::uniform_int_distribution<int> small(-6, 6);
  auto random_beta = [&](const GroupPtr& g, int i) {
    if (g->kind() == Group::Kind::FiniteTable || i % 2 == 0)
      return Beta::hashed(rng(), 2 + static_cast<std::int64_t>(rng() % 23));
    // quadratic form with rational and formal coefficients
    const std::size_t n = g->kind() == Group::Kind::Heisenberg ? 3 : 2;
    std::vector<std::vector<Exponent>> quad(n, std::vector<Exponent>(n));
    std::vector<Exponent> lin(n);
    for (std::size_t j = 0; j < n; ++j) {
      lin[j] = Exponent(Rational(small(rng), 7)) + Rational(small(rng), 5) * theta;
      for (std::size_t k = j; k < n; ++k)
        quad[j][k] = Exponent(Rational(small(rng), 11)) + Rational(small(rng), 3) * gamma;
    }
    return Beta::quadratic(quad, lin);
  };
  std::size_t count = 0;
  for (const auto& [name, h, sigma] : cases) {
    const GroupPtr& g = sigma->group();
    std::vector<Element> sample;
    std::mt19937_64 srng(7);
    for (int i = 0; i < 12; ++i)
      sample.push_back(g->random_element(srng, 4));
    std::vector<TriBool> regular;
    for (const auto& x : sample)
      regular.push_back(is_sigma_regular(x, *h, *sigma));
    const auto k = kleppner::kleppner(sigma);
    const auto kh = kleppner_of_subgroup(h, sigma);
    const auto rel = relative_kleppner(h, sigma);
    const auto cen = sigma_centralizer(h, sigma).is_trivial;
    const auto simple = twisted_simplicity(h, sigma);
    const auto irr = cstar_irreducible(h, sigma);
    for (int i = 0; i < 100; ++i) {
      const auto moved = similarity_transform(sigma, random_beta(g, i));
      const std::string tag = name + " beta #" + std::to_string(i);
      for (std::size_t s = 0; s < sample.size(); ++s)
        o.expect(same(is_sigma_regular(sample[s], *h, *moved), regular[s]), tag + ": regularity");
      o.expect(same(kleppner::kleppner(moved), k), tag + ": Kleppner");
      o.expect(same(kleppner_of_subgroup(h, moved), kh), tag + ": Kleppner of H");
      o.expect(same(relative_kleppner(h, moved), rel), tag + ": relative Kleppner");
      o.expect(same(sigma_centralizer(h, moved).is_trivial, cen), tag + ": sigma-centralizer");
      o.expect(same(twisted_simplicity(h, moved), simple), tag + ": simplicity verdict");
      o.expect(same(cstar_irreducible(h, moved), irr), tag + ": irreducibility verdict");
      ++count;
    }
  }
  o.detail = std::to_string(cases.size()) + " instances, " + std::to_string(count) + " transforms";
  return o;
}

Outcome criterion_catalog() {
  Outcome o;
  struct Row {
    std::function<GroupPtr()> make;
    Tri prime, fc;
  };
  const Tri T = Tri::True, F = Tri::False;
  std::vector<Row> rows;
  auto builtin = [](std::string n) { return [n] { return Group::builtin(n); }; };
  // finite: prime exactly when trivial, always FC-hypercentral
  for (int n = 1; n <= 16; ++n)
    rows.push_back({builtin("Z_" + std::to_string(n)), n == 1 ? T : F, T});
  for (int m = 2; m <= 4; ++m)
    for (int n = m; m * n <= 16; ++n)
      rows.push_back({builtin("Z_" + std::to_string(m) + " x Z_" + std::to_string(n)), F, T});
  for (int n = 2; n <= 8; ++n)
    rows.push_back({builtin("D_" + std::to_string(n)), F, T});
  rows.push_back({builtin("Q8"), F, T});
  for (int n = 1; n <= 5; ++n)
    rows.push_back({builtin("S_" + std::to_string(n)), n == 1 ? T : F, T});
  for (int r = 0; r <= 3; ++r)
    rows.push_back({[r] { return Group::free_abelian(r); }, T, T});
  rows.push_back({[] { return Group::heisenberg(); }, T, T});
  for (int r = 1; r <= 3; ++r)
    rows.push_back({[r] { return Group::free(r); }, T, r == 1 ? T : F});
  rows.push_back({[] { return Group::direct_product(Group::free(2), Group::builtin("Z_2")); }, F, F});
  rows.push_back({[] { return Group::direct_product(Group::free(2), Group::free(2)); }, T, F});
  rows.push_back({[] { return Group::direct_product(Group::free_abelian(2), Group::builtin("Z_3")); }, F, T});
  rows.push_back({[] { return Group::direct_product(Group::heisenberg(), Group::free(1)); }, T, T});
  rows.push_back({[] { return Group::direct_product(Group::free(2), Group::builtin("Z_1")); }, T, F});
  for (const auto& row : rows) {
    const GroupPtr g = row.make();
    o.expect(g->is_prime() == row.prime, g->name() + ": is_prime " + to_string(g->is_prime()));
    o.expect(g->is_fc_hypercentral() == row.fc, g->name() + ": is_fc_hypercentral " + to_string(g->is_fc_hypercentral()));
  }
  o.detail = std::to_string(rows.size()) + " groups";
  return o;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  Outcome validity;
  const auto sweep = build_sweep(validity);
  const std::chrono::duration<double> built = std::chrono::steady_clock::now() - start;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle routes agree on the finite sweep", [&] { return criterion_oracle(sweep, validity, built.count()); }},
      {"Kleppner holds exactly when the center is trivial", [&] { return criterion_center(sweep); }},
      {"worked examples reproduced", [] { return criterion_examples(); }},
      {"cocycle and twist identities on sampled tuples", [] { return criterion_identities(); }},
      {"inverse and power closure of FC^sigma", [&] { return criterion_closure(sweep); }},
      {"similarity invariance", [] { return criterion_similarity(); }},
      {"catalog primeness and FC-hypercentrality", [] { return criterion_catalog(); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << line(static_cast<int>(i + 1), o, criteria[i].first) << std::endl;
  }
  return all ? 0 : 1;
}
