#include "kleppner/kleppner.hpp"

#include <algorithm>
#include <set>

namespace kleppner {

namespace {

const char* kFinite = "finite-enumeration";
const char* kFcTrivial = "fc-trivial";
const char* kNormalPrime = "normal-prime";
const char* kAbelian = "abelian-solver";
const char* kFcCentralizer = "fc-equals-centralizer";
const char* kUndecided = "undecided";

bool generated_trivially(const Subgroup& s) {
  if (s.is_trivial())
    return true;
  if (auto e = s.elements())
    return e->size() == 1;
  const auto gens = s.generators();
  return std::all_of(gens.begin(), gens.end(), [&](const Element& x) { return s.parent()->is_identity(x); });
}

void require_parent(const SubgroupPtr& h, const CocyclePtr& sigma) {
  if (sigma->group() != h->parent())
    throw CocycleError("cocycle and subgroup live on different groups");
  if (!sigma->domain()->is_full())
    throw CocycleError("cocycle must be defined on the whole parent group");
}

Element first_nontrivial(const Group& g, std::vector<Element> xs) {
  std::sort(xs.begin(), xs.end());
  for (const auto& x : xs)
    if (!g.is_identity(x))
      return x;
  return g.identity();
}

TriBool with_strategy(TriBool r, const std::string& strategy) {
  r.strategy = strategy;
  return r;
}

// (a): every H-class in a finite parent.
TriBool enumerate_classes(const SubgroupPtr& h, const Cocycle& sigma) {
  const Group& G = *h->parent();
  std::set<Element> seen;
  for (const auto& g : G.elements()) {
    if (G.is_identity(g) || seen.count(g))
      continue;
    const auto cls = h_conjugacy_class(g, *h);
    seen.insert(cls.elements.begin(), cls.elements.end());
    if (is_sigma_regular(g, *h, sigma).is_holds())
      return TriBool::fails(kFinite, cls.elements, "nontrivial sigma-regular class of size " +
                                                        std::to_string(cls.elements.size()));
  }
  return TriBool::holds(kFinite, "no nontrivial class is sigma-regular");
}

IntMatrix integer_rows(const std::vector<std::vector<Rational>>& rows, std::size_t n) {
  IntMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Integer d = 1;
    for (const auto& x : rows[i])
      d = lcm(d, Integer(boost::multiprecision::denominator(x)));
    for (std::size_t k = 0; k < n; ++k) {
      const Rational scaled = rows[i][k] * Rational(d);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = boost::multiprecision::numerator(scaled);
    }
  }
  return out;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k)
        out(i, j) += a(i, k) * b(k, j);
  return out;
}

}  // namespace

std::string to_string(Truth t) {
  switch (t) {
    case Truth::Holds:
      return "Holds";
    case Truth::Fails:
      return "Fails";
    case Truth::Unknown:
      return "Unknown";
  }
  return "Unknown";
}

TriBool TriBool::holds(std::string strategy, std::string reason) {
  return {Truth::Holds, std::move(strategy), std::move(reason), {}};
}

TriBool TriBool::fails(std::string strategy, std::vector<Element> witness, std::string reason) {
  return {Truth::Fails, std::move(strategy), std::move(reason), std::move(witness)};
}

TriBool TriBool::unknown(std::string strategy, std::string reason) {
  return {Truth::Unknown, std::move(strategy), std::move(reason), {}};
}

IntMatrix phase_kernel(const std::vector<std::vector<Phase>>& m, std::size_t n) {
  const auto cols = static_cast<Eigen::Index>(n);
  std::set<std::string> symbols;
  for (const auto& row : m)
    for (const auto& x : row)
      for (const auto& [name, c] : x.irr_coeffs())
        symbols.insert(name);

  // Symbol coefficients must cancel exactly.
  std::vector<std::vector<Rational>> irr;
  for (const auto& row : m)
    for (const auto& s : symbols) {
      std::vector<Rational> r(n);
      for (std::size_t k = 0; k < n; ++k) {
        const auto coeffs = row[k].irr_coeffs();
        auto it = coeffs.find(s);
        if (it != coeffs.end())
          r[k] = it->second;
      }
      irr.push_back(std::move(r));
    }
  IntMatrix kernel = irr.empty() ? IntMatrix(IntMatrix::Identity(cols, cols)) : integer_kernel(integer_rows(irr, n));
  const Eigen::Index r = kernel.cols();
  if (r == 0 || m.empty())
    return hermite_form(kernel).basis;

  // Rational parts must be integral: A y in Z^rows with A = R K.
  const auto rows = static_cast<Eigen::Index>(m.size());
  RatMatrix a = RatMatrix::Zero(rows, r);
  Integer d = 1;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < r; ++j) {
      Rational s = 0;
      for (Eigen::Index k = 0; k < cols; ++k)
        s += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].rational_part() * Rational(kernel(k, j));
      a(i, j) = s;
      d = lcm(d, Integer(boost::multiprecision::denominator(s)));
    }
  IntMatrix system = IntMatrix::Zero(rows, r + rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < r; ++j)
      system(i, j) = boost::multiprecision::numerator(a(i, j) * Rational(d));
    system(i, r + i) = d;
  }
  const IntMatrix z = integer_kernel(system);
  return hermite_form(multiply(kernel, z.topRows(r))).basis;
}

TriBool is_sigma_regular(const Element& g, const Subgroup& h, const Cocycle& sigma) {
  h.parent()->check(g);
  auto gens = centralizer_generators(h, g);
  if (!gens)
    return TriBool::unknown("centralizer-generators", "C_H(g) is not available for " + h.describe());
  std::sort(gens->begin(), gens->end());
  for (const auto& c : *gens)
    if (!sigma.tilde(c, g).is_one())
      return TriBool::fails("centralizer-generators", {g, c}, "sigma(g,h) != sigma(h,g) for a commuting h");
  return TriBool::holds("centralizer-generators", "tilde vanishes on generators of C_H(g)");
}

SigmaCentralizerResult sigma_centralizer(const SubgroupPtr& h, const CocyclePtr& sigma) {
  require_parent(h, sigma);
  const GroupPtr& G = h->parent();
  const auto c = centralizer_of_subgroup(h);
  if (!c)
    return {std::nullopt, TriBool::unknown("centralizer", "C_G(H) is not available for " + h->describe())};
  const auto hgens = h->generators();

  if (auto elems = (*c)->elements()) {
    std::vector<Element> keep;
    for (const auto& g : *elems) {
      bool regular = true;
      for (const auto& x : hgens)
        regular = regular && sigma->tilde(x, g).is_one();
      if (regular)
        keep.push_back(g);
    }
    std::sort(keep.begin(), keep.end());
    auto desc = Subgroup::finite(G, keep);
    if (keep.size() == 1)
      return {desc, TriBool::holds("centralizer-enumeration", "C_G^sigma(H) = {e}")};
    return {desc, TriBool::fails("centralizer-enumeration", {first_nontrivial(*G, keep)},
                                 "C_G^sigma(H) has " + std::to_string(keep.size()) + " elements")};
  }

  if (auto basis = (*c)->free_abelian_basis()) {
    std::vector<std::vector<Phase>> m;
    for (const auto& x : hgens) {
      std::vector<Phase> row;
      for (const auto& b : *basis)
        row.push_back(sigma->tilde(x, b));
      m.push_back(std::move(row));
    }
    const IntMatrix s = phase_kernel(m, basis->size());
    std::vector<Element> gens;
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      gens.push_back((*c)->from_basis_coords(*basis, s.col(j)));
    auto desc = Subgroup::generated(G, gens);
    if (gens.empty())
      return {desc, TriBool::holds("centralizer-lattice", "phase system has only the zero solution")};
    return {desc, TriBool::fails("centralizer-lattice", {gens.front()},
                                 "phase system has a rank " + std::to_string(gens.size()) + " solution lattice")};
  }

  if ((*c)->is_abelian() == Tri::False) {
    // tilde(x, .) is a character of C_G(H), so commutators lie in C_G^sigma(H).
    const auto cg = (*c)->generators();
    for (std::size_t i = 0; i < cg.size(); ++i)
      for (std::size_t j = i + 1; j < cg.size(); ++j) {
        const Element k = G->mul(G->mul(cg[i], cg[j]), G->inv(G->mul(cg[j], cg[i])));
        if (!G->is_identity(k))
          return {std::nullopt, TriBool::fails("centralizer-commutator", {k},
                                               "a nontrivial commutator of C_G(H) is sigma-regular")};
      }
  }
  return {std::nullopt, TriBool::unknown("centralizer", "no solver for C_G(H) = " + (*c)->describe())};
}

TriBool relative_kleppner(const SubgroupPtr& h, const CocyclePtr& sigma) {
  require_parent(h, sigma);
  const Group& G = *h->parent();
  if (G.is_finite())
    return enumerate_classes(h, *sigma);

  const Tri fc = fc_equals_centralizer(*h);
  const auto c = centralizer_of_subgroup(h);
  if (fc == Tri::True && c && generated_trivially(**c))
    return TriBool::holds(kFcTrivial, "FC_G(H) = C_G(H) = {e}");

  if (!h->is_full() && h->is_normal() == Tri::True && h->is_prime() == Tri::True) {
    const TriBool k = kleppner_of_subgroup(h, sigma);
    if (k.is_fails())
      return TriBool::fails(kNormalPrime, k.witness, "(H, sigma|H) fails Kleppner's condition");
    const TriBool s = sigma_centralizer(h, sigma).is_trivial;
    if (s.is_fails())
      return TriBool::fails(kNormalPrime, s.witness, "C_G^sigma(H) is nontrivial");
    if (k.is_holds() && s.is_holds())
      return TriBool::holds(kNormalPrime, "(H, sigma|H) is Kleppner and C_G^sigma(H) is trivial");
  }

  if (G.is_abelian() || fc == Tri::True) {
    const char* strategy = G.is_abelian() ? kAbelian : kFcCentralizer;
    const TriBool s = sigma_centralizer(h, sigma).is_trivial;
    if (s.is_holds())
      return TriBool::holds(strategy, "every finite H-class is central and only e is sigma-regular");
    if (s.is_fails())
      return TriBool::fails(strategy, s.witness, "a central sigma-regular element");
  }
  return TriBool::unknown(kUndecided, "no strategy decides " + h->describe() + " in " + G.name());
}

TriBool kleppner(const CocyclePtr& sigma) { return relative_kleppner(Subgroup::full(sigma->group()), sigma); }

TriBool kleppner_of_subgroup(const SubgroupPtr& h, const CocyclePtr& sigma) {
  require_parent(h, sigma);
  if (h->is_full())
    return kleppner(sigma);
  const auto r = realize(h);
  if (!r)
    return TriBool::unknown("realization", "no intrinsic copy of " + h->describe());
  TriBool k = kleppner(Cocycle::pullback(sigma, *r));
  for (auto& x : k.witness)
    x = r->embed(x);
  std::sort(k.witness.begin(), k.witness.end());
  return k;
}

TriBool relative_icc(const SubgroupPtr& h) {
  const GroupPtr& G = h->parent();
  const auto trivial = Cocycle::trivial(G);
  if (!G->is_finite() && h->is_normal() == Tri::True) {
    const auto c = centralizer_of_subgroup(h);
    if (c && !generated_trivially(**c))
      return TriBool::fails("normal-icc", {first_nontrivial(*G, (*c)->generators())}, "C_G(H) is nontrivial");
    if (c) {
      const TriBool icc = kleppner_of_subgroup(h, trivial);
      if (icc.is_holds())
        return TriBool::holds("normal-icc", "H is icc and C_G(H) is trivial");
      if (icc.is_fails())
        return TriBool::fails("normal-icc", icc.witness, "H is not icc");
    }
  }
  return relative_kleppner(h, trivial);
}

TriBool is_sigma_regular_subgroup(const SubgroupPtr& h, const CocyclePtr& sigma) {
  require_parent(h, sigma);
  const GroupPtr& G = h->parent();
  const auto full = Subgroup::full(G);
  auto test = [&](const Element& x) -> std::optional<TriBool> {
    if (!is_sigma_regular(x, *h, *sigma).is_holds())
      return std::nullopt;
    const TriBool rg = is_sigma_regular(x, *full, *sigma);
    if (rg.is_fails())
      return TriBool::fails("", rg.witness, "regular in H but not in G");
    return std::nullopt;
  };

  if (auto elems = h->elements()) {
    std::sort(elems->begin(), elems->end());
    for (const auto& x : *elems)
      if (auto r = test(x))
        return with_strategy(*r, kFinite);
    return TriBool::holds(kFinite, "every H-regular element is G-regular");
  }

  if (h->is_abelian() == Tri::True && kleppner_of_subgroup(h, sigma).is_holds())
    return TriBool::holds("abelian-kleppner", "only e is sigma-regular in H");

  // Short words in the generators of H.
  std::set<Element> ball{G->identity()};
  std::vector<Element> frontier{G->identity()};
  std::vector<Element> steps;
  for (const auto& x : h->generators()) {
    steps.push_back(x);
    steps.push_back(G->inv(x));
  }
  for (int len = 0; len < 4 && ball.size() < 4000; ++len) {
    std::vector<Element> next;
    for (const auto& w : frontier)
      for (const auto& s : steps) {
        Element y = G->mul(w, s);
        if (ball.insert(y).second)
          next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  for (const auto& x : ball)
    if (auto r = test(x))
      return with_strategy(*r, "word-search");
  return TriBool::unknown("word-search", "no counterexample among short words");
}

std::vector<Element> fc_sigma_elements(const SubgroupPtr& h, const CocyclePtr& sigma) {
  require_parent(h, sigma);
  std::vector<Element> out;
  for (const auto& g : h->parent()->elements()) {
    const auto cls = h_conjugacy_class(g, *h);
    if (cls.kind == Classification::Kind::Finite && is_sigma_regular(g, *h, *sigma).is_holds())
      out.push_back(g);
  }
  return out;
}

}  // namespace kleppner
