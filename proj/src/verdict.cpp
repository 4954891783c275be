#include "kleppner/verdict.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace kleppner {

namespace {

bool trivially_generated(const Subgroup& s) {
  if (s.is_trivial())
    return true;
  if (auto e = s.elements())
    return e->size() == 1;
  const auto gens = s.generators();
  return std::all_of(gens.begin(), gens.end(), [&](const Element& x) { return s.parent()->is_identity(x); });
}

bool untwisted(const Cocycle& s) {
  switch (s.kind()) {
    case Cocycle::Kind::Trivial:
      return true;
    case Cocycle::Kind::Similarity:
    case Cocycle::Kind::Restriction:
    case Cocycle::Kind::Pullback:
      return untwisted(*s.base());
    case Cocycle::Kind::Bicharacter:
      for (const auto& row : s.matrix())
        for (const auto& x : row)
          if (!x.is_zero())
            return false;
      return true;
    case Cocycle::Kind::FiniteTablePhase:
      for (const auto& p : s.tabulate())
        if (!p.is_one())
          return false;
      return true;
    default:
      return false;
  }
}

// Kernel facts computed at most once per verdict.
class Facts {
public:
  Facts(SubgroupPtr h, CocyclePtr sigma) : h_(std::move(h)), sigma_(std::move(sigma)) {}

  const TriBool& kleppner() {
    if (!kleppner_)
      kleppner_ = kleppner_of_subgroup(h_, sigma_);
    return *kleppner_;
  }
  const TriBool& relative() {
    if (!relative_)
      relative_ = relative_kleppner(h_, sigma_);
    return *relative_;
  }
  const TriBool& sigma_centralizer_trivial() {
    if (!sigma_c_)
      sigma_c_ = sigma_centralizer(h_, sigma_).is_trivial;
    return *sigma_c_;
  }
  const Verdict& simple() {
    if (!simple_)
      simple_ = twisted_simplicity(h_, sigma_);
    return *simple_;
  }
  Tri centralizer_trivial(std::vector<Element>* witness = nullptr) {
    const auto c = centralizer_of_subgroup(h_);
    if (!c)
      return Tri::Unknown;
    if (trivially_generated(**c))
      return Tri::True;
    if (witness) {
      auto gens = (*c)->generators();
      std::sort(gens.begin(), gens.end());
      for (const auto& x : gens)
        if (!h_->parent()->is_identity(x)) {
          *witness = {x};
          break;
        }
    }
    return Tri::False;
  }

private:
  SubgroupPtr h_;
  CocyclePtr sigma_;
  std::optional<TriBool> kleppner_, relative_, sigma_c_;
  std::optional<Verdict> simple_;
};

Conclusion from_truth(Truth t) {
  switch (t) {
    case Truth::Holds:
      return Conclusion::Holds;
    case Truth::Fails:
      return Conclusion::Fails;
    default:
      return Conclusion::Inconclusive;
  }
}

Verdict closed(std::string rule, std::vector<Premise> premises, Conclusion c, std::vector<Element> witness = {}) {
  Verdict v;
  v.conclusion = c;
  v.chain.push_back(Step{std::move(rule), std::move(premises)});
  v.witness = std::move(witness);
  return v;
}

Premise p(Fact f, Tri t) { return {f, to_string(t)}; }
Premise p(Fact f, Truth t) { return {f, to_string(t)}; }
Premise p(Fact f, Conclusion c) { return {f, to_string(c)}; }

std::string key(const IntMatrix& m) {
  std::string s;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      s += m(i, j).str() + ",";
  return s;
}

IntMatrix lattice_basis(const Subgroup& s) {
  const auto gens = s.generators();
  const auto n = static_cast<Eigen::Index>(s.parent()->rank());
  IntMatrix m(n, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      m(i, static_cast<Eigen::Index>(j)) = gens[j].coords()[static_cast<std::size_t>(i)];
  return hermite_form(m).basis;
}

IntMatrix append(const IntMatrix& a, const IntVector& v) {
  IntMatrix out(a.rows(), a.cols() + 1);
  out.leftCols(a.cols()) = a;
  out.col(a.cols()) = v;
  return out;
}

void finite_quotient(const SubgroupPtr& h, IntermediateLattice& out) {
  const GroupPtr& G = h->parent();
  const auto elems = G->elements();
  std::set<std::vector<Element>> seen{*h->elements()};
  std::vector<SubgroupPtr> queue{h};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto cur = *queue[i]->elements();
    for (const auto& g : elems) {
      if (std::binary_search(cur.begin(), cur.end(), g))
        continue;
      auto gens = queue[i]->generators();
      gens.push_back(g);
      auto next = Subgroup::generated(G, gens);
      if (seen.insert(*next->elements()).second)
        queue.push_back(next);
    }
  }
  std::sort(queue.begin(), queue.end(), [](const SubgroupPtr& a, const SubgroupPtr& b) {
    const auto ea = *a->elements(), eb = *b->elements();
    return ea.size() != eb.size() ? ea.size() < eb.size() : ea < eb;
  });
  out.kind = IntermediateLattice::Kind::Complete;
  out.shape = "finite-quotient";
  out.members = std::move(queue);
}

void lattice_quotient(const SubgroupPtr& h, IntermediateLattice& out) {
  const GroupPtr& G = h->parent();
  const IntMatrix base = lattice_basis(*h);
  const auto n = base.rows();
  // Coset representatives of Z^n / H: 0 <= x_i < pivot_i of the triangular basis.
  std::vector<IntVector> reps{IntVector::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Integer d = base(i, i);
    std::vector<IntVector> next;
    for (const auto& r : reps)
      for (Integer k = 0; k < d; ++k) {
        IntVector x = r;
        x(i) = k;
        next.push_back(x);
      }
    reps = std::move(next);
  }
  std::map<std::string, IntMatrix> seen{{key(base), base}};
  std::vector<IntMatrix> queue{base};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& r : reps) {
      IntMatrix next = hermite_form(append(queue[i], r)).basis;
      if (seen.emplace(key(next), next).second)
        queue.push_back(next);
    }
  std::vector<std::pair<Integer, IntMatrix>> sorted;
  for (const auto& m : queue) {
    Integer det = 1;
    for (Eigen::Index i = 0; i < n; ++i)
      det *= m(i, i);
    sorted.emplace_back(det, m);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  out.kind = IntermediateLattice::Kind::Complete;
  out.shape = "finite-index-lattice";
  for (const auto& [det, m] : sorted)
    out.members.push_back(Subgroup::lattice(G, m));
}

}  // namespace

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::Holds:
      return "Holds";
    case Conclusion::Fails:
      return "Fails";
    case Conclusion::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::string fact_name(Fact f) {
  switch (f) {
    case Fact::GroupFinite:
      return "finite(G)";
    case Fact::Normal:
      return "normal(H)";
    case Fact::FcHypercentral:
      return "fc-hypercentral(H)";
    case Fact::CstarSimple:
      return "cstar-simple(H)";
    case Fact::Prime:
      return "prime(H)";
    case Fact::Untwisted:
      return "untwisted(sigma)";
    case Fact::Kleppner:
      return "kleppner(H,sigma)";
    case Fact::RelativeKleppner:
      return "relative-kleppner(H,G,sigma)";
    case Fact::SigmaCentralizerTrivial:
      return "sigma-centralizer-trivial(H,G,sigma)";
    case Fact::CentralizerTrivial:
      return "centralizer-trivial(H,G)";
    case Fact::TwistedSimple:
      return "twisted-simple(H,sigma)";
  }
  return "unknown";
}

std::string evaluate_fact(Fact f, const SubgroupPtr& h, const CocyclePtr& sigma) {
  Facts facts(h, sigma);
  switch (f) {
    case Fact::GroupFinite:
      return to_string(tri(h->parent()->is_finite()));
    case Fact::Normal:
      return to_string(h->is_normal());
    case Fact::FcHypercentral:
      return to_string(h->is_fc_hypercentral());
    case Fact::CstarSimple:
      return to_string(h->is_cstar_simple());
    case Fact::Prime:
      return to_string(h->is_prime());
    case Fact::Untwisted:
      return to_string(untwisted(*sigma) ? Tri::True : Tri::Unknown);
    case Fact::Kleppner:
      return to_string(facts.kleppner().value);
    case Fact::RelativeKleppner:
      return to_string(facts.relative().value);
    case Fact::SigmaCentralizerTrivial:
      return to_string(facts.sigma_centralizer_trivial().value);
    case Fact::CentralizerTrivial:
      return to_string(facts.centralizer_trivial());
    case Fact::TwistedSimple:
      return to_string(facts.simple().conclusion);
  }
  return "Unknown";
}

Verdict twisted_simplicity(const SubgroupPtr& h, const CocyclePtr& sigma) {
  Facts facts(h, sigma);
  const Tri fc = h->is_fc_hypercentral();
  if (fc == Tri::True) {
    const TriBool& k = facts.kleppner();
    if (!k.is_unknown())
      return closed("fc-hypercentral-simplicity", {p(Fact::FcHypercentral, fc), p(Fact::Kleppner, k.value)},
                    from_truth(k.value), k.witness);
  }
  const Tri cs = h->is_cstar_simple();
  if (cs == Tri::True)
    return closed("untwisted-simple", {p(Fact::CstarSimple, cs)}, Conclusion::Holds);
  const TriBool& k = facts.kleppner();
  if (k.is_fails())
    return closed("kleppner-necessary", {p(Fact::Kleppner, k.value)}, Conclusion::Fails, k.witness);

  Verdict v;
  v.chain.push_back(Step{"undecided", {p(Fact::FcHypercentral, fc), p(Fact::CstarSimple, cs), p(Fact::Kleppner, k.value)}});
  v.missing = k.is_unknown() ? fact_name(Fact::Kleppner) : fact_name(Fact::CstarSimple);
  return v;
}

Verdict twisted_simplicity(const CocyclePtr& sigma) { return twisted_simplicity(Subgroup::full(sigma->group()), sigma); }

Verdict cstar_irreducible(const SubgroupPtr& h, const CocyclePtr& sigma) {
  Facts facts(h, sigma);
  const Tri finite = tri(h->parent()->is_finite());
  if (finite == Tri::True) {
    const TriBool& r = facts.relative();
    return closed("commutant-dimension", {p(Fact::GroupFinite, finite), p(Fact::RelativeKleppner, r.value)},
                  from_truth(r.value), r.witness);
  }

  const Tri normal = h->is_normal();
  const Premise pn = p(Fact::Normal, normal);
  if (normal != Tri::True) {
    Verdict v;
    v.chain.push_back(Step{"normality-required", {pn}});
    v.missing = fact_name(Fact::Normal);
    v.note = "for a non-normal subgroup the relative Kleppner condition does not characterize irreducibility";
    return v;
  }

  const Tri cs = h->is_cstar_simple();
  if (cs == Tri::True) {
    const TriBool& s = facts.sigma_centralizer_trivial();
    if (!s.is_unknown())
      return closed("twisted-centralizer", {pn, p(Fact::CstarSimple, cs), p(Fact::SigmaCentralizerTrivial, s.value)},
                    from_truth(s.value), s.witness);
  }

  const Tri fc = h->is_fc_hypercentral();
  if (fc == Tri::True || cs == Tri::True) {
    const TriBool& r = facts.relative();
    if (!r.is_unknown()) {
      const Premise hyp = fc == Tri::True ? p(Fact::FcHypercentral, fc) : p(Fact::CstarSimple, cs);
      return closed("fc-or-simple-normal", {pn, hyp, p(Fact::RelativeKleppner, r.value)}, from_truth(r.value), r.witness);
    }
  }

  const Tri prime = h->is_prime();
  if (prime == Tri::True) {
    const Verdict& ts = facts.simple();
    const TriBool& s = facts.sigma_centralizer_trivial();
    const std::vector<Premise> ps{pn, p(Fact::Prime, prime), p(Fact::TwistedSimple, ts.conclusion),
                                  p(Fact::SigmaCentralizerTrivial, s.value)};
    if (ts.conclusion == Conclusion::Fails)
      return closed("prime-irreducibility", ps, Conclusion::Fails, ts.witness);
    if (s.is_fails())
      return closed("prime-irreducibility", ps, Conclusion::Fails, s.witness);
    if (ts.conclusion == Conclusion::Holds && s.is_holds())
      return closed("prime-irreducibility", ps, Conclusion::Holds);
  }

  std::vector<Element> cwit;
  const Tri ct = facts.centralizer_trivial(&cwit);
  const Tri tw = untwisted(*sigma) ? Tri::True : Tri::Unknown;
  if (tw == Tri::True && cs != Tri::Unknown && ct != Tri::Unknown) {
    const bool holds = cs == Tri::True && ct == Tri::True;
    return closed("untwisted-centralizer",
                  {pn, p(Fact::Untwisted, tw), p(Fact::CstarSimple, cs), p(Fact::CentralizerTrivial, ct)},
                  holds ? Conclusion::Holds : Conclusion::Fails, ct == Tri::False ? cwit : std::vector<Element>{});
  }
  if (cs == Tri::True && ct == Tri::True)
    return closed("untwisted-implies-twisted", {pn, p(Fact::CstarSimple, cs), p(Fact::CentralizerTrivial, ct)},
                  Conclusion::Holds);

  const Verdict& ts = facts.simple();
  const TriBool& r = facts.relative();
  const std::vector<Premise> ps{pn, p(Fact::TwistedSimple, ts.conclusion), p(Fact::RelativeKleppner, r.value)};
  if (ts.conclusion == Conclusion::Fails)
    return closed("relative-simplicity", ps, Conclusion::Fails, ts.witness);
  if (r.is_fails())
    return closed("relative-simplicity", ps, Conclusion::Fails, r.witness);
  if (ts.conclusion == Conclusion::Holds && r.is_holds())
    return closed("relative-simplicity", ps, Conclusion::Holds);

  Verdict v;
  v.chain.push_back(Step{"undecided", ps});
  v.missing = ts.conclusion == Conclusion::Inconclusive ? fact_name(Fact::TwistedSimple) : fact_name(Fact::RelativeKleppner);
  return v;
}

bool replay(const Verdict& v, const SubgroupPtr& h, const CocyclePtr& sigma,
            Verdict (*rule)(const SubgroupPtr&, const CocyclePtr&)) {
  for (const auto& step : v.chain)
    for (const auto& premise : step.premises)
      if (evaluate_fact(premise.fact, h, sigma) != premise.value)
        return false;
  const Verdict again = rule(h, sigma);
  return again.conclusion == v.conclusion && again.witness == v.witness;
}

IntermediateLattice intermediate_lattice(const SubgroupPtr& h, const CocyclePtr& sigma, int truncate) {
  IntermediateLattice out;
  const Verdict v = cstar_irreducible(h, sigma);
  if (v.conclusion != Conclusion::Holds) {
    out.note = "the inclusion is not known to be C*-irreducible (" + to_string(v.conclusion) + ")";
    return out;
  }
  const GroupPtr& G = h->parent();
  if (G->is_finite()) {
    finite_quotient(h, out);
    return out;
  }

  const SubgroupIndex idx = h->index();
  if (G->kind() == Group::Kind::FreeAbelian) {
    const IntMatrix base = lattice_basis(*h);
    if (idx.is_finite()) {
      if (idx.value > Integer(kLatticeIndexCap)) {
        out.note = "index " + idx.value.str() + " exceeds the enumeration cap";
        return out;
      }
      lattice_quotient(h, out);
      return out;
    }
    if (base.cols() + 1 == base.rows()) {
      // Rank n-1: the quotient is Z when H is saturated.
      const IntMatrix normal = integer_kernel(IntMatrix(base.transpose()));
      const IntMatrix w = normal.col(0).transpose();
      const IntMatrix saturation = hermite_form(integer_kernel(w)).basis;
      if (key(saturation) == key(base)) {
        const HermiteForm hw = hermite_form(w);
        IntVector u = hw.transform.col(0);
        if (hw.basis(0, 0) < 0)
          u = -u;
        out.kind = IntermediateLattice::Kind::Truncated;
        out.shape = "z-graded";
        for (int n = 0; n <= truncate; ++n)
          out.members.push_back(Subgroup::lattice(G, append(base, Integer(n) * u)));
        out.note = "one intermediate group H + nZ u for every n >= 0; listed up to n = " + std::to_string(truncate);
        return out;
      }
    }
  }
  if (G->kind() == Group::Kind::Heisenberg) {
    const auto box = h->as_box();
    if (box && (*box)[0] == 0 && (*box)[1] == 1 && (*box)[2] == 1) {
      out.kind = IntermediateLattice::Kind::Truncated;
      out.shape = "z-graded";
      for (int n = 0; n <= truncate; ++n)
        out.members.push_back(Subgroup::heisenberg_box(G, n, 1, 1));
      out.note = "Gamma_n = {(n a1, a2, a3)} for every n >= 0; listed up to n = " + std::to_string(truncate);
      return out;
    }
  }
  if (G->kind() == Group::Kind::DirectProduct && h->kind() == Subgroup::Kind::Product) {
    // H = A x B with A the whole first (or second) factor: Gamma = A x Gamma_2.
    for (int i = 0; i < 2; ++i) {
      const SubgroupPtr& full = h->factor(i);
      const SubgroupPtr& rest = h->factor(1 - i);
      if (!full->is_full() || !rest->parent()->is_finite())
        continue;
      IntermediateLattice inner;
      finite_quotient(rest, inner);
      out.kind = inner.kind;
      out.shape = inner.shape;
      for (const auto& m : inner.members)
        out.members.push_back(i == 0 ? Subgroup::product(G, full, m) : Subgroup::product(G, m, full));
      return out;
    }
  }
  out.note = "quotient shape not recognized";
  return out;
}

}  // namespace kleppner
