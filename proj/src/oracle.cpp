#include "kleppner/oracle.hpp"

#include <map>
#include <set>

namespace kleppner {

namespace {

Rational frac(const Rational& r) {
  const Integer n = boost::multiprecision::numerator(r), d = boost::multiprecision::denominator(r);
  return Rational(mod_floor(n, d), d);
}

std::size_t index_of(const Element& g) { return static_cast<std::size_t>(g.idx()); }

std::vector<std::size_t> indices(const std::vector<Element>& xs) {
  std::vector<std::size_t> out;
  for (const auto& x : xs)
    out.push_back(index_of(x));
  return out;
}

}  // namespace

RouteMismatch::RouteMismatch(std::size_t a, std::size_t b)
    : OracleError("oracle routes disagree: route A " + std::to_string(a) + ", route B " + std::to_string(b)),
      route_a(a),
      route_b(b) {}

Cyclotomic root_from_turns(const Rational& r) {
  const Rational f = frac(r);
  return Cyclotomic::root_of_unity(to_int64(Integer(boost::multiprecision::denominator(f))),
                                   to_int64(Integer(boost::multiprecision::numerator(f))));
}

RegularRep build_regular_rep(const CocyclePtr& sigma) {
  const GroupPtr& g = sigma->group();
  if (g->kind() != Group::Kind::FiniteTable)
    throw OracleError("the oracle needs a finite-table group, got " + g->name());
  const FiniteTable& t = g->table();
  if (t.order > kOracleOrderCap)
    throw OracleError("group order " + std::to_string(t.order) + " exceeds the oracle cap");
  if (!sigma->is_rational())
    throw OracleError("formal irrational phases are not representable in a finite table");

  RegularRep rep;
  rep.group_ = g;
  const std::size_t n = rep.n_ = t.order;
  rep.e_ = static_cast<std::size_t>(t.identity);
  rep.target_.assign(n * n, 0);
  rep.source_.assign(n * n, 0);
  rep.preimage_.assign(n * n, 0);
  rep.phase_.assign(n * n, Rational(0));
  std::vector<std::vector<Rational>> values(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t x = 0; x < n; ++x) {
      const auto ea = Element::index(static_cast<std::int64_t>(a)), ex = Element::index(static_cast<std::int64_t>(x));
      const Phase p = sigma->eval(ea, ex);
      if (p.has_irrational_part())
        throw OracleError("formal irrational phases are not representable in a finite table");
      values[a][x] = p.rational_part();
      const auto y = static_cast<std::size_t>(t.product(static_cast<std::int32_t>(a), static_cast<std::int32_t>(x)));
      rep.target_[a * n + x] = y;
      rep.phase_[a * n + x] = values[a][x];
      rep.source_[x * n + y] = a;
      rep.preimage_[a * n + y] = x;
    }

  // lambda(a) lambda(b) delta_x = sigma(b,x) sigma(a,bx) delta_{abx}
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ab = static_cast<std::size_t>(t.product(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)));
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t bx = rep.target(b, x);
        if (rep.target(a, bx) != rep.target(ab, x))
          throw OracleError("projective relation: supports differ");
        const Rational lhs = rep.phase(b, x) + rep.phase(a, bx);
        const Rational rhs = values[a][b] + rep.phase(ab, x);
        if (frac(lhs - rhs) != 0)
          throw OracleError("projective relation fails at (" + g->format(Element::index(static_cast<std::int64_t>(a))) +
                            ", " + g->format(Element::index(static_cast<std::int64_t>(b))) + ")");
      }
    }
  return rep;
}

Matrix<Cyclotomic> RegularRep::dense(std::size_t g) const {
  Matrix<Cyclotomic> m = Matrix<Cyclotomic>::Constant(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_),
                                                      Cyclotomic(0));
  for (std::size_t x = 0; x < n_; ++x)
    m(static_cast<Eigen::Index>(target(g, x)), static_cast<Eigen::Index>(x)) = root_from_turns(phase(g, x));
  return m;
}

Cyclotomic RegularRep::span_entry(const std::vector<Cyclotomic>& f, std::size_t row, std::size_t col) const {
  const std::size_t g = source(row, col);
  if (f[g].is_zero())
    return Cyclotomic(0);
  const Rational p = frac(phase(g, col));
  return f[g].times_root(to_int64(Integer(boost::multiprecision::denominator(p))),
                         to_int64(Integer(boost::multiprecision::numerator(p))));
}

Matrix<Cyclotomic> RegularRep::span_element(const std::vector<Cyclotomic>& f) const {
  Matrix<Cyclotomic> m(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = span_entry(f, r, c);
  return m;
}

bool check_conjugation(const RegularRep& rep, const Cocycle& sigma) {
  const Group& g = *rep.group();
  const std::size_t n = rep.order();
  for (std::size_t h = 0; h < n; ++h) {
    const Element eh = Element::index(static_cast<std::int64_t>(h));
    const std::size_t hinv = static_cast<std::size_t>(g.inv(eh).idx());
    for (std::size_t a = 0; a < n; ++a) {
      const Element ea = Element::index(static_cast<std::int64_t>(a));
      const std::size_t c = static_cast<std::size_t>(g.conj(eh, ea).idx());
      const Rational t = sigma.tilde(eh, ea).rational_part();
      // lambda(h)^* delta_x = conj(sigma(h, h^-1 x)) delta_{h^-1 x}
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t y = rep.target(hinv, x);
        const Rational star = -rep.phase(h, y);
        const std::size_t z = rep.target(a, y);
        const std::size_t w = rep.target(h, z);
        const Rational lhs = star + rep.phase(a, y) + rep.phase(h, z);
        if (w != rep.target(c, x) || frac(lhs - t - rep.phase(c, x)) != 0)
          return false;
      }
    }
  }
  return true;
}

CommutantSolution commutant_route_a(const RegularRep& rep, const Subgroup& h) {
  const std::size_t n = rep.order(), e = rep.identity();
  auto gens = indices(h.generators());
  SparseEliminator<Cyclotomic> elim(n);
  std::map<Rational, Cyclotomic> roots;
  auto root = [&](const Rational& r) -> const Cyclotomic& {
    const Rational f = frac(r);
    auto it = roots.find(f);
    if (it == roots.end())
      it = roots.emplace(f, root_from_turns(f)).first;
    return it->second;
  };
  // Column e of T lambda(h) - lambda(h) T vanishes; both terms lie in the span,
  // and a span element is determined by its column e.
  for (std::size_t hg : gens)
    for (std::size_t y = 0; y < n; ++y) {
      SparseEliminator<Cyclotomic>::Row row;
      // (T lambda(h))[y][e] = T[y][h e] * lambda(h)[h e][e]
      const std::size_t he = rep.target(hg, e);
      const std::size_t g1 = rep.source(y, he);
      row.emplace_back(g1, root(rep.phase(g1, he) + rep.phase(hg, e)));
      // (lambda(h) T)[y][e] = lambda(h)[y][z] T[z][e] with h z = y
      const std::size_t z = rep.preimage(hg, y);
      const std::size_t g2 = rep.source(z, e);
      row.emplace_back(g2, Cyclotomic(0) - root(rep.phase(hg, z) + rep.phase(g2, e)));
      elim.add_row(std::move(row));
    }

  CommutantSolution out;
  out.basis = elim.nullspace();
  out.dimension = out.basis.size();

  // Substitution over every entry.
  for (const auto& f : out.basis)
    for (std::size_t hg : gens)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const std::size_t hc = rep.target(hg, c);
          const Rational pc = frac(rep.phase(hg, c));
          const Cyclotomic left = rep.span_entry(f, r, hc).times_root(
              to_int64(Integer(boost::multiprecision::denominator(pc))), to_int64(Integer(boost::multiprecision::numerator(pc))));
          const std::size_t z = rep.preimage(hg, r);
          const Rational pz = frac(rep.phase(hg, z));
          const Cyclotomic right = rep.span_entry(f, z, c).times_root(
              to_int64(Integer(boost::multiprecision::denominator(pz))), to_int64(Integer(boost::multiprecision::numerator(pz))));
          if (left != right)
            throw OracleError("route A solution fails substitution");
        }
  return out;
}

std::size_t commutant_route_b(const Subgroup& h, const Cocycle& sigma) {
  const Group& g = *h.parent();
  const auto hs = *h.elements();
  std::set<Element> seen;
  std::size_t count = 0;
  for (const auto& x : g.elements()) {
    if (seen.count(x))
      continue;
    for (const auto& y : hs)
      seen.insert(g.mul(g.mul(y, x), g.inv(y)));
    bool regular = true;
    for (const auto& y : hs)
      if (g.commutes(x, y) && !(sigma.eval(x, y) == sigma.eval(y, x))) {
        regular = false;
        break;
      }
    if (regular)
      ++count;
  }
  return count;
}

OracleResult relative_commutant_dim(const RegularRep& rep, const Subgroup& h, const Cocycle& sigma) {
  if (h.parent() != rep.group() || sigma.group() != rep.group())
    throw OracleError("subgroup, cocycle and representation must share the group");
  OracleResult r;
  r.solution = commutant_route_a(rep, h);
  r.route_a = r.solution.dimension;
  r.route_b = commutant_route_b(h, sigma);
  if (r.route_a != r.route_b)
    throw RouteMismatch(r.route_a, r.route_b);
  return r;
}

OracleResult relative_commutant_dim(const SubgroupPtr& h, const CocyclePtr& sigma) {
  return relative_commutant_dim(build_regular_rep(sigma), *h, *sigma);
}

OracleResult center_dim(const CocyclePtr& sigma) {
  return relative_commutant_dim(Subgroup::full(sigma->group()), sigma);
}

Cyclotomic canonical_trace(const RegularRep& rep, const Matrix<Cyclotomic>& t) {
  const auto e = static_cast<Eigen::Index>(rep.identity());
  return t(e, e);
}

Cyclotomic normalized_trace(const Matrix<Cyclotomic>& t) {
  Cyclotomic s(0);
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    s += t(i, i);
  return s / Cyclotomic(Rational(t.rows()));
}

}  // namespace kleppner
