#include "kleppner/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace kleppner {

std::string SubgroupIndex::str() const {
  switch (kind) {
    case Kind::Finite:
      return value.str();
    case Kind::Infinite:
      return "infinite";
    default:
      return "unknown";
  }
}

// ---------------------------------------------------------------------------
// Stallings folding

namespace {

struct UnionFind {
  std::vector<std::size_t> p;
  std::size_t add() {
    p.push_back(p.size());
    return p.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (p[x] != x)
      x = p[x] = p[p[x]];
    return x;
  }
  // keeps the smaller representative so the base vertex stays 0
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (b < a)
      std::swap(a, b);
    p[b] = a;
    return true;
  }
};

std::vector<std::int64_t> inverse_word(const std::vector<std::int64_t>& w) {
  std::vector<std::int64_t> r(w.rbegin(), w.rend());
  for (auto& x : r)
    x = -x;
  return r;
}

std::vector<std::int64_t> concat(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return free_reduce(a);
}

}  // namespace

StallingsGraph::StallingsGraph(int rank, const std::vector<std::vector<std::int64_t>>& words) : rank_(rank) {
  UnionFind uf;
  uf.add();  // base
  struct Edge {
    std::size_t u;
    std::int64_t letter;  // positive
    std::size_t v;
  };
  std::vector<Edge> edges;
  for (const auto& raw : words) {
    const auto w = free_reduce(raw);
    if (w.empty())
      continue;
    std::size_t cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t next = i + 1 == w.size() ? 0 : uf.add();
      if (w[i] > 0)
        edges.push_back({cur, w[i], next});
      else
        edges.push_back({next, -w[i], cur});
      cur = next;
    }
  }
  // Fold until every vertex has at most one edge per label and direction.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<std::size_t, std::int64_t>, std::size_t> seen;
    for (const auto& e : edges) {
      const std::size_t u = uf.find(e.u), v = uf.find(e.v);
      auto [it, fresh] = seen.emplace(std::make_pair(u, e.letter), v);
      if (!fresh && uf.find(it->second) != v) {
        uf.unite(it->second, v);
        changed = true;
        break;
      }
      auto [it2, fresh2] = seen.emplace(std::make_pair(v, -e.letter), u);
      if (!fresh2 && uf.find(it2->second) != u) {
        uf.unite(it2->second, u);
        changed = true;
        break;
      }
    }
  }
  std::map<std::size_t, std::size_t> number;
  for (std::size_t x = 0; x < uf.p.size(); ++x) {
    const std::size_t r = uf.find(x);
    if (!number.count(r))
      number.emplace(r, number.size());
  }
  out_.assign(number.size(), std::vector<std::int64_t>(2 * static_cast<std::size_t>(rank_), -1));
  for (const auto& e : edges) {
    const auto u = number.at(uf.find(e.u)), v = number.at(uf.find(e.v));
    out_[u][slot(e.letter)] = static_cast<std::int64_t>(v);
    out_[v][slot(-e.letter)] = static_cast<std::int64_t>(u);
  }
}

std::size_t StallingsGraph::edges() const {
  std::size_t n = 0;
  for (const auto& row : out_)
    for (int i = 0; i < rank_; ++i)
      if (row[static_cast<std::size_t>(i)] >= 0)
        ++n;
  return n;
}

bool StallingsGraph::complete() const {
  for (const auto& row : out_)
    for (auto t : row)
      if (t < 0)
        return false;
  return true;
}

std::optional<std::size_t> StallingsGraph::read(std::size_t v, const std::vector<std::int64_t>& word) const {
  for (auto x : word) {
    const auto t = out_[v][slot(x)];
    if (t < 0)
      return std::nullopt;
    v = static_cast<std::size_t>(t);
  }
  return v;
}

bool StallingsGraph::accepts(const std::vector<std::int64_t>& word) const {
  auto end = read(0, free_reduce(word));
  return end && *end == 0;
}

std::vector<std::vector<std::int64_t>> StallingsGraph::basis() const {
  const std::size_t n = out_.size();
  std::vector<std::optional<std::vector<std::int64_t>>> path(n);
  std::set<std::tuple<std::size_t, std::int64_t, std::size_t>> tree;
  path[0] = std::vector<std::int64_t>{};
  std::deque<std::size_t> q{0};
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::int64_t l = -rank_; l <= rank_; ++l) {
      if (l == 0)
        continue;
      const auto t = out_[u][slot(l)];
      if (t < 0 || path[static_cast<std::size_t>(t)])
        continue;
      const auto v = static_cast<std::size_t>(t);
      auto p = *path[u];
      p.push_back(l);
      path[v] = p;
      tree.insert(l > 0 ? std::make_tuple(u, l, v) : std::make_tuple(v, -l, u));
      q.push_back(v);
    }
  }
  std::vector<std::vector<std::int64_t>> out;
  for (std::size_t u = 0; u < n; ++u)
    for (std::int64_t l = 1; l <= rank_; ++l) {
      const auto t = out_[u][slot(l)];
      if (t < 0)
        continue;
      const auto v = static_cast<std::size_t>(t);
      if (tree.count({u, l, v}))
        continue;
      auto w = *path[u];
      w.push_back(l);
      out.push_back(concat(w, inverse_word(*path[v])));
    }
  return out;
}

bool StallingsGraph::vertex_transitive() const {
  const std::size_t n = out_.size();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::int64_t> phi(n, -1);
    std::vector<bool> used(n, false);
    phi[0] = static_cast<std::int64_t>(s);
    used[s] = true;
    std::deque<std::size_t> q{0};
    bool ok = true;
    while (!q.empty() && ok) {
      const std::size_t u = q.front();
      q.pop_front();
      const auto fu = static_cast<std::size_t>(phi[u]);
      for (std::size_t k = 0; k < out_[u].size() && ok; ++k) {
        const auto t = out_[u][k], ft = out_[fu][k];
        if ((t < 0) != (ft < 0)) {
          ok = false;
        } else if (t >= 0) {
          const auto tv = static_cast<std::size_t>(t);
          if (phi[tv] < 0) {
            if (used[static_cast<std::size_t>(ft)]) {
              ok = false;
            } else {
              phi[tv] = ft;
              used[static_cast<std::size_t>(ft)] = true;
              q.push_back(tv);
            }
          } else if (phi[tv] != ft) {
            ok = false;
          }
        }
      }
    }
    if (!ok)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Heisenberg chart

IntVector heisenberg_chart(const Element& g) {
  const auto& a = g.coords();
  IntVector v(3);
  v(0) = a[0];
  v(1) = a[1];
  v(2) = Integer(2) * a[2] - Integer(a[0]) * a[1];
  return v;
}

Element heisenberg_unchart(const IntVector& v) {
  const Integer twice = v(2) + v(0) * v(1);
  if (twice % 2 != 0)
    throw GroupError("vector outside the Heisenberg chart image");
  return Element::vector({to_int64(v(0)), to_int64(v(1)), to_int64(twice / 2)});
}

// ---------------------------------------------------------------------------
// Construction

namespace {

IntMatrix columns_of(const std::vector<Element>& gens, std::size_t dim) {
  IntMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gens[j].coords()[i];
  return m;
}

std::vector<Element> closure(const Group& g, const std::vector<Element>& gens) {
  std::set<Element> seen{g.identity()};
  std::deque<Element> q{g.identity()};
  while (!q.empty()) {
    const Element x = q.front();
    q.pop_front();
    for (const auto& s : gens) {
      Element y = g.mul(x, s);
      if (seen.insert(y).second)
        q.push_back(std::move(y));
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<Element> small_generating_set(const Group& g, const std::vector<Element>& elements) {
  std::vector<Element> gens;
  std::set<Element> span{g.identity()};
  for (const auto& x : elements) {
    if (span.count(x))
      continue;
    gens.push_back(x);
    auto c = closure(g, gens);
    span = std::set<Element>(c.begin(), c.end());
  }
  return gens;
}

Element product_of_powers(const Group& g, const std::vector<Element>& gens, const IntVector& e) {
  Element x = g.identity();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto k = to_int64(e(static_cast<Eigen::Index>(i)));
    if (k != 0)
      x = g.mul(x, g.pow(gens[i], k));
  }
  return x;
}

bool pairwise_commute(const Group& g, const std::vector<Element>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!g.commutes(gens[i], gens[j]))
        return false;
  return true;
}

}  // namespace

SubgroupPtr Subgroup::full(GroupPtr g) {
  auto s = std::shared_ptr<Subgroup>(new Subgroup(std::move(g), Kind::Full));
  s->gens_ = s->parent_->generators();
  return s;
}

SubgroupPtr Subgroup::trivial(GroupPtr g) { return std::shared_ptr<Subgroup>(new Subgroup(std::move(g), Kind::Trivial)); }

SubgroupPtr Subgroup::finite(GroupPtr g, std::vector<Element> elements) {
  for (const auto& x : elements)
    g->check(x);
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  const std::set<Element> set(elements.begin(), elements.end());
  if (!set.count(g->identity()))
    throw GroupError("subgroup list must contain the identity");
  for (const auto& a : elements) {
    if (!set.count(g->inv(a)))
      throw GroupError("subgroup list is not closed under inverses");
    for (const auto& b : elements)
      if (!set.count(g->mul(a, b)))
        throw GroupError("subgroup list is not closed under products");
  }
  if (elements.size() == 1)
    return trivial(g);
  if (g->is_finite() && static_cast<std::int64_t>(elements.size()) == *g->order())
    return full(g);
  auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::Finite));
  s->gens_ = small_generating_set(*g, elements);
  s->elements_ = std::move(elements);
  return s;
}

SubgroupPtr Subgroup::lattice(GroupPtr g, const IntMatrix& columns) {
  if (g->kind() != Group::Kind::FreeAbelian)
    throw GroupError("sublattices need a free abelian parent");
  if (columns.rows() != g->rank())
    throw GroupError("sublattice matrix has the wrong number of rows");
  auto hf = hermite_form(columns);
  if (hf.rank() == 0)
    return trivial(g);
  auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::Lattice));
  for (Eigen::Index j = 0; j < hf.basis.cols(); ++j) {
    std::vector<std::int64_t> v;
    for (Eigen::Index i = 0; i < hf.basis.rows(); ++i)
      v.push_back(to_int64(hf.basis(i, j)));
    s->gens_.push_back(Element::vector(std::move(v)));
  }
  s->hnf_ = std::move(hf);
  return s;
}

SubgroupPtr Subgroup::heisenberg_box(GroupPtr g, std::int64_t d1, std::int64_t d2, std::int64_t d3) {
  if (g->kind() != Group::Kind::Heisenberg)
    throw GroupError("box subgroups need the Heisenberg parent");
  d1 = d1 < 0 ? -d1 : d1;
  d2 = d2 < 0 ? -d2 : d2;
  d3 = d3 < 0 ? -d3 : d3;
  const std::int64_t prod = checked_mul(d1, d2);
  if (prod != 0 && (d3 == 0 || prod % d3 != 0))
    throw GroupError("box(" + std::to_string(d1) + "," + std::to_string(d2) + "," + std::to_string(d3) +
                     ") is not a subgroup: the third step must divide the product of the first two");
  std::vector<Element> gens;
  if (d1)
    gens.push_back(Element::vector({d1, 0, 0}));
  if (d2)
    gens.push_back(Element::vector({0, d2, 0}));
  if (d3)
    gens.push_back(Element::vector({0, 0, d3}));
  return generated(g, gens);
}

SubgroupPtr Subgroup::product(GroupPtr g, SubgroupPtr a, SubgroupPtr b) {
  if (g->kind() != Group::Kind::DirectProduct)
    throw GroupError("product subgroups need a direct product parent");
  if (a->parent() != g->factor(0) || b->parent() != g->factor(1))
    throw GroupError("product subgroup factors belong to other groups");
  if (a->is_trivial() && b->is_trivial())
    return trivial(g);
  if (a->is_full() && b->is_full())
    return full(g);
  auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::Product));
  for (const auto& x : a->generators())
    s->gens_.push_back(Element::pair(x, g->factor(1)->identity()));
  for (const auto& y : b->generators())
    s->gens_.push_back(Element::pair(g->factor(0)->identity(), y));
  s->left_ = std::move(a);
  s->right_ = std::move(b);
  return s;
}

SubgroupPtr Subgroup::heisenberg_from(GroupPtr g, const std::vector<Element>& gens) {
  if (pairwise_commute(*g, gens)) {
    IntMatrix chart(3, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j)
      chart.col(static_cast<Eigen::Index>(j)) = heisenberg_chart(gens[j]);
    auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::HeisenbergAbelian));
    s->hnf_ = hermite_form(chart);
    for (Eigen::Index j = 0; j < s->hnf_.basis.cols(); ++j)
      s->gens_.push_back(heisenberg_unchart(s->hnf_.basis.col(j)));
    return s;
  }
  IntMatrix proj(2, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) {
    proj(0, static_cast<Eigen::Index>(j)) = gens[j].coords()[0];
    proj(1, static_cast<Eigen::Index>(j)) = gens[j].coords()[1];
  }
  auto hf = hermite_form(proj);
  // nonabelian, so the projection has rank 2
  Integer step = 0;
  for (Eigen::Index k = 2; k < hf.transform.cols(); ++k)
    step = gcd(step, Integer(product_of_powers(*g, gens, hf.transform.col(k)).coords()[2]));
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const auto& a = gens[i].coords();
      const auto& b = gens[j].coords();
      step = gcd(step, Integer(a[0]) * b[1] - Integer(a[1]) * b[0]);
    }
  if (step == 1 && hf.basis(0, 0) == 1 && hf.basis(1, 1) == 1)
    return full(g);
  auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::Heisenberg));
  s->center_step_ = step;
  for (Eigen::Index j = 0; j < 2; ++j) {
    Element l = product_of_powers(*g, gens, hf.transform.col(j));
    auto c = l.coords();
    c[2] = to_int64(mod_floor(Integer(c[2]), step));
    s->lifts_.push_back(Element::vector(c));
  }
  s->hnf_ = std::move(hf);
  s->gens_ = s->lifts_;
  s->gens_.push_back(Element::vector({0, 0, to_int64(step)}));
  return s;
}

SubgroupPtr Subgroup::generated(GroupPtr g, std::vector<Element> gens) {
  std::vector<Element> nontrivial;
  for (auto& x : gens) {
    g->check(x);
    if (!g->is_identity(x))
      nontrivial.push_back(std::move(x));
  }
  if (nontrivial.empty())
    return trivial(g);
  if (g->is_finite())
    return finite(g, closure(*g, nontrivial));
  switch (g->kind()) {
    case Group::Kind::FreeAbelian:
      return lattice(g, columns_of(nontrivial, static_cast<std::size_t>(g->rank())));
    case Group::Kind::Heisenberg:
      return heisenberg_from(g, nontrivial);
    case Group::Kind::Free: {
      std::vector<std::vector<std::int64_t>> words;
      for (const auto& x : nontrivial)
        words.push_back(x.letters());
      auto graph = std::make_shared<const StallingsGraph>(g->rank(), words);
      if (graph->subgroup_rank() == 0)
        return trivial(g);
      if (graph->complete() && graph->vertices() == 1)
        return full(g);
      auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::FreeGenerated));
      for (auto& w : graph->basis())
        s->gens_.push_back(Element::word(std::move(w)));
      s->graph_ = std::move(graph);
      return s;
    }
    case Group::Kind::DirectProduct: {
      std::vector<Element> left, right;
      bool split = true;
      for (const auto& x : nontrivial) {
        if (g->factor(1)->is_identity(x.second()))
          left.push_back(x.first());
        else if (g->factor(0)->is_identity(x.first()))
          right.push_back(x.second());
        else
          split = false;
      }
      if (split)
        return product(g, generated(g->factor(0), left), generated(g->factor(1), right));
      auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::Generated));
      s->gens_ = std::move(nontrivial);
      return s;
    }
    default:
      break;
  }
  auto s = std::shared_ptr<Subgroup>(new Subgroup(g, Kind::Generated));
  s->gens_ = std::move(nontrivial);
  return s;
}

SubgroupPtr Subgroup::coordinate(GroupPtr g, const std::vector<int>& zero) {
  auto fixed = [&](int i) { return std::find(zero.begin(), zero.end(), i) != zero.end(); };
  for (int i : zero)
    if (i < 0)
      throw GroupError("negative coordinate index");
  if (g->kind() == Group::Kind::Heisenberg) {
    for (int i : zero)
      if (i > 2)
        throw GroupError("Heisenberg coordinates are 0, 1, 2");
    return heisenberg_box(g, fixed(0) ? 0 : 1, fixed(1) ? 0 : 1, fixed(2) ? 0 : 1);
  }
  if (g->kind() == Group::Kind::DirectProduct) {
    for (int i : zero)
      if (i > 1)
        throw GroupError("direct product factors are 0 and 1");
    auto side = [&](int i) {
      return fixed(i) ? trivial(g->factor(i)) : full(g->factor(i));
    };
    return product(g, side(0), side(1));
  }
  if (g->kind() == Group::Kind::FreeAbelian) {
    const int n = g->rank();
    std::vector<int> kept;
    for (int i = 0; i < n; ++i)
      if (!fixed(i))
        kept.push_back(i);
    for (int i : zero)
      if (i >= n)
        throw GroupError("coordinate index out of range");
    IntMatrix cols = IntMatrix::Zero(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j)
      cols(kept[j], static_cast<Eigen::Index>(j)) = 1;
    return lattice(g, cols);
  }
  throw GroupError("coordinate subgroups need a free abelian, Heisenberg or direct product parent");
}

// ---------------------------------------------------------------------------
// Queries

std::optional<Element> Subgroup::heis_lift(const Element& g) const {
  IntVector p(2);
  p(0) = g.coords()[0];
  p(1) = g.coords()[1];
  auto c = lattice_coordinates(hnf_, p);
  if (!c)
    return std::nullopt;
  const Group& G = *parent_;
  return G.mul(G.pow(lifts_[0], to_int64((*c)(0))), G.pow(lifts_[1], to_int64((*c)(1))));
}

Tri Subgroup::contains(const Element& g) const {
  if (!parent_->is_element(g))
    return Tri::False;
  switch (kind_) {
    case Kind::Full:
      return Tri::True;
    case Kind::Trivial:
      return tri(parent_->is_identity(g));
    case Kind::Finite:
      return tri(std::binary_search(elements_.begin(), elements_.end(), g));
    case Kind::Lattice: {
      IntVector v(static_cast<Eigen::Index>(g.coords().size()));
      for (std::size_t i = 0; i < g.coords().size(); ++i)
        v(static_cast<Eigen::Index>(i)) = g.coords()[i];
      return tri(lattice_coordinates(hnf_, v).has_value());
    }
    case Kind::HeisenbergAbelian:
      return tri(lattice_coordinates(hnf_, heisenberg_chart(g)).has_value());
    case Kind::Heisenberg: {
      auto l = heis_lift(g);
      if (!l)
        return Tri::False;
      return tri(mod_floor(Integer(g.coords()[2]) - l->coords()[2], center_step_) == 0);
    }
    case Kind::Product:
      return tri_and(left_->contains(g.first()), right_->contains(g.second()));
    case Kind::FreeGenerated:
      return tri(graph_->accepts(g.letters()));
    case Kind::Generated:
      for (const auto& x : gens_)
        if (x == g)
          return Tri::True;
      return parent_->is_identity(g) ? Tri::True : Tri::Unknown;
  }
  return Tri::Unknown;
}

std::vector<Element> Subgroup::generators() const { return gens_; }

bool Subgroup::is_trivial() const { return kind_ == Kind::Trivial || (kind_ == Kind::Full && parent_->is_trivial()); }

bool Subgroup::is_full() const { return kind_ == Kind::Full; }

Tri Subgroup::is_finite() const {
  switch (kind_) {
    case Kind::Trivial:
    case Kind::Finite:
      return Tri::True;
    case Kind::Full:
      return tri(parent_->is_finite());
    case Kind::Lattice:
    case Kind::HeisenbergAbelian:
    case Kind::Heisenberg:
    case Kind::FreeGenerated:
      return Tri::False;
    case Kind::Product:
      return tri_and(left_->is_finite(), right_->is_finite());
    case Kind::Generated:
      return parent_->is_finite() ? Tri::True : Tri::Unknown;
  }
  return Tri::Unknown;
}

std::optional<std::vector<Element>> Subgroup::elements() const {
  switch (kind_) {
    case Kind::Trivial:
      return std::vector<Element>{parent_->identity()};
    case Kind::Finite:
      return elements_;
    case Kind::Full:
      if (parent_->is_finite())
        return parent_->elements();
      return std::nullopt;
    case Kind::Product: {
      auto a = left_->elements(), b = right_->elements();
      if (!a || !b)
        return std::nullopt;
      std::vector<Element> out;
      for (const auto& x : *a)
        for (const auto& y : *b)
          out.push_back(Element::pair(x, y));
      std::sort(out.begin(), out.end());
      return out;
    }
    default:
      return std::nullopt;
  }
}

SubgroupIndex Subgroup::index() const {
  switch (kind_) {
    case Kind::Full:
      return SubgroupIndex::finite(1);
    case Kind::Trivial:
      if (parent_->is_finite())
        return SubgroupIndex::finite(*parent_->order());
      return SubgroupIndex::infinite();
    case Kind::Finite:
      return SubgroupIndex::finite(*parent_->order() / static_cast<std::int64_t>(elements_.size()));
    case Kind::Lattice: {
      if (hnf_.rank() < static_cast<std::size_t>(parent_->rank()))
        return SubgroupIndex::infinite();
      Integer det = 1;
      for (std::size_t c = 0; c < hnf_.rank(); ++c)
        det *= hnf_.basis(hnf_.pivot_rows[c], static_cast<Eigen::Index>(c));
      return SubgroupIndex::finite(det);
    }
    case Kind::HeisenbergAbelian:
      return SubgroupIndex::infinite();
    case Kind::Heisenberg:
      return SubgroupIndex::finite(hnf_.basis(0, 0) * hnf_.basis(1, 1) * center_step_);
    case Kind::Product: {
      const auto a = left_->index(), b = right_->index();
      if (a.kind == SubgroupIndex::Kind::Infinite || b.kind == SubgroupIndex::Kind::Infinite)
        return SubgroupIndex::infinite();
      if (a.is_finite() && b.is_finite())
        return SubgroupIndex::finite(a.value * b.value);
      return SubgroupIndex::unknown();
    }
    case Kind::FreeGenerated:
      if (graph_->complete())
        return SubgroupIndex::finite(static_cast<std::int64_t>(graph_->vertices()));
      return SubgroupIndex::infinite();
    case Kind::Generated:
      return SubgroupIndex::unknown();
  }
  return SubgroupIndex::unknown();
}

Tri Subgroup::is_normal() const {
  switch (kind_) {
    case Kind::Full:
    case Kind::Trivial:
    case Kind::Lattice:
      return Tri::True;
    case Kind::Product:
      return tri_and(left_->is_normal(), right_->is_normal());
    case Kind::FreeGenerated:
      return tri(graph_->complete() && graph_->vertex_transitive());
    default:
      break;
  }
  // conjugate the generators by the parent's generators and their inverses
  Tri result = Tri::True;
  for (const auto& x : parent_->generators()) {
    for (const auto& y : {x, parent_->inv(x)}) {
      for (const auto& h : gens_) {
        const Tri t = contains(parent_->conj(y, h));
        if (t == Tri::False)
          return Tri::False;
        result = tri_and(result, t);
      }
    }
  }
  return result;
}

Tri Subgroup::is_abelian() const { return tri(pairwise_commute(*parent_, gens_)); }

Tri Subgroup::is_prime() const {
  switch (kind_) {
    case Kind::Full:
      return parent_->is_prime();
    case Kind::Trivial:
      return Tri::True;
    case Kind::Finite:
      return Tri::False;  // nontrivial finite
    case Kind::Lattice:
    case Kind::HeisenbergAbelian:
    case Kind::Heisenberg:
    case Kind::FreeGenerated:
      return Tri::True;  // torsion-free
    case Kind::Product:
      return tri_and(left_->is_prime(), right_->is_prime());
    case Kind::Generated:
      if (parent_->is_finite())
        return Tri::False;
      return Tri::Unknown;
  }
  return Tri::Unknown;
}

Tri Subgroup::is_fc_hypercentral() const {
  switch (kind_) {
    case Kind::Full:
      return parent_->is_fc_hypercentral();
    case Kind::Trivial:
    case Kind::Finite:
    case Kind::Lattice:
    case Kind::HeisenbergAbelian:
    case Kind::Heisenberg:
      return Tri::True;
    case Kind::FreeGenerated:
      return tri(graph_->subgroup_rank() <= 1);
    case Kind::Product:
      return tri_and(left_->is_fc_hypercentral(), right_->is_fc_hypercentral());
    case Kind::Generated:
      return parent_->is_finite() ? Tri::True : Tri::Unknown;
  }
  return Tri::Unknown;
}

Tri Subgroup::is_cstar_simple() const {
  switch (kind_) {
    case Kind::Full:
      return parent_->is_cstar_simple();
    case Kind::Trivial:
    case Kind::Finite:
    case Kind::Lattice:
    case Kind::HeisenbergAbelian:
    case Kind::Heisenberg:
      return Tri::False;
    case Kind::FreeGenerated:
      return tri(graph_->subgroup_rank() >= 2);
    case Kind::Product:
      if (left_->is_trivial())
        return right_->is_cstar_simple();
      if (right_->is_trivial())
        return left_->is_cstar_simple();
      return tri_and(left_->is_cstar_simple(), right_->is_cstar_simple());
    case Kind::Generated:
      return parent_->is_finite() ? Tri::False : Tri::Unknown;
  }
  return Tri::Unknown;
}

std::optional<std::vector<Element>> Subgroup::free_abelian_basis() const {
  switch (kind_) {
    case Kind::Trivial:
      return std::vector<Element>{};
    case Kind::Full:
      if (parent_->kind() == Group::Kind::FreeAbelian || (parent_->kind() == Group::Kind::Free && parent_->rank() == 1))
        return gens_;
      return std::nullopt;
    case Kind::Lattice:
    case Kind::HeisenbergAbelian:
      return gens_;
    case Kind::FreeGenerated:
      if (graph_->subgroup_rank() == 1)
        return gens_;
      return std::nullopt;
    case Kind::Product: {
      auto a = left_->free_abelian_basis(), b = right_->free_abelian_basis();
      if (!a || !b)
        return std::nullopt;
      std::vector<Element> out;
      for (const auto& x : *a)
        out.push_back(Element::pair(x, parent_->factor(1)->identity()));
      for (const auto& y : *b)
        out.push_back(Element::pair(parent_->factor(0)->identity(), y));
      return out;
    }
    default:
      return std::nullopt;
  }
}

Element Subgroup::from_basis_coords(const std::vector<Element>& basis, const IntVector& c) const {
  return product_of_powers(*parent_, basis, c);
}

std::optional<std::array<std::int64_t, 3>> Subgroup::as_box() const {
  if (parent_->kind() != Group::Kind::Heisenberg)
    return std::nullopt;
  if (kind_ == Kind::Full)
    return std::array<std::int64_t, 3>{1, 1, 1};
  if (kind_ == Kind::Trivial)
    return std::array<std::int64_t, 3>{0, 0, 0};
  if (kind_ == Kind::Heisenberg) {
    if (hnf_.basis(1, 0) != 0 || lifts_[0].coords()[2] != 0 || lifts_[1].coords()[2] != 0)
      return std::nullopt;
    return std::array<std::int64_t, 3>{to_int64(hnf_.basis(0, 0)), to_int64(hnf_.basis(1, 1)), to_int64(center_step_)};
  }
  if (kind_ == Kind::HeisenbergAbelian) {
    // box(d1,0,d3) or box(0,d2,d3): chart basis is axis aligned
    std::array<std::int64_t, 3> d{0, 0, 0};
    for (const auto& x : gens_) {
      const auto& c = x.coords();
      const int nz = (c[0] != 0) + (c[1] != 0) + (c[2] != 0);
      if (nz != 1)
        return std::nullopt;
      for (int i = 0; i < 3; ++i)
        if (c[static_cast<std::size_t>(i)] != 0)
          d[static_cast<std::size_t>(i)] = std::abs(c[static_cast<std::size_t>(i)]);
    }
    if (d[0] != 0 && d[1] != 0)
      return std::nullopt;
    return d;
  }
  return std::nullopt;
}

std::string Subgroup::describe() const {
  const Group& G = *parent_;
  auto list = [&](const std::vector<Element>& xs) {
    std::string s = "<";
    for (std::size_t i = 0; i < xs.size(); ++i)
      s += (i ? ", " : "") + G.format(xs[i]);
    return s + ">";
  };
  switch (kind_) {
    case Kind::Full:
      return G.name();
    case Kind::Trivial:
      return "{e}";
    case Kind::Finite: {
      std::string s = "{";
      for (std::size_t i = 0; i < elements_.size(); ++i)
        s += (i ? ", " : "") + G.format(elements_[i]);
      return s + "}";
    }
    case Kind::Lattice:
      return "lattice " + list(gens_);
    case Kind::HeisenbergAbelian:
    case Kind::Heisenberg:
      if (auto b = as_box())
        return "box(" + std::to_string((*b)[0]) + "," + std::to_string((*b)[1]) + "," + std::to_string((*b)[2]) + ")";
      return list(gens_);
    case Kind::Product:
      return left_->describe() + " x " + right_->describe();
    case Kind::FreeGenerated:
    case Kind::Generated:
      return list(gens_);
  }
  return "";
}

// ---------------------------------------------------------------------------
// Comparison and intersection

Tri subgroup_le(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent())
    return Tri::False;
  if (b.is_full() || a.is_trivial())
    return Tri::True;
  Tri r = Tri::True;
  for (const auto& g : a.generators()) {
    const Tri t = b.contains(g);
    if (t == Tri::False)
      return Tri::False;
    r = tri_and(r, t);
  }
  return r;
}

Tri subgroup_equal(const Subgroup& a, const Subgroup& b) {
  if (&a == &b)
    return Tri::True;
  return tri_and(subgroup_le(a, b), subgroup_le(b, a));
}

std::optional<SubgroupPtr> intersect(const SubgroupPtr& a, const SubgroupPtr& b) {
  if (a->parent() != b->parent())
    return std::nullopt;
  if (a->is_full())
    return b;
  if (b->is_full())
    return a;
  if (a->is_trivial())
    return a;
  if (b->is_trivial())
    return b;
  if (subgroup_equal(*a, *b) == Tri::True)
    return a;
  const GroupPtr& g = a->parent();
  if (auto ea = a->elements()) {
    std::vector<Element> keep;
    for (const auto& x : *ea) {
      const Tri t = b->contains(x);
      if (t == Tri::Unknown)
        return std::nullopt;
      if (t == Tri::True)
        keep.push_back(x);
    }
    return Subgroup::finite(g, keep);
  }
  if (b->elements())
    return intersect(b, a);
  if (a->kind() == Subgroup::Kind::Lattice && b->kind() == Subgroup::Kind::Lattice) {
    IntMatrix ca(g->rank(), static_cast<Eigen::Index>(a->generators().size()));
    IntMatrix cb(g->rank(), static_cast<Eigen::Index>(b->generators().size()));
    for (std::size_t j = 0; j < a->generators().size(); ++j)
      for (int i = 0; i < g->rank(); ++i)
        ca(i, static_cast<Eigen::Index>(j)) = a->generators()[j].coords()[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < b->generators().size(); ++j)
      for (int i = 0; i < g->rank(); ++i)
        cb(i, static_cast<Eigen::Index>(j)) = b->generators()[j].coords()[static_cast<std::size_t>(i)];
    return Subgroup::lattice(g, lattice_intersection(ca, cb));
  }
  if (a->kind() == Subgroup::Kind::Product && b->kind() == Subgroup::Kind::Product) {
    auto l = intersect(a->factor(0), b->factor(0));
    auto r = intersect(a->factor(1), b->factor(1));
    if (!l || !r)
      return std::nullopt;
    return Subgroup::product(g, *l, *r);
  }
  auto ba = a->as_box(), bb = b->as_box();
  if (ba && bb) {
    std::array<std::int64_t, 3> d{};
    for (std::size_t i = 0; i < 3; ++i)
      d[i] = to_int64(lcm((*ba)[i], (*bb)[i]));
    return Subgroup::heisenberg_box(g, d[0], d[1], d[2]);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conjugacy classes

Classification Classification::finite(std::vector<Element> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return {Kind::Finite, std::move(elems), {}};
}

namespace {

Classification bfs_orbit(const Element& g, const Subgroup& h, const SearchCaps& caps) {
  const Group& G = *h.parent();
  std::vector<Element> moves;
  for (const auto& x : h.generators()) {
    moves.push_back(x);
    moves.push_back(G.inv(x));
  }
  std::set<Element> seen{g};
  std::deque<std::pair<Element, int>> q{{g, 0}};
  while (!q.empty()) {
    auto [x, depth] = q.front();
    q.pop_front();
    for (const auto& m : moves) {
      Element y = G.conj(m, x);
      if (seen.count(y))
        continue;
      if (depth + 1 > caps.max_depth || seen.size() >= caps.max_visited)
        return Classification::unknown("orbit search cap reached (" + std::to_string(seen.size()) + " visited)");
      seen.insert(y);
      q.emplace_back(std::move(y), depth + 1);
    }
  }
  return Classification::finite({seen.begin(), seen.end()});
}

SubgroupPtr factor_view(const Subgroup& h, int i) {
  if (h.kind() == Subgroup::Kind::Product)
    return h.factor(i);
  if (h.is_full())
    return Subgroup::full(h.parent()->factor(i));
  return Subgroup::trivial(h.parent()->factor(i));
}

bool splits(const Subgroup& h) {
  return h.kind() == Subgroup::Kind::Product || h.is_full() || h.is_trivial();
}

// Generator of C_H(g) for nontrivial g in a free group, or nullopt when trivial.
std::optional<Element> free_centralizer(const Subgroup& h, const Element& g) {
  const auto root = free_root(g.letters());
  auto rebuild = [&](std::int64_t m) {
    std::vector<std::int64_t> w = root.conjugator;
    for (std::int64_t k = 0; k < m; ++k)
      w.insert(w.end(), root.primitive.begin(), root.primitive.end());
    return Element::word(concat(w, inverse_word(root.conjugator)));
  };
  if (h.is_full())
    return rebuild(1);
  if (h.kind() != Subgroup::Kind::FreeGenerated)
    return std::nullopt;
  const auto& graph = h.graph();
  auto a = graph.read(0, root.conjugator);
  if (!a)
    return std::nullopt;
  std::size_t v = *a;
  for (std::size_t m = 1; m <= graph.vertices(); ++m) {
    auto next = graph.read(v, root.primitive);
    if (!next)
      return std::nullopt;
    v = *next;
    if (v == *a)
      return rebuild(static_cast<std::int64_t>(m));
  }
  return std::nullopt;
}

}  // namespace

namespace {
thread_local SearchCaps current_caps;
}  // namespace

const SearchCaps& default_search_caps() { return current_caps; }

ScopedSearchCaps::ScopedSearchCaps(SearchCaps caps) : saved_(current_caps) { current_caps = caps; }

ScopedSearchCaps::~ScopedSearchCaps() { current_caps = saved_; }

Classification h_conjugacy_class(const Element& g, const Subgroup& h, const SearchCaps& caps) {
  const Group& G = *h.parent();
  G.check(g);
  if (h.is_trivial() || G.is_identity(g))
    return Classification::finite({g});
  if (auto elems = h.elements()) {
    std::vector<Element> orbit;
    for (const auto& x : *elems)
      orbit.push_back(G.conj(x, g));
    return Classification::finite(std::move(orbit));
  }
  switch (G.kind()) {
    case Group::Kind::FreeAbelian:
      return Classification::finite({g});
    case Group::Kind::Heisenberg:
      // hgh^-1 = g * (0,0, b1 a2 - a1 b2): a nonzero value on one generator
      // gives unboundedly many values on its powers
      for (const auto& x : h.generators())
        if (!G.commutes(x, g))
          return Classification::infinite("heisenberg-commutator-form");
      return Classification::finite({g});
    case Group::Kind::Free: {
      const auto gens = h.generators();
      const bool cyclic = h.kind() == Subgroup::Kind::FreeGenerated && h.graph().subgroup_rank() == 1;
      if ((h.is_full() && G.rank() == 1) || cyclic) {
        if (G.commutes(gens.front(), g))
          return Classification::finite({g});
        return Classification::infinite("free-cyclic-centralizer");
      }
      if (h.is_full() || h.kind() == Subgroup::Kind::FreeGenerated)
        return Classification::infinite("free-noncyclic-acting-group");
      break;
    }
    case Group::Kind::DirectProduct: {
      if (!splits(h))
        break;
      const auto a = h_conjugacy_class(g.first(), *factor_view(h, 0), caps);
      const auto b = h_conjugacy_class(g.second(), *factor_view(h, 1), caps);
      if (a.kind == Classification::Kind::Infinite)
        return Classification::infinite("factor-0:" + a.certificate);
      if (b.kind == Classification::Kind::Infinite)
        return Classification::infinite("factor-1:" + b.certificate);
      if (a.kind == Classification::Kind::Finite && b.kind == Classification::Kind::Finite) {
        std::vector<Element> out;
        for (const auto& x : a.elements)
          for (const auto& y : b.elements)
            out.push_back(Element::pair(x, y));
        return Classification::finite(std::move(out));
      }
      return Classification::unknown(a.kind == Classification::Kind::Unknown ? a.certificate : b.certificate);
    }
    default:
      break;
  }
  return bfs_orbit(g, h, caps);
}

std::optional<std::vector<Element>> centralizer_generators(const Subgroup& h, const Element& g) {
  const Group& G = *h.parent();
  G.check(g);
  if (h.is_trivial())
    return std::vector<Element>{};
  if (G.is_identity(g))
    return h.generators();
  if (auto elems = h.elements()) {
    std::vector<Element> out;
    for (const auto& x : *elems)
      if (!G.is_identity(x) && G.commutes(x, g))
        out.push_back(x);
    return out;
  }
  switch (G.kind()) {
    case Group::Kind::FreeAbelian:
      return h.generators();
    case Group::Kind::Heisenberg: {
      // C_H(g) = kernel of h -> b1 a2 - a1 b2, a homomorphism on H
      const auto& a = g.coords();
      auto functional = [&](const Element& x) {
        return Integer(x.coords()[0]) * a[1] - Integer(a[0]) * x.coords()[1];
      };
      std::vector<Element> basis;
      std::vector<Element> central;
      if (auto fab = h.free_abelian_basis()) {
        basis = *fab;
      } else if (h.kind() == Subgroup::Kind::Heisenberg || h.is_full()) {
        const auto gens = h.generators();  // two lifts, then the central generator
        basis = {gens[0], gens[1]};
        central.push_back(gens[2]);
      } else {
        return std::nullopt;
      }
      IntMatrix row(1, static_cast<Eigen::Index>(basis.size()));
      for (std::size_t j = 0; j < basis.size(); ++j)
        row(0, static_cast<Eigen::Index>(j)) = functional(basis[j]);
      const IntMatrix ker = integer_kernel(row);
      std::vector<Element> out;
      for (Eigen::Index k = 0; k < ker.cols(); ++k) {
        Element x = h.from_basis_coords(basis, ker.col(k));
        if (!G.is_identity(x))
          out.push_back(std::move(x));
      }
      for (auto& z : central)
        out.push_back(std::move(z));
      return out;
    }
    case Group::Kind::Free: {
      if (h.kind() != Subgroup::Kind::FreeGenerated && !h.is_full())
        return std::nullopt;
      auto c = free_centralizer(h, g);
      if (!c)
        return std::vector<Element>{};
      return std::vector<Element>{*c};
    }
    case Group::Kind::DirectProduct: {
      if (!splits(h))
        return std::nullopt;
      auto a = centralizer_generators(*factor_view(h, 0), g.first());
      auto b = centralizer_generators(*factor_view(h, 1), g.second());
      if (!a || !b)
        return std::nullopt;
      std::vector<Element> out;
      for (const auto& x : *a)
        out.push_back(Element::pair(x, G.factor(1)->identity()));
      for (const auto& y : *b)
        out.push_back(Element::pair(G.factor(0)->identity(), y));
      return out;
    }
    default:
      return std::nullopt;
  }
}

std::optional<SubgroupPtr> centralizer_of_subgroup(const SubgroupPtr& hp) {
  const Subgroup& h = *hp;
  const GroupPtr& gp = h.parent();
  const Group& G = *gp;
  if (h.is_trivial())
    return Subgroup::full(gp);
  const auto gens = h.generators();
  if (G.is_finite()) {
    std::vector<Element> out;
    for (const auto& x : G.elements()) {
      bool central = true;
      for (const auto& y : gens)
        central = central && G.commutes(x, y);
      if (central)
        out.push_back(x);
    }
    return Subgroup::finite(gp, out);
  }
  switch (G.kind()) {
    case Group::Kind::FreeAbelian:
      return Subgroup::full(gp);
    case Group::Kind::Heisenberg: {
      IntMatrix proj(2, static_cast<Eigen::Index>(gens.size()));
      for (std::size_t j = 0; j < gens.size(); ++j) {
        proj(0, static_cast<Eigen::Index>(j)) = gens[j].coords()[0];
        proj(1, static_cast<Eigen::Index>(j)) = gens[j].coords()[1];
      }
      const auto hf = hermite_form(proj);
      if (hf.rank() == 0)
        return Subgroup::full(gp);
      if (hf.rank() == 2)
        return Subgroup::heisenberg_box(gp, 0, 0, 1);
      // (a1,a2) must be parallel to the primitive direction u
      Vector<Rational> dir(2);
      dir(0) = Rational(hf.basis(0, 0));
      dir(1) = Rational(hf.basis(1, 0));
      const IntVector u = primitive_integer(dir);
      return Subgroup::generated(gp, {Element::vector({to_int64(u(0)), to_int64(u(1)), 0}), Element::vector({0, 0, 1})});
    }
    case Group::Kind::Free: {
      if (h.kind() == Subgroup::Kind::FreeGenerated && h.graph().subgroup_rank() == 1)
        return Subgroup::generated(gp, {*free_centralizer(*Subgroup::full(gp), gens.front())});
      if (h.is_full() && G.rank() == 1)
        return Subgroup::full(gp);
      if (h.is_full() || h.kind() == Subgroup::Kind::FreeGenerated)
        return Subgroup::trivial(gp);
      return std::nullopt;
    }
    case Group::Kind::DirectProduct: {
      if (!splits(h))
        return std::nullopt;
      auto a = centralizer_of_subgroup(factor_view(h, 0));
      auto b = centralizer_of_subgroup(factor_view(h, 1));
      if (!a || !b)
        return std::nullopt;
      return Subgroup::product(gp, *a, *b);
    }
    default:
      return std::nullopt;
  }
}

Tri fc_equals_centralizer(const Subgroup& h) {
  if (h.is_trivial())
    return Tri::True;
  const Group& G = *h.parent();
  if (G.is_finite()) {
    for (const auto& g : G.elements()) {
      const auto c = h_conjugacy_class(g, h);
      if (c.elements.size() > 1)
        return Tri::False;
    }
    return Tri::True;
  }
  switch (G.kind()) {
    case Group::Kind::FreeAbelian:
    case Group::Kind::Heisenberg:
    case Group::Kind::Free:
      return Tri::True;
    case Group::Kind::DirectProduct:
      if (!splits(h))
        return Tri::Unknown;
      return tri_and(fc_equals_centralizer(*factor_view(h, 0)), fc_equals_centralizer(*factor_view(h, 1)));
    default:
      return Tri::Unknown;
  }
}

}  // namespace kleppner
