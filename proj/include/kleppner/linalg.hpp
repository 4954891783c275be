// Exact linear algebra templated on the scalar.
//
// Field routines (rref, rank, nullspace, SparseEliminator) work for any
// scalar with exact +, -, *, / and equality: Rational, Cyclotomic, ModP.
// Integer routines (Hermite normal form, integer kernels, lattice membership)
// work over Integer and never leave the ring.
#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kleppner/numeric.hpp"

namespace kleppner {

template <typename Scalar>
bool is_zero(const Scalar& x) {
  return x == Scalar(0);
}

/// In-place reduced row echelon form; returns the pivot columns.
template <typename Scalar>
std::vector<Eigen::Index> rref(Matrix<Scalar>& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = row;
    while (p < m.rows() && is_zero(m(p, col)))
      ++p;
    if (p == m.rows())
      continue;
    m.row(p).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j)
      m(row, j) = m(row, j) * inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col)))
        continue;
      const Scalar f = m(r, col);
      for (Eigen::Index j = col; j < m.cols(); ++j)
        m(r, j) = m(r, j) - f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename Scalar>
std::size_t rank(Matrix<Scalar> m) {
  return rref(m).size();
}

/// Columns of the result form a basis of { x : m x = 0 }.
template <typename Scalar>
Matrix<Scalar> nullspace(Matrix<Scalar> m) {
  const auto pivots = rref(m);
  const Eigen::Index n = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (auto c : pivots)
    is_pivot[static_cast<std::size_t>(c)] = true;
  Matrix<Scalar> basis(n, n - static_cast<Eigen::Index>(pivots.size()));
  Eigen::Index out = 0;
  for (Eigen::Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)])
      continue;
    for (Eigen::Index i = 0; i < n; ++i)
      basis(i, out) = Scalar(0);
    basis(free, out) = Scalar(1);
    for (std::size_t k = 0; k < pivots.size(); ++k)
      basis(pivots[k], out) = Scalar(0) - m(static_cast<Eigen::Index>(k), free);
    ++out;
  }
  return basis;
}

/// Incremental Gaussian elimination over sparse rows.
///
/// Rows are added one at a time and reduced against the stored pivots; only
/// independent rows are kept, so memory is bounded by the number of unknowns.
template <typename Scalar>
class SparseEliminator {
public:
  using Entry = std::pair<std::size_t, Scalar>;
  using Row = std::vector<Entry>;  // sorted by column, no zero entries

  explicit SparseEliminator(std::size_t unknowns) : unknowns_(unknowns), pivot_of_(unknowns) {}

  /// Returns true when the row was independent of the stored ones.
  bool add_row(Row row) {
    normalize(row);
    // Leading entries are reduced in increasing column order; pivot rows only
    // contain columns >= their pivot, so a single forward pass suffices.
    std::size_t pos = 0;
    while (pos < row.size()) {
      const std::size_t col = row[pos].first;
      const auto& slot = pivot_of_[col];
      if (!slot) {
        ++pos;
        continue;
      }
      const Row& piv = rows_[*slot];
      const Scalar factor = row[pos].second;  // pivot rows are monic
      row = axpy(row, piv, factor);
      pos = 0;
      while (pos < row.size() && row[pos].first < col)
        ++pos;
    }
    if (row.empty())
      return false;
    const Scalar inv = Scalar(1) / row.front().second;
    for (auto& e : row)
      e.second = e.second * inv;
    pivot_of_[row.front().first] = rows_.size();
    rows_.push_back(std::move(row));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  std::size_t unknowns() const { return unknowns_; }

  /// Basis of the solution space { x : every added row annihilates x }.
  std::vector<std::vector<Scalar>> nullspace() const {
    // Back substitution on the echelon rows, one basis vector per free column.
    std::vector<std::vector<Scalar>> basis;
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
    for (std::size_t free = 0; free < unknowns_; ++free) {
      if (pivot_of_[free])
        continue;
      std::vector<Scalar> x(unknowns_, Scalar(0));
      x[free] = Scalar(1);
      for (std::size_t idx : order) {
        const Row& r = rows_[idx];
        Scalar acc(0);
        for (std::size_t k = 1; k < r.size(); ++k)
          acc = acc + r[k].second * x[r[k].first];
        x[r.front().first] = Scalar(0) - acc;
      }
      basis.push_back(std::move(x));
    }
    return basis;
  }

private:
  static void normalize(Row& row) {
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Row merged;
    for (auto& e : row) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second = merged.back().second + e.second;
      else
        merged.push_back(std::move(e));
    }
    row.clear();
    for (auto& e : merged)
      if (!is_zero(e.second))
        row.push_back(std::move(e));
  }

  // row - factor * piv
  static Row axpy(const Row& row, const Row& piv, const Scalar& factor) {
    Row out;
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < piv.size()) {
      if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
        out.push_back(row[i++]);
      } else if (i == row.size() || piv[j].first < row[i].first) {
        out.emplace_back(piv[j].first, Scalar(0) - factor * piv[j].second);
        ++j;
      } else {
        Scalar v = row[i].second - factor * piv[j].second;
        if (!is_zero(v))
          out.emplace_back(row[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::size_t unknowns_;
  std::vector<std::optional<std::size_t>> pivot_of_;
  std::vector<Row> rows_;
};

// ---------------------------------------------------------------------------
// Integer lattices

/// Column Hermite normal form: basis = A * transform restricted to the first
/// `rank` columns, lower trapezoidal, positive pivots, entries left of each
/// pivot reduced into [0, pivot). The trailing columns of `transform` span
/// the integer kernel of A.
struct HermiteForm {
  IntMatrix basis;
  IntMatrix transform;
  std::vector<Eigen::Index> pivot_rows;
  std::size_t rank() const { return pivot_rows.size(); }
};

namespace detail {

inline void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  Integer old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s1;
    old_s = s1;
    s1 = tmp;
    tmp = old_t - q * t1;
    old_t = t1;
    t1 = tmp;
  }
  g = old_r;
  s = old_s;
  t = old_t;
  if (g < 0) {
    g = -g;
    s = -s;
    t = -t;
  }
}

}  // namespace detail

inline HermiteForm hermite_form(const IntMatrix& a) {
  IntMatrix h = a;
  const Eigen::Index m = h.rows(), k = h.cols();
  IntMatrix u = IntMatrix::Identity(k, k);
  std::vector<Eigen::Index> pivot_rows;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < m && r < k; ++i) {
    for (Eigen::Index j = r + 1; j < k; ++j) {
      if (h(i, j) == 0)
        continue;
      if (h(i, r) == 0) {
        h.col(r).swap(h.col(j));
        u.col(r).swap(u.col(j));
        continue;
      }
      Integer g, s, t;
      detail::extended_gcd(h(i, r), h(i, j), g, s, t);
      const Integer a_g = h(i, r) / g, b_g = h(i, j) / g;
      for (Eigen::Index row = 0; row < m; ++row) {
        const Integer x = h(row, r), y = h(row, j);
        h(row, r) = s * x + t * y;
        h(row, j) = -b_g * x + a_g * y;
      }
      for (Eigen::Index row = 0; row < k; ++row) {
        const Integer x = u(row, r), y = u(row, j);
        u(row, r) = s * x + t * y;
        u(row, j) = -b_g * x + a_g * y;
      }
    }
    if (h(i, r) == 0)
      continue;
    if (h(i, r) < 0) {
      h.col(r) = -h.col(r);
      u.col(r) = -u.col(r);
    }
    for (Eigen::Index c = 0; c < r; ++c) {
      const Integer q = floor_div(h(i, c), h(i, r));
      if (q != 0) {
        h.col(c) -= q * h.col(r);
        u.col(c) -= q * u.col(r);
      }
    }
    pivot_rows.push_back(i);
    ++r;
  }
  return HermiteForm{h.leftCols(r), u, std::move(pivot_rows)};
}

/// Columns span { x in Z^k : A x = 0 }.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  auto hf = hermite_form(a);
  const auto r = static_cast<Eigen::Index>(hf.rank());
  return hf.transform.rightCols(a.cols() - r);
}

/// Coordinates of v in the Hermite basis, or nullopt when v is not in the lattice.
inline std::optional<IntVector> lattice_coordinates(const HermiteForm& hf, IntVector v) {
  IntVector x(static_cast<Eigen::Index>(hf.rank()));
  for (std::size_t c = 0; c < hf.rank(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    const Eigen::Index p = hf.pivot_rows[c];
    const Integer& piv = hf.basis(p, col);
    if (v(p) % piv != 0)
      return std::nullopt;
    x(col) = v(p) / piv;
    if (x(col) != 0)
      v -= x(col) * hf.basis.col(col);
  }
  if (!v.isZero())
    return std::nullopt;
  return x;
}

/// Canonical representative of v modulo a full-rank lattice in Hermite form.
inline IntVector reduce_mod_lattice(const HermiteForm& hf, IntVector v) {
  for (std::size_t c = 0; c < hf.rank(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    const Eigen::Index p = hf.pivot_rows[c];
    const Integer q = floor_div(v(p), hf.basis(p, col));
    if (q != 0)
      v -= q * hf.basis.col(col);
  }
  return v;
}

/// Basis (as columns) of the intersection of two lattices in Z^n.
inline IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b) {
  // x in both  <=>  a s = b t  <=>  [a | -b] (s, t) = 0
  IntMatrix joined(a.rows(), a.cols() + b.cols());
  joined << a, -b;
  const IntMatrix ker = integer_kernel(joined);
  IntMatrix gens = a * ker.topRows(a.cols());
  auto hf = hermite_form(gens);
  return hf.basis;
}

/// Scale a rational vector to the primitive integer vector on the same ray.
inline IntVector primitive_integer(const Vector<Rational>& v) {
  Integer den = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    den = lcm(den, denominator(v(i)));
  IntVector out(v.size());
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = numerator(v(i)) * (den / denominator(v(i)));
    g = gcd(g, out(i));
  }
  if (g > 1)
    for (Eigen::Index i = 0; i < v.size(); ++i)
      out(i) /= g;
  return out;
}

}  // namespace kleppner
