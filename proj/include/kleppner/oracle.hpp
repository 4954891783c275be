// Regular projective representations of finite groups and exact commutant dimensions.
#pragma once

#include <stdexcept>
#include <vector>

#include "kleppner/cocycle.hpp"
#include "kleppner/cyclotomic.hpp"
#include "kleppner/linalg.hpp"

namespace kleppner {

class OracleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The two routes disagree.
class RouteMismatch : public OracleError {
public:
  RouteMismatch(std::size_t a, std::size_t b);
  std::size_t route_a, route_b;
};

constexpr std::size_t kOracleOrderCap = 64;

/// lambda(g) delta_x = sigma(g,x) delta_{gx}, stored as monomial matrices.
class RegularRep {
public:
  const GroupPtr& group() const { return group_; }
  std::size_t order() const { return n_; }
  std::size_t identity() const { return e_; }

  /// Row of the nonzero entry in column x of lambda(g).
  std::size_t target(std::size_t g, std::size_t x) const { return target_[g * n_ + x]; }
  /// Value of that entry, in turns.
  const Rational& phase(std::size_t g, std::size_t x) const { return phase_[g * n_ + x]; }
  /// Column of the nonzero entry in row y of lambda(g).
  std::size_t preimage(std::size_t g, std::size_t y) const { return preimage_[g * n_ + y]; }
  /// The g with lambda(g) nonzero at (row, col).
  std::size_t source(std::size_t row, std::size_t col) const { return source_[col * n_ + row]; }

  Matrix<Cyclotomic> dense(std::size_t g) const;
  /// sum_g f(g) lambda(g)
  Matrix<Cyclotomic> span_element(const std::vector<Cyclotomic>& f) const;
  /// Entry (row, col) of span_element(f) without building the matrix.
  Cyclotomic span_entry(const std::vector<Cyclotomic>& f, std::size_t row, std::size_t col) const;

private:
  friend RegularRep build_regular_rep(const CocyclePtr& sigma);

  GroupPtr group_;
  std::size_t n_ = 0, e_ = 0;
  std::vector<std::size_t> target_, preimage_, source_;
  std::vector<Rational> phase_;
};

/// exp(2 pi i r) as a cyclotomic number.
Cyclotomic root_from_turns(const Rational& r);

/// Requires a finite-table group, rational phases and order <= kOracleOrderCap.
/// Verifies lambda(g) lambda(h) = sigma(g,h) lambda(gh) for all pairs.
RegularRep build_regular_rep(const CocyclePtr& sigma);

/// lambda(h) lambda(g) lambda(h)^* = tilde(h,g) lambda(hgh^-1) for all pairs.
bool check_conjugation(const RegularRep& rep, const Cocycle& sigma);

struct CommutantSolution {
  std::size_t dimension = 0;
  std::vector<std::vector<Cyclotomic>> basis;  // coefficient functions indexed by table index
};

/// Route A: T in span lambda(G) with T lambda(h) = lambda(h) T for the generators
/// of H, by exact elimination. Every basis vector is checked by substitution.
CommutantSolution commutant_route_a(const RegularRep& rep, const Subgroup& h);

/// Route B: number of H-classes in G that are sigma-regular with respect to H,
/// straight from the definitions.
std::size_t commutant_route_b(const Subgroup& h, const Cocycle& sigma);

struct OracleResult {
  std::size_t route_a = 0;
  std::size_t route_b = 0;
  CommutantSolution solution;
};

/// Throws RouteMismatch when the routes disagree.
OracleResult relative_commutant_dim(const RegularRep& rep, const Subgroup& h, const Cocycle& sigma);
OracleResult relative_commutant_dim(const SubgroupPtr& h, const CocyclePtr& sigma);
OracleResult center_dim(const CocyclePtr& sigma);

/// Entry at (delta_e, delta_e).
Cyclotomic canonical_trace(const RegularRep& rep, const Matrix<Cyclotomic>& t);
/// Matrix trace divided by the order.
Cyclotomic normalized_trace(const Matrix<Cyclotomic>& t);

}  // namespace kleppner
