// Sigma-regularity, twisted centralizers and the (relative) Kleppner condition.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kleppner/cocycle.hpp"
#include "kleppner/group.hpp"
#include "kleppner/subgroup.hpp"

namespace kleppner {

enum class Truth { Holds, Fails, Unknown };

std::string to_string(Truth t);

/// Three-valued decision with the strategy that produced it.
/// Fails carries a counterexample: for regularity {g, h}, for Kleppner
/// conditions a finite nontrivial sigma-regular class.
struct TriBool {
  Truth value = Truth::Unknown;
  std::string strategy;
  std::string reason;
  std::vector<Element> witness;

  static TriBool holds(std::string strategy, std::string reason = {});
  static TriBool fails(std::string strategy, std::vector<Element> witness, std::string reason = {});
  static TriBool unknown(std::string strategy, std::string reason);

  bool is_holds() const { return value == Truth::Holds; }
  bool is_fails() const { return value == Truth::Fails; }
  bool is_unknown() const { return value == Truth::Unknown; }
};

/// {y in Z^n : sum_k y_k m[i][k] = 0 mod 1 for every row i}, as HNF columns.
IntMatrix phase_kernel(const std::vector<std::vector<Phase>>& m, std::size_t n);

/// g commutes with h in H only when sigma(g,h) = sigma(h,g). Fails carries {g, h}.
TriBool is_sigma_regular(const Element& g, const Subgroup& h, const Cocycle& sigma);

struct SigmaCentralizerResult {
  std::optional<SubgroupPtr> description;
  TriBool is_trivial;
};

/// C_G^sigma(H): elements of C_G(H) that are sigma-regular with respect to H.
SigmaCentralizerResult sigma_centralizer(const SubgroupPtr& h, const CocyclePtr& sigma);

TriBool relative_kleppner(const SubgroupPtr& h, const CocyclePtr& sigma);
TriBool kleppner(const CocyclePtr& sigma);
/// Kleppner for (H, sigma|H) through an intrinsic copy of H. Witnesses are in the parent.
TriBool kleppner_of_subgroup(const SubgroupPtr& h, const CocyclePtr& sigma);
TriBool relative_icc(const SubgroupPtr& h);
/// Every element of H that is sigma-regular with respect to H is sigma-regular
/// with respect to the parent.
TriBool is_sigma_regular_subgroup(const SubgroupPtr& h, const CocyclePtr& sigma);

/// FC_G^sigma(H) on a finite parent: elements whose H-class is sigma-regular.
std::vector<Element> fc_sigma_elements(const SubgroupPtr& h, const CocyclePtr& sigma);

}  // namespace kleppner
