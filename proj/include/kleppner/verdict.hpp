// Verdicts on twisted simplicity and C*-irreducibility, with replayable premise chains.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kleppner/kleppner.hpp"

namespace kleppner {

enum class Conclusion { Holds, Fails, Inconclusive };

std::string to_string(Conclusion c);

/// Kernel facts a rule may rest on. Each is recomputable from (H, sigma).
enum class Fact {
  GroupFinite,             // G finite
  Normal,                  // H normal in G
  FcHypercentral,          // H FC-hypercentral
  CstarSimple,             // H C*-simple (catalog)
  Prime,                   // H prime (catalog)
  Untwisted,               // sigma trivial, possibly up to a similarity
  Kleppner,                // (H, sigma|H) satisfies Kleppner's condition
  RelativeKleppner,        // (H <= G, sigma) satisfies the relative Kleppner condition
  SigmaCentralizerTrivial, // C_G^sigma(H) = {e}
  CentralizerTrivial,      // C_G(H) = {e}
  TwistedSimple            // (H, sigma) C*-simple, by the simplicity rules
};

std::string fact_name(Fact f);

struct Premise {
  Fact fact;
  std::string value;  // True/False/Unknown, Holds/Fails/Unknown, or a conclusion
};

struct Step {
  std::string rule;  // rule key, see docs/rules.md
  std::vector<Premise> premises;
};

struct Verdict {
  Conclusion conclusion = Conclusion::Inconclusive;
  std::vector<Step> chain;       // the last step closed the case
  std::vector<Element> witness;  // Fails: a counterexample from a failing premise
  std::string missing;           // Inconclusive: the premise that could not be decided
  std::string note;
};

/// Evaluates a fact for H <= G and sigma on G.
std::string evaluate_fact(Fact f, const SubgroupPtr& h, const CocyclePtr& sigma);

/// Simplicity of C*_r(H, sigma|H).
Verdict twisted_simplicity(const SubgroupPtr& h, const CocyclePtr& sigma);
/// Whole-group form.
Verdict twisted_simplicity(const CocyclePtr& sigma);

/// C*-irreducibility of C*_r(H, sigma) in C*_r(G, sigma).
Verdict cstar_irreducible(const SubgroupPtr& h, const CocyclePtr& sigma);

/// Recomputes every premise and the conclusion. True when all agree.
bool replay(const Verdict& v, const SubgroupPtr& h, const CocyclePtr& sigma,
            Verdict (*rule)(const SubgroupPtr&, const CocyclePtr&));

struct IntermediateLattice {
  enum class Kind { Complete, Truncated, Unknown };
  Kind kind = Kind::Unknown;
  /// Groups Gamma with H <= Gamma <= G, each labelling C*_r(Gamma, sigma).
  std::vector<SubgroupPtr> members;
  std::string shape;  // "finite-quotient", "finite-index-lattice", "z-graded"
  std::string note;
};

constexpr int kLatticeTruncation = 5;
constexpr std::size_t kLatticeIndexCap = 512;

/// Requires a Holds irreducibility verdict.
IntermediateLattice intermediate_lattice(const SubgroupPtr& h, const CocyclePtr& sigma,
                                         int truncate = kLatticeTruncation);

}  // namespace kleppner
