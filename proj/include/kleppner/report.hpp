// Running the analyses of an instance and serializing the results.
// The JSON layout is documented in docs/report-schema.md.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kleppner/config.hpp"

namespace kleppner {

inline constexpr const char* kReportSchema = "kleppner-report/1";

/// Exit codes shared by the CLI and the report.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitOracleMismatch = 2 };

struct DecisionRecord {
  std::string value;  // Holds, Fails or Unknown
  std::string strategy;
  std::string reason;
  std::vector<std::string> witness;

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

struct CheckRecord {
  bool ok = true;
  std::size_t checked = 0;
  std::string identity;
  std::vector<std::string> witness;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct ValidationRecord {
  CheckRecord cocycle;
  CheckRecord tilde;

  friend bool operator==(const ValidationRecord&, const ValidationRecord&) = default;
};

struct CentralizerRecord {
  std::optional<std::string> centralizer;        // C_G(H)
  std::optional<std::string> sigma_centralizer;  // C_G^sigma(H)
  DecisionRecord sigma_centralizer_trivial;

  friend bool operator==(const CentralizerRecord&, const CentralizerRecord&) = default;
};

struct PremiseRecord {
  std::string fact;
  std::string value;

  friend bool operator==(const PremiseRecord&, const PremiseRecord&) = default;
};

struct StepRecord {
  std::string rule;
  std::vector<PremiseRecord> premises;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct VerdictRecord {
  std::string conclusion;
  std::vector<StepRecord> chain;
  std::vector<std::string> witness;
  std::string missing;
  std::string note;

  friend bool operator==(const VerdictRecord&, const VerdictRecord&) = default;
};

struct VerdictPair {
  VerdictRecord simplicity;       // C*_r(H, sigma|H)
  VerdictRecord irreducibility;   // C*_r(H, sigma) in C*_r(G, sigma)

  friend bool operator==(const VerdictPair&, const VerdictPair&) = default;
};

struct LatticeRecord {
  std::string kind;  // complete, truncated, unknown, skipped
  std::string shape;
  std::vector<std::string> members;
  std::string note;

  friend bool operator==(const LatticeRecord&, const LatticeRecord&) = default;
};

struct RoutePair {
  std::size_t route_a = 0;
  std::size_t route_b = 0;

  friend bool operator==(const RoutePair&, const RoutePair&) = default;
};

struct OracleRecord {
  bool agree = true;
  RoutePair relative;  // commutant of lambda(H) in span lambda(G)
  RoutePair center;    // center of span lambda(G)
  std::string error;

  friend bool operator==(const OracleRecord&, const OracleRecord&) = default;
};

struct InstanceRecord {
  std::string group;
  std::string subgroup;
  std::string cocycle;
  std::vector<std::string> basis;
  std::map<std::string, std::string> parameters;

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

struct Report {
  std::string schema = kReportSchema;
  InstanceRecord instance;
  std::uint64_t seed = 1;
  std::size_t cap = 0;
  std::vector<std::string> analyses;
  std::optional<ValidationRecord> validate;
  std::optional<DecisionRecord> kleppner;
  std::optional<DecisionRecord> relative_kleppner;
  std::optional<CentralizerRecord> centralizers;
  std::optional<VerdictPair> verdict;
  std::optional<LatticeRecord> lattice;
  std::optional<OracleRecord> oracle;
  /// Wall time per analysis; the only nondeterministic field.
  std::map<std::string, double> timing_ms;
  int exit_code = kExitOk;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Runs the requested analyses in order.
Report run(const InstanceConfig& config);

std::string to_json(const Report& r, int indent = 2);
/// Throws std::invalid_argument on schema violations.
Report report_from_json(const std::string& text);
std::string to_text(const Report& r);

/// Copy with timing cleared, for determinism comparisons.
Report without_timing(Report r);

}  // namespace kleppner
