// Instance files: a small section/key-value grammar resolved into catalog objects.
//
//   # comment
//   [section]
//   key = "string" | integer | [value, ...]
//
// Arrays may span lines and nest. Sections: [basis], [group], [subgroup],
// [cocycle], [run]; the grammar is documented in docs/config.md.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kleppner/cocycle.hpp"
#include "kleppner/group.hpp"
#include "kleppner/phase.hpp"
#include "kleppner/subgroup.hpp"

namespace kleppner {

/// Diagnostic with a 1-based source position.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& message, std::size_t line, std::size_t column);
  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::string message_;
  std::size_t line_, column_;
};

struct ConfigValue {
  std::variant<std::string, std::int64_t, std::vector<ConfigValue>> data;
  std::size_t line = 0, column = 0;

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_array() const { return std::holds_alternative<std::vector<ConfigValue>>(data); }
};

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  std::size_t line = 0, column = 0;
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
  std::size_t line = 0, column = 0;
};

/// Syntax only; throws ConfigError.
std::vector<ConfigSection> parse_sections(std::string_view text);

enum class Analysis { Validate, Kleppner, RelativeKleppner, Centralizers, Verdict, Lattice, Oracle };

std::string to_string(Analysis a);
std::optional<Analysis> analysis_from_string(std::string_view name);
/// Every analysis, in execution order.
const std::vector<Analysis>& all_analyses();

struct InstanceConfig {
  BasisPtr basis;
  std::map<std::string, Rational> parameters;
  GroupPtr group;
  SubgroupPtr subgroup;
  CocyclePtr cocycle;
  /// Execution order, without duplicates.
  std::vector<Analysis> analyses;
  std::uint64_t seed = 1;
  std::size_t cap = SearchCaps{}.max_visited;
  std::size_t samples = 2000;
  int truncate = 5;
};

/// Command-line values that replace the [run] entries.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
};

/// Parses and resolves an instance; throws ConfigError.
InstanceConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

}  // namespace kleppner
