#include "kleppner/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <random>
#include <set>

namespace kleppner {

ConfigError::ConfigError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Syntax

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Lexer {
public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<ConfigSection> run() {
    std::vector<ConfigSection> out;
    std::set<std::string> names;
    while (true) {
      skip_blank_lines();
      if (done())
        break;
      if (peek() == '[') {
        const auto line = line_, col = col_;
        advance();
        skip_spaces();
        const std::string name = ident("section name");
        skip_spaces();
        expect(']');
        end_of_line();
        if (!names.insert(name).second)
          throw ConfigError("duplicate section [" + name + "]", line, col);
        out.push_back(ConfigSection{name, {}, line, col});
        continue;
      }
      const auto line = line_, col = col_;
      if (out.empty())
        throw ConfigError("key outside of a section", line, col);
      const std::string key = ident("key");
      skip_spaces();
      expect('=');
      skip_spaces();
      ConfigValue v = value();
      end_of_line();
      auto& entries = out.back().entries;
      if (std::any_of(entries.begin(), entries.end(), [&](const ConfigEntry& e) { return e.key == key; }))
        throw ConfigError("duplicate key '" + key + "' in [" + out.back().name + "]", line, col);
      entries.push_back(ConfigEntry{key, std::move(v), line, col});
    }
    return out;
  }

private:
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(what, line_, col_); }

  void skip_spaces() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
      advance();
  }
  void skip_comment() {
    if (peek() == '#')
      while (!done() && peek() != '\n')
        advance();
  }
  void skip_blank_lines() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() != '\n')
        return;
      advance();
    }
  }
  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (done())
      return;
    if (peek() != '\n')
      fail(std::string("unexpected '") + peek() + "'");
    advance();
  }
  void expect(char c) {
    if (peek() != c)
      fail(done() ? std::string("expected '") + c + "' before end of input"
                  : std::string("expected '") + c + "', found '" + peek() + "'");
    advance();
  }
  std::string ident(const char* what) {
    std::string out;
    while (!done() && ident_char(peek())) {
      out += peek();
      advance();
    }
    if (out.empty())
      fail(std::string("expected ") + what);
    return out;
  }

  ConfigValue value() {
    ConfigValue v;
    v.line = line_;
    v.column = col_;
    const char c = peek();
    if (c == '"') {
      advance();
      std::string str;
      while (true) {
        if (done() || peek() == '\n')
          throw ConfigError("unterminated string", v.line, v.column);
        const char d = peek();
        advance();
        if (d == '"')
          break;
        if (d == '\\') {
          if (done())
            throw ConfigError("unterminated string", v.line, v.column);
          const char e = peek();
          if (e != '"' && e != '\\')
            fail(std::string("unknown escape '\\") + e + "'");
          str += e;
          advance();
          continue;
        }
        str += d;
      }
      v.data = std::move(str);
    } else if (c == '[') {
      advance();
      std::vector<ConfigValue> items;
      skip_blank_lines();
      while (peek() != ']') {
        if (done())
          throw ConfigError("unterminated array", v.line, v.column);
        items.push_back(value());
        skip_blank_lines();
        if (peek() == ',') {
          advance();
          skip_blank_lines();
        } else if (peek() != ']') {
          fail(done() ? "unterminated array" : std::string("expected ',' or ']', found '") + peek() + "'");
        }
      }
      advance();
      v.data = std::move(items);
    } else if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      advance();
      while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
        advance();
      const std::string_view tok = s_.substr(start, pos_ - start);
      std::int64_t x = 0;
      const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
      const auto [ptr, ec] = std::from_chars(b, tok.data() + tok.size(), x);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ConfigError("invalid integer '" + std::string(tok) + "'", v.line, v.column);
      v.data = x;
    } else {
      fail(done() ? "expected a value before end of input" : std::string("expected a value, found '") + c + "'");
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

}  // namespace

std::vector<ConfigSection> parse_sections(std::string_view text) { return Lexer(text).run(); }

// ---------------------------------------------------------------------------
// Analyses

namespace {

const std::vector<std::pair<Analysis, std::string>>& analysis_names() {
  static const std::vector<std::pair<Analysis, std::string>> names{
      {Analysis::Validate, "validate"},       {Analysis::Kleppner, "kleppner"},
      {Analysis::RelativeKleppner, "relative-kleppner"}, {Analysis::Centralizers, "centralizers"},
      {Analysis::Verdict, "verdict"},         {Analysis::Lattice, "lattice"},
      {Analysis::Oracle, "oracle"},
  };
  return names;
}

}  // namespace

std::string to_string(Analysis a) {
  for (const auto& [k, n] : analysis_names())
    if (k == a)
      return n;
  return "?";
}

std::optional<Analysis> analysis_from_string(std::string_view name) {
  for (const auto& [k, n] : analysis_names())
    if (n == name)
      return k;
  return std::nullopt;
}

const std::vector<Analysis>& all_analyses() {
  static const std::vector<Analysis> all = [] {
    std::vector<Analysis> v;
    for (const auto& kn : analysis_names())
      v.push_back(kn.first);
    return v;
  }();
  return all;
}

// ---------------------------------------------------------------------------
// Resolution

namespace {

[[noreturn]] void fail_at(const ConfigValue& v, const std::string& what) { throw ConfigError(what, v.line, v.column); }
[[noreturn]] void fail_at(const ConfigEntry& e, const std::string& what) { throw ConfigError(what, e.line, e.column); }

class SectionView {
public:
  SectionView(const ConfigSection* s, std::set<std::string> allowed) : s_(s), allowed_(std::move(allowed)) {
    if (!s_ || allowed_.empty())
      return;
    for (const auto& e : s_->entries)
      if (!allowed_.count(e.key))
        fail_at(e, "unknown key '" + e.key + "' in [" + s_->name + "]");
  }

  bool present() const { return s_ != nullptr; }
  const ConfigEntry* find(std::string_view key) const {
    if (!s_)
      return nullptr;
    for (const auto& e : s_->entries)
      if (e.key == key)
        return &e;
    return nullptr;
  }
  const ConfigEntry& require(std::string_view key) const {
    if (const auto* e = find(key))
      return *e;
    throw ConfigError("missing key '" + std::string(key) + "' in [" + s_->name + "]", s_->line, s_->column);
  }
  std::string string_or(std::string_view key, std::string fallback) const {
    const auto* e = find(key);
    return e ? as_string(e->value) : fallback;
  }
  std::int64_t integer_or(std::string_view key, std::int64_t fallback) const {
    const auto* e = find(key);
    return e ? as_integer(e->value) : fallback;
  }
  const ConfigSection& section() const { return *s_; }

  static const std::string& as_string(const ConfigValue& v) {
    if (!v.is_string())
      fail_at(v, "expected a string");
    return std::get<std::string>(v.data);
  }
  static std::int64_t as_integer(const ConfigValue& v) {
    if (!v.is_integer())
      fail_at(v, "expected an integer");
    return std::get<std::int64_t>(v.data);
  }
  static const std::vector<ConfigValue>& as_array(const ConfigValue& v) {
    if (!v.is_array())
      fail_at(v, "expected an array");
    return std::get<std::vector<ConfigValue>>(v.data);
  }

private:
  const ConfigSection* s_;
  std::set<std::string> allowed_;
};

class Resolver {
public:
  Resolver(const std::vector<ConfigSection>& sections, const ConfigOverrides& overrides) : overrides_(overrides) {
    static const std::set<std::string> known{"basis", "group", "subgroup", "cocycle", "run"};
    for (const auto& s : sections) {
      if (!known.count(s.name))
        throw ConfigError("unknown section [" + s.name + "]", s.line, s.column);
      by_name_[s.name] = &s;
    }
  }

  InstanceConfig run() {
    InstanceConfig c;
    if (!by_name_.count("group"))
      throw ConfigError("missing [group] section", 1, 1);
    basis(c);
    group(c);
    subgroup(c);
    run_section(c);
    cocycle(c);
    if (std::find(c.analyses.begin(), c.analyses.end(), Analysis::Oracle) != c.analyses.end() &&
        !c.group->is_finite())
      fail_at(*oracle_entry_, "the oracle analysis needs a finite group");
    return c;
  }

private:
  const ConfigSection* get(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
  }
  void basis(InstanceConfig& c) {
    const ConfigSection* s = get("basis");
    std::vector<std::string> symbols;
    if (s) {
      if (const auto* e = SectionView(s, {}).find("symbols"); e) {
        std::set<std::string> seen;
        for (const auto& v : SectionView::as_array(e->value)) {
          const auto& name = SectionView::as_string(v);
          if (name.empty() || !std::all_of(name.begin(), name.end(), ident_char) ||
              std::isdigit(static_cast<unsigned char>(name[0])))
            fail_at(v, "invalid symbol name '" + name + "'");
          if (!seen.insert(name).second)
            fail_at(v, "symbol '" + name + "' declared twice");
          symbols.push_back(name);
        }
      }
    }
    c.basis = make_basis(symbols);
    if (!s)
      return;
    for (const auto& e : s->entries) {
      if (e.key == "symbols")
        continue;
      if (std::find(symbols.begin(), symbols.end(), e.key) != symbols.end())
        fail_at(e, "'" + e.key + "' declared both as a basis symbol and as a rational parameter");
      const Exponent x = exponent(e.value, BasisPtr{});
      if (x.has_irrational_part())
        fail_at(e.value, "parameter '" + e.key + "' must be rational");
      c.parameters.emplace(e.key, x.constant());
    }
    params_ = c.parameters;
    basis_ = c.basis;
  }

  Exponent exponent(const ConfigValue& v, const BasisPtr& basis) const {
    const std::string text =
        v.is_integer() ? std::to_string(std::get<std::int64_t>(v.data)) : SectionView::as_string(v);
    SymbolResolver resolve = [&](std::string_view name) -> std::optional<Exponent> {
      if (basis)
        if (auto i = basis->index_of(name))
          return Exponent::symbol(basis, *i);
      if (auto it = params_.find(std::string(name)); it != params_.end())
        return Exponent(it->second);
      return std::nullopt;
    };
    try {
      return parse_exponent(text, resolve);
    } catch (const PhaseParseError& err) {
      throw ConfigError(err.what(), v.line, v.column + (v.is_string() ? err.column() : 0));
    }
  }
  Exponent exponent(const ConfigValue& v) const { return exponent(v, basis_); }

  static GroupPtr atom_group(const std::string& spec, const ConfigValue& where) {
    auto arg = [&](const std::string& prefix) -> std::optional<int> {
      if (spec.rfind(prefix + "(", 0) != 0 || spec.back() != ')')
        return std::nullopt;
      const std::string inner = spec.substr(prefix.size() + 1, spec.size() - prefix.size() - 2);
      int n = 0;
      const auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), n);
      if (ec != std::errc() || ptr != inner.data() + inner.size() || n < 0)
        fail_at(where, "invalid rank in '" + spec + "'");
      return n;
    };
    try {
      if (auto n = arg("free_abelian"))
        return Group::free_abelian(*n);
      if (auto n = arg("free"))
        return Group::free(*n);
      if (spec == "heisenberg")
        return Group::heisenberg();
      return Group::builtin(spec);
    } catch (const GroupError& e) {
      fail_at(where, e.what());
    }
  }

  void group(InstanceConfig& c) {
    const SectionView s(get("group"), {"kind", "name", "rank", "factors", "mul", "labels"});
    const auto& kind_entry = s.require("kind");
    const std::string kind = SectionView::as_string(kind_entry.value);
    try {
      if (kind == "builtin") {
        c.group = Group::builtin(SectionView::as_string(s.require("name").value));
      } else if (kind == "free_abelian") {
        c.group = Group::free_abelian(static_cast<int>(SectionView::as_integer(s.require("rank").value)));
      } else if (kind == "free") {
        c.group = Group::free(static_cast<int>(SectionView::as_integer(s.require("rank").value)));
      } else if (kind == "heisenberg") {
        c.group = Group::heisenberg();
      } else if (kind == "product") {
        const auto& fe = s.require("factors");
        const auto& fs = SectionView::as_array(fe.value);
        if (fs.size() != 2)
          fail_at(fe.value, "a product needs exactly two factors");
        c.group = Group::direct_product(atom_group(SectionView::as_string(fs[0]), fs[0]),
                                        atom_group(SectionView::as_string(fs[1]), fs[1]));
      } else if (kind == "table") {
        c.group = table_group(s);
      } else {
        fail_at(kind_entry.value, "unknown group kind '" + kind + "'");
      }
    } catch (const GroupError& e) {
      fail_at(kind_entry, e.what());
    }
  }

  static GroupPtr table_group(const SectionView& s) {
    const auto& me = s.require("mul");
    const auto& rows = SectionView::as_array(me.value);
    FiniteTable t;
    t.name = s.string_or("name", "table");
    t.order = rows.size();
    for (const auto& row : rows) {
      const auto& xs = SectionView::as_array(row);
      if (xs.size() != rows.size())
        fail_at(row, "multiplication table rows must have " + std::to_string(rows.size()) + " entries");
      for (const auto& x : xs)
        t.mul.push_back(static_cast<std::int32_t>(SectionView::as_integer(x)));
    }
    if (const auto* le = s.find("labels")) {
      for (const auto& l : SectionView::as_array(le->value))
        t.labels.push_back(SectionView::as_string(l));
      if (t.labels.size() != t.order)
        fail_at(le->value, "expected one label per element");
    } else {
      for (std::size_t i = 0; i < t.order; ++i)
        t.labels.push_back("#" + std::to_string(i));
    }
    try {
      return Group::finite_table(std::move(t));
    } catch (const GroupError& e) {
      fail_at(me.value, e.what());
    }
  }

  Element element(const GroupPtr& g, const ConfigValue& v) const {
    try {
      return g->parse(SectionView::as_string(v));
    } catch (const GroupError& e) {
      fail_at(v, e.what());
    }
  }

  void subgroup(InstanceConfig& c) {
    const SectionView s(get("subgroup"), {"kind", "columns", "zero", "box", "generators"});
    const GroupPtr& g = c.group;
    if (!s.present()) {
      c.subgroup = Subgroup::full(g);
      return;
    }
    const auto& kind_entry = s.require("kind");
    const std::string kind = SectionView::as_string(kind_entry.value);
    try {
      if (kind == "full") {
        c.subgroup = Subgroup::full(g);
      } else if (kind == "trivial") {
        c.subgroup = Subgroup::trivial(g);
      } else if (kind == "lattice") {
        const auto& ce = s.require("columns");
        const auto& cols = SectionView::as_array(ce.value);
        if (g->kind() != Group::Kind::FreeAbelian)
          fail_at(kind_entry.value, "lattice subgroups need a free abelian group");
        IntMatrix m(g->rank(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) {
          const auto& col = SectionView::as_array(cols[j]);
          if (static_cast<int>(col.size()) != g->rank())
            fail_at(cols[j], "each column needs " + std::to_string(g->rank()) + " entries");
          for (std::size_t i = 0; i < col.size(); ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = SectionView::as_integer(col[i]);
        }
        c.subgroup = Subgroup::lattice(g, m);
      } else if (kind == "coordinate") {
        std::vector<int> zero;
        for (const auto& v : SectionView::as_array(s.require("zero").value))
          zero.push_back(static_cast<int>(SectionView::as_integer(v)));
        c.subgroup = Subgroup::coordinate(g, zero);
      } else if (kind == "box") {
        const auto& be = s.require("box");
        const auto& d = SectionView::as_array(be.value);
        if (d.size() != 3)
          fail_at(be.value, "a box needs three moduli");
        c.subgroup = Subgroup::heisenberg_box(g, SectionView::as_integer(d[0]), SectionView::as_integer(d[1]),
                                              SectionView::as_integer(d[2]));
      } else if (kind == "generated") {
        std::vector<Element> gens;
        for (const auto& v : SectionView::as_array(s.require("generators").value))
          gens.push_back(element(g, v));
        c.subgroup = Subgroup::generated(g, gens);
      } else {
        fail_at(kind_entry.value, "unknown subgroup kind '" + kind + "'");
      }
    } catch (const GroupError& e) {
      fail_at(kind_entry, e.what());
    }
  }

  std::vector<std::vector<Exponent>> exponent_matrix(const ConfigValue& v) const {
    std::vector<std::vector<Exponent>> m;
    for (const auto& row : SectionView::as_array(v)) {
      m.emplace_back();
      for (const auto& x : SectionView::as_array(row))
        m.back().push_back(exponent(x));
    }
    return m;
  }

  void cocycle(InstanceConfig& c) {
    const SectionView s(get("cocycle"),
                        {"kind", "theta", "gamma", "matrix", "j", "values", "similarity"});
    const GroupPtr& g = c.group;
    if (!s.present()) {
      c.cocycle = Cocycle::trivial(g);
      return;
    }
    const auto& kind_entry = s.require("kind");
    const std::string kind = SectionView::as_string(kind_entry.value);
    try {
      if (kind == "trivial") {
        c.cocycle = Cocycle::trivial(g);
      } else if (kind == "rotation") {
        c.cocycle = Cocycle::rotation(g, exponent(s.require("theta").value));
      } else if (kind == "bicharacter") {
        c.cocycle = Cocycle::bicharacter(g, exponent_matrix(s.require("matrix").value));
      } else if (kind == "triple_product") {
        const auto& te = s.require("theta");
        std::vector<Exponent> theta;
        for (const auto& v : SectionView::as_array(te.value))
          theta.push_back(exponent(v));
        c.cocycle = Cocycle::triple_product(g, theta);
      } else if (kind == "heisenberg") {
        const auto* ge = s.find("gamma");
        const auto* te = s.find("theta");
        c.cocycle = Cocycle::heisenberg(g, ge ? exponent(ge->value) : Exponent(),
                                        te ? exponent(te->value) : Exponent());
      } else if (kind == "f2z2") {
        c.cocycle = Cocycle::f2z2(g, static_cast<int>(SectionView::as_integer(s.require("j").value)));
      } else if (kind == "table") {
        if (!g->is_finite())
          fail_at(kind_entry.value, "table cocycles need a finite group");
        std::vector<Phase> table;
        for (const auto& row : exponent_matrix(s.require("values").value))
          for (const auto& x : row)
            table.emplace_back(x);
        c.cocycle = Cocycle::finite_table(g, std::move(table));
      } else if (kind == "random") {
        if (!g->is_finite())
          fail_at(kind_entry.value, "random cocycles need a finite group");
        std::mt19937_64 rng(c.seed);
        c.cocycle = random_finite_cocycle(g, rng);
      } else {
        fail_at(kind_entry.value, "unknown cocycle kind '" + kind + "'");
      }
      if (const auto* se = s.find("similarity")) {
        const auto& xs = SectionView::as_array(se->value);
        if (xs.size() != 2)
          fail_at(se->value, "similarity needs [seed, denominator]");
        const auto seed = SectionView::as_integer(xs[0]);
        const auto den = SectionView::as_integer(xs[1]);
        if (seed < 0 || den <= 0)
          fail_at(se->value, "similarity needs a nonnegative seed and a positive denominator");
        c.cocycle = similarity_transform(c.cocycle, Beta::hashed(static_cast<std::uint64_t>(seed), den));
      }
    } catch (const CocycleError& e) {
      fail_at(kind_entry, e.what());
    } catch (const GroupError& e) {
      fail_at(kind_entry, e.what());
    }
  }

  void run_section(InstanceConfig& c) {
    const SectionView s(get("run"), {"analyses", "seed", "cap", "samples", "truncate"});
    if (const auto* e = s.find("analyses")) {
      std::set<Analysis> chosen;
      for (const auto& v : SectionView::as_array(e->value)) {
        const auto& name = SectionView::as_string(v);
        const auto a = analysis_from_string(name);
        if (!a)
          fail_at(v, "unknown analysis '" + name + "'");
        chosen.insert(*a);
        if (*a == Analysis::Oracle)
          oracle_entry_ = &v;
      }
      for (Analysis a : all_analyses())
        if (chosen.count(a))
          c.analyses.push_back(a);
    } else {
      for (Analysis a : all_analyses())
        if (a != Analysis::Oracle || c.group->is_finite())
          c.analyses.push_back(a);
    }
    auto positive = [&](const char* key, std::int64_t fallback) {
      const auto x = s.integer_or(key, fallback);
      if (x <= 0)
        fail_at(s.require(key).value, std::string(key) + " must be positive");
      return x;
    };
    const auto seed = s.integer_or("seed", 1);
    if (seed < 0)
      fail_at(s.require("seed").value, "seed must be nonnegative");
    c.seed = overrides_.seed.value_or(static_cast<std::uint64_t>(seed));
    c.cap = overrides_.cap.value_or(static_cast<std::size_t>(positive("cap", static_cast<std::int64_t>(c.cap))));
    c.samples = static_cast<std::size_t>(positive("samples", static_cast<std::int64_t>(c.samples)));
    c.truncate = static_cast<int>(positive("truncate", c.truncate));
  }

  ConfigOverrides overrides_;
  std::map<std::string, const ConfigSection*> by_name_;
  std::map<std::string, Rational> params_;
  BasisPtr basis_;
  const ConfigValue* oracle_entry_ = nullptr;
};

}  // namespace

InstanceConfig parse_config(std::string_view text, const ConfigOverrides& overrides) {
  return Resolver(parse_sections(text), overrides).run();
}

}  // namespace kleppner
