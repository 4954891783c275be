#include "kleppner/report.hpp"

#include <chrono>
#include <sstream>

#include "json.hpp"
#include "kleppner/kleppner.hpp"
#include "kleppner/oracle.hpp"
#include "kleppner/verdict.hpp"

namespace kleppner {

// ---------------------------------------------------------------------------
// Running

namespace {

std::vector<std::string> format_all(const Group& g, const std::vector<Element>& xs) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (const auto& x : xs)
    out.push_back(g.format(x));
  return out;
}

DecisionRecord record(const Group& g, const TriBool& t) {
  return {to_string(t.value), t.strategy, t.reason, format_all(g, t.witness)};
}

CheckRecord record(const Group& g, const CheckResult& c) {
  return {c.ok, c.checked, c.identity, format_all(g, c.witness)};
}

VerdictRecord record(const Group& g, const Verdict& v) {
  VerdictRecord r{to_string(v.conclusion), {}, format_all(g, v.witness), v.missing, v.note};
  for (const auto& step : v.chain) {
    StepRecord s{step.rule, {}};
    for (const auto& p : step.premises)
      s.premises.push_back({fact_name(p.fact), p.value});
    r.chain.push_back(std::move(s));
  }
  return r;
}

std::string lattice_kind(IntermediateLattice::Kind k) {
  switch (k) {
    case IntermediateLattice::Kind::Complete:
      return "complete";
    case IntermediateLattice::Kind::Truncated:
      return "truncated";
    default:
      return "unknown";
  }
}

}  // namespace

Report run(const InstanceConfig& config) {
  Report r;
  const SubgroupPtr& h = config.subgroup;
  const CocyclePtr& sigma = config.cocycle;
  const Group& g = *config.group;
  r.instance.group = g.name();
  r.instance.subgroup = h->describe();
  r.instance.cocycle = sigma->describe();
  r.instance.basis = config.basis->symbols();
  for (const auto& [name, value] : config.parameters)
    r.instance.parameters.emplace(name, value.str());
  r.seed = config.seed;
  r.cap = config.cap;

  SearchCaps caps;
  caps.max_visited = config.cap;
  const ScopedSearchCaps scope(caps);

  for (Analysis a : config.analyses) {
    const std::string name = to_string(a);
    r.analyses.push_back(name);
    const auto start = std::chrono::steady_clock::now();
    switch (a) {
      case Analysis::Validate: {
        Budget budget;
        budget.samples = config.samples;
        budget.seed = config.seed;
        r.validate = ValidationRecord{record(g, validate_cocycle(*sigma, budget)),
                                      record(g, check_tilde_identities(*sigma, budget))};
        break;
      }
      case Analysis::Kleppner:
        r.kleppner = record(g, kleppner_of_subgroup(h, sigma));
        break;
      case Analysis::RelativeKleppner:
        r.relative_kleppner = record(g, relative_kleppner(h, sigma));
        break;
      case Analysis::Centralizers: {
        CentralizerRecord c;
        if (const auto cg = centralizer_of_subgroup(h))
          c.centralizer = (*cg)->describe();
        const auto sc = sigma_centralizer(h, sigma);
        if (sc.description)
          c.sigma_centralizer = (*sc.description)->describe();
        c.sigma_centralizer_trivial = record(g, sc.is_trivial);
        r.centralizers = std::move(c);
        break;
      }
      case Analysis::Verdict:
        r.verdict = VerdictPair{record(g, twisted_simplicity(h, sigma)), record(g, cstar_irreducible(h, sigma))};
        break;
      case Analysis::Lattice: {
        const auto l = intermediate_lattice(h, sigma, config.truncate);
        LatticeRecord rec{lattice_kind(l.kind), l.shape, {}, l.note};
        for (const auto& m : l.members)
          rec.members.push_back(m->describe());
        r.lattice = std::move(rec);
        break;
      }
      case Analysis::Oracle: {
        OracleRecord o;
        try {
          const auto rel = relative_commutant_dim(h, sigma);
          o.relative = {rel.route_a, rel.route_b};
          const auto cen = center_dim(sigma);
          o.center = {cen.route_a, cen.route_b};
        } catch (const RouteMismatch& e) {
          o.agree = false;
          o.error = e.what();
          o.relative = {e.route_a, e.route_b};
          r.exit_code = kExitOracleMismatch;
        } catch (const OracleError& e) {
          o.error = e.what();
          if (r.exit_code == kExitOk)
            r.exit_code = kExitUsage;
        }
        r.oracle = std::move(o);
        break;
      }
    }
    const std::chrono::duration<double, std::milli> took = std::chrono::steady_clock::now() - start;
    r.timing_ms[name] = took.count();
  }
  return r;
}

Report without_timing(Report r) {
  r.timing_ms.clear();
  return r;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

void to_json(json& j, const DecisionRecord& d) {
  j = {{"value", d.value}, {"strategy", d.strategy}, {"reason", d.reason}, {"witness", d.witness}};
}
void from_json(const json& j, DecisionRecord& d) {
  j.at("value").get_to(d.value);
  j.at("strategy").get_to(d.strategy);
  j.at("reason").get_to(d.reason);
  j.at("witness").get_to(d.witness);
}

void to_json(json& j, const CheckRecord& c) {
  j = {{"ok", c.ok}, {"checked", c.checked}, {"identity", c.identity}, {"witness", c.witness}};
}
void from_json(const json& j, CheckRecord& c) {
  j.at("ok").get_to(c.ok);
  j.at("checked").get_to(c.checked);
  j.at("identity").get_to(c.identity);
  j.at("witness").get_to(c.witness);
}

void to_json(json& j, const ValidationRecord& v) { j = {{"cocycle", v.cocycle}, {"tilde", v.tilde}}; }
void from_json(const json& j, ValidationRecord& v) {
  j.at("cocycle").get_to(v.cocycle);
  j.at("tilde").get_to(v.tilde);
}

namespace {

json nullable(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }
std::optional<std::string> nullable_from(const json& j) {
  if (j.is_null())
    return std::nullopt;
  return j.get<std::string>();
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v)
    j[key] = *v;
}
template <class T>
void take(const json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key))
    v = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const CentralizerRecord& c) {
  j = {{"centralizer", nullable(c.centralizer)},
       {"sigma_centralizer", nullable(c.sigma_centralizer)},
       {"sigma_centralizer_trivial", c.sigma_centralizer_trivial}};
}
void from_json(const json& j, CentralizerRecord& c) {
  c.centralizer = nullable_from(j.at("centralizer"));
  c.sigma_centralizer = nullable_from(j.at("sigma_centralizer"));
  j.at("sigma_centralizer_trivial").get_to(c.sigma_centralizer_trivial);
}

void to_json(json& j, const PremiseRecord& p) { j = {{"fact", p.fact}, {"value", p.value}}; }
void from_json(const json& j, PremiseRecord& p) {
  j.at("fact").get_to(p.fact);
  j.at("value").get_to(p.value);
}

void to_json(json& j, const StepRecord& s) { j = {{"rule", s.rule}, {"premises", s.premises}}; }
void from_json(const json& j, StepRecord& s) {
  j.at("rule").get_to(s.rule);
  j.at("premises").get_to(s.premises);
}

void to_json(json& j, const VerdictRecord& v) {
  j = {{"conclusion", v.conclusion}, {"chain", v.chain}, {"witness", v.witness}, {"missing", v.missing},
       {"note", v.note}};
}
void from_json(const json& j, VerdictRecord& v) {
  j.at("conclusion").get_to(v.conclusion);
  j.at("chain").get_to(v.chain);
  j.at("witness").get_to(v.witness);
  j.at("missing").get_to(v.missing);
  j.at("note").get_to(v.note);
}

void to_json(json& j, const VerdictPair& v) { j = {{"simplicity", v.simplicity}, {"irreducibility", v.irreducibility}}; }
void from_json(const json& j, VerdictPair& v) {
  j.at("simplicity").get_to(v.simplicity);
  j.at("irreducibility").get_to(v.irreducibility);
}

void to_json(json& j, const LatticeRecord& l) {
  j = {{"kind", l.kind}, {"shape", l.shape}, {"members", l.members}, {"note", l.note}};
}
void from_json(const json& j, LatticeRecord& l) {
  j.at("kind").get_to(l.kind);
  j.at("shape").get_to(l.shape);
  j.at("members").get_to(l.members);
  j.at("note").get_to(l.note);
}

void to_json(json& j, const RoutePair& p) { j = {{"route_a", p.route_a}, {"route_b", p.route_b}}; }
void from_json(const json& j, RoutePair& p) {
  j.at("route_a").get_to(p.route_a);
  j.at("route_b").get_to(p.route_b);
}

void to_json(json& j, const OracleRecord& o) {
  j = {{"agree", o.agree}, {"relative", o.relative}, {"center", o.center}, {"error", o.error}};
}
void from_json(const json& j, OracleRecord& o) {
  j.at("agree").get_to(o.agree);
  j.at("relative").get_to(o.relative);
  j.at("center").get_to(o.center);
  j.at("error").get_to(o.error);
}

void to_json(json& j, const InstanceRecord& i) {
  j = {{"group", i.group},
       {"subgroup", i.subgroup},
       {"cocycle", i.cocycle},
       {"basis", i.basis},
       {"parameters", i.parameters}};
}
void from_json(const json& j, InstanceRecord& i) {
  j.at("group").get_to(i.group);
  j.at("subgroup").get_to(i.subgroup);
  j.at("cocycle").get_to(i.cocycle);
  j.at("basis").get_to(i.basis);
  j.at("parameters").get_to(i.parameters);
}

std::string to_json(const Report& r, int indent) {
  json j = {{"schema", r.schema},   {"instance", r.instance},   {"seed", r.seed},
            {"cap", r.cap},         {"analyses", r.analyses},   {"timing_ms", r.timing_ms},
            {"exit_code", r.exit_code}};
  put(j, "validate", r.validate);
  put(j, "kleppner", r.kleppner);
  put(j, "relative_kleppner", r.relative_kleppner);
  put(j, "centralizers", r.centralizers);
  put(j, "verdict", r.verdict);
  put(j, "lattice", r.lattice);
  put(j, "oracle", r.oracle);
  return j.dump(indent);
}

Report report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    Report r;
    j.at("schema").get_to(r.schema);
    if (r.schema != kReportSchema)
      throw std::invalid_argument("unsupported report schema '" + r.schema + "'");
    j.at("instance").get_to(r.instance);
    j.at("seed").get_to(r.seed);
    j.at("cap").get_to(r.cap);
    j.at("analyses").get_to(r.analyses);
    j.at("timing_ms").get_to(r.timing_ms);
    j.at("exit_code").get_to(r.exit_code);
    take(j, "validate", r.validate);
    take(j, "kleppner", r.kleppner);
    take(j, "relative_kleppner", r.relative_kleppner);
    take(j, "centralizers", r.centralizers);
    take(j, "verdict", r.verdict);
    take(j, "lattice", r.lattice);
    take(j, "oracle", r.oracle);
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Text

namespace {

std::string joined(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs)
    out += (out.empty() ? "" : ", ") + x;
  return out;
}

void decision(std::ostringstream& os, const char* label, const DecisionRecord& d) {
  os << label << ": " << d.value << " [" << d.strategy << "]";
  if (!d.witness.empty())
    os << " witness {" << joined(d.witness) << "}";
  os << "\n";
  if (!d.reason.empty())
    os << "  " << d.reason << "\n";
}

void check(std::ostringstream& os, const char* label, const CheckRecord& c) {
  os << "  " << label << ": " << (c.ok ? "ok" : "FAILED") << " (" << c.checked << " checked)";
  if (!c.ok)
    os << " " << c.identity << " at {" << joined(c.witness) << "}";
  os << "\n";
}

void verdict(std::ostringstream& os, const char* label, const VerdictRecord& v) {
  os << label << ": " << v.conclusion;
  if (!v.chain.empty())
    os << " via " << v.chain.back().rule;
  os << "\n";
  for (const auto& step : v.chain) {
    os << "  " << step.rule << ":";
    for (const auto& p : step.premises)
      os << " " << p.fact << "=" << p.value;
    os << "\n";
  }
  if (!v.witness.empty())
    os << "  witness {" << joined(v.witness) << "}\n";
  if (!v.missing.empty())
    os << "  missing " << v.missing << "\n";
  if (!v.note.empty())
    os << "  note: " << v.note << "\n";
}

}  // namespace

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << "group      " << r.instance.group << "\n"
     << "subgroup   " << r.instance.subgroup << "\n"
     << "cocycle    " << r.instance.cocycle << "\n";
  if (!r.instance.basis.empty())
    os << "symbols    " << joined(r.instance.basis) << "\n";
  os << "seed " << r.seed << ", cap " << r.cap << "\n\n";
  if (r.validate) {
    os << "validation\n";
    check(os, "cocycle identity", r.validate->cocycle);
    check(os, "twist identities", r.validate->tilde);
  }
  if (r.kleppner)
    decision(os, "kleppner (H, sigma|H)", *r.kleppner);
  if (r.relative_kleppner)
    decision(os, "relative kleppner", *r.relative_kleppner);
  if (r.centralizers) {
    os << "centralizer C_G(H): " << r.centralizers->centralizer.value_or("not described") << "\n"
       << "sigma-centralizer: " << r.centralizers->sigma_centralizer.value_or("not described") << "\n";
    decision(os, "sigma-centralizer trivial", r.centralizers->sigma_centralizer_trivial);
  }
  if (r.verdict) {
    verdict(os, "twisted simplicity of H", r.verdict->simplicity);
    verdict(os, "C*-irreducibility", r.verdict->irreducibility);
  }
  if (r.lattice) {
    os << "intermediate lattice: " << r.lattice->kind;
    if (!r.lattice->shape.empty())
      os << " (" << r.lattice->shape << ")";
    os << "\n";
    for (std::size_t i = 0; i < r.lattice->members.size(); ++i)
      os << "  [" << i << "] " << r.lattice->members[i] << "\n";
    if (!r.lattice->note.empty())
      os << "  note: " << r.lattice->note << "\n";
  }
  if (r.oracle) {
    os << "oracle: relative commutant A=" << r.oracle->relative.route_a << " B=" << r.oracle->relative.route_b
       << ", center A=" << r.oracle->center.route_a << " B=" << r.oracle->center.route_b
       << (r.oracle->agree ? "" : " MISMATCH") << "\n";
    if (!r.oracle->error.empty())
      os << "  " << r.oracle->error << "\n";
  }
  os << "\ntiming (ms):";
  for (const auto& [name, ms] : r.timing_ms)
    os << " " << name << "=" << ms;
  os << "\nexit " << r.exit_code << "\n";
  return os.str();
}

}  // namespace kleppner
