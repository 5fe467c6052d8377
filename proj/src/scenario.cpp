#include "twomode/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>

namespace twomode {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw UsageError("scenario: " + msg); }

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(std::string(where) + " is missing required key '" + key + "'");
  }
  return obj.at(key);
}

std::int64_t as_int(const json& v, const char* what) {
  if (!v.is_number_integer()) fail(std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

double as_double(const json& v, const char* what) {
  if (!v.is_number()) fail(std::string(what) + " must be a number");
  return v.get<double>();
}

cplx as_complex(const json& v, const char* what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(std::string(what) + " must be a number or [re, im] pair");
}

// the state specs the scenario format accepts, with their required keys
void validate_state_spec(const json& spec, std::optional<std::uint64_t>& seed) {
  const std::string type = require(spec, "type", "state").get<std::string>();
  if (type == "fock") {
    as_int(require(spec, "n_a", "fock state"), "n_a");
    as_int(require(spec, "n_b", "fock state"), "n_b");
  } else if (type == "noon") {
    as_int(require(spec, "n", "noon state"), "n");
  } else if (type == "relative_phase") {
    as_int(require(spec, "n", "relative_phase state"), "n");
    as_int(require(spec, "p", "relative_phase state"), "p");
  } else if (type == "coherent_product") {
    as_complex(require(spec, "alpha", "coherent_product"), "alpha");
    as_complex(require(spec, "beta", "coherent_product"), "beta");
  } else if (type == "css") {
    as_int(require(spec, "n", "css state"), "n");
    as_double(require(spec, "theta", "css state"), "theta");
    as_double(require(spec, "phi", "css state"), "phi");
  } else if (type == "twisted") {
    as_double(require(spec, "chi_t", "twisted state"), "chi_t");
    validate_state_spec(require(spec, "inner", "twisted state"), seed);
  } else if (type == "dephased") {
    const std::string level = require(spec, "level", "dephased state").get<std::string>();
    if (level != "global" && level != "local") fail("dephased level must be 'global' or 'local'");
    validate_state_spec(require(spec, "inner", "dephased state"), seed);
  } else if (type == "separable") {
    const std::string ssr = require(spec, "ssr", "separable state").get<std::string>();
    if (ssr != "local" && ssr != "none") fail("separable ssr must be 'local' or 'none'");
    if (spec.contains("random")) {
      const json& r = spec.at("random");
      as_int(require(r, "terms", "separable random spec"), "terms");
      seed = static_cast<std::uint64_t>(as_int(require(r, "seed", "separable random spec"), "seed"));
    } else if (spec.contains("terms")) {
      const json& terms = spec.at("terms");
      if (!terms.is_array() || terms.empty()) fail("separable terms must be a non-empty array");
      for (const auto& t : terms) {
        as_double(require(t, "weight", "separable term"), "weight");
        require(t, "rho_a", "separable term");
        require(t, "rho_b", "separable term");
      }
    } else {
      fail("separable state needs either 'terms' or 'random'");
    }
  } else {
    fail("unknown state type '" + type + "'");
  }
}

bool state_uses_dense_path(const json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "coherent_product" || type == "separable" || type == "dephased") return true;
  if (type == "twisted") return state_uses_dense_path(spec.at("inner"));
  return false;
}

SingleModeDensity parse_factor(const json& spec) {
  if (spec.contains("diag")) {
    const json& d = spec.at("diag");
    if (!d.is_array() || d.empty()) fail("factor diag must be a non-empty array");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = as_double(d[i], "diag entry");
    return SingleModeDensity(std::move(m));
  }
  if (spec.contains("matrix")) {
    const json& rows = spec.at("matrix");
    if (!rows.is_array() || rows.empty()) fail("factor matrix must be a non-empty array");
    const std::size_t dim = rows.size();
    Eigen::MatrixXcd m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!rows[i].is_array() || rows[i].size() != dim) fail("factor matrix must be square");
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = as_complex(rows[i][j], "matrix entry");
    }
    return SingleModeDensity(std::move(m));
  }
  fail("factor needs 'diag' or 'matrix'");
}

SectorState build_sector_state(const json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "fock") {
    const std::int64_t n_a = spec.at("n_a").get<std::int64_t>();
    const std::int64_t n_b = spec.at("n_b").get<std::int64_t>();
    if (n_a < 0 || n_b < 0) fail("fock occupations must be non-negative");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_a + n_b + 1);
    amps(n_b) = 1.0;
    return SectorState(n_a + n_b, std::move(amps));
  }
  if (type == "noon") {
    const std::int64_t n = spec.at("n").get<std::int64_t>();
    if (n <= 0) fail("noon n must be positive");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n + 1);
    amps(0) = M_SQRT1_2;
    amps(n) = M_SQRT1_2;
    return SectorState(n, std::move(amps));
  }
  if (type == "relative_phase") {
    return relative_phase_sector(
        RelativePhaseSpec(spec.at("n").get<std::int64_t>(), spec.at("p").get<std::int64_t>()));
  }
  if (type == "css") {
    return css_sector(spec.at("n").get<std::int64_t>(), spec.at("theta").get<double>(),
                      spec.at("phi").get<double>());
  }
  if (type == "twisted") {
    return one_axis_twist(build_sector_state(spec.at("inner")), spec.at("chi_t").get<double>());
  }
  fail("state type '" + type + "' has no fixed-N sector realization");
}

DensityOperator build_dense_state(const json& spec, const FockSpace& space) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "coherent_product") {
    return coherent_product(space, as_complex(spec.at("alpha"), "alpha"),
                            as_complex(spec.at("beta"), "beta"))
        .rho;
  }
  if (type == "separable") {
    const SsrMode mode =
        spec.at("ssr").get<std::string>() == "local" ? SsrMode::local_ssr : SsrMode::unrestricted;
    if (spec.contains("random")) {
      const auto terms = static_cast<int>(spec.at("random").at("terms").get<std::int64_t>());
      const auto seed = static_cast<std::uint64_t>(spec.at("random").at("seed").get<std::int64_t>());
      return assemble_separable(random_separable(space, terms, seed, mode), space);
    }
    std::vector<SeparableTerm> terms;
    for (const auto& t : spec.at("terms")) {
      terms.push_back(
          {t.at("weight").get<double>(), parse_factor(t.at("rho_a")), parse_factor(t.at("rho_b"))});
    }
    return assemble_separable(SeparableEnsemble(std::move(terms), mode), space);
  }
  if (type == "dephased") {
    const DensityOperator inner = build_dense_state(spec.at("inner"), space);
    return spec.at("level").get<std::string>() == "global" ? ssr_dephase_global(inner)
                                                           : ssr_dephase_local(inner);
  }
  // fixed-N pure spec used inside a dense wrapper
  return make_density(embed_sector(space, build_sector_state(spec)));
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) fail("document must be a single object");
  Scenario s;
  if (doc.contains("space")) {
    const json& space = doc.at("space");
    if (space.contains("n_max")) {
      const std::int64_t n_max = as_int(space.at("n_max"), "space.n_max");
      if (n_max < 0) fail("space.n_max must be non-negative");
      s.n_max = n_max;
    }
  }
  s.state = require(doc, "state", "scenario");
  validate_state_spec(s.state, s.seed);

  if (doc.contains("tests")) {
    const json& tests = doc.at("tests");
    if (tests.contains("m_max")) s.tests.corr_m_max = static_cast<int>(as_int(tests.at("m_max"), "tests.m_max"));
    if (tests.contains("n_max")) s.tests.corr_n_max = static_cast<int>(as_int(tests.at("n_max"), "tests.n_max"));
    if (tests.contains("margin")) s.tests.margin = as_double(tests.at("margin"), "tests.margin");
    if (tests.contains("enabled")) {
      if (!tests.at("enabled").is_array()) fail("tests.enabled must be an array of name prefixes");
      for (const auto& e : tests.at("enabled")) s.tests.enabled.push_back(e.get<std::string>());
    }
    if (s.tests.corr_m_max < 1 || s.tests.corr_n_max < 1) fail("tests.m_max/n_max must be >= 1");
    if (s.tests.margin < 0.0) fail("tests.margin must be non-negative");
  }

  json echo;
  if (s.n_max) echo["space"] = {{"n_max", *s.n_max}};
  echo["state"] = s.state;
  echo["tests"] = {{"m_max", s.tests.corr_m_max},
                   {"n_max", s.tests.corr_n_max},
                   {"margin", s.tests.margin}};
  if (!s.tests.enabled.empty()) echo["tests"]["enabled"] = s.tests.enabled;
  s.echo = std::move(echo);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw UsageError("scenario parse error in '" + path + "': " + e.what());
  }
  return parse_scenario(doc);
}

BuiltState build_state(const Scenario& scenario) {
  BuiltState out;
  if (state_uses_dense_path(scenario.state)) {
    if (!scenario.n_max) fail("this state spec needs space.n_max");
    out.dense = build_dense_state(scenario.state, FockSpace(*scenario.n_max));
    return out;
  }
  SectorState s = build_sector_state(scenario.state);
  if (scenario.n_max && s.total_n() > *scenario.n_max) {
    fail("state total occupation " + std::to_string(s.total_n()) + " exceeds space.n_max " +
         std::to_string(*scenario.n_max));
  }
  out.sector = std::move(s);
  return out;
}

RunReport run_scenario(const Scenario& scenario) {
  const BuiltState state = build_state(scenario);
  RunReport out;
  out.scenario_echo = scenario.echo;
  out.provenance.seed = scenario.seed;
  if (state.dense) {
    out.path = "dense";
    out.report = full_report(*state.dense, scenario.tests);
  } else {
    out.path = "sector";
    out.report = full_report(*state.sector, scenario.tests);
  }
  return out;
}

namespace {

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v(0), v(1), v(2)}); }

Eigen::Vector3d vec3_from_json(const json& v) {
  return {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
}

json mat3_to_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

Eigen::Matrix3d mat3_from_json(const json& rows) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  }
  return m;
}

json maybe_nan(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

double from_maybe_nan(const json& v) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

json ssr_entry(bool compliant, double residual) {
  return {{"compliant", compliant}, {"residual", residual}};
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "entangled") return Verdict::entangled;
  if (s == "not_detected") return Verdict::not_detected;
  if (s == "undefined") return Verdict::undefined;
  throw UsageError("unknown verdict '" + s + "'");
}

}  // namespace

json report_to_json(const RunReport& report) {
  const WitnessReport& r = report.report;
  json doc;
  doc["version"] = report.provenance.version;
  doc["timestamp"] = report.provenance.timestamp;
  doc["seed"] = report.provenance.seed ? json(*report.provenance.seed) : json(nullptr);
  doc["scenario"] = report.scenario_echo;
  doc["path"] = report.path;
  doc["moments"] = {{"mean_number", r.moments.mean_number},
                    {"means", vec3_to_json(r.moments.means)},
                    {"covariance", mat3_to_json(r.moments.covariance)}};
  doc["principal_frame"] = {{"rotation", mat3_to_json(r.frame.rotation)},
                            {"variances", vec3_to_json(r.frame.principal_variances)},
                            {"means", vec3_to_json(r.frame.principal_means)}};
  doc["ssr"] = {{"global", ssr_entry(r.ssr.global_compliant, r.ssr.global_residual)},
                {"local_a", ssr_entry(r.ssr.local_a_compliant, r.ssr.local_a_residual)},
                {"local_b", ssr_entry(r.ssr.local_b_compliant, r.ssr.local_b_residual)}};
  json witnesses = json::array();
  for (const auto& w : r.results) {
    witnesses.push_back({{"name", w.name},
                         {"value", maybe_nan(w.value)},
                         {"threshold", w.threshold},
                         {"margin", maybe_nan(w.margin)},
                         {"verdict", to_string(w.verdict)}});
  }
  doc["witnesses"] = std::move(witnesses);
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) {
    diagnostics.push_back({{"name", d.name}, {"value", d.value}, {"threshold", d.threshold}});
  }
  doc["diagnostics"] = std::move(diagnostics);
  return doc;
}

RunReport report_from_json(const json& doc) {
  RunReport out;
  out.provenance.version = doc.at("version").get<std::string>();
  out.provenance.timestamp = doc.at("timestamp").get<std::string>();
  if (!doc.at("seed").is_null()) out.provenance.seed = doc.at("seed").get<std::uint64_t>();
  out.scenario_echo = doc.at("scenario");
  out.path = doc.at("path").get<std::string>();

  WitnessReport& r = out.report;
  const json& m = doc.at("moments");
  r.moments.mean_number = m.at("mean_number").get<double>();
  r.moments.means = vec3_from_json(m.at("means"));
  r.moments.covariance = mat3_from_json(m.at("covariance"));
  const json& f = doc.at("principal_frame");
  r.frame.rotation = mat3_from_json(f.at("rotation"));
  r.frame.principal_variances = vec3_from_json(f.at("variances"));
  r.frame.principal_means = vec3_from_json(f.at("means"));
  const json& ssr = doc.at("ssr");
  r.ssr.global_compliant = ssr.at("global").at("compliant").get<bool>();
  r.ssr.global_residual = ssr.at("global").at("residual").get<double>();
  r.ssr.local_a_compliant = ssr.at("local_a").at("compliant").get<bool>();
  r.ssr.local_a_residual = ssr.at("local_a").at("residual").get<double>();
  r.ssr.local_b_compliant = ssr.at("local_b").at("compliant").get<bool>();
  r.ssr.local_b_residual = ssr.at("local_b").at("residual").get<double>();
  for (const auto& w : doc.at("witnesses")) {
    WitnessResult res;
    res.name = w.at("name").get<std::string>();
    res.value = from_maybe_nan(w.at("value"));
    res.threshold = w.at("threshold").get<double>();
    res.margin = from_maybe_nan(w.at("margin"));
    res.verdict = verdict_from_string(w.at("verdict").get<std::string>());
    r.results.push_back(std::move(res));
  }
  for (const auto& d : doc.at("diagnostics")) {
    r.diagnostics.push_back(
        {d.at("name").get<std::string>(), d.at("value").get<double>(), d.at("threshold").get<double>()});
  }
  return out;
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace twomode
