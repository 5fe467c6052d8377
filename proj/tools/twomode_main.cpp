#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "twomode/campaigns.hpp"
#include "twomode/scenario.hpp"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20260814;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw twomode::UsageError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw twomode::UsageError("failed writing output file '" + path + "'");
}

int cmd_report(const std::string& scenario_path, const std::string& out_path, int mmax, int nmax) {
  twomode::Scenario scenario = twomode::load_scenario(scenario_path);
  if (mmax > 0) scenario.tests.corr_m_max = mmax;
  if (nmax > 0) scenario.tests.corr_n_max = nmax;
  twomode::RunReport report = twomode::run_scenario(scenario);
  report.provenance.timestamp = twomode::iso_timestamp_now();
  write_text(out_path, twomode::report_to_json(report).dump(2) + "\n");

  int entangled = 0;
  for (const auto& w : report.report.results) {
    if (w.verdict == twomode::Verdict::entangled) ++entangled;
  }
  std::cout << "report written to " << out_path << " (" << report.report.results.size()
            << " tests, " << entangled << " entangled verdicts)\n";
  return 0;
}

int cmd_phase_scan(std::int64_t n_min, std::int64_t n_max, bool geometric, std::int64_t p,
                   const std::string& out_path) {
  if (n_min <= 0 || n_min % 2 != 0 || n_max % 2 != 0 || n_min > n_max) {
    throw twomode::UsageError("phase-scan: N range must be even, positive and ordered");
  }
  std::vector<std::int64_t> ns;
  for (std::int64_t n = n_min; n <= n_max; n = geometric ? 2 * n : n + 2) ns.push_back(n);

  std::string csv =
      "N,var_Jx,var_Jy,var_Jz,mean_Jz,sum_var_Sxy,ratio_var_Jx_over_N2,"
      "ratio_mean_Jz_over_N,hillery_threshold\n";
  for (const std::int64_t n : ns) {
    const twomode::PhaseScanRow row = twomode::phase_scan_row(n, p);
    csv += std::to_string(row.n);
    for (const double v : {row.var_jx, row.var_jy, row.var_jz, row.mean_jz, row.sum_var_sxy,
                           row.ratio_var_jx_over_n2, row.ratio_mean_jz_over_n,
                           row.hillery_threshold}) {
      csv += ',';
      csv += twomode::format_double(v);
    }
    csv += '\n';
  }
  write_text(out_path, csv);
  std::cout << "phase scan written to " << out_path << " (" << ns.size() << " rows)\n";
  return 0;
}

int cmd_separable_sample(std::int64_t n_max, int terms, int samples, std::uint64_t seed,
                         const std::string& ssr, const std::string& out_path) {
  const twomode::SsrMode mode =
      ssr == "local" ? twomode::SsrMode::local_ssr : twomode::SsrMode::unrestricted;
  const twomode::SeparableCampaign c =
      twomode::run_separable_campaign(n_max, terms, samples, seed, mode);

  json doc;
  doc["version"] = twomode::kVersion;
  doc["timestamp"] = twomode::iso_timestamp_now();
  doc["mode"] = ssr;
  doc["n_max"] = c.n_max;
  doc["terms"] = c.max_terms;
  doc["samples"] = c.samples;
  doc["seed"] = c.seed;
  doc["min_squeezing_margin"] = c.min_squeezing_margin;
  doc["max_abs_corr"] = c.max_abs_corr;
  doc["max_abs_mean_sx"] = c.max_abs_mean_sx;
  doc["max_abs_mean_sy"] = c.max_abs_mean_sy;
  doc["min_hillery_margin"] = c.min_hillery_margin;
  doc["min_corr_bound_margin"] = c.min_corr_bound_margin;
  doc["pass"] = c.pass;
  write_text(out_path, doc.dump(2) + "\n");

  std::cout << (c.pass ? "PASS" : "FAIL") << ": " << samples << " " << ssr
            << "-mode separable samples at n_max=" << n_max << "\n";
  return c.pass ? 0 : 2;
}

int cmd_sorensen(int sites, double chi_t, int samples, std::uint64_t seed,
                 const std::string& out_path) {
  const twomode::SorensenCampaign c = twomode::run_sorensen_campaign(sites, chi_t, samples, seed);

  json doc;
  doc["version"] = twomode::kVersion;
  doc["timestamp"] = twomode::iso_timestamp_now();
  doc["sites"] = c.sites;
  doc["chi_t"] = c.chi_t;
  doc["samples"] = c.samples;
  doc["seed"] = c.seed;
  doc["min_separable_xi2"] = c.min_separable_xi2;
  doc["undefined_samples"] = c.undefined_samples;
  doc["css_xi2"] = c.css_xi2;
  doc["twisted_xi2_optimal"] = c.twisted_xi2;
  doc["pass"] = c.pass;
  write_text(out_path, doc.dump(2) + "\n");

  std::cout << (c.pass ? "PASS" : "FAIL") << ": min separable xi^2 = " << c.min_separable_xi2
            << ", twisted xi^2 = " << c.twisted_xi2 << "\n";
  return c.pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-mode spin-squeezing and entanglement witness toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, ssr = "local";
  std::int64_t n_min = 2, n_max_sweep = 64, p = 0, n_max_space = 6;
  int mmax = 0, nmax = 0, terms = 8, samples = 1000, sites = 8;
  double chi_t = 0.1;
  std::uint64_t seed = kDefaultSeed;
  bool geometric = false, linear = false;

  auto* report = app.add_subcommand("report", "evaluate all witnesses for a scenario file");
  report->add_option("--state", scenario_path, "scenario JSON file")->required();
  report->add_option("--out", out_path, "output report path")->required();
  report->add_option("--mmax", mmax, "override correlation power m_max");
  report->add_option("--nmax", nmax, "override correlation power n_max");

  auto* scan = app.add_subcommand("phase-scan", "sweep relative-phase states over N");
  scan->add_option("--n-min", n_min, "first N (even)")->required();
  scan->add_option("--n-max", n_max_sweep, "last N (even)")->required();
  scan->add_option("--p", p, "phase index p");
  scan->add_option("--out", out_path, "output CSV path")->required();
  auto* geo = scan->add_flag("--geometric", geometric, "double N between rows");
  scan->add_flag("--linear", linear, "step N by 2 between rows (default)")->excludes(geo);

  auto* sep = app.add_subcommand("separable-sample", "soundness sampling over separable states");
  sep->add_option("--nmax", n_max_space, "space truncation");
  sep->add_option("--terms", terms, "max ensemble terms per sample");
  sep->add_option("--samples", samples, "number of sampled states");
  sep->add_option("--seed", seed, "campaign seed (default 20260814)");
  sep->add_option("--ssr", ssr, "'local' or 'none'")
      ->check(CLI::IsMember({"local", "none"}));
  sep->add_option("--out", out_path, "output JSON path")->required();

  auto* sor = app.add_subcommand("sorensen", "multi-site xi^2 campaign");
  sor->add_option("--sites", sites, "number of one-boson sites (<= 12)");
  sor->add_option("--chi-t", chi_t, "one-axis twisting strength for the reference state");
  sor->add_option("--samples", samples, "number of sampled separable mixtures");
  sor->add_option("--seed", seed, "campaign seed (default 20260814)");
  sor->add_option("--out", out_path, "output JSON path")->required();

  try {
    app.parse(argc, argv);
    if (report->parsed()) return cmd_report(scenario_path, out_path, mmax, nmax);
    if (scan->parsed()) return cmd_phase_scan(n_min, n_max_sweep, geometric, p, out_path);
    if (sep->parsed()) return cmd_separable_sample(n_max_space, terms, samples, seed, ssr, out_path);
    if (sor->parsed()) return cmd_sorensen(sites, chi_t, samples, seed, out_path);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const twomode::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
