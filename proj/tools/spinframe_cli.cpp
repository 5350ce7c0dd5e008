// Copyright 2026 The spinframe Authors
// SPDX-License-Identifier: Apache-2.0

// spinframe: run the transport and Dirac identity checks on a scenario file.
//
//   spinframe check --scenario polar.json [--checks a,b|all] [--seed N] [--out r.json] [--format json|pretty]
//   spinframe metric --scenario polar.json --point 1.5,0.7
//   spinframe report --in r.json [--json|--pretty]
//   spinframe list-checks
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 load or usage error.

#include <spinframe/scenario.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitLoad = 2;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

std::string format_report(const nlohmann::ordered_json& j, const std::string& format) {
  return format == "pretty" ? spinframe::render_pretty(j) : j.dump(2) + "\n";
}

// |R| per grid point for the scenario's own connection {g} + g·K.
std::string residual_csv(const spinframe::Scenario& s) {
  using namespace spinframe;
  const ScenarioFields f = resolve_fields(s);
  const SpinConnectionCoeffs sc = spin_coeffs(connection_from_contorsion(f.g, f.k), *s.frame, s.eta);
  const SpinorField r = dirac_residual(*s.frame, sc, f.psi, DiracParams{s.mass, s.rep});
  std::string out;
  for (const auto& c : s.chart->coords()) out += c + ",";
  out += "residual_norm\n";
  char buf[64];
  for (std::size_t p = 0; p < s.chart->num_points(); ++p) {
    const Point x = s.chart->point(p);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,", x[i]);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", r(x).norm());
    out += buf;
  }
  return out;
}

int cmd_check(const std::string& scenario_path, const std::string& checks, const std::optional<std::uint64_t>& seed,
              const std::string& out_path, const std::string& format, const std::string& csv_path) {
  spinframe::Scenario s = spinframe::load_scenario(scenario_path);
  if (seed) s.seed = *seed;
  std::vector<std::string> which;
  if (checks != "all") which = split_list(checks);
  const spinframe::Report report = spinframe::run_checks(s, which);
  const std::string text = format_report(spinframe::report_to_json(report), format);
  if (!out_path.empty()) {
    if (!write_text(out_path, text)) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return kExitLoad;
    }
  }
  std::cout << text;
  if (!csv_path.empty() && !write_text(csv_path, residual_csv(s))) {
    std::cerr << "error: cannot write '" << csv_path << "'\n";
    return kExitLoad;
  }
  for (const auto& c : report.checks)
    if (!c.pass) std::cerr << "check failed: " << c.name << (c.error.empty() ? "" : " (" + c.error + ")") << "\n";
  return report.pass() ? kExitPass : kExitFail;
}

int cmd_metric(const std::string& scenario_path, const std::string& point_text) {
  const spinframe::Scenario s = spinframe::load_scenario(scenario_path);
  const auto parts = split_list(point_text);
  if (static_cast<int>(parts.size()) != s.chart->dim()) {
    std::cerr << "error: --point needs " << s.chart->dim() << " comma-separated coordinates\n";
    return kExitLoad;
  }
  spinframe::Point x(s.chart->dim());
  for (std::size_t i = 0; i < parts.size(); ++i) x[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
  const spinframe::Matrix g = spinframe::induce_metric_at((*s.frame)(x), s.eta);
  nlohmann::ordered_json j;
  j["point"] = std::vector<double>(x.data(), x.data() + x.size());
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < g.cols(); ++k) row.push_back(g(i, k));
    rows.push_back(row);
  }
  j["metric"] = rows;
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_report(const std::string& in_path, bool pretty) {
  std::ifstream in(in_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << in_path << "'\n";
    return kExitLoad;
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLoad;
  }
  std::cout << format_report(j, pretty ? "pretty" : "json");
  return j.value("pass", false) ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify frame-transport and Dirac identities on a coordinate chart"};
  app.require_subcommand(1);

  std::string scenario, checks = "all", out, format = "json", csv, point, report_in;
  std::optional<std::uint64_t> seed;
  bool as_json = false, as_pretty = false;

  auto* check = app.add_subcommand("check", "run checks on a scenario");
  check->add_option("--scenario", scenario, "scenario JSON file")->required();
  check->add_option("--checks", checks, "comma-separated check names, or 'all'");
  check->add_option("--seed", seed, "override the scenario seed");
  check->add_option("--out", out, "also write the report to this file");
  check->add_option("--format", format, "json or pretty")->check(CLI::IsMember({"json", "pretty"}));
  check->add_option("--residual-csv", csv, "write the Dirac residual norm per grid point");

  auto* metric = app.add_subcommand("metric", "print the induced metric at a point");
  metric->add_option("--scenario", scenario, "scenario JSON file")->required();
  metric->add_option("--point", point, "comma-separated coordinates")->required();

  auto* report = app.add_subcommand("report", "re-render a saved report");
  report->add_option("--in", report_in, "report JSON file")->required();
  auto* json_flag = report->add_flag("--json", as_json, "print JSON (default)");
  report->add_flag("--pretty", as_pretty, "print a table")->excludes(json_flag);

  auto* list = app.add_subcommand("list-checks", "print the check names in run order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitLoad;
  }

  try {
    if (*check) return cmd_check(scenario, checks, seed, out, format, csv);
    if (*metric) return cmd_metric(scenario, point);
    if (*report) return cmd_report(report_in, as_pretty);
    if (*list) {
      for (const auto& n : spinframe::check_names()) std::cout << n << "\n";
      return kExitPass;
    }
  } catch (const spinframe::LoadError& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return kExitLoad;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLoad;
  }
  return kExitLoad;
}
