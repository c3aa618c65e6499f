// Command line front end: fit delimited files, run simulation studies, and
// emit plot-ready data. Exit codes: 0 success, 1 user error, 2 internal or
// numerical error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lstreg/csv.hpp"
#include "lstreg/dataset.hpp"
#include "lstreg/lst.hpp"
#include "lstreg/lts.hpp"
#include "lstreg/ols.hpp"
#include "lstreg/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lstreg;

namespace {

struct CommonOptions {
  std::uint64_t seed = 0;
  bool seed_set = false;
  double alpha = -1.0;
  double delta = -1.0;
  int restarts = -1;
  int coverage = -1;
  int starts = -1;
  int csteps = -1;
  int reps = -1;
  int threads = 0;
  std::string out_dir;
  std::vector<std::string> methods;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->set_help_flag("--help", "Print help and exit");  // frees -h for coverage
  cmd->add_option("--seed", opts.seed, "Master random seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--alpha", opts.alpha, "LST outlyingness cutoff (>= 1)");
  cmd->add_option("--delta", opts.delta, "LST candidate perturbation");
  cmd->add_option("--restarts", opts.restarts, "LST pair redraws");
  cmd->add_option("--h", opts.coverage, "LTS coverage (0 = floor((n+p+1)/2))");
  cmd->add_option("--starts", opts.starts, "LTS random starts");
  cmd->add_option("--csteps", opts.csteps, "LTS concentration steps per start");
  cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out-dir", opts.out_dir, "Directory for CSV/JSON artifacts");
}

json settings_to_json(const MethodSettings& settings) {
  return json{{"lst",
               {{"alpha", settings.lst.alpha},
                {"delta", settings.lst.delta},
                {"restarts", settings.lst.restarts}}},
              {"lts",
               {{"h", settings.lts.h},
                {"starts", settings.lts.starts},
                {"csteps", settings.lts.csteps}}}};
}

void apply_overrides(const CommonOptions& opts, MethodSettings& settings) {
  if (opts.alpha >= 0) settings.lst.alpha = opts.alpha;
  if (opts.delta >= 0) settings.lst.delta = opts.delta;
  if (opts.restarts >= 0) settings.lst.restarts = opts.restarts;
  if (opts.coverage >= 0) settings.lts.h = opts.coverage;
  if (opts.starts >= 0) settings.lts.starts = opts.starts;
  if (opts.csteps >= 0) settings.lts.csteps = opts.csteps;
}

std::vector<Method> resolve_methods(const std::vector<std::string>& names,
                                    const std::vector<Method>& fallback) {
  if (names.empty()) return fallback;
  std::vector<Method> out;
  for (const std::string& entry : names) {
    std::stringstream stream(entry);
    std::string token;
    while (std::getline(stream, token, ',')) {
      if (!token.empty()) out.push_back(parse_method(token));
    }
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << contents;
}

std::string format_metrics_table(const MetricsTable& table) {
  std::ostringstream out;
  out << std::left << std::setw(8) << "method" << std::right << std::setw(12) << "EMSE"
      << std::setw(12) << "SVAR" << std::setw(12) << "TT" << std::setw(12) << "RE"
      << std::setw(10) << "failures" << "\n";
  for (const MetricsRow& row : table.rows) {
    out << std::left << std::setw(8) << to_string(row.method) << std::right << std::fixed
        << std::setprecision(4) << std::setw(12) << row.emse << std::setw(12);
    if (std::isnan(row.svar))
      out << "NA";
    else
      out << row.svar;
    out << std::setw(12) << std::setprecision(4) << row.total_time_seconds << std::setw(12);
    if (std::isnan(row.re))
      out << "NA";
    else
      out << row.re;
    out << std::setw(10) << row.failures << "\n";
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

std::string metrics_csv(const MetricsTable& table) {
  std::ostringstream out;
  out << "method,emse,svar,total_time_seconds,re,failures\n";
  out.precision(17);
  for (const MetricsRow& row : table.rows) {
    out << to_string(row.method) << ',' << row.emse << ',';
    if (std::isnan(row.svar))
      out << "NA";
    else
      out << row.svar;
    out << ',' << row.total_time_seconds << ',';
    if (std::isnan(row.re))
      out << "NA";
    else
      out << row.re;
    out << ',' << row.failures << "\n";
  }
  return out.str();
}

SimulationScenario scenario_from_json(const json& doc) {
  SimulationScenario s;
  if (!doc.contains("n") || !doc.contains("p"))
    throw ConfigError("scenario file must set n and p");
  s.n = doc.at("n").get<int>();
  s.p = doc.at("p").get<int>();
  const std::string design = doc.value("design", "equicorrelated");
  if (design == "equicorrelated")
    s.design = DesignKind::Equicorrelated;
  else if (design == "iid_standard")
    s.design = DesignKind::IidStandard;
  else
    throw ConfigError("unknown design '" + design + "'");
  s.rho = doc.value("rho", 0.9);
  if (doc.contains("beta0") && !doc.at("beta0").is_null()) {
    const json& b = doc.at("beta0");
    if (b.is_string()) {
      if (b.get<std::string>() != "zero")
        throw ConfigError("beta0 must be \"zero\" or an array of length p");
    } else {
      const auto values = b.get<std::vector<double>>();
      s.beta0 = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    }
  }
  if (doc.contains("contamination")) {
    const json& c = doc.at("contamination");
    s.contamination.rate = c.value("rate", 0.0);
    if (c.contains("point")) {
      const auto values = c.at("point").get<std::vector<double>>();
      s.contamination.point = Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
    }
  }
  s.replications = doc.value("replications", 1000);
  s.seed = doc.value("seed", std::uint64_t{0});
  return s;
}

MethodSettings settings_from_json(const json& doc) {
  MethodSettings settings;
  if (doc.contains("lst")) {
    const json& l = doc.at("lst");
    settings.lst.alpha = l.value("alpha", settings.lst.alpha);
    settings.lst.delta = l.value("delta", settings.lst.delta);
    settings.lst.restarts = l.value("restarts", settings.lst.restarts);
  }
  if (doc.contains("lts")) {
    const json& l = doc.at("lts");
    settings.lts.h = l.value("h", settings.lts.h);
    settings.lts.starts = l.value("starts", settings.lts.starts);
    settings.lts.csteps = l.value("csteps", settings.lts.csteps);
  }
  return settings;
}

json scenario_to_json(const SimulationScenario& s) {
  json doc;
  doc["n"] = s.n;
  doc["p"] = s.p;
  doc["design"] = s.design == DesignKind::Equicorrelated ? "equicorrelated" : "iid_standard";
  doc["rho"] = s.rho;
  if (s.beta0.has_value())
    doc["beta0"] = std::vector<double>(s.beta0->data(), s.beta0->data() + s.beta0->size());
  else
    doc["beta0"] = "zero";
  doc["contamination"] = {{"rate", s.contamination.rate}};
  if (s.contamination.point.size() > 0)
    doc["contamination"]["point"] = std::vector<double>(
        s.contamination.point.data(), s.contamination.point.data() + s.contamination.point.size());
  doc["replications"] = s.replications;
  doc["seed"] = s.seed;
  return doc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& err) {
    throw ConfigError("scenario file '" + path + "': " + err.what());
  }
  return doc;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitOptions {
  std::string data_path;
  std::string response = "1";
  std::vector<std::string> predictors;
  bool skip_header = false;
  std::string delimiter = "auto";
  bool drop_incomplete = false;
  CommonOptions common;
};

int run_fit(const FitOptions& opts) {
  ColumnSpec spec;
  spec.response = opts.response;
  spec.predictors = opts.predictors;
  spec.skip_header = opts.skip_header;
  spec.drop_incomplete = opts.drop_incomplete;
  if (opts.delimiter == "comma")
    spec.delimiter = ',';
  else if (opts.delimiter == "tab")
    spec.delimiter = '\t';
  else if (opts.delimiter == "whitespace")
    spec.delimiter = ' ';
  else if (opts.delimiter != "auto")
    throw ConfigError("--delimiter must be auto, comma, tab, or whitespace");

  const LoadedCsv loaded = load_csv(opts.data_path, spec);
  const Dataset& data = loaded.data;
  std::cout << "loaded " << data.n() << " rows, " << (data.p() - 1) << " predictors";
  if (loaded.dropped_rows > 0) std::cout << " (" << loaded.dropped_rows << " dropped)";
  std::cout << "\n\n";

  MethodSettings settings;
  apply_overrides(opts.common, settings);
  settings.lst.seed = opts.common.seed;
  settings.lts.seed = opts.common.seed;
  const std::vector<Method> methods =
      resolve_methods(opts.common.methods, {Method::LS, Method::LST, Method::LTS});

  json report;
  report["command"] = "fit";
  report["data"] = opts.data_path;
  report["seed"] = opts.common.seed;
  report["settings"] = settings_to_json(settings);
  report["column_spec"] = {{"response", opts.response},
                           {"predictors", opts.predictors},
                           {"skip_header", opts.skip_header},
                           {"delimiter", opts.delimiter},
                           {"drop_incomplete", opts.drop_incomplete}};
  json results = json::array();

  const bool write_artifacts = !opts.common.out_dir.empty();
  if (write_artifacts) fs::create_directories(opts.common.out_dir);

  for (const Method method : methods) {
    TrimmedFit fit;
    try {
      switch (method) {
        case Method::LS: {
          const LsSolution solution = ls_fit(data);
          fit.beta = solution.beta;
          fit.objective = solution.ss;
          fit.method = Method::LS;
          fit.retained.resize(data.n());
          for (int i = 0; i < data.n(); ++i) fit.retained[i] = i;
          break;
        }
        case Method::LST:
          fit = lst_fit(data, settings.lst);
          break;
        case Method::LTS:
          fit = lts_fit(data, settings.lts);
          break;
      }
    } catch (const ContractViolation& err) {
      std::cerr << "error in " << to_string(method) << ": " << err.what() << "\n";
      return 1;
    } catch (const std::exception& err) {
      std::cerr << to_string(method) << " failed: " << err.what() << "\n";
      return 2;
    }

    std::cout << to_string(method) << ": objective=" << std::setprecision(10) << fit.objective
              << " retained=" << fit.retained.size() << "/" << data.n() << "\n  beta=[";
    for (int k = 0; k < fit.beta.size(); ++k)
      std::cout << (k ? ", " : "") << std::setprecision(8) << fit.beta[k];
    std::cout << "]\n";

    json entry;
    entry["method"] = to_string(method);
    entry["objective"] = fit.objective;
    entry["retained"] = fit.retained;
    entry["beta"] = std::vector<double>(fit.beta.data(), fit.beta.data() + fit.beta.size());
    if (write_artifacts) {
      // Fitted-vs-residual plot data, one file per method.
      const fs::path plot_path =
          fs::path(opts.common.out_dir) / ("fit_" + to_string(method) + "_residuals.csv");
      std::ostringstream plot;
      plot << "row,fitted,residual,retained\n";
      plot.precision(17);
      const Eigen::VectorXd fitted = data.design() * fit.beta;
      std::vector<bool> kept(data.n(), false);
      for (const int i : fit.retained) kept[i] = true;
      for (int i = 0; i < data.n(); ++i)
        plot << (i + 1) << ',' << fitted[i] << ',' << (data.response()[i] - fitted[i]) << ','
             << (kept[i] ? 1 : 0) << "\n";
      write_text_file(plot_path, plot.str());
      entry["plot_data"] = plot_path.string();
    }
    results.push_back(entry);
  }
  report["results"] = results;

  if (write_artifacts) {
    const fs::path report_path = fs::path(opts.common.out_dir) / "fit_report.json";
    write_text_file(report_path, report.dump(2) + "\n");
    std::cout << "\nreport: " << report_path.string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sim / boxplot-data
// ---------------------------------------------------------------------------

struct SimOptions {
  std::string scenario_path;
  CommonOptions common;
};

MetricsTable run_scenario(const SimOptions& opts, SimulationScenario& scenario,
                          MethodSettings& settings, std::vector<Method>& methods) {
  const json doc = load_json_file(opts.scenario_path);
  scenario = scenario_from_json(doc);
  settings = settings_from_json(doc);
  std::vector<std::string> file_methods;
  if (doc.contains("methods")) file_methods = doc.at("methods").get<std::vector<std::string>>();

  if (opts.common.seed_set) scenario.seed = opts.common.seed;
  if (opts.common.reps > 0) scenario.replications = opts.common.reps;
  apply_overrides(opts.common, settings);
  methods = resolve_methods(opts.common.methods,
                            resolve_methods(file_methods, {Method::LS, Method::LST, Method::LTS}));
  return run_study(scenario, methods, settings, opts.common.threads);
}

json sim_report(const SimOptions& opts, const SimulationScenario& scenario,
                const MethodSettings& settings, const std::vector<Method>& methods,
                const std::string& command) {
  json report;
  report["command"] = command;
  report["scenario_file"] = opts.scenario_path;
  report["scenario"] = scenario_to_json(scenario);
  report["settings"] = settings_to_json(settings);
  json names = json::array();
  for (const Method m : methods) names.push_back(to_string(m));
  report["methods"] = names;
  report["seed"] = scenario.seed;
  return report;
}

int run_sim(const SimOptions& opts) {
  SimulationScenario scenario;
  MethodSettings settings;
  std::vector<Method> methods;
  const MetricsTable table = run_scenario(opts, scenario, settings, methods);

  std::cout << format_metrics_table(table);

  if (!opts.common.out_dir.empty()) {
    fs::create_directories(opts.common.out_dir);
    const fs::path csv_path = fs::path(opts.common.out_dir) / "metrics.csv";
    write_text_file(csv_path, metrics_csv(table));

    json report = sim_report(opts, scenario, settings, methods, "sim");
    json rows = json::array();
    for (const MetricsRow& row : table.rows) {
      rows.push_back({{"method", to_string(row.method)},
                      {"emse", row.emse},
                      {"svar", std::isnan(row.svar) ? json() : json(row.svar)},
                      {"total_time_seconds", row.total_time_seconds},
                      {"re", std::isnan(row.re) ? json() : json(row.re)},
                      {"failures", row.failures}});
    }
    report["metrics"] = rows;
    report["artifacts"] = {csv_path.string()};
    const fs::path report_path = fs::path(opts.common.out_dir) / "sim_report.json";
    write_text_file(report_path, report.dump(2) + "\n");
    std::cout << "artifacts: " << csv_path.string() << ", " << report_path.string() << "\n";
  }
  return 0;
}

int run_boxplot_data(const SimOptions& opts) {
  SimulationScenario scenario;
  MethodSettings settings;
  std::vector<Method> methods;
  const MetricsTable table = run_scenario(opts, scenario, settings, methods);
  if (!scenario.beta0.has_value())
    throw ConfigError("boxplot-data needs a scenario with a fixed beta0 vector");

  const std::string dir = opts.common.out_dir.empty() ? "." : opts.common.out_dir;
  fs::create_directories(dir);
  const fs::path data_path = fs::path(dir) / "squared_deviations.csv";

  std::ostringstream out;
  out << "method,replication,squared_deviation\n";
  out.precision(17);
  for (const ReplicationRecord& record : table.records) {
    if (!record.ok) continue;
    const double sqdev = (record.estimate - *scenario.beta0).squaredNorm();
    out << to_string(record.method) << ',' << (record.replication + 1) << ',' << sqdev << "\n";
  }
  write_text_file(data_path, out.str());

  json report = sim_report(opts, scenario, settings, methods, "boxplot-data");
  report["artifacts"] = {data_path.string()};
  const fs::path report_path = fs::path(dir) / "boxplot_report.json";
  write_text_file(report_path, report.dump(2) + "\n");

  std::cout << format_metrics_table(table);
  std::cout << "artifacts: " << data_path.string() << ", " << report_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust linear regression: depth-trimmed least squares with LS/LTS comparators"};
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);

  FitOptions fit_opts;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a delimited dataset with each method");
  fit_cmd->add_option("--data", fit_opts.data_path, "Input file")->required();
  fit_cmd->add_option("--response", fit_opts.response, "Response column (1-based index or name)");
  fit_cmd->add_option("--predictors", fit_opts.predictors,
                      "Predictor columns (comma separated indices or names)");
  fit_cmd->add_flag("--skip-header", fit_opts.skip_header, "First line is a header");
  fit_cmd->add_option("--delimiter", fit_opts.delimiter, "auto|comma|tab|whitespace");
  fit_cmd->add_flag("--drop-incomplete", fit_opts.drop_incomplete,
                    "Drop rows with missing referenced cells instead of failing");
  fit_cmd->add_option("--methods", fit_opts.common.methods, "Methods to run (LS,LST,LTS)");
  add_common_flags(fit_cmd, fit_opts.common);

  SimOptions sim_opts;
  CLI::App* sim_cmd = app.add_subcommand("sim", "Run a Monte Carlo study from a scenario file");
  sim_cmd->add_option("--scenario", sim_opts.scenario_path, "Scenario JSON file")->required();
  sim_cmd->add_option("--reps", sim_opts.common.reps, "Override replication count");
  sim_cmd->add_option("--methods", sim_opts.common.methods, "Methods to run (LS,LST,LTS)");
  add_common_flags(sim_cmd, sim_opts.common);

  SimOptions box_opts;
  CLI::App* box_cmd = app.add_subcommand(
      "boxplot-data", "Per-replication squared deviations for external box plots");
  box_cmd->add_option("--scenario", box_opts.scenario_path, "Scenario JSON file")->required();
  box_cmd->add_option("--reps", box_opts.common.reps, "Override replication count");
  box_cmd->add_option("--methods", box_opts.common.methods, "Methods to run (LS,LST,LTS)");
  add_common_flags(box_cmd, box_opts.common);

  try {
    app.parse(argc, argv);
    // Split comma-joined predictor lists ("2,3,4").
    std::vector<std::string> expanded;
    for (const std::string& entry : fit_opts.predictors) {
      std::stringstream stream(entry);
      std::string token;
      while (std::getline(stream, token, ','))
        if (!token.empty()) expanded.push_back(token);
    }
    fit_opts.predictors = expanded;

    if (fit_cmd->parsed()) return run_fit(fit_opts);
    if (sim_cmd->parsed()) return run_sim(sim_opts);
    if (box_cmd->parsed()) return run_boxplot_data(box_opts);
    return 1;
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const ContractViolation& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const ConfigError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 2;
  }
}
