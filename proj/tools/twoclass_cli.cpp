// Command-line front end: fit, gini, sample, report, ccdf.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twoclass/error.hpp"
#include "twoclass/estimators.hpp"
#include "twoclass/inequality.hpp"
#include "twoclass/ingest.hpp"
#include "twoclass/model.hpp"
#include "twoclass/report.hpp"

namespace {

using namespace twoclass;

constexpr std::uint64_t kDefaultSeed = 1;

struct DataArgs {
  std::string data;
  std::string schema;
  std::string group = "ALL";
  std::string rejects;
};

void add_data_args(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("data", args.data, "Delimited microdata file")->required();
  cmd->add_option("--schema", args.schema, "Schema configuration file")->required();
  cmd->add_option("--rejects", args.rejects, "Write rejected rows to this file");
}

Selector selector_or_throw(const std::string& name) {
  const auto s = parse_selector(name);
  if (!s) throw Error(ErrorKind::Schema, "unknown group '" + name + "' (ALL, MAN, WOMAN, WY, BIM)");
  return *s;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  return out;
}

// Load, clean and report what was dropped on stderr.
Dataset load_dataset(const std::string& data_path, const Schema& schema,
                     const std::string& rejects_path) {
  LoadResult loaded = load_file(data_path, schema);
  if (!rejects_path.empty()) {
    auto out = open_output(rejects_path);
    write_rejects(out, loaded.rejects);
  }
  CleanResult cleaned = clean(loaded.records, CleanOptions::from_schema(schema));
  const CleanReport& r = cleaned.report;
  std::cerr << data_path << ": " << loaded.records.size() + loaded.rejects.size() << " rows, "
            << loaded.rejects.size() << " rejected, " << r.initial << " loaded, " << r.retained
            << " retained (age " << r.dropped_age + r.dropped_missing_age << ", missing income "
            << r.dropped_missing_income << ", non-positive income "
            << r.dropped_nonpositive_income << ")\n";
  return std::move(cleaned.dataset);
}

void print_json(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump(2) << '\n'; }

int run_fit(const DataArgs& args, double tail_fraction, std::uint64_t seed, std::size_t resamples,
            double critical_factor, const std::string& mode, const std::string& out_path) {
  if (!(tail_fraction >= 0.01 && tail_fraction <= 0.20)) {
    throw Error(ErrorKind::Schema, "--tail-fraction must lie in [0.01, 0.20]");
  }
  FitOptions options;
  options.tail_fraction = tail_fraction;
  options.bootstrap.seed = seed;
  options.bootstrap.resamples = resamples;
  options.bootstrap.critical_factor = critical_factor;
  if (mode == "single-half") {
    options.bootstrap.mode = BootstrapMode::SingleHalf;
  } else if (mode == "independent-halves") {
    options.bootstrap.mode = BootstrapMode::IndependentHalves;
  } else {
    throw Error(ErrorKind::Schema, "--bootstrap-mode must be single-half or independent-halves");
  }
  const Schema schema = Schema::load_file(args.schema);
  const Selector selector = selector_or_throw(args.group);
  const Dataset data = subset(load_dataset(args.data, schema, args.rejects), selector);
  const ModelFit fit = fit_model(data, options);

  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["group"] = to_string(selector);
  j["population"] = data.population_count();
  j["total_income"] = data.total_income();
  j["fit"] = to_json(fit);
  if (out_path.empty()) {
    print_json(std::cout, j);
  } else {
    auto out = open_output(out_path);
    print_json(out, j);
  }
  return 0;
}

int run_gini(const DataArgs& args, const std::string& lorenz_out) {
  const Schema schema = Schema::load_file(args.schema);
  const Selector selector = selector_or_throw(args.group);
  const Dataset data = subset(load_dataset(args.data, schema, args.rejects), selector);
  const GiniResult gini = gini_converged(data);
  if (!lorenz_out.empty()) {
    auto out = open_output(lorenz_out);
    write_lorenz(out, lorenz(data));
  }
  nlohmann::ordered_json j;
  j["group"] = to_string(selector);
  j["population"] = data.population_count();
  j["gini"] = to_json(gini);
  print_json(std::cout, j);
  return 0;
}

int run_sample(double t, double alpha, double ml, std::size_t n, std::uint64_t seed,
               const std::string& out_path) {
  const TwoClassParams params = TwoClassParams::create(t, alpha, ml);
  const std::vector<double> draws = sample(params, n, seed);
  auto out = open_output(out_path);
  out << "# seed=" << seed << " t=" << t << " alpha=" << alpha << " ml=" << ml << " n=" << n
      << '\n'
      << "income\n"
      << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double m : draws) out << m << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + out_path + "'");
  return 0;
}

int run_ccdf(const DataArgs& args, const std::string& out_path) {
  const Schema schema = Schema::load_file(args.schema);
  const Selector selector = selector_or_throw(args.group);
  const Dataset data = subset(load_dataset(args.data, schema, args.rejects), selector);
  const EmpiricalCCDF curve = empirical_ccdf(data);
  auto out = open_output(out_path);
  out << "income,survival,log10_income,log10_survival\n"
      << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : curve.points) {
    out << p.income << ',' << p.survival << ',' << std::log10(p.income) << ','
        << std::log10(p.survival) << '\n';
  }
  return 0;
}

int run_report_cmd(const std::vector<std::string>& inputs, const std::string& schema_path,
                   const std::string& out_dir, std::uint64_t seed, double tail_fraction) {
  if (!(tail_fraction >= 0.01 && tail_fraction <= 0.20)) {
    throw Error(ErrorKind::Schema, "--tail-fraction must lie in [0.01, 0.20]");
  }
  const Schema schema = Schema::load_file(schema_path);
  std::map<int, std::string> files;
  for (const auto& spec : inputs) {
    const auto eq = spec.find('=');
    int year = 0;
    try {
      std::size_t used = 0;
      year = std::stoi(spec.substr(0, eq), &used);
      if (eq == std::string::npos || used != eq || eq + 1 >= spec.size()) throw std::invalid_argument(spec);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Schema, "--inputs entries must look like YEAR=FILE, got '" + spec + "'");
    }
    if (!files.emplace(year, spec.substr(eq + 1)).second) {
      throw Error(ErrorKind::Schema, "year " + std::to_string(year) + " given twice");
    }
  }

  std::filesystem::create_directories(out_dir);
  std::map<int, Dataset> datasets;
  std::map<int, std::string> failed;
  for (const auto& [year, path] : files) {
    Schema year_schema = schema;
    year_schema.default_year = year;
    try {
      datasets.emplace(year, load_dataset(path, year_schema,
                                          (std::filesystem::path(out_dir) /
                                           ("rejects_" + std::to_string(year) + ".csv"))
                                              .string()));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Schema) throw;
      failed.emplace(year, std::string(to_string(e.kind())) + ": " + e.what());
    }
  }
  ReportConfig config;
  config.fit.tail_fraction = tail_fraction;
  config.fit.bootstrap.seed = seed;
  const Report report = run_report(datasets, config, failed);
  write_report(report, out_dir);
  std::cerr << "wrote " << (std::filesystem::path(out_dir) / "report.json").string() << " and "
            << report.series.size() << " series files\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-class income distribution fitting and inequality measures"};
  app.require_subcommand(1);

  DataArgs fit_args;
  double tail_fraction = 0.05;
  std::uint64_t seed = kDefaultSeed;
  std::size_t resamples = 40;
  double critical_factor = kNormalCritical95;
  std::string bootstrap_mode = "single-half";
  std::string fit_out;
  auto* fit_cmd = app.add_subcommand("fit", "Fit temperature, crossover and Pareto index");
  add_data_args(fit_cmd, fit_args);
  fit_cmd->add_option("--group", fit_args.group, "ALL, MAN, WOMAN, WY or BIM");
  fit_cmd->add_option("--tail-fraction", tail_fraction, "Share of the population in the tail");
  fit_cmd->add_option("--seed", seed, "Bootstrap seed");
  fit_cmd->add_option("--resamples", resamples, "Bootstrap resamples")->check(CLI::Range(2, 100000));
  fit_cmd->add_option("--critical-factor", critical_factor, "Multiplier for the 95% half-width");
  fit_cmd->add_option("--bootstrap-mode", bootstrap_mode, "single-half or independent-halves");
  fit_cmd->add_option("--out", fit_out, "Write JSON here instead of stdout");

  DataArgs gini_args;
  std::string lorenz_out;
  auto* gini_cmd = app.add_subcommand("gini", "Gini coefficient by refined Brown's formula");
  add_data_args(gini_cmd, gini_args);
  gini_cmd->add_option("--group", gini_args.group, "ALL, MAN, WOMAN, WY or BIM");
  gini_cmd->add_option("--lorenz-out", lorenz_out, "Write the Lorenz curve as X,Y");

  double t = 0.0, alpha = 0.0, ml = 0.0;
  std::size_t n = 0;
  std::string sample_out;
  auto* sample_cmd = app.add_subcommand("sample", "Draw synthetic incomes from the model");
  sample_cmd->add_option("--t", t, "Temperature")->required();
  sample_cmd->add_option("--alpha", alpha, "Pareto index")->required();
  sample_cmd->add_option("--ml", ml, "Crossover income")->required();
  sample_cmd->add_option("--n", n, "Number of draws")->required();
  sample_cmd->add_option("--seed", seed, "Seed");
  sample_cmd->add_option("--out", sample_out, "Output file")->required();

  std::vector<std::string> inputs;
  std::string report_schema, report_out;
  auto* report_cmd = app.add_subcommand("report", "Yearly report with cross-year series");
  report_cmd->add_option("--inputs", inputs, "YEAR=FILE pairs")->required();
  report_cmd->add_option("--schema", report_schema, "Schema configuration file")->required();
  report_cmd->add_option("--out", report_out, "Output directory")->required();
  report_cmd->add_option("--seed", seed, "Bootstrap seed");
  report_cmd->add_option("--tail-fraction", tail_fraction, "Share of the population in the tail");

  DataArgs ccdf_args;
  std::string ccdf_out;
  auto* ccdf_cmd = app.add_subcommand("ccdf", "Empirical survival function for log-log plots");
  add_data_args(ccdf_cmd, ccdf_args);
  ccdf_cmd->add_option("--group", ccdf_args.group, "ALL, MAN, WOMAN, WY or BIM");
  ccdf_cmd->add_option("--out", ccdf_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit_cmd) {
      return run_fit(fit_args, tail_fraction, seed, resamples, critical_factor, bootstrap_mode,
                     fit_out);
    }
    if (*gini_cmd) return run_gini(gini_args, lorenz_out);
    if (*sample_cmd) return run_sample(t, alpha, ml, n, seed, sample_out);
    if (*report_cmd) return run_report_cmd(inputs, report_schema, report_out, seed, tail_fraction);
    if (*ccdf_cmd) return run_ccdf(ccdf_args, ccdf_out);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 1;
}
