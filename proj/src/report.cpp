#include "twoclass/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "twoclass/error.hpp"
#include "twoclass/numeric.hpp"

namespace twoclass {

double percentage_difference(double subgroup_value, double total_value) {
  if (!(total_value > 0.0)) {
    throw Error(ErrorKind::Domain, "percentage_difference: total must be positive");
  }
  return 100.0 * (subgroup_value - total_value) / total_value;
}

double percentage_difference_error(double subgroup_value, double subgroup_error,
                                   double total_value, double total_error, double floor) {
  if (!(total_value > 0.0)) {
    throw Error(ErrorKind::Domain, "percentage_difference_error: total must be positive");
  }
  const double ratio = subgroup_value / total_value;
  const double rel_sub = subgroup_value != 0.0 ? subgroup_error / subgroup_value : 0.0;
  const double rel_total = total_error / total_value;
  const double propagated = 100.0 * std::abs(ratio) * std::hypot(rel_sub, rel_total);
  return std::max(floor, propagated);
}

Shares income_share(const Dataset& dataset, Selector selector) {
  std::size_t base_count = 0;
  std::size_t group_count = 0;
  CompensatedSum base_income;
  CompensatedSum group_income;
  for (const auto& r : dataset.records()) {
    if (!has_selector_field(selector, r)) continue;
    ++base_count;
    base_income.add(*r.income);
    if (matches(selector, r)) {
      ++group_count;
      group_income.add(*r.income);
    }
  }
  Shares s;
  if (base_count == 0 || group_count == 0) return s;
  s.population_share = static_cast<double>(group_count) / static_cast<double>(base_count);
  s.income_share = group_income.value() / base_income.value();
  return s;
}

EstimateWithError trend_slope(std::span<const SeriesPoint> series) {
  if (series.size() < 3) {
    throw Error(ErrorKind::InsufficientData, "trend_slope needs at least three points");
  }
  // Centre the years so large calendar values do not cost precision.
  const double origin = static_cast<double>(series.front().year);
  std::vector<double> x, y;
  for (const auto& p : series) {
    x.push_back(static_cast<double>(p.year) - origin);
    y.push_back(p.value);
  }
  LinearFit line;
  try {
    line = least_squares(x, y);
  } catch (const Error&) {
    throw Error(ErrorKind::InsufficientData, "trend_slope needs at least two distinct years");
  }
  const double critical = student_t_critical(static_cast<double>(series.size() - 2));
  return {line.slope, line.slope_std_error, critical * line.slope_std_error, series.size()};
}

namespace {

std::string describe(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return std::string(to_string(err->kind())) + ": " + err->what();
  }
  return e.what();
}

SelectorReport analyse_group(const Dataset& all, Selector selector, const ReportConfig& config) {
  SelectorReport out;
  out.shares = income_share(all, selector);
  std::optional<Dataset> group;
  try {
    group = subset(all, selector);
  } catch (const Error& e) {
    out.fit_error = out.gini_error = describe(e);
    return out;
  }
  out.population = group->population_count();
  out.total_income = group->total_income();
  try {
    out.fit = fit_model(*group, config.fit);
  } catch (const Error& e) {
    out.fit_error = describe(e);
  }
  try {
    out.gini = gini_converged(*group);
  } catch (const Error& e) {
    out.gini_error = describe(e);
  }
  return out;
}

void add_point(Report& report, const std::string& metric, Selector selector, SeriesPoint p) {
  report.series[{metric, selector}].push_back(p);
}

void collect_series(Report& report, const YearlyReport& year) {
  const auto all_it = year.groups.find(Selector::All);
  const SelectorReport* all =
      all_it != year.groups.end() && all_it->second.fit ? &all_it->second : nullptr;

  for (const auto& [selector, group] : year.groups) {
    if (group.population > 0) {
      add_point(report, "population_share", selector,
                {year.year, group.shares.population_share, 0.0});
      add_point(report, "income_share", selector, {year.year, group.shares.income_share, 0.0});
    }
    if (group.gini) {
      add_point(report, "gini", selector, {year.year, group.gini->value, group.gini->uncertainty});
    }
    if (!group.fit) continue;
    const ModelFit& fit = *group.fit;
    add_point(report, "temperature", selector,
              {year.year, fit.temperature.value, fit.temperature.std_error});
    add_point(report, "model_temperature", selector,
              {year.year, fit.bulk_temperature.value, fit.bulk_temperature.std_error});
    add_point(report, "crossover", selector, {year.year, fit.params.crossover(), 0.0});
    add_point(report, "pareto_index", selector,
              {year.year, fit.pareto_index.value, fit.pareto_index.std_error});
    add_point(report, "crossover_gap_pct", selector,
              {year.year,
               percentage_difference(fit.params.crossover(), fit.temperature.value),
               percentage_difference_error(fit.params.crossover(), 0.0, fit.temperature.value,
                                           fit.temperature.std_error)});

    if (selector == Selector::All || all == nullptr) continue;
    const ModelFit& ref = *all->fit;
    add_point(report, "temperature_pct_diff", selector,
              {year.year, percentage_difference(fit.temperature.value, ref.temperature.value),
               percentage_difference_error(fit.temperature.value, fit.temperature.std_error,
                                           ref.temperature.value, ref.temperature.std_error)});
    add_point(report, "crossover_pct_diff", selector,
              {year.year, percentage_difference(fit.params.crossover(), ref.params.crossover()),
               percentage_difference_error(fit.params.crossover(), 0.0, ref.params.crossover(),
                                           0.0)});
  }
}

std::vector<double> values_of(const Report& report, const std::string& metric, Selector s) {
  std::vector<double> out;
  if (const auto it = report.series.find({metric, s}); it != report.series.end()) {
    for (const auto& p : it->second) out.push_back(p.value);
  }
  return out;
}

WelchComparison compare(const Report& report, const std::string& metric, Selector a,
                        Selector b) {
  WelchComparison c;
  c.name = metric + ":" + to_string(a) + "-" + to_string(b);
  try {
    c.result = welch_t_test(values_of(report, metric, a), values_of(report, metric, b));
  } catch (const Error& e) {
    c.error = describe(e);
  }
  return c;
}

}  // namespace

Report run_report(const std::map<int, Dataset>& datasets, const ReportConfig& config,
                  const std::map<int, std::string>& failed_years) {
  if (datasets.empty() && failed_years.empty()) {
    throw Error(ErrorKind::EmptyRequest, "run_report needs at least one dataset");
  }
  Report report;
  report.seed = config.fit.bootstrap.seed;

  std::map<int, YearlyReport> by_year;
  for (const auto& [year, message] : failed_years) {
    by_year[year] = YearlyReport{year, message, {}};
  }
  for (const auto& [year, dataset] : datasets) {
    YearlyReport yr;
    yr.year = year;
    for (Selector s : kAllSelectors) yr.groups[s] = analyse_group(dataset, s, config);
    by_year[year] = std::move(yr);
  }
  for (auto& [year, yr] : by_year) {
    collect_series(report, yr);
    report.years.push_back(std::move(yr));
  }

  for (const auto& [key, points] : report.series) {
    if (points.size() < 3) continue;
    try {
      std::vector<double> values;
      for (const auto& p : points) values.push_back(p.value);
      report.trends[key] = {trend_slope(points), compensated_sum(values) / static_cast<double>(values.size())};
    } catch (const Error&) {
      // leave a gap in the trends
    }
  }
  if (report.years.size() >= 2) {
    report.welch.push_back(compare(report, "pareto_index", Selector::Man, Selector::Woman));
    report.welch.push_back(
        compare(report, "pareto_index", Selector::WhiteYellow, Selector::BlackIndigenousMixed));
  }
  return report;
}

nlohmann::ordered_json to_json(const EstimateWithError& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"ci95_half_width", e.ci95_half_width},
          {"n", e.n}};
}

nlohmann::ordered_json to_json(const ModelFit& fit) {
  nlohmann::ordered_json j;
  j["params"] = {{"temperature", fit.params.temperature()},
                 {"pareto_index", fit.params.pareto_index()},
                 {"crossover", fit.params.crossover()},
                 {"amplitude", fit.params.amplitude()},
                 {"tail_coefficient", fit.params.tail_coefficient()}};
  j["temperature"] = to_json(fit.temperature);
  j["model_temperature"] = to_json(fit.bulk_temperature);
  j["pareto_index"] = to_json(fit.pareto_index);
  j["tail"] = {{"regression", to_json(fit.tail.pareto_index)},
               {"tail_coefficient", fit.tail.tail_coefficient},
               {"tail_fraction", fit.tail.tail_fraction},
               {"crossover", fit.tail.crossover},
               {"hill_index", fit.tail.hill_index},
               {"distinct_points", fit.tail.distinct_points}};
  j["bootstrap"] = to_json(fit.bootstrap);
  return j;
}

nlohmann::ordered_json to_json(const GiniResult& gini) {
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& l : gini.levels) levels.push_back({{"partitions", l.partitions}, {"gini", l.gini}});
  return {{"value", gini.value},
          {"uncertainty", gini.uncertainty},
          {"partitions_used", gini.partitions_used},
          {"divergent_decimal", gini.divergent_decimal},
          {"levels", levels}};
}

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["seed"] = report.seed;
  j["years"] = nlohmann::ordered_json::array();
  for (const auto& yr : report.years) {
    nlohmann::ordered_json y;
    y["year"] = yr.year;
    if (!yr.error.empty()) y["error"] = yr.error;
    nlohmann::ordered_json groups = nlohmann::ordered_json::object();
    for (const auto& [selector, g] : yr.groups) {
      nlohmann::ordered_json cell;
      cell["population"] = g.population;
      cell["total_income"] = g.total_income;
      cell["population_share"] = g.shares.population_share;
      cell["income_share"] = g.shares.income_share;
      if (g.fit) {
        cell["fit"] = to_json(*g.fit);
      } else {
        cell["fit_error"] = g.fit_error;
      }
      if (g.gini) {
        cell["gini"] = to_json(*g.gini);
      } else {
        cell["gini_error"] = g.gini_error;
      }
      groups[to_string(selector)] = std::move(cell);
    }
    y["groups"] = std::move(groups);
    j["years"].push_back(std::move(y));
  }
  j["trends"] = nlohmann::ordered_json::array();
  for (const auto& [key, t] : report.trends) {
    j["trends"].push_back({{"metric", key.metric},
                           {"group", to_string(key.selector)},
                           {"slope", to_json(t.slope)},
                           {"mean", t.mean}});
  }
  j["welch"] = nlohmann::ordered_json::array();
  for (const auto& c : report.welch) {
    nlohmann::ordered_json w{{"comparison", c.name}};
    if (c.result) {
      w["t"] = c.result->t;
      w["dof"] = c.result->dof;
      w["p_value"] = c.result->p_value;
    } else {
      w["error"] = c.error;
    }
    j["welch"].push_back(std::move(w));
  }
  return j;
}

void write_series(std::ostream& out, const std::vector<SeriesPoint>& series, std::uint64_t seed) {
  const auto precision = out.precision();
  out << "# seed=" << seed << '\n' << "year,value,error\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : series) out << p.year << ',' << p.value << ',' << p.error << '\n';
  out.precision(precision);
}

void write_report(const Report& report, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory / "series", ec);
  if (ec) {
    throw Error(ErrorKind::Io, "cannot create output directory '" + directory.string() + "'");
  }
  {
    std::ofstream out(directory / "report.json");
    if (!out) throw Error(ErrorKind::Io, "cannot write report.json");
    out << to_json(report).dump(2) << '\n';
  }
  for (const auto& [key, points] : report.series) {
    const auto path = directory / "series" / (key.metric + "_" + to_string(key.selector) + ".csv");
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    write_series(out, points, report.seed);
  }
}

}  // namespace twoclass
