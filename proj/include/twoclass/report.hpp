#ifndef TWOCLASS_REPORT_HPP
#define TWOCLASS_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "twoclass/estimators.hpp"
#include "twoclass/inequality.hpp"
#include "twoclass/ingest.hpp"

namespace twoclass {

inline constexpr double kPercentErrorFloor = 2.0;

struct SeriesPoint {
  int year = 0;
  double value = 0.0;
  double error = 0.0;
};

// 100 (subgroup - total) / total. Throws Domain for total <= 0.
double percentage_difference(double subgroup_value, double total_value);

// Propagated standard error of percentage_difference, never below the floor.
double percentage_difference_error(double subgroup_value, double subgroup_error,
                                   double total_value, double total_error,
                                   double floor = kPercentErrorFloor);

struct Shares {
  double population_share = 0.0;
  double income_share = 0.0;
};

// Shares of the selected group relative to the records that carry the field
// the selector splits on. An empty group gives zero shares.
Shares income_share(const Dataset& dataset, Selector selector);

// OLS slope of value on year; the interval uses the Student-t quantile with
// n - 2 degrees of freedom.
EstimateWithError trend_slope(std::span<const SeriesPoint> series);

struct ReportConfig {
  FitOptions fit;
};

struct SelectorReport {
  std::size_t population = 0;
  double total_income = 0.0;
  Shares shares;
  std::optional<ModelFit> fit;
  std::string fit_error;
  std::optional<GiniResult> gini;
  std::string gini_error;
};

struct YearlyReport {
  int year = 0;
  std::string error;  // set when the year could not be analysed at all
  std::map<Selector, SelectorReport> groups;
};

struct SeriesKey {
  std::string metric;
  Selector selector = Selector::All;

  friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
};

struct TrendSummary {
  EstimateWithError slope;
  double mean = 0.0;  // plain mean of the yearly values
};

struct WelchComparison {
  std::string name;  // e.g. "pareto_index:MAN-WOMAN"
  std::optional<WelchResult> result;
  std::string error;
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<YearlyReport> years;
  std::map<SeriesKey, std::vector<SeriesPoint>> series;
  std::map<SeriesKey, TrendSummary> trends;
  std::vector<WelchComparison> welch;
};

/// Full analysis per year and subgroup followed by cross-year series.
///
/// Every year is fitted for ALL, MAN, WOMAN, WY and BIM. A failure in one
/// cell is recorded in that cell and the run carries on. Years listed in
/// `failed_years` appear with their error and contribute nothing to the
/// series.
Report run_report(const std::map<int, Dataset>& datasets, const ReportConfig& config,
                  const std::map<int, std::string>& failed_years = {});

nlohmann::ordered_json to_json(const Report& report);
nlohmann::ordered_json to_json(const EstimateWithError& estimate);
nlohmann::ordered_json to_json(const ModelFit& fit);
nlohmann::ordered_json to_json(const GiniResult& gini);

void write_series(std::ostream& out, const std::vector<SeriesPoint>& series, std::uint64_t seed);

// Writes report.json and series/<metric>_<selector>.csv under `directory`.
void write_report(const Report& report, const std::filesystem::path& directory);

}  // namespace twoclass

#endif  // TWOCLASS_REPORT_HPP
