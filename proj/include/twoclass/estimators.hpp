#ifndef TWOCLASS_ESTIMATORS_HPP
#define TWOCLASS_ESTIMATORS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "twoclass/ingest.hpp"
#include "twoclass/model.hpp"

namespace twoclass {

inline constexpr double kNormalCritical95 = 1.96;

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  double ci95_half_width = 0.0;
  std::size_t n = 0;

  friend bool operator==(const EstimateWithError&, const EstimateWithError&) = default;
};

struct CcdfPoint {
  double income = 0.0;
  double survival = 0.0;
};

// Distinct incomes ascending, each with the fraction of records at or above it.
struct EmpiricalCCDF {
  std::vector<CcdfPoint> points;
};

struct TailFit {
  EstimateWithError pareto_index;  // std_error from the regression slope
  double tail_coefficient = 0.0;   // B, scaled to the full population
  double tail_fraction = 1.0;
  double crossover = 0.0;          // smallest income in the tail
  double hill_index = 0.0;         // maximum-likelihood cross-check, not used downstream
  double residual_sum_squares = 0.0;
  std::size_t distinct_points = 0;
};

enum class BootstrapMode {
  // One half-size subsample without replacement, resampled with replacement.
  SingleHalf,
  // A fresh half-size subsample without replacement for every resample.
  IndependentHalves,
};

struct BootstrapOptions {
  std::size_t resamples = 40;
  std::uint64_t seed = 0;
  double critical_factor = kNormalCritical95;
  BootstrapMode mode = BootstrapMode::SingleHalf;
};

struct FitOptions {
  double tail_fraction = 0.05;
  BootstrapOptions bootstrap;
};

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

struct ModelFit {
  TwoClassParams params;
  EstimateWithError temperature;       // average income
  EstimateWithError bulk_temperature;  // exponential scale below the crossover
  TailFit tail;
  EstimateWithError bootstrap;         // mean and spread of the resampled fits
  EstimateWithError pareto_index;      // tail fit value with the bootstrap error
};

// Average income with its standard error.
EstimateWithError temperature(const Dataset& dataset);
EstimateWithError temperature(std::span<const double> incomes);

// Lowest income among the ceil(tail_fraction * n) largest.
double crossover_income(const Dataset& dataset, double tail_fraction = 0.05);
double crossover_income(std::span<const double> incomes, double tail_fraction = 0.05);

EmpiricalCCDF empirical_ccdf(const Dataset& dataset);
EmpiricalCCDF empirical_ccdf(std::span<const double> incomes);

// Log-log least squares on the deduplicated tail CCDF. `tail_fraction` is the
// share of the population the tail represents and only rescales B.
TailFit fit_pareto(std::span<const double> tail_incomes, double tail_fraction = 1.0);

// Hill maximum-likelihood index with threshold min(tail_incomes).
double hill_index(std::span<const double> tail_incomes);

EstimateWithError bootstrap_pareto(std::span<const double> tail_incomes,
                                   const BootstrapOptions& options = {});

/// Scale of the exponential bulk, estimated by maximum likelihood from the
/// incomes strictly below `crossover` as a truncated exponential on
/// [0, crossover). Standard error by the delta method on the bulk mean.
EstimateWithError bulk_temperature(std::span<const double> incomes, double crossover);

WelchResult welch_t_test(std::span<const double> series_a, std::span<const double> series_b);

ModelFit fit_model(const Dataset& dataset, const FitOptions& options = {});

}  // namespace twoclass

#endif  // TWOCLASS_ESTIMATORS_HPP
