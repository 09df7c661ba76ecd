#include "twoclass/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>

#include "twoclass/error.hpp"
#include "twoclass/numeric.hpp"

namespace twoclass {

namespace {

constexpr std::size_t kMinDistinctTail = 10;
constexpr std::size_t kMinBootstrapTail = 20;

EstimateWithError with_error(double value, double std_error, std::size_t n,
                             double critical = kNormalCritical95) {
  return {value, std_error, critical * std_error, n};
}

void require_nonempty(std::span<const double> incomes, const char* op) {
  if (incomes.empty()) {
    throw Error(ErrorKind::EmptyDataset, std::string(op) + ": dataset is empty");
  }
}

// Survival points of a sorted sample, one per distinct value.
std::vector<CcdfPoint> ccdf_points(const std::vector<double>& sorted) {
  std::vector<CcdfPoint> points;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    points.push_back({sorted[i], static_cast<double>(sorted.size() - i) / n});
    i = j;
  }
  return points;
}

// First `count` entries of `values` become a uniform random subset.
void partial_shuffle(std::vector<double>& values, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(values.size() - i);
    std::swap(values[i], values[j]);
  }
}

double pareto_slope(std::span<const double> tail) {
  return fit_pareto(tail).pareto_index.value;
}

}  // namespace

EstimateWithError temperature(std::span<const double> incomes) {
  require_nonempty(incomes, "temperature");
  const SampleMoments m = sample_moments(incomes);
  return with_error(m.mean, m.stddev / std::sqrt(static_cast<double>(m.n)), m.n);
}

EstimateWithError temperature(const Dataset& dataset) {
  const auto incomes = dataset.incomes();
  return temperature(incomes);
}

double crossover_income(std::span<const double> incomes, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw Error(ErrorKind::Domain, "tail fraction must lie in (0, 1)");
  }
  const double n = static_cast<double>(incomes.size());
  const double scaled = tail_fraction * n;
  const auto needed = static_cast<std::size_t>(std::ceil(1.0 / tail_fraction - 1e-9));
  if (incomes.size() < needed || incomes.empty()) {
    throw Error(ErrorKind::InsufficientData,
                "crossover_income needs at least " + std::to_string(needed) + " records, got " +
                    std::to_string(incomes.size()));
  }
  // Guard against products like 0.05 * 100 landing a hair above an integer.
  auto k = static_cast<std::size_t>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
  k = std::clamp<std::size_t>(k, 1, incomes.size());
  std::vector<double> copy(incomes.begin(), incomes.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k - 1), copy.end(),
                   std::greater<>());
  return copy[k - 1];
}

double crossover_income(const Dataset& dataset, double tail_fraction) {
  const auto incomes = dataset.incomes();
  return crossover_income(incomes, tail_fraction);
}

EmpiricalCCDF empirical_ccdf(std::span<const double> incomes) {
  require_nonempty(incomes, "empirical_ccdf");
  std::vector<double> sorted(incomes.begin(), incomes.end());
  std::sort(sorted.begin(), sorted.end());
  return {ccdf_points(sorted)};
}

EmpiricalCCDF empirical_ccdf(const Dataset& dataset) {
  const auto incomes = dataset.incomes();
  return empirical_ccdf(incomes);
}

double hill_index(std::span<const double> tail_incomes) {
  require_nonempty(tail_incomes, "hill_index");
  const double threshold = *std::min_element(tail_incomes.begin(), tail_incomes.end());
  if (!(threshold > 0.0)) {
    throw Error(ErrorKind::Domain, "hill_index: tail incomes must be positive");
  }
  CompensatedSum logs;
  for (double m : tail_incomes) logs.add(std::log(m / threshold));
  if (!(logs.value() > 0.0)) {
    throw Error(ErrorKind::DegenerateRegression, "hill_index: all tail incomes are equal");
  }
  return static_cast<double>(tail_incomes.size()) / logs.value();
}

TailFit fit_pareto(std::span<const double> tail_incomes, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw Error(ErrorKind::Domain, "fit_pareto: tail fraction must lie in (0, 1]");
  }
  std::vector<double> sorted(tail_incomes.begin(), tail_incomes.end());
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && !(sorted.front() > 0.0)) {
    throw Error(ErrorKind::Domain, "fit_pareto: tail incomes must be positive");
  }
  const auto points = ccdf_points(sorted);
  if (points.size() < kMinDistinctTail) {
    throw Error(ErrorKind::InsufficientData,
                "fit_pareto needs at least " + std::to_string(kMinDistinctTail) +
                    " distinct tail incomes, got " + std::to_string(points.size()));
  }
  std::vector<double> log_income, log_survival;
  log_income.reserve(points.size());
  log_survival.reserve(points.size());
  for (const auto& p : points) {
    log_income.push_back(std::log(p.income));
    log_survival.push_back(std::log(p.survival));
  }
  const LinearFit line = least_squares(log_income, log_survival);
  const double alpha = -line.slope;
  if (!(alpha > 0.0)) {
    throw Error(ErrorKind::DegenerateRegression, "fit_pareto: tail does not decay");
  }
  TailFit fit;
  fit.pareto_index = with_error(alpha, line.slope_std_error, sorted.size());
  fit.tail_coefficient = std::exp(line.intercept) * tail_fraction;
  fit.tail_fraction = tail_fraction;
  fit.crossover = sorted.front();
  fit.hill_index = hill_index(sorted);
  fit.residual_sum_squares = line.residual_sum_squares;
  fit.distinct_points = points.size();
  return fit;
}

EstimateWithError bootstrap_pareto(std::span<const double> tail_incomes,
                                   const BootstrapOptions& options) {
  if (tail_incomes.size() < kMinBootstrapTail) {
    throw Error(ErrorKind::InsufficientData,
                "bootstrap_pareto needs at least " + std::to_string(kMinBootstrapTail) +
                    " tail incomes, got " + std::to_string(tail_incomes.size()));
  }
  if (options.resamples < 2) {
    throw Error(ErrorKind::Domain, "bootstrap_pareto needs at least two resamples");
  }
  const std::size_t half = tail_incomes.size() / 2;
  std::vector<double> pool(tail_incomes.begin(), tail_incomes.end());
  std::vector<double> half_sample;
  if (options.mode == BootstrapMode::SingleHalf) {
    Rng rng = Rng::substream(options.seed, 0);
    partial_shuffle(pool, half, rng);
    half_sample.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(half));
  }

  // Resample r draws from substream r + 1 only, so the fits do not depend on
  // evaluation order.
  std::vector<double> fits(options.resamples);
  std::vector<double> resample(half);
  for (std::size_t r = 0; r < options.resamples; ++r) {
    Rng rng = Rng::substream(options.seed, r + 1);
    if (options.mode == BootstrapMode::SingleHalf) {
      for (auto& v : resample) v = half_sample[rng.uniform_index(half)];
    } else {
      std::vector<double> shuffled(tail_incomes.begin(), tail_incomes.end());
      partial_shuffle(shuffled, half, rng);
      std::copy_n(shuffled.begin(), half, resample.begin());
    }
    fits[r] = pareto_slope(resample);
  }
  const SampleMoments m = sample_moments(fits);
  return with_error(m.mean, m.stddev, half, options.critical_factor);
}

EstimateWithError bulk_temperature(std::span<const double> incomes, double crossover) {
  if (!(crossover > 0.0)) {
    throw Error(ErrorKind::Domain, "bulk_temperature: crossover must be positive");
  }
  std::vector<double> bulk;
  for (double m : incomes) {
    if (m < crossover) bulk.push_back(m);
  }
  if (bulk.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "bulk_temperature: fewer than two incomes below the crossover");
  }
  const SampleMoments m = sample_moments(bulk);
  const double c = crossover;
  // Mean of an exponential truncated to [0, c) as a function of its scale;
  // increasing from 0 towards c / 2.
  const auto truncated_mean = [c](double t) { return t - c / std::expm1(c / t); };
  if (!(m.mean < c / 2.0) || !(m.mean > 0.0)) {
    throw Error(ErrorKind::DegenerateRegression,
                "bulk_temperature: bulk mean is not compatible with a decaying exponential");
  }
  double lo = m.mean;  // truncated_mean(t) < t
  double hi = 2.0 * m.mean;
  for (int i = 0; truncated_mean(hi) < m.mean; ++i) {
    if (i > 2000) {
      throw Error(ErrorKind::DegenerateRegression, "bulk_temperature: no finite scale found");
    }
    lo = hi;
    hi *= 2.0;
  }
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [&](double t) { return truncated_mean(t) - m.mean; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(50), max_iter);
  const double t = 0.5 * (a + b);

  const double x = c / t;
  // d/dT truncated_mean = 1 - x^2 e^x / (e^x - 1)^2
  const double slope = 1.0 - x * x / (std::expm1(x) * -std::expm1(-x));
  const double mean_error = m.stddev / std::sqrt(static_cast<double>(m.n));
  return with_error(t, mean_error / slope, m.n);
}

WelchResult welch_t_test(std::span<const double> series_a, std::span<const double> series_b) {
  if (series_a.size() < 2 || series_b.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "welch_t_test needs at least two values per series");
  }
  const SampleMoments a = sample_moments(series_a);
  const SampleMoments b = sample_moments(series_b);
  if (!(a.stddev > 0.0) || !(b.stddev > 0.0)) {
    throw Error(ErrorKind::InsufficientData, "welch_t_test needs nonzero variance in both series");
  }
  const double va = a.stddev * a.stddev / static_cast<double>(a.n);
  const double vb = b.stddev * b.stddev / static_cast<double>(b.n);
  WelchResult r;
  r.t = (a.mean - b.mean) / std::sqrt(va + vb);
  r.dof = (va + vb) * (va + vb) /
          (va * va / static_cast<double>(a.n - 1) + vb * vb / static_cast<double>(b.n - 1));
  const boost::math::students_t dist(r.dof);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

ModelFit fit_model(const Dataset& dataset, const FitOptions& options) {
  const auto incomes = dataset.incomes();
  const EstimateWithError mean_income = temperature(incomes);
  const double ml = crossover_income(incomes, options.tail_fraction);

  std::vector<double> tail;
  for (double m : incomes) {
    if (m >= ml) tail.push_back(m);
  }
  const double share = static_cast<double>(tail.size()) / static_cast<double>(incomes.size());
  const TailFit tail_fit = fit_pareto(tail, share);
  const EstimateWithError boot = bootstrap_pareto(tail, options.bootstrap);
  const EstimateWithError bulk = bulk_temperature(incomes, ml);

  EstimateWithError alpha{tail_fit.pareto_index.value, boot.std_error, boot.ci95_half_width,
                          tail.size()};
  return {TwoClassParams::create(bulk.value, alpha.value, ml), mean_income, bulk, tail_fit,
          boot, alpha};
}

}  // namespace twoclass
