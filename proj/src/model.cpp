#include "twoclass/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "twoclass/error.hpp"
#include "twoclass/numeric.hpp"

namespace twoclass {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_income(double m, const char* op) {
  if (!(m >= 0.0) || std::isnan(m)) {
    throw Error(ErrorKind::Domain, std::string(op) + ": income must be non-negative");
  }
}

void require_finite_mean(const TwoClassParams& params, const char* op) {
  if (!params.has_finite_mean()) {
    throw Error(ErrorKind::DivergentMean,
                std::string(op) + ": pareto index must exceed 1 for a finite mean");
  }
}

}  // namespace

TwoClassParams::TwoClassParams(double temperature, double pareto_index, double crossover)
    : temperature_(temperature),
      pareto_index_(pareto_index),
      crossover_(crossover),
      log_amplitude_(std::log(pareto_index) + pareto_index * std::log(crossover) -
                     crossover / temperature),
      log_tail_coefficient_(pareto_index * std::log(crossover) - crossover / temperature),
      tail_mass_(std::exp(-crossover / temperature)) {}

TwoClassParams TwoClassParams::create(double temperature, double pareto_index,
                                      double crossover) {
  if (!positive_finite(temperature)) {
    throw Error(ErrorKind::Domain, "temperature must be positive and finite");
  }
  if (!positive_finite(pareto_index)) {
    throw Error(ErrorKind::Domain, "pareto index must be positive and finite");
  }
  if (!positive_finite(crossover)) {
    throw Error(ErrorKind::Domain, "crossover income must be positive and finite");
  }
  return TwoClassParams(temperature, pareto_index, crossover);
}

double TwoClassParams::amplitude() const noexcept { return std::exp(log_amplitude_); }

double TwoClassParams::tail_coefficient() const noexcept {
  return std::exp(log_tail_coefficient_);
}

double pdf(const TwoClassParams& params, double m) {
  require_income(m, "pdf");
  const double t = params.temperature();
  if (m < params.crossover()) {
    return std::exp(-m / t) / t;
  }
  return std::exp(params.log_amplitude() - (1.0 + params.pareto_index()) * std::log(m));
}

double ccdf(const TwoClassParams& params, double m) {
  require_income(m, "ccdf");
  const double alpha = params.pareto_index();
  const double ml = params.crossover();
  if (m <= ml) {
    // exp(-m/T) - exp(-m_l/T) + (A/alpha) m_l^-alpha
    const double tail_at_crossover =
        std::exp(params.log_tail_coefficient() - alpha * std::log(ml));
    return std::exp(-m / params.temperature()) - params.tail_mass() + tail_at_crossover;
  }
  return std::exp(params.log_tail_coefficient() - alpha * std::log(m));
}

double inverse_ccdf(const TwoClassParams& params, double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw Error(ErrorKind::Domain, "inverse_ccdf: survival probability must lie in (0, 1]");
  }
  if (s >= params.tail_mass()) {
    return -params.temperature() * std::log(s);
  }
  // B m^-alpha = s
  return std::exp((params.log_tail_coefficient() - std::log(s)) / params.pareto_index());
}

double partial_mean(const TwoClassParams& params, double m) {
  require_income(m, "partial_mean");
  const double t = params.temperature();
  const double ml = params.crossover();
  const double alpha = params.pareto_index();
  if (m <= ml) {
    return t - (m + t) * std::exp(-m / t);
  }
  require_finite_mean(params, "partial_mean");
  const double bulk = t - (ml + t) * params.tail_mass();
  // A / (alpha - 1) * (m_l^(1-alpha) - m^(1-alpha)), with A m_l^(1-alpha) = alpha m_l e^{-m_l/T}
  const double head = alpha / (alpha - 1.0) * ml * params.tail_mass();
  return bulk + head * (1.0 - std::pow(ml / m, alpha - 1.0));
}

double mean(const TwoClassParams& params) {
  require_finite_mean(params, "mean");
  const double t = params.temperature();
  const double ml = params.crossover();
  const double alpha = params.pareto_index();
  const double e = params.tail_mass();
  return t - (ml + t) * e + alpha / (alpha - 1.0) * ml * e;
}

std::vector<double> sample(const TwoClassParams& params, std::size_t n, std::uint64_t seed) {
  if (n == 0) {
    throw Error(ErrorKind::EmptyRequest, "sample: n must be at least 1");
  }
  Rng rng(seed);
  std::vector<double> draws;
  draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    draws.push_back(inverse_ccdf(params, rng.uniform_open()));
  }
  return draws;
}

namespace {

// Lorenz ordinate at population fraction F, i.e. partial_mean(q(F)) / mean,
// written in terms of the survival s = 1 - F to stay accurate near F = 1.
double lorenz_ordinate(const TwoClassParams& params, double s, double mu) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = params.temperature();
  const double alpha = params.pareto_index();
  const double p = params.tail_mass();
  if (s >= p) {
    // q = -T ln s, partial mean T - (q + T) s
    return t * (1.0 - s * (1.0 - std::log(s))) / mu;
  }
  const double ml = params.crossover();
  const double bulk = t - (ml + t) * p;
  const double head = alpha / (alpha - 1.0) * ml * p;
  return (bulk + head * (1.0 - std::pow(s / p, (alpha - 1.0) / alpha))) / mu;
}

}  // namespace

double analytic_gini(const TwoClassParams& params, std::size_t quantile_points) {
  require_finite_mean(params, "analytic_gini");
  if (quantile_points < 2) {
    throw Error(ErrorKind::Domain, "analytic_gini: need at least two quantile points");
  }
  const double mu = mean(params);
  const double k = static_cast<double>(quantile_points);
  CompensatedSum area;
  double previous = 0.0;
  for (std::size_t j = 1; j <= quantile_points; ++j) {
    const double s = static_cast<double>(quantile_points - j) / k;
    const double y = lorenz_ordinate(params, s, mu);
    area.add((y + previous) / k);
    previous = y;
  }
  return 1.0 - area.value();
}

}  // namespace twoclass
