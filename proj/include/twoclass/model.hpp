#ifndef TWOCLASS_MODEL_HPP
#define TWOCLASS_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace twoclass {

/// Parameters of the two-class income density: an exponential bulk with
/// scale `temperature` below `crossover` and a Pareto tail with exponent
/// `pareto_index` above it.
///
/// The amplitude is not a free parameter. It is fixed by requiring the
/// density to integrate to one, A = alpha * m_l^alpha * exp(-m_l / T), and
/// the tail coefficient B = A / alpha then makes the survival function
/// continuous at the crossover. Both are held in log space so that very
/// large m_l / T ratios underflow gracefully to a pure exponential.
///
/// Construction requires T > 0, m_l > 0 and alpha > 0. Moments need
/// alpha > 1 and are checked by the operations that use them.
class TwoClassParams {
 public:
  static TwoClassParams create(double temperature, double pareto_index, double crossover);

  double temperature() const noexcept { return temperature_; }
  double pareto_index() const noexcept { return pareto_index_; }
  double crossover() const noexcept { return crossover_; }

  double amplitude() const noexcept;
  double tail_coefficient() const noexcept;
  double log_amplitude() const noexcept { return log_amplitude_; }
  double log_tail_coefficient() const noexcept { return log_tail_coefficient_; }

  // Survival probability at the crossover, exp(-m_l / T).
  double tail_mass() const noexcept { return tail_mass_; }

  // m_l / T > 1, the regime the model is meant for. Not enforced.
  bool in_two_class_regime() const noexcept { return crossover_ > temperature_; }

  bool has_finite_mean() const noexcept { return pareto_index_ > 1.0; }

  friend bool operator==(const TwoClassParams&, const TwoClassParams&) = default;

 private:
  TwoClassParams(double temperature, double pareto_index, double crossover);

  double temperature_;
  double pareto_index_;
  double crossover_;
  double log_amplitude_;
  double log_tail_coefficient_;
  double tail_mass_;
};

// Density. At m == crossover the Pareto branch is returned.
double pdf(const TwoClassParams& params, double m);

// P(income >= m), evaluated with the exact piecewise survival function.
double ccdf(const TwoClassParams& params, double m);

// Inverse of ccdf on (0, 1]: the income whose survival probability is s.
double inverse_ccdf(const TwoClassParams& params, double s);

// Partial first moment, the integral of x * pdf(x) over [0, m].
double partial_mean(const TwoClassParams& params, double m);

// Closed-form mean. Throws DivergentMean for alpha <= 1.
double mean(const TwoClassParams& params);

// n i.i.d. draws by inverse transform. Deterministic in seed.
std::vector<double> sample(const TwoClassParams& params, std::size_t n, std::uint64_t seed);

// Gini coefficient of the model's own Lorenz curve, integrated with the
// trapezoid rule on `quantile_points` equally spaced population fractions.
double analytic_gini(const TwoClassParams& params, std::size_t quantile_points = 1u << 17);

}  // namespace twoclass

#endif  // TWOCLASS_MODEL_HPP
