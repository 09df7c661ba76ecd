#ifndef TWOCLASS_NUMERIC_HPP
#define TWOCLASS_NUMERIC_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace twoclass {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

// Mean and unbiased (n - 1) standard deviation; stddev is 0 for n < 2.
struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

SampleMoments sample_moments(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double residual_sum_squares = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares of y on x. Requires n >= 2 and nonzero spread in x;
// throws Error(DegenerateRegression) otherwise.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Two-sided Student-t critical value for the given confidence level.
double student_t_critical(double dof, double confidence = 0.95);

/// Seeded generator with platform-independent variates.
///
/// Draws come straight from mt19937_64 bits, so a seed reproduces the same
/// sequence under any standard library. Independent substreams are derived
/// from (seed, index) with a splitmix64 mixer.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t seed, std::uint64_t index);

  // Uniform on the open interval (0, 1).
  double uniform_open() noexcept;

  // Uniform integer in [0, bound); bound must be positive.
  std::size_t uniform_index(std::size_t bound) noexcept;

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace twoclass

#endif  // TWOCLASS_NUMERIC_HPP
