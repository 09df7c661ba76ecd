#include "twoclass/numeric.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "twoclass/error.hpp"

namespace twoclass {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::EmptyRequest: return "empty request";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::EmptyDataset: return "empty dataset";
    case ErrorKind::DegenerateRegression: return "degenerate regression";
    case ErrorKind::DegenerateCurve: return "degenerate curve";
    case ErrorKind::DivergentMean: return "divergent mean";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::Schema:
    case ErrorKind::EmptyRequest:
      return 2;
    case ErrorKind::InsufficientData:
    case ErrorKind::EmptyDataset:
    case ErrorKind::DegenerateRegression:
    case ErrorKind::DegenerateCurve:
    case ErrorKind::DivergentMean:
      return 3;
    case ErrorKind::Io:
      return 4;
  }
  return 1;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  m.n = values.size();
  if (m.n == 0) return m;
  m.mean = compensated_sum(values) / static_cast<double>(m.n);
  if (m.n < 2) return m;
  CompensatedSum ss;
  for (double v : values) {
    const double d = v - m.mean;
    ss.add(d * d);
  }
  m.stddev = std::sqrt(ss.value() / static_cast<double>(m.n - 1));
  return m;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::DegenerateRegression,
                "least squares needs at least two paired points");
  }
  const std::size_t n = x.size();
  const double mx = compensated_sum(x) / static_cast<double>(n);
  const double my = compensated_sum(y) / static_cast<double>(n);
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    sxx.add(dx * dx);
    sxy.add(dx * (y[i] - my));
  }
  if (!(sxx.value() > 0.0)) {
    throw Error(ErrorKind::DegenerateRegression,
                "zero variance in the regressor");
  }
  LinearFit fit;
  fit.n = n;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  CompensatedSum rss;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss.add(r * r);
  }
  fit.residual_sum_squares = rss.value();
  if (n > 2) {
    fit.slope_std_error = std::sqrt(fit.residual_sum_squares /
                                    static_cast<double>(n - 2) / sxx.value());
  }
  return fit;
}

double student_t_critical(double dof, double confidence) {
  if (!(dof > 0.0) || !(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::Domain, "invalid Student-t critical value request");
  }
  boost::math::students_t dist(dof);
  return boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform_open() noexcept {
  // 53 random bits centred in their cell, never 0 or 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t bound) noexcept {
  // Reject the partial block at the top of the range so the draw is unbiased.
  const std::uint64_t range = static_cast<std::uint64_t>(bound);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % range);
}

}  // namespace twoclass
