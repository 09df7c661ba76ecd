#include "twoclass/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>

#include "twoclass/error.hpp"
#include "twoclass/numeric.hpp"

namespace twoclass {

namespace {

constexpr std::size_t kFinestPartition = std::size_t{1} << 17;
constexpr int kCoarsestExponent = 5;

struct SortedIncomes {
  std::vector<double> prefix;  // prefix[j] = sum of the j smallest incomes
  double total = 0.0;
};

SortedIncomes prefix_sums(std::span<const double> incomes) {
  if (incomes.empty()) {
    throw Error(ErrorKind::EmptyDataset, "lorenz: dataset is empty");
  }
  std::vector<double> sorted(incomes.begin(), incomes.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() >= 0.0) || !std::isfinite(sorted.back())) {
    throw Error(ErrorKind::Domain, "lorenz: incomes must be finite and non-negative");
  }
  SortedIncomes out;
  out.prefix.reserve(sorted.size() + 1);
  out.prefix.push_back(0.0);
  CompensatedSum running;
  for (double m : sorted) {
    running.add(m);
    out.prefix.push_back(running.value());
  }
  out.total = out.prefix.back();
  if (!(out.total > 0.0)) {
    throw Error(ErrorKind::DegenerateCurve, "lorenz: total income is zero");
  }
  return out;
}

LorenzCurve curve_at(const SortedIncomes& sums, std::size_t partitions) {
  const std::size_t n = sums.prefix.size() - 1;
  std::vector<LorenzPoint> points;
  points.reserve(partitions + 1);
  for (std::size_t i = 0; i <= partitions; ++i) {
    // i * n fits in 64 bits for any sample that fits in memory
    const std::size_t j = static_cast<std::size_t>(
        static_cast<std::uint64_t>(i) * n / partitions);
    points.push_back({static_cast<double>(j) / static_cast<double>(n),
                      j == n ? 1.0 : sums.prefix[j] / sums.total});
  }
  return LorenzCurve::from_points(std::move(points));
}

int first_divergent_decimal(double a, double b) {
  for (int place = 1; place <= 15; ++place) {
    const double scale = std::pow(10.0, place);
    if (std::floor(a * scale) != std::floor(b * scale)) return place;
  }
  return 0;
}

}  // namespace

LorenzCurve LorenzCurve::from_points(std::vector<LorenzPoint> points) {
  if (points.size() < 2) {
    throw Error(ErrorKind::DegenerateCurve, "Lorenz curve needs at least two points");
  }
  if (points.front().x != 0.0 || points.front().y != 0.0 || points.back().x != 1.0 ||
      points.back().y != 1.0) {
    throw Error(ErrorKind::DegenerateCurve, "Lorenz curve must run from (0,0) to (1,1)");
  }
  for (std::size_t j = 1; j < points.size(); ++j) {
    if (!(points[j].x > points[j - 1].x) || points[j].y < points[j - 1].y) {
      throw Error(ErrorKind::DegenerateCurve,
                  "Lorenz curve needs strictly increasing X and non-decreasing Y");
    }
  }
  return LorenzCurve(std::move(points));
}

LorenzCurve lorenz(std::span<const double> incomes) {
  const SortedIncomes sums = prefix_sums(incomes);
  return curve_at(sums, sums.prefix.size() - 1);
}

LorenzCurve lorenz(const Dataset& dataset) {
  const auto incomes = dataset.incomes();
  return lorenz(incomes);
}

double trapezoid_area(const LorenzCurve& curve, std::size_t j) {
  const auto& p = curve.points();
  return 0.5 * (p[j].y + p[j - 1].y) * (p[j].x - p[j - 1].x);
}

double gini_brown(const LorenzCurve& curve) {
  const auto& p = curve.points();
  CompensatedSum sum;
  for (std::size_t j = 1; j < p.size(); ++j) {
    sum.add((p[j].y + p[j - 1].y) * (p[j].x - p[j - 1].x));
  }
  return std::clamp(1.0 - sum.value(), 0.0, 1.0);
}

GiniResult gini_converged(std::span<const double> incomes) {
  const SortedIncomes sums = prefix_sums(incomes);
  const std::size_t n = sums.prefix.size() - 1;
  const std::size_t finest = std::min(n, kFinestPartition);

  std::vector<std::size_t> sizes;
  int exponent = kCoarsestExponent;
  while (exponent > 0 && (std::size_t{1} << exponent) > finest) --exponent;
  for (std::size_t k = std::size_t{1} << exponent; k <= finest; k <<= 1) sizes.push_back(k);
  if (sizes.back() != finest) sizes.push_back(finest);

  GiniResult result;
  for (std::size_t k : sizes) {
    result.levels.push_back({k, gini_brown(curve_at(sums, k))});
  }
  result.value = result.levels.back().gini;
  result.partitions_used = result.levels.back().partitions;
  if (result.levels.size() >= 2) {
    const double previous = result.levels[result.levels.size() - 2].gini;
    result.uncertainty = std::abs(result.value - previous);
    result.divergent_decimal = first_divergent_decimal(result.value, previous);
  }
  return result;
}

GiniResult gini_converged(const Dataset& dataset) {
  const auto incomes = dataset.incomes();
  return gini_converged(incomes);
}

void write_lorenz(std::ostream& out, const LorenzCurve& curve) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "X,Y\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : curve.points()) out << p.x << ',' << p.y << '\n';
  out.flags(flags);
  out.precision(precision);
}

}  // namespace twoclass
