#ifndef TWOCLASS_INEQUALITY_HPP
#define TWOCLASS_INEQUALITY_HPP

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "twoclass/ingest.hpp"

namespace twoclass {

struct LorenzPoint {
  double x = 0.0;  // cumulative population fraction
  double y = 0.0;  // cumulative income fraction
};

/// Cumulative income share against cumulative population share, population
/// sorted by income ascending. Runs from (0, 0) to (1, 1) with x strictly
/// increasing and y non-decreasing.
class LorenzCurve {
 public:
  // Validates the endpoint and monotonicity invariants.
  static LorenzCurve from_points(std::vector<LorenzPoint> points);

  const std::vector<LorenzPoint>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  explicit LorenzCurve(std::vector<LorenzPoint> points) : points_(std::move(points)) {}
  std::vector<LorenzPoint> points_;
};

// Per-observation curve: point j is (j / n, sum of the j smallest / total).
// Zero incomes are allowed; a zero total throws DegenerateCurve.
LorenzCurve lorenz(std::span<const double> incomes);
LorenzCurve lorenz(const Dataset& dataset);

// 1 - sum (Y_j + Y_{j-1}) (X_j - X_{j-1}).
double gini_brown(const LorenzCurve& curve);

// Area of trapezoid j of the curve, j in [1, size).
double trapezoid_area(const LorenzCurve& curve, std::size_t j);

struct GiniLevel {
  std::size_t partitions = 0;
  double gini = 0.0;
};

struct GiniResult {
  double value = 0.0;
  double uncertainty = 0.0;
  std::size_t partitions_used = 0;
  // First decimal place where the last two refinements disagree; 0 when they
  // agree to every printed place.
  int divergent_decimal = 0;
  std::vector<GiniLevel> levels;
};

/// Gini coefficient under successive refinement of the Lorenz curve.
///
/// Level k keeps the Lorenz points at observation indices floor(i n / k),
/// i = 0..k, so every point is an exact partial sum and each level nests in
/// the next. Levels run over k = 2^5, 2^6, ... up to min(n, 2^17); when
/// n <= 2^17 the per-observation curve closes the sequence. The reported value
/// is the finest level and the uncertainty is its gap to the previous one.
///
/// Chords of a convex curve lie above it, so refining never increases the
/// trapezoid area and the sequence of Gini values is non-decreasing.
GiniResult gini_converged(std::span<const double> incomes);
GiniResult gini_converged(const Dataset& dataset);

// Two-column delimited export with an `X,Y` header.
void write_lorenz(std::ostream& out, const LorenzCurve& curve);

}  // namespace twoclass

#endif  // TWOCLASS_INEQUALITY_HPP
