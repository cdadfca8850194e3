#pragma once

// Minimum-cost balanced assignment of residents to fixed centers, solved
// exactly as a transshipment problem, with power weights read off the
// optimal demand-side duals.

#include <cstdint>
#include <vector>

#include "powerdist/model.hpp"

namespace powerdist {

/// Maps real squared distances to the solver's integer costs.
///
/// Coordinates are normalized so the instance bounding box has diameter 1;
/// a normalized squared distance d2 becomes llround(scale * d2). The same
/// normalization defines a grid of step diameter / sqrt(scale) anchored at
/// the box's lower-left corner; between grid points the scaled cost is the
/// exact integer squared distance in grid units.
class ScaledCostPolicy {
 public:
  static constexpr double kDefaultScale = 1e9;

  ScaledCostPolicy(double scale, Point2 origin, double diameter);

  /// Normalization taken from the bounding box of the instance's blocks:
  /// origin at its lower-left corner, diameter equal to the box diagonal
  /// rounded down so the longer side spans a whole number of grid cells.
  static ScaledCostPolicy for_instance(const Instance& inst, double scale = kDefaultScale);

  double scale() const { return scale_; }
  Point2 origin() const { return origin_; }
  double diameter() const { return diameter_; }

  std::int64_t cost(Point2 a, Point2 b) const;

  /// Scaled integer cost units back to squared planar units.
  double unscale(double scaled) const { return scaled * unit_; }

  /// Largest mismatch between a real weighted-distance comparison and its
  /// scaled integer counterpart: two rounding errors of half a unit each,
  /// padded to 2 units.
  double rounding_tolerance() const { return 2.0 * unit_; }

  /// Side of one grid cell in planar units.
  double grid_step() const { return grid_step_; }

  struct GridPoint {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend bool operator==(const GridPoint&, const GridPoint&) = default;
  };
  GridPoint to_grid(Point2 p) const;
  Point2 from_grid(GridPoint g) const;
  Point2 snap(Point2 p) const { return from_grid(to_grid(p)); }

  /// Throws InputError if costs of up to `max_normalized_d2` per resident
  /// for `total_population` residents would leave the solver's range.
  void check_range(std::int64_t total_population, double max_normalized_d2 = 1.0) const;

 private:
  double scale_;
  Point2 origin_;
  double diameter_;
  double unit_;       // squared planar units per scaled cost unit
  double grid_step_;
};

struct AssignmentResult {
  BalancedAssignment assignment;
  PowerWeights weights;                     // squared planar units
  std::vector<std::int64_t> scaled_weights;  // demand duals on the integer costs
  std::int64_t scaled_cost = 0;              // optimal objective on the integer costs
};

/// Solves the balanced assignment for fixed centers. Blocks are supply
/// nodes (supply = population), centers are demand nodes (demand =
/// capacity), and arc costs are policy.cost(block, center).
///
/// For every returned entry (y, x) and every center x':
///   cost(y, x) - W_x <= cost(y, x') - W_x'
/// holds exactly on the scaled integer costs, W = scaled_weights.
AssignmentResult min_cost_balanced_assignment(const Instance& inst, const CenterSet& centers,
                                              const ScaledCostPolicy& policy);

/// Same, with caller-supplied integer costs (row-major blocks x centers).
/// `unit` converts scaled weights to squared planar units.
AssignmentResult balanced_assignment_from_costs(const Instance& inst, const CenterSet& centers,
                                                std::vector<std::int64_t> costs, double unit);

struct PowerViolation {
  std::size_t block = 0;
  int center = 0;          // center the block's residents are assigned to
  int better_center = 0;   // center with the smallest weighted distance
  double excess = 0.0;     // amount by which the condition fails, beyond tolerance
};

struct PowerConsistencyReport {
  std::vector<PowerViolation> violations;
  bool consistent() const { return violations.empty(); }
};

/// Lists every positive-flow pair (y, x) with
///   d2(y, x) - w_x > min_x' [d2(y, x') - w_x'] + tolerance,
/// evaluated in real arithmetic on the unscaled coordinates and weights.
PowerConsistencyReport verify_power_consistency(const Instance& inst, const CenterSet& centers,
                                                const BalancedAssignment& asg,
                                                const PowerWeights& weights, double tolerance);

}  // namespace powerdist
