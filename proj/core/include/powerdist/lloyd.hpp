#pragma once

// Capacitated Lloyd iteration: alternate a minimum-cost balanced assignment
// for the current centers with moving every center to the centroid of its
// assigned residents, until the centers stop moving.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "powerdist/assignment.hpp"
#include "powerdist/model.hpp"

namespace powerdist::lloyd {

struct Config {
  std::uint64_t seed = 0;
  int max_iterations = 300;
  /// Largest center displacement (planar units) still counted as "not
  /// moving"; defaults to 1e-9 of the bounding-box diameter.
  std::optional<double> threshold;
};

/// k-means++ sampling weights given already chosen centers: population times
/// squared distance to the nearest chosen center, or plain population when
/// nothing is chosen yet. Unnormalized.
std::vector<double> seeding_weights(const Instance& inst, std::span<const Point2> chosen);

/// Draws k distinct block locations: the first with probability
/// proportional to population, each later one proportional to population
/// times squared distance to the nearest location already drawn.
/// Capacities come from balanced_capacities(m, k). Throws InputError when
/// fewer than k distinct populated locations exist.
CenterSet seed_centers(const Instance& inst, int k, std::uint64_t seed);

/// Moves every center to the flow-weighted mean of its assigned blocks;
/// capacities are kept.
CenterSet centroid_step(const Instance& inst, const CenterSet& centers, const BalancedAssignment& asg);

/// Copy of `inst` with every block moved to its nearest grid point.
Instance snap_to_grid(const Instance& inst, const ScaledCostPolicy& policy);

struct Result {
  Instance instance;  // the grid-snapped blocks the iteration ran on
  CenterSet centers;  // centers the final assignment was computed for
  AssignmentResult assignment;
  RunTrace trace;
  double cost = 0.0;
};

/// Runs the iteration from k-means++ seeds.
///
/// Blocks and centers live on the policy's grid, so every assignment cost
/// is an exact integer and the recorded costs never increase. A center
/// moves to the grid point nearest its exact centroid, and keeps its place
/// when that point is no closer. The loop stops once no center moves more
/// than the threshold (converged) or after max_iterations (not converged);
/// either way the returned centers, assignment and weights belong together.
Result run(const Instance& inst, const Config& cfg, const ScaledCostPolicy& policy);

}  // namespace powerdist::lloyd
