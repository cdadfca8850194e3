#include "powerdist/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "powerdist/flow.hpp"

namespace powerdist {

ScaledCostPolicy::ScaledCostPolicy(double scale, Point2 origin, double diameter)
    : scale_(scale), origin_(origin), diameter_(diameter) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InputError(fmt::format("scale must be positive (got {})", scale_));
  if (!(diameter_ > 0.0) || !std::isfinite(diameter_)) {
    throw InputError(fmt::format("normalization diameter must be positive (got {})", diameter_));
  }
  if (!is_finite(origin_)) throw InputError("normalization origin must be finite");
  unit_ = diameter_ * diameter_ / scale_;
  grid_step_ = diameter_ / std::sqrt(scale_);
}

ScaledCostPolicy ScaledCostPolicy::for_instance(const Instance& inst, double scale) {
  const BoundingBox box = BoundingBox::of(inst);
  const double longest = std::max(box.width(), box.height());
  if (!(longest > 0.0)) return ScaledCostPolicy(scale, box.min, 1.0);
  // Shrink the diameter by less than one grid cell so the longer box side is
  // a whole number of cells and both far corners land on the grid.
  const double root = std::sqrt(scale);
  const double cells = std::ceil(root * longest / box.diameter());
  return ScaledCostPolicy(scale, box.min, root * longest / cells);
}

std::int64_t ScaledCostPolicy::cost(Point2 a, Point2 b) const {
  const double scaled = squared_distance(a, b) / unit_;
  if (!(scaled < static_cast<double>(flow::kMagnitudeLimit))) {
    throw InputError("scaled squared distance out of integer range; lower the cost scale");
  }
  return std::llround(scaled);
}

ScaledCostPolicy::GridPoint ScaledCostPolicy::to_grid(Point2 p) const {
  return {std::llround((p.x - origin_.x) / grid_step_), std::llround((p.y - origin_.y) / grid_step_)};
}

Point2 ScaledCostPolicy::from_grid(GridPoint g) const {
  return {origin_.x + static_cast<double>(g.i) * grid_step_, origin_.y + static_cast<double>(g.j) * grid_step_};
}

void ScaledCostPolicy::check_range(std::int64_t total_population, double max_normalized_d2) const {
  const double volume = std::max<double>(static_cast<double>(total_population), 2.0);
  if (scale_ * max_normalized_d2 * volume > static_cast<double>(flow::kMagnitudeLimit)) {
    throw InputError(fmt::format(
        "scale {} with population {} would overflow the solver's integer costs; lower --scale",
        scale_, total_population));
  }
}

namespace {

void check_centers(const Instance& inst, const CenterSet& centers) {
  if (centers.centers.empty()) throw InputError("center set is empty");
  if (centers.centers.size() != centers.capacities.size()) {
    throw InputError("center set has mismatched center and capacity counts");
  }
  std::int64_t total = 0;
  for (std::size_t x = 0; x < centers.size(); ++x) {
    if (!is_finite(centers.centers[x])) throw InputError(fmt::format("center {} is not finite", x));
    if (centers.capacities[x] < 0) throw InputError(fmt::format("center {} has negative capacity", x));
    total += centers.capacities[x];
  }
  if (total != inst.total_population()) {
    throw InputError(fmt::format("capacities sum to {} but the population is {}", total, inst.total_population()));
  }
}

}  // namespace

AssignmentResult balanced_assignment_from_costs(const Instance& inst, const CenterSet& centers,
                                                std::vector<std::int64_t> costs, double unit) {
  check_centers(inst, centers);
  flow::TransshipmentInstance problem;
  problem.supplies.reserve(inst.size());
  for (const Block& b : inst.blocks()) problem.supplies.push_back(b.population);
  problem.demands = centers.capacities;
  problem.costs = std::move(costs);

  const flow::FlowSolution sol = flow::solve_mcf(problem);

  std::vector<AssignmentEntry> entries;
  entries.reserve(sol.flows.size());
  for (const flow::ArcFlow& f : sol.flows) entries.push_back({f.supply, static_cast<int>(f.demand), f.amount});

  AssignmentResult result;
  result.assignment = BalancedAssignment(std::move(entries));
  result.scaled_weights = sol.demand_potentials;
  result.scaled_cost = sol.objective;
  result.weights.w.reserve(sol.demand_potentials.size());
  for (std::int64_t w : sol.demand_potentials) result.weights.w.push_back(static_cast<double>(w) * unit);
  return result;
}

AssignmentResult min_cost_balanced_assignment(const Instance& inst, const CenterSet& centers,
                                              const ScaledCostPolicy& policy) {
  check_centers(inst, centers);
  const std::size_t k = centers.size();
  std::vector<std::int64_t> costs(inst.size() * k);
  for (std::size_t y = 0; y < inst.size(); ++y) {
    const Point2 p = inst.block(y).location;
    for (std::size_t x = 0; x < k; ++x) costs[y * k + x] = policy.cost(p, centers.centers[x]);
  }
  return balanced_assignment_from_costs(inst, centers, std::move(costs), policy.unscale(1.0));
}

PowerConsistencyReport verify_power_consistency(const Instance& inst, const CenterSet& centers,
                                                const BalancedAssignment& asg,
                                                const PowerWeights& weights, double tolerance) {
  const std::size_t k = centers.size();
  if (weights.size() != k) {
    throw InputError(fmt::format("{} weights supplied for {} centers", weights.size(), k));
  }
  PowerConsistencyReport report;
  for (const AssignmentEntry& e : asg.entries()) {
    if (e.block >= inst.size() || e.center < 0 || static_cast<std::size_t>(e.center) >= k) {
      throw InputError("assignment entry out of range");
    }
    const Point2 p = inst.block(e.block).location;
    double best = std::numeric_limits<double>::infinity();
    int best_center = 0;
    for (std::size_t x = 0; x < k; ++x) {
      const double power = squared_distance(p, centers.centers[x]) - weights.w[x];
      if (power < best) {
        best = power;
        best_center = static_cast<int>(x);
      }
    }
    const auto x = static_cast<std::size_t>(e.center);
    const double own = squared_distance(p, centers.centers[x]) - weights.w[x];
    if (own > best + tolerance) {
      report.violations.push_back({e.block, e.center, best_center, own - best - tolerance});
    }
  }
  return report;
}

}  // namespace powerdist
