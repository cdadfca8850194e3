#include "powerdist/lloyd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <utility>

#include <fmt/core.h>

namespace powerdist::lloyd {
namespace {

using GridPoint = ScaledCostPolicy::GridPoint;
__extension__ typedef __int128 i128;

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw_index(std::span<const double> weights, double total, std::mt19937_64& rng) {
  const double target = unit_draw(rng) * total;
  double running = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    running += weights[i];
    last_positive = i;
    if (target < running) return i;
  }
  return last_positive;
}

std::size_t count_distinct_populated(const Instance& inst) {
  std::set<std::pair<double, double>> seen;
  for (const Block& b : inst.blocks()) {
    if (b.population > 0) seen.emplace(b.location.x, b.location.y);
  }
  return seen.size();
}

// Nearest integer to num / den (den > 0), halves rounded up.
std::int64_t rounded_quotient(i128 num, std::int64_t den) {
  const i128 twice = 2 * num + den;
  const i128 d2 = 2 * static_cast<i128>(den);
  i128 q = twice / d2;
  if ((twice % d2 != 0) && (twice < 0)) --q;
  return static_cast<std::int64_t>(q);
}

i128 scaled_gap(GridPoint g, std::int64_t mass, i128 sum_i, i128 sum_j) {
  const i128 di = static_cast<i128>(mass) * g.i - sum_i;
  const i128 dj = static_cast<i128>(mass) * g.j - sum_j;
  return di * di + dj * dj;
}

}  // namespace

std::vector<double> seeding_weights(const Instance& inst, std::span<const Point2> chosen) {
  std::vector<double> weights(inst.size(), 0.0);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Block& b = inst.block(i);
    if (b.population == 0) continue;
    double nearest = chosen.empty() ? 1.0 : std::numeric_limits<double>::infinity();
    for (const Point2& c : chosen) nearest = std::min(nearest, squared_distance(b.location, c));
    weights[i] = static_cast<double>(b.population) * nearest;
  }
  return weights;
}

CenterSet seed_centers(const Instance& inst, int k, std::uint64_t seed) {
  if (k < 1) throw InputError(fmt::format("k must be at least 1 (got {})", k));
  const std::size_t distinct = count_distinct_populated(inst);
  if (static_cast<std::size_t>(k) > distinct) {
    throw InputError(fmt::format("cannot seed {} centers: only {} distinct populated block locations", k, distinct));
  }
  std::mt19937_64 rng(seed);
  std::vector<Point2> chosen;
  chosen.reserve(static_cast<std::size_t>(k));

  std::vector<double> weights = seeding_weights(inst, chosen);
  while (chosen.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw InputError("seeding ran out of populated locations away from chosen centers");
    const Point2 next = inst.block(draw_index(weights, total, rng)).location;
    chosen.push_back(next);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const Block& b = inst.block(i);
      if (b.population == 0) continue;
      const double d2 = static_cast<double>(b.population) * squared_distance(b.location, next);
      weights[i] = chosen.size() == 1 ? d2 : std::min(weights[i], d2);
    }
  }
  return CenterSet::balanced(std::move(chosen), inst.total_population());
}

CenterSet centroid_step(const Instance& inst, const CenterSet& centers, const BalancedAssignment& asg) {
  asg.validate(inst, centers);
  const std::size_t k = centers.size();
  std::vector<double> sx(k, 0.0), sy(k, 0.0);
  std::vector<std::int64_t> mass(k, 0);
  for (const AssignmentEntry& e : asg.entries()) {
    const auto x = static_cast<std::size_t>(e.center);
    const Point2 p = inst.block(e.block).location;
    sx[x] += static_cast<double>(e.persons) * p.x;
    sy[x] += static_cast<double>(e.persons) * p.y;
    mass[x] += e.persons;
  }
  CenterSet moved = centers;
  for (std::size_t x = 0; x < k; ++x) {
    if (mass[x] == 0) throw std::logic_error(fmt::format("center {} has no assigned residents", x));
    const double m = static_cast<double>(mass[x]);
    moved.centers[x] = {sx[x] / m, sy[x] / m};
  }
  return moved;
}

Instance snap_to_grid(const Instance& inst, const ScaledCostPolicy& policy) {
  std::vector<Block> blocks = inst.blocks();
  for (Block& b : blocks) b.location = policy.snap(b.location);
  return Instance(std::move(blocks), inst.k());
}

Result run(const Instance& inst, const Config& cfg, const ScaledCostPolicy& policy) {
  if (cfg.max_iterations < 1) throw InputError("max_iterations must be at least 1");
  const double threshold = cfg.threshold.value_or(1e-9 * policy.diameter());
  if (!(threshold >= 0.0)) throw InputError("convergence threshold must be nonnegative");

  // Grid coordinates of blocks stay within the normalized box, so a squared
  // grid distance is at most about `scale`.
  policy.check_range(inst.total_population(), 2.0);
  Instance engine = snap_to_grid(inst, policy);
  const std::size_t n = engine.size();
  const int k = engine.k();
  const auto ku = static_cast<std::size_t>(k);

  std::vector<GridPoint> block_grid(n);
  for (std::size_t y = 0; y < n; ++y) block_grid[y] = policy.to_grid(inst.block(y).location);

  const CenterSet seeds = seed_centers(engine, k, cfg.seed);
  std::vector<GridPoint> center_grid(ku);
  for (std::size_t x = 0; x < ku; ++x) center_grid[x] = policy.to_grid(seeds.centers[x]);
  const std::vector<std::int64_t>& capacities = seeds.capacities;

  auto center_set = [&](const std::vector<GridPoint>& grid) {
    CenterSet set;
    set.capacities = capacities;
    set.centers.reserve(grid.size());
    for (const GridPoint& g : grid) set.centers.push_back(policy.from_grid(g));
    return set;
  };

  RunTrace trace;
  trace.seed = cfg.seed;
  std::vector<std::int64_t> costs(n * ku);
  std::optional<AssignmentResult> current;

  for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t x = 0; x < ku; ++x) {
        const std::int64_t di = block_grid[y].i - center_grid[x].i;
        const std::int64_t dj = block_grid[y].j - center_grid[x].j;
        costs[y * ku + x] = di * di + dj * dj;
      }
    }
    current = balanced_assignment_from_costs(engine, center_set(center_grid), costs, policy.unscale(1.0));

    std::vector<i128> sum_i(ku, 0), sum_j(ku, 0);
    for (const AssignmentEntry& e : current->assignment.entries()) {
      const auto x = static_cast<std::size_t>(e.center);
      sum_i[x] += static_cast<i128>(e.persons) * block_grid[e.block].i;
      sum_j[x] += static_cast<i128>(e.persons) * block_grid[e.block].j;
    }
    std::vector<GridPoint> moved = center_grid;
    double max_move = 0.0;
    for (std::size_t x = 0; x < ku; ++x) {
      const std::int64_t mass = capacities[x];
      const GridPoint nearest{rounded_quotient(sum_i[x], mass), rounded_quotient(sum_j[x], mass)};
      if (scaled_gap(nearest, mass, sum_i[x], sum_j[x]) < scaled_gap(center_grid[x], mass, sum_i[x], sum_j[x])) {
        moved[x] = nearest;
        const double di = static_cast<double>(nearest.i - center_grid[x].i);
        const double dj = static_cast<double>(nearest.j - center_grid[x].j);
        max_move = std::max(max_move, std::hypot(di, dj) * policy.grid_step());
      }
    }

    trace.iterations.push_back(
        {iteration, policy.unscale(static_cast<double>(current->scaled_cost)), current->scaled_cost, max_move});
    if (max_move <= threshold) {
      trace.converged = true;
      break;
    }
    if (iteration < cfg.max_iterations) center_grid = std::move(moved);
  }

  CenterSet final_centers = center_set(center_grid);
  const double cost = policy.unscale(static_cast<double>(current->scaled_cost));
  return Result{std::move(engine), std::move(final_centers), std::move(*current), std::move(trace), cost};
}

}  // namespace powerdist::lloyd
