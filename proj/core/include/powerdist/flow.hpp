#pragma once

// Exact minimum-cost flow for dense bipartite transshipment problems:
// every supply node may ship to every demand node, supplies and demands
// balance, and arc costs are integers. The solver returns an optimal
// integral flow together with optimal dual potentials.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace powerdist::flow {

/// Dense bipartite transshipment problem. `costs` is row-major with one row
/// per supply node and one column per demand node.
struct TransshipmentInstance {
  std::vector<std::int64_t> supplies;
  std::vector<std::int64_t> demands;
  std::vector<std::int64_t> costs;

  std::size_t num_supplies() const { return supplies.size(); }
  std::size_t num_demands() const { return demands.size(); }
  std::int64_t cost(std::size_t supply, std::size_t demand) const {
    return costs[supply * demands.size() + demand];
  }
};

struct ArcFlow {
  std::size_t supply = 0;
  std::size_t demand = 0;
  std::int64_t amount = 0;
};

/// Optimal primal/dual pair.
///
/// Duals follow the convention of the dual program
///   maximize  sum_x demand_x * w_x + sum_y supply_y * z_y
///   s.t.      z_y <= cost(y, x) - w_x   for every arc,
/// so `demand_potentials` are the w_x and `supply_potentials` the z_y.
/// Every arc with positive flow is tight, and the dual objective equals
/// `objective`. Potentials are shifted so the smallest w_x is zero.
struct FlowSolution {
  std::vector<ArcFlow> flows;  // positive flows, sorted by (supply, demand)
  std::vector<std::int64_t> supply_potentials;
  std::vector<std::int64_t> demand_potentials;
  std::int64_t objective = 0;
};

/// Largest |cost| * max(total supply, demand count + 2) the solver accepts;
/// keeps objectives, path lengths and potentials inside int64.
inline constexpr std::int64_t kMagnitudeLimit = std::int64_t{1} << 61;

/// Successive shortest augmenting paths with node potentials.
///
/// Residual paths alternate demand nodes and supply nodes with positive
/// flow; they are searched on a graph over the demand nodes only, where the
/// arc x -> x' costs min over supply nodes y currently shipping to x of
/// cost(y, x') - cost(y, x), kept in lazily-pruned heaps. One augmentation
/// costs O(k log n + k^2) for k demand nodes.
///
/// Throws powerdist::InputError when supplies and demands do not balance, a
/// value is negative, the cost matrix has the wrong size, or the magnitudes
/// exceed kMagnitudeLimit (lower the cost scale in that case).
FlowSolution solve_mcf(const TransshipmentInstance& inst);

}  // namespace powerdist::flow
