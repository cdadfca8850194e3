#include <doctest.h>

#include <random>

#include "balzer.hpp"
#include "oracle/oracle.hpp"
#include "powerdist/assignment.hpp"
#include "synthetic.hpp"

using namespace powerdist;

namespace {

double matching_cost(const balzer::Hexagon& h, const BalancedAssignment& m) {
  double total = 0.0;
  for (const auto& e : m.entries()) {
    total += squared_distance(h.instance.block(e.block).location, h.centers.centers[static_cast<std::size_t>(e.center)]);
  }
  return total;
}

}  // namespace

TEST_CASE("cost policy") {
  const Instance square({{"a", {0, 0}, 1}, {"b", {1, 0}, 1}, {"c", {0, 1}, 1}, {"d", {1, 1}, 1}}, 2);
  const auto policy = ScaledCostPolicy::for_instance(square);
  CHECK(policy.diameter() <= std::sqrt(2.0));
  CHECK(policy.diameter() > std::sqrt(2.0) - policy.grid_step());
  // All four corners are grid points.
  for (const Block& b : square.blocks()) CHECK(policy.snap(b.location) == b.location);
  CHECK(policy.cost({0, 0}, {1, 1}) == std::llround(2.0 / policy.unscale(1.0)));
  CHECK(policy.rounding_tolerance() == doctest::Approx(2.0 * policy.diameter() * policy.diameter() / 1e9));

  const ScaledCostPolicy unit(100.0, {0, 0}, 1.0);
  CHECK(unit.grid_step() == doctest::Approx(0.1));
  CHECK(unit.cost({0, 0}, {0.3, 0.4}) == 25);
  CHECK(unit.to_grid({0.31, 0.44}) == ScaledCostPolicy::GridPoint{3, 4});
  CHECK_THROWS_AS(ScaledCostPolicy(0.0, {0, 0}, 1.0), InputError);
  CHECK_THROWS_AS(ScaledCostPolicy(1e9, {0, 0}, 0.0), InputError);
  CHECK_THROWS_AS(ScaledCostPolicy(1e18, {0, 0}, 1.0).check_range(1000000), InputError);
}

TEST_CASE("hexagon counter-example") {
  const auto hex = balzer::hexagon(0.01);
  const double star = matching_cost(hex, hex.m_star);
  const double prime = matching_cost(hex, hex.m_prime);
  CHECK(star == doctest::Approx(3.0 * (1.0 - 0.01 + 0.0001 / 3.0)));
  CHECK(prime - star == doctest::Approx(0.06));

  const auto policy = ScaledCostPolicy::for_instance(hex.instance);
  const auto result = min_cost_balanced_assignment(hex.instance, hex.centers, policy);
  CHECK(result.assignment == hex.m_star);

  // M' with zero weights is not power consistent; the solver's output is.
  CHECK_FALSE(verify_power_consistency(hex.instance, hex.centers, hex.m_prime, PowerWeights{{0, 0, 0}}, 0.0).consistent());
  CHECK(verify_power_consistency(hex.instance, hex.centers, result.assignment, result.weights,
                                 policy.rounding_tolerance()).consistent());
}

TEST_CASE("solver matches enumeration on small instances") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<Block> blocks;
    std::int64_t m = 0;
    const std::size_t n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t pop = static_cast<std::int64_t>(rng() % 3);
      blocks.push_back({"b" + std::to_string(i), {synthetic::unit(rng), synthetic::unit(rng)}, pop});
      m += pop;
    }
    if (m < k || m > 8) continue;
    const Instance inst(std::move(blocks), k);
    std::vector<Point2> pts;
    for (int x = 0; x < k; ++x) pts.push_back({synthetic::unit(rng), synthetic::unit(rng)});
    const CenterSet centers = CenterSet::balanced(pts, m);
    const auto policy = ScaledCostPolicy(1e9, {0, 0}, std::sqrt(2.0));
    const auto got = min_cost_balanced_assignment(inst, centers, policy);
    const auto want = oracle::brute_force_balanced(inst, centers);
    CAPTURE(trial);
    CHECK(assignment_cost(inst, centers, got.assignment) ==
          doctest::Approx(want.cost).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("capacities 2, 2, 3 for seven residents") {
  const Instance inst({{"a", {0, 0}, 3}, {"b", {1, 0}, 2}, {"c", {0, 1}, 2}}, 3);
  const CenterSet centers = CenterSet::balanced({{0, 0}, {1, 0}, {0, 1}}, 7);
  CHECK(centers.capacities == std::vector<std::int64_t>{2, 2, 3});
  const auto r = min_cost_balanced_assignment(inst, centers, ScaledCostPolicy::for_instance(inst));
  CHECK(r.assignment.center_totals(3) == centers.capacities);
  // Block a has three residents but its own center takes two: one is split off.
  CHECK(r.assignment.block_totals(3) == std::vector<std::int64_t>{3, 2, 2});
  CHECK(r.assignment.size() == 4);
}

TEST_CASE("single center takes everything") {
  const Instance inst({{"a", {0, 0}, 3}, {"b", {4, 0}, 0}, {"c", {0, 3}, 1}}, 1);
  const CenterSet centers = CenterSet::balanced({{0, 0}}, 4);
  const auto r = min_cost_balanced_assignment(inst, centers, ScaledCostPolicy::for_instance(inst));
  CHECK(r.assignment == BalancedAssignment({{0, 0, 3}, {2, 0, 1}}));
  CHECK(r.weights.w == std::vector<double>{0.0});
}

TEST_CASE("power consistency and its perturbation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = synthetic::uniform(300, 20, 5, seed);
    std::mt19937_64 rng(seed);
    std::vector<Point2> pts;
    for (int x = 0; x < 5; ++x) pts.push_back({synthetic::unit(rng), synthetic::unit(rng)});
    const CenterSet centers = CenterSet::balanced(pts, inst.total_population());
    const auto policy = ScaledCostPolicy::for_instance(inst);
    const auto r = min_cost_balanced_assignment(inst, centers, policy);
    r.assignment.validate(inst, centers);
    CHECK(verify_power_consistency(inst, centers, r.assignment, r.weights, policy.rounding_tolerance()).consistent());

    const double d2 = policy.diameter() * policy.diameter();
    for (std::size_t x = 0; x < 5; ++x) {
      PowerWeights bumped = r.weights;
      bumped.w[x] += 10.0 * d2;
      CHECK_FALSE(verify_power_consistency(inst, centers, r.assignment, bumped, policy.rounding_tolerance()).consistent());
    }
  }
}

TEST_CASE("bad center sets are rejected") {
  const Instance inst({{"a", {0, 0}, 2}}, 1);
  const auto policy = ScaledCostPolicy::for_instance(inst);
  CHECK_THROWS_AS(min_cost_balanced_assignment(inst, CenterSet{{{0, 0}}, {3}}, policy), InputError);
  CHECK_THROWS_AS(min_cost_balanced_assignment(inst, CenterSet{{}, {}}, policy), InputError);
  CHECK_THROWS_AS(min_cost_balanced_assignment(inst, CenterSet{{{0, 0}}, {1, 1}}, policy), InputError);
}
