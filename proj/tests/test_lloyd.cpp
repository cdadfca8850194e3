#include <doctest.h>

#include <random>

#include "oracle/oracle.hpp"
#include "powerdist/lloyd.hpp"
#include "synthetic.hpp"

using namespace powerdist;

namespace {

Instance corners() { return Instance({{"a", {0, 0}, 1}, {"b", {1, 0}, 1}, {"c", {0, 1}, 1}, {"d", {1, 1}, 1}}, 2); }

void check_monotone(const RunTrace& trace) {
  for (std::size_t i = 1; i < trace.iterations.size(); ++i) {
    CHECK(trace.iterations[i].scaled_cost <= trace.iterations[i - 1].scaled_cost);
  }
}

}  // namespace

TEST_CASE("seeding weights") {
  const Instance inst({{"a", {0, 0}, 2}, {"b", {3, 4}, 1}, {"c", {1, 0}, 0}}, 1);
  CHECK(lloyd::seeding_weights(inst, {}) == std::vector<double>{2, 1, 0});
  const std::vector<Point2> chosen{{0, 0}};
  CHECK(lloyd::seeding_weights(inst, chosen) == std::vector<double>{0, 25, 0});
}

TEST_CASE("seeded centers are distinct populated locations") {
  const Instance inst = synthetic::uniform(200, 3, 6, 11);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CenterSet c = lloyd::seed_centers(inst, 6, seed);
    REQUIRE(c.size() == 6);
    CHECK(c.capacities == balanced_capacities(inst.total_population(), 6));
    for (std::size_t a = 0; a < 6; ++a) {
      bool found = false;
      for (const Block& b : inst.blocks()) found = found || (b.location == c.centers[a] && b.population > 0);
      CHECK(found);
      for (std::size_t b = a + 1; b < 6; ++b) CHECK_FALSE(c.centers[a] == c.centers[b]);
    }
  }
  CHECK(lloyd::seed_centers(inst, 6, 3).centers == lloyd::seed_centers(inst, 6, 3).centers);
}

TEST_CASE("seeding fails with too few populated locations") {
  const Instance inst({{"a", {0, 0}, 5}, {"b", {1, 0}, 0}, {"c", {0, 0.5}, 0}}, 2);
  CHECK_THROWS_AS(lloyd::seed_centers(inst, 2, 0), InputError);
  CHECK_THROWS_AS(lloyd::run(inst, {}, ScaledCostPolicy::for_instance(inst)), InputError);
}

TEST_CASE("centroid step agrees with the naive weighted mean") {
  const Instance inst = synthetic::uniform(50, 9, 3, 4);
  const CenterSet centers = CenterSet::balanced({{0.2, 0.2}, {0.8, 0.3}, {0.5, 0.9}}, inst.total_population());
  const auto r = min_cost_balanced_assignment(inst, centers, ScaledCostPolicy::for_instance(inst));
  const CenterSet moved = lloyd::centroid_step(inst, centers, r.assignment);
  for (int x = 0; x < 3; ++x) {
    std::vector<std::pair<Point2, double>> pts;
    for (const auto& e : r.assignment.entries()) {
      if (e.center == x) pts.push_back({inst.block(e.block).location, static_cast<double>(e.persons)});
    }
    const Point2 want = oracle::naive_centroid(pts);
    CHECK(moved.centers[static_cast<std::size_t>(x)].x == doctest::Approx(want.x).epsilon(1e-12));
    CHECK(moved.centers[static_cast<std::size_t>(x)].y == doctest::Approx(want.y).epsilon(1e-12));
  }
  CHECK(moved.capacities == centers.capacities);
}

TEST_CASE("unit square corners split into two pairs") {
  const Instance inst = corners();
  const auto policy = ScaledCostPolicy::for_instance(inst);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    const auto r = lloyd::run(inst, lloyd::Config{seed, 300, std::nullopt}, policy);
    CHECK(r.trace.converged);
    CHECK(r.cost == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.assignment.assignment.center_totals(2) == std::vector<std::int64_t>{2, 2});
    check_monotone(r.trace);
  }
}

TEST_CASE("traces are monotone and runs reproducible") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = synthetic::clustered(3000, 60000, 4 + static_cast<int>(seed) * 3, seed);
    const auto policy = ScaledCostPolicy::for_instance(inst);
    const auto a = lloyd::run(inst, lloyd::Config{seed, 300, std::nullopt}, policy);
    CHECK(a.trace.converged);
    check_monotone(a.trace);
    a.assignment.assignment.validate(a.instance, a.centers);
    CHECK(verify_power_consistency(a.instance, a.centers, a.assignment.assignment, a.assignment.weights,
                                   policy.rounding_tolerance()).consistent());
    CHECK(a.cost == doctest::Approx(assignment_cost(a.instance, a.centers, a.assignment.assignment)).epsilon(1e-9));
    const auto b = lloyd::run(inst, lloyd::Config{seed, 300, std::nullopt}, policy);
    CHECK(a.centers.centers == b.centers.centers);
    CHECK(a.assignment.assignment == b.assignment.assignment);
  }
}

TEST_CASE("centers end near the centroid of their districts") {
  const Instance inst = synthetic::clustered(2000, 50000, 8, 21);
  const auto policy = ScaledCostPolicy::for_instance(inst);
  const auto r = lloyd::run(inst, {}, policy);
  REQUIRE(r.trace.converged);
  const CenterSet means = lloyd::centroid_step(r.instance, r.centers, r.assignment.assignment);
  for (std::size_t x = 0; x < r.centers.size(); ++x) {
    CHECK(std::sqrt(squared_distance(means.centers[x], r.centers.centers[x])) <= policy.grid_step());
  }
}

TEST_CASE("iteration limit truncates the run") {
  const Instance inst = synthetic::clustered(2000, 50000, 8, 3);
  const auto r = lloyd::run(inst, lloyd::Config{0, 1, std::nullopt}, ScaledCostPolicy::for_instance(inst));
  CHECK_FALSE(r.trace.converged);
  CHECK(r.trace.iterations.size() == 1);
  // The returned centers are the ones the returned assignment was solved for.
  const auto again = min_cost_balanced_assignment(r.instance, r.centers, ScaledCostPolicy::for_instance(inst));
  CHECK(again.scaled_cost == r.assignment.scaled_cost);
  CHECK_THROWS_AS(lloyd::run(inst, lloyd::Config{0, 0, std::nullopt}, ScaledCostPolicy::for_instance(inst)),
                  InputError);
}

TEST_CASE("k equal to one") {
  const Instance inst = synthetic::uniform(100, 5, 1, 2);
  const auto r = lloyd::run(inst, {}, ScaledCostPolicy::for_instance(inst));
  CHECK(r.trace.converged);
  CHECK(r.trace.iterations.size() <= 2);
  CHECK(r.assignment.assignment.center_totals(1).front() == inst.total_population());
}
