#include <doctest.h>

#include <random>

#include "balzer.hpp"
#include "oracle/oracle.hpp"

using namespace powerdist;

TEST_CASE("naive centroid") {
  const std::vector<std::pair<Point2, double>> one{{{2, 3}, 5}};
  CHECK(oracle::naive_centroid(one) == Point2{2, 3});
  const std::vector<std::pair<Point2, double>> two{{{0, 0}, 1}, {{2, 4}, 1}};
  CHECK(oracle::naive_centroid(two) == Point2{1, 2});
  const std::vector<std::pair<Point2, double>> skew{{{0, 0}, 3}, {{4, 0}, 1}};
  CHECK(oracle::naive_centroid(skew) == Point2{1, 0});
  const std::vector<std::pair<Point2, double>> none{{{0, 0}, 0}};
  CHECK_THROWS(oracle::naive_centroid(none));
}

TEST_CASE("brute force balanced assignment") {
  const Instance inst({{"a", {0, 0}, 1}, {"b", {1, 0}, 1}}, 2);
  const auto r = oracle::brute_force_balanced(inst, CenterSet::balanced({{0, 0}, {1, 0}}, 2));
  CHECK(r.cost == 0.0);
  CHECK(r.assignment == BalancedAssignment({{0, 0, 1}, {1, 1, 1}}));

  const auto hex = balzer::hexagon();
  CHECK(oracle::brute_force_balanced(hex.instance, hex.centers).assignment == hex.m_star);

  const Instance big({{"a", {0, 0}, 11}}, 1);
  CHECK_THROWS(oracle::brute_force_balanced(big, CenterSet::balanced({{0, 0}}, 11)));
}

TEST_CASE("brute force transshipment") {
  CHECK(oracle::brute_force_transshipment({{1, 1}, {1, 1}, {0, 10, 0, 3}}) == 3);
  CHECK(oracle::brute_force_transshipment({{2}, {1, 1}, {4, 6}}) == 10);
}

TEST_CASE("swap local search") {
  const auto hex = balzer::hexagon();
  // Stuck at M': every swap costs about 3 more.
  CHECK(oracle::swap_local_search(hex.instance, hex.centers, hex.m_prime) == hex.m_prime);
  const Instance line({{"a", {0, 0}, 1}, {"b", {10, 0}, 1}}, 2);
  const CenterSet c = CenterSet::balanced({{0, 0}, {10, 0}}, 2);
  CHECK(oracle::swap_local_search(line, c, BalancedAssignment({{0, 1, 1}, {1, 0, 1}})) ==
        BalancedAssignment({{0, 0, 1}, {1, 1, 1}}));
}
