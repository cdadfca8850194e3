#pragma once

// The hexagon counter-example to swap-based balanced assignment. Centers
// A, B, C sit on the even vertices of a unit hexagon and residents X, Y, Z
// near the odd ones. M* pairs each center with one neighbour, M' with the
// other; the perturbation eps makes M* edges squared length 1 - eps + eps^2/3
// and M' edges 1 + eps + eps^2/3.

#include <cmath>
#include <vector>

#include "powerdist/model.hpp"

namespace balzer {

struct Hexagon {
  powerdist::Instance instance;  // blocks X, Y, Z (indices 0, 1, 2), one resident each
  powerdist::CenterSet centers;  // A, B, C (indices 0, 1, 2), capacity 1
  powerdist::BalancedAssignment m_star;
  powerdist::BalancedAssignment m_prime;
};

inline powerdist::Point2 vertex(int t) {
  const double a = 3.14159265358979323846 / 3.0 * t;
  return {std::cos(a), std::sin(a)};
}

inline Hexagon hexagon(double eps = 0.01) {
  using powerdist::Point2;
  const Point2 a = vertex(0), b = vertex(2), c = vertex(4);
  auto shifted = [eps](Point2 v, Point2 from, Point2 to) {
    return Point2{v.x + eps * (to.x - from.x) / 3.0, v.y + eps * (to.y - from.y) / 3.0};
  };
  std::vector<powerdist::Block> blocks{{"X", shifted(vertex(5), c, a), 1},
                                       {"Y", shifted(vertex(1), a, b), 1},
                                       {"Z", shifted(vertex(3), b, c), 1}};
  return Hexagon{powerdist::Instance(std::move(blocks), 3),
                 powerdist::CenterSet{{a, b, c}, {1, 1, 1}},
                 powerdist::BalancedAssignment({{0, 0, 1}, {1, 1, 1}, {2, 2, 1}}),
                 powerdist::BalancedAssignment({{0, 2, 1}, {1, 0, 1}, {2, 1, 1}})};
}

}  // namespace balzer
