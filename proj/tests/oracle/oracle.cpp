#include "oracle/oracle.hpp"

#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using powerdist::AssignmentEntry;
using powerdist::BalancedAssignment;
using powerdist::CenterSet;
using powerdist::Instance;
using powerdist::Point2;

namespace {

double d2(Point2 a, Point2 b) { return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y); }

}  // namespace

BruteForceResult brute_force_balanced(const Instance& inst, const CenterSet& centers) {
  if (inst.total_population() > 10 || centers.size() > 3) {
    throw std::invalid_argument("brute_force_balanced: instance exceeds enumeration bound");
  }
  std::vector<std::size_t> person_block;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::int64_t p = 0; p < inst.block(i).population; ++p) person_block.push_back(i);
  }
  const std::size_t k = centers.size();
  std::vector<std::int64_t> room = centers.capacities;
  std::vector<int> choice(person_block.size(), 0);
  std::vector<int> best_choice;
  double best = std::numeric_limits<double>::infinity();

  std::function<void(std::size_t, double)> place = [&](std::size_t person, double partial) {
    if (partial >= best) return;
    if (person == person_block.size()) {
      for (std::int64_t r : room) {
        if (r != 0) return;
      }
      best = partial;
      best_choice = choice;
      return;
    }
    const Point2 where = inst.block(person_block[person]).location;
    for (std::size_t x = 0; x < k; ++x) {
      if (room[x] == 0) continue;
      --room[x];
      choice[person] = static_cast<int>(x);
      place(person + 1, partial + d2(where, centers.centers[x]));
      ++room[x];
    }
  };
  place(0, 0.0);
  if (best_choice.size() != person_block.size()) throw std::invalid_argument("no balanced assignment exists");

  std::vector<AssignmentEntry> entries;
  for (std::size_t p = 0; p < person_block.size(); ++p) entries.push_back({person_block[p], best_choice[p], 1});
  return {BalancedAssignment(std::move(entries)), best};
}

std::int64_t brute_force_transshipment(const powerdist::flow::TransshipmentInstance& inst) {
  const std::size_t n = inst.num_supplies();
  const std::size_t k = inst.num_demands();
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();
  std::map<std::pair<std::size_t, std::vector<std::int64_t>>, std::int64_t> memo;

  std::function<std::int64_t(std::size_t, std::vector<std::int64_t>&)> solve =
      [&](std::size_t y, std::vector<std::int64_t>& room) -> std::int64_t {
    if (y == n) {
      for (std::int64_t r : room) {
        if (r != 0) return kNone;
      }
      return 0;
    }
    const auto key = std::make_pair(y, room);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::int64_t best = kNone;
    // Every split of supply y over the demand nodes that fits the room left.
    std::function<void(std::size_t, std::int64_t, std::int64_t)> split = [&](std::size_t x, std::int64_t left,
                                                                               std::int64_t cost) {
      if (x == k) {
        if (left != 0) return;
        const std::int64_t rest = solve(y + 1, room);
        if (rest != kNone) best = std::min(best, cost + rest);
        return;
      }
      for (std::int64_t a = 0; a <= std::min(left, room[x]); ++a) {
        room[x] -= a;
        split(x + 1, left - a, cost + a * inst.cost(y, x));
        room[x] += a;
      }
    };
    split(0, inst.supplies[y], 0);
    memo.emplace(key, best);
    return best;
  };
  std::vector<std::int64_t> room = inst.demands;
  return solve(0, room);
}

Point2 naive_centroid(std::span<const std::pair<Point2, double>> weighted_points) {
  double sx = 0.0, sy = 0.0, total = 0.0;
  for (const auto& [p, w] : weighted_points) {
    sx += w * p.x;
    sy += w * p.y;
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("naive_centroid: zero total weight");
  return {sx / total, sy / total};
}

BalancedAssignment swap_local_search(const Instance& inst, const CenterSet& centers, BalancedAssignment start) {
  std::vector<int> center_of(inst.size(), -1);
  for (const AssignmentEntry& e : start.entries()) {
    if (inst.block(e.block).population != 1) throw std::invalid_argument("swap_local_search: unit blocks only");
    center_of[e.block] = e.center;
  }
  auto cost = [&](std::size_t y, int x) { return d2(inst.block(y).location, centers.centers[static_cast<std::size_t>(x)]); };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < inst.size() && !improved; ++a) {
      for (std::size_t b = a + 1; b < inst.size() && !improved; ++b) {
        const int xa = center_of[a];
        const int xb = center_of[b];
        if (xa < 0 || xb < 0 || xa == xb) continue;
        if (cost(a, xb) + cost(b, xa) < cost(a, xa) + cost(b, xb)) {
          std::swap(center_of[a], center_of[b]);
          improved = true;
        }
      }
    }
  }
  std::vector<AssignmentEntry> entries;
  for (std::size_t y = 0; y < inst.size(); ++y) {
    if (center_of[y] >= 0) entries.push_back({y, center_of[y], 1});
  }
  return BalancedAssignment(std::move(entries));
}

}  // namespace oracle
