#include "powerdist/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/core.h>

namespace powerdist {

double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

Instance::Instance(std::vector<Block> blocks, int k) : blocks_(std::move(blocks)), k_(k) {
  if (k_ < 1) throw InputError(fmt::format("k must be at least 1 (got {})", k_));
  std::unordered_set<std::string_view> ids;
  ids.reserve(blocks_.size());
  for (const Block& b : blocks_) {
    if (b.population < 0) {
      throw InputError(fmt::format("block '{}' has negative population {}", b.id, b.population));
    }
    if (!is_finite(b.location)) {
      throw InputError(fmt::format("block '{}' has a non-finite coordinate", b.id));
    }
    if (!ids.insert(b.id).second) throw InputError(fmt::format("duplicate block id '{}'", b.id));
    if (b.population > std::numeric_limits<std::int64_t>::max() - total_population_) {
      throw InputError("total population overflows a 64-bit integer");
    }
    total_population_ += b.population;
  }
  if (total_population_ < k_) {
    throw InputError(fmt::format("total population {} is smaller than k = {}", total_population_, k_));
  }
}

std::vector<std::int64_t> balanced_capacities(std::int64_t m, int k) {
  if (k < 1) throw InputError(fmt::format("k must be at least 1 (got {})", k));
  if (m < k) throw InputError(fmt::format("population {} is smaller than k = {}", m, k));
  const std::int64_t floor_share = m / k;
  const std::int64_t remainder = m % k;
  // The last `remainder` centers take the ceiling share.
  std::vector<std::int64_t> caps(static_cast<std::size_t>(k), floor_share);
  for (std::int64_t i = k - remainder; i < k; ++i) caps[static_cast<std::size_t>(i)] += 1;
  return caps;
}

CenterSet CenterSet::balanced(std::vector<Point2> centers, std::int64_t m) {
  CenterSet set;
  set.capacities = balanced_capacities(m, static_cast<int>(centers.size()));
  set.centers = std::move(centers);
  return set;
}

BalancedAssignment::BalancedAssignment(std::vector<AssignmentEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const AssignmentEntry& a, const AssignmentEntry& b) {
    return a.block != b.block ? a.block < b.block : a.center < b.center;
  });
  for (const AssignmentEntry& e : entries) {
    if (e.persons < 0) {
      throw InputError(fmt::format("negative flow {} for block #{} -> center {}", e.persons, e.block, e.center));
    }
    if (e.persons == 0) continue;
    if (!entries_.empty() && entries_.back().block == e.block && entries_.back().center == e.center) {
      entries_.back().persons += e.persons;
    } else {
      entries_.push_back(e);
    }
  }
}

std::vector<std::int64_t> BalancedAssignment::center_totals(std::size_t k) const {
  std::vector<std::int64_t> totals(k, 0);
  for (const AssignmentEntry& e : entries_) {
    if (e.center < 0 || static_cast<std::size_t>(e.center) >= k) {
      throw InputError(fmt::format("center index {} out of range [0, {})", e.center, k));
    }
    totals[static_cast<std::size_t>(e.center)] += e.persons;
  }
  return totals;
}

std::vector<std::int64_t> BalancedAssignment::block_totals(std::size_t n) const {
  std::vector<std::int64_t> totals(n, 0);
  for (const AssignmentEntry& e : entries_) {
    if (e.block >= n) throw InputError(fmt::format("block index {} out of range [0, {})", e.block, n));
    totals[e.block] += e.persons;
  }
  return totals;
}

void BalancedAssignment::validate(const Instance& inst, const CenterSet& centers) const {
  if (centers.centers.size() != centers.capacities.size()) {
    throw InputError("center set has mismatched center and capacity counts");
  }
  const auto per_block = block_totals(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (per_block[i] != inst.block(i).population) {
      throw InputError(fmt::format("block '{}' assigns {} of {} residents", inst.block(i).id,
                                   per_block[i], inst.block(i).population));
    }
  }
  const auto per_center = center_totals(centers.size());
  for (std::size_t x = 0; x < centers.size(); ++x) {
    if (per_center[x] != centers.capacities[x]) {
      throw InputError(fmt::format("center {} receives {} residents, capacity is {}", x,
                                   per_center[x], centers.capacities[x]));
    }
  }
}

double assignment_cost(const Instance& inst, const CenterSet& centers, const BalancedAssignment& asg) {
  asg.validate(inst, centers);
  double cost = 0.0;
  for (const AssignmentEntry& e : asg.entries()) {
    cost += static_cast<double>(e.persons) *
            squared_distance(inst.block(e.block).location, centers.centers[static_cast<std::size_t>(e.center)]);
  }
  return cost;
}

double BoundingBox::diameter() const { return std::hypot(width(), height()); }

BoundingBox BoundingBox::of(std::span<const Point2> points) {
  if (points.empty()) return {};
  BoundingBox box{points.front(), points.front()};
  for (const Point2& p : points) {
    box.min.x = std::min(box.min.x, p.x);
    box.min.y = std::min(box.min.y, p.y);
    box.max.x = std::max(box.max.x, p.x);
    box.max.y = std::max(box.max.y, p.y);
  }
  return box;
}

BoundingBox BoundingBox::of(const Instance& inst) {
  std::vector<Point2> pts;
  pts.reserve(inst.size());
  for (const Block& b : inst.blocks()) pts.push_back(b.location);
  return of(pts);
}

}  // namespace powerdist
