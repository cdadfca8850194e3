#include "powerdist/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/core.h>

namespace powerdist::geometry {
namespace {

constexpr double kRelativeEps = 1e-12;

struct Ring {
  std::vector<Point2> vertices;
  std::vector<int> sources;
};

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }

// Sutherland-Hodgman against one half-plane; the new side along the clip
// line is labelled `label`.
Ring clip(const Ring& ring, const HalfPlane& hp, int label, double scale) {
  if (hp.kind == HalfPlane::Kind::kAll) return ring;
  if (hp.kind == HalfPlane::Kind::kNone) return {};
  const std::size_t n = ring.vertices.size();
  const double eps = kRelativeEps * (std::hypot(hp.normal.x, hp.normal.y) * scale + std::abs(hp.offset));
  std::vector<double> side(n);
  bool any_outside = false;
  for (std::size_t i = 0; i < n; ++i) {
    side[i] = dot(hp.normal, ring.vertices[i]) - hp.offset;
    any_outside = any_outside || side[i] > eps;
  }
  if (!any_outside) return ring;

  Ring out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const bool cur_in = side[i] <= eps;
    const bool next_in = side[next] <= eps;
    const Point2 a = ring.vertices[i];
    const Point2 b = ring.vertices[next];
    auto crossing = [&] {
      const double t = side[i] / (side[i] - side[next]);
      return Point2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    };
    if (cur_in) {
      out.vertices.push_back(a);
      out.sources.push_back(ring.sources[i]);
      if (!next_in) {
        out.vertices.push_back(crossing());
        out.sources.push_back(label);
      }
    } else if (next_in) {
      out.vertices.push_back(crossing());
      out.sources.push_back(ring.sources[i]);
    }
  }
  return out;
}

// Drops zero-length sides; a ring with fewer than three vertices is empty.
void remove_short_sides(Ring& ring, double scale) {
  const double min_len = kRelativeEps * scale;
  bool changed = true;
  while (changed && ring.vertices.size() >= 3) {
    changed = false;
    const std::size_t n = ring.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = ring.vertices[i];
      const Point2 b = ring.vertices[(i + 1) % n];
      if (std::hypot(b.x - a.x, b.y - a.y) <= min_len) {
        ring.vertices.erase(ring.vertices.begin() + static_cast<std::ptrdiff_t>(i));
        ring.sources.erase(ring.sources.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (ring.vertices.size() < 3) ring = {};
}

double signed_area(std::span<const Point2> v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % v.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

}  // namespace

double Frame::diameter() const { return std::hypot(max.x - min.x, max.y - min.y); }

Frame Frame::around(std::span<const Point2> points, double margin) {
  const BoundingBox box = BoundingBox::of(points);
  const double diameter = box.diameter();
  const double fallback = diameter > 0.0 ? margin * diameter : 1.0;
  const double gx = box.width() > 0.0 ? margin * box.width() : fallback;
  const double gy = box.height() > 0.0 ? margin * box.height() : fallback;
  return Frame{{box.min.x - gx, box.min.y - gy}, {box.max.x + gx, box.max.y + gy}};
}

Frame Frame::around(const Instance& inst, double margin) {
  std::vector<Point2> pts;
  pts.reserve(inst.size());
  for (const Block& b : inst.blocks()) pts.push_back(b.location);
  return around(pts, margin);
}

bool HalfPlane::contains(Point2 p, double tolerance) const {
  switch (kind) {
    case Kind::kAll:
      return true;
    case Kind::kNone:
      return false;
    case Kind::kRegular:
      break;
  }
  return dot(normal, p) <= offset + tolerance;
}

HalfPlane bisector_halfplane(Point2 center_i, double weight_i, int i, Point2 center_j, double weight_j, int j) {
  if (i == j) throw InputError(fmt::format("bisector of center {} with itself", i));
  HalfPlane hp;
  hp.normal = {2.0 * (center_j.x - center_i.x), 2.0 * (center_j.y - center_i.y)};
  hp.offset = dot(center_j, center_j) - dot(center_i, center_i) - weight_j + weight_i;
  if (hp.normal.x == 0.0 && hp.normal.y == 0.0) {
    // 0 <= w_i - w_j: the whole plane or nothing.
    if (weight_i != weight_j) {
      hp.kind = weight_i > weight_j ? HalfPlane::Kind::kAll : HalfPlane::Kind::kNone;
    } else {
      hp.kind = i < j ? HalfPlane::Kind::kAll : HalfPlane::Kind::kNone;
    }
  }
  return hp;
}

double ConvexCell::area() const { return vertices.size() < 3 ? 0.0 : signed_area(vertices); }

std::vector<ConvexCell> compute_cells(const CenterSet& centers, const PowerWeights& weights, const Frame& frame) {
  const std::size_t k = centers.size();
  if (weights.size() != k) throw InputError(fmt::format("{} weights supplied for {} centers", weights.size(), k));
  // Work relative to the frame middle so bisector offsets stay well scaled.
  const Point2 mid{0.5 * (frame.min.x + frame.max.x), 0.5 * (frame.min.y + frame.max.y)};
  const double scale = std::max(frame.diameter(), 1e-300);
  std::vector<Point2> local(k);
  for (std::size_t x = 0; x < k; ++x) local[x] = {centers.centers[x].x - mid.x, centers.centers[x].y - mid.y};

  const Ring box{{{frame.min.x - mid.x, frame.min.y - mid.y},
                  {frame.max.x - mid.x, frame.min.y - mid.y},
                  {frame.max.x - mid.x, frame.max.y - mid.y},
                  {frame.min.x - mid.x, frame.max.y - mid.y}},
                 {kFrameEdge, kFrameEdge, kFrameEdge, kFrameEdge}};

  std::vector<ConvexCell> cells(k);
  for (std::size_t i = 0; i < k; ++i) {
    Ring ring = box;
    for (std::size_t j = 0; j < k && !ring.vertices.empty(); ++j) {
      if (j == i) continue;
      const HalfPlane hp = bisector_halfplane(local[i], weights.w[i], static_cast<int>(i), local[j], weights.w[j],
                                              static_cast<int>(j));
      ring = clip(ring, hp, static_cast<int>(j), scale);
      remove_short_sides(ring, scale);
    }
    ConvexCell& cell = cells[i];
    cell.center = static_cast<int>(i);
    if (ring.vertices.size() >= 3 && signed_area(ring.vertices) > 0.0) {
      for (const Point2& v : ring.vertices) cell.vertices.push_back({v.x + mid.x, v.y + mid.y});
      cell.edge_sources = std::move(ring.sources);
      cell.clipped = std::find(cell.edge_sources.begin(), cell.edge_sources.end(), kFrameEdge) !=
                     cell.edge_sources.end();
    }
  }
  return cells;
}

DiagramStats diagram_stats(std::span<const ConvexCell> cells) {
  DiagramStats stats;
  stats.internal_sides.assign(cells.size(), 0);
  std::set<std::pair<int, int>> pairs;
  long total = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const ConvexCell& cell = cells[c];
    if (cell.empty()) continue;
    ++stats.nonempty_cells;
    for (int source : cell.edge_sources) {
      if (source == kFrameEdge) continue;
      ++stats.internal_sides[c];
      pairs.emplace(std::min(cell.center, source), std::max(cell.center, source));
    }
    total += stats.internal_sides[c];
  }
  stats.adjacency.assign(pairs.begin(), pairs.end());
  stats.average_sides = stats.nonempty_cells > 0 ? static_cast<double>(total) / stats.nonempty_cells : 0.0;
  return stats;
}

bool point_in_cell(Point2 p, int cell, const CenterSet& centers, const PowerWeights& weights, double tolerance) {
  const auto i = static_cast<std::size_t>(cell);
  if (cell < 0 || i >= centers.size() || weights.size() != centers.size()) {
    throw InputError(fmt::format("cell index {} out of range", cell));
  }
  const double own = squared_distance(p, centers.centers[i]) - weights.w[i];
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (j == i) continue;
    if (own > squared_distance(p, centers.centers[j]) - weights.w[j] + tolerance) return false;
  }
  return true;
}

}  // namespace powerdist::geometry
