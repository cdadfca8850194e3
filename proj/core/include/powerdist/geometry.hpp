#pragma once

// Power-diagram cells clipped to a rectangular frame, their adjacency and
// side counts, and point membership tests.

#include <span>
#include <utility>
#include <vector>

#include "powerdist/model.hpp"

namespace powerdist::geometry {

/// Edge label for sides that lie on the frame rather than on a bisector.
inline constexpr int kFrameEdge = -1;

struct Frame {
  Point2 min;
  Point2 max;

  double diameter() const;

  /// Bounding box of the points, grown by `margin` of its width and height
  /// on every side (degenerate extents grow by `margin` of the diameter, or
  /// by 1 when all points coincide).
  static Frame around(std::span<const Point2> points, double margin = 0.05);
  static Frame around(const Instance& inst, double margin = 0.05);
};

/// Points p with normal . p <= offset. `all` / `none` mark the degenerate
/// bisector of coincident centers.
struct HalfPlane {
  enum class Kind { kRegular, kAll, kNone };

  Point2 normal;
  double offset = 0.0;
  Kind kind = Kind::kRegular;

  bool contains(Point2 p, double tolerance = 0.0) const;
};

/// Points weighted-closer to center i than to center j:
///   2 (x_j - x_i) . p <= |x_j|^2 - |x_i|^2 - w_j + w_i.
/// Coincident centers: the lower weight loses everything; equal weights go
/// to the lower index. Throws InputError when i == j.
HalfPlane bisector_halfplane(Point2 center_i, double weight_i, int i, Point2 center_j, double weight_j, int j);

struct ConvexCell {
  int center = 0;
  /// Counterclockwise ring, first vertex not repeated. Empty for an empty cell.
  std::vector<Point2> vertices;
  /// edge_sources[e] labels the side from vertices[e] to vertices[e + 1]:
  /// the neighbouring center index, or kFrameEdge.
  std::vector<int> edge_sources;
  bool clipped = false;

  bool empty() const { return vertices.size() < 3; }
  double area() const;
};

/// Cell i is the frame intersected with every bisector half-plane (i, j),
/// built by clipping the frame rectangle k - 1 times.
std::vector<ConvexCell> compute_cells(const CenterSet& centers, const PowerWeights& weights, const Frame& frame);

struct DiagramStats {
  std::vector<int> internal_sides;              // per cell, bisector sides only
  std::vector<std::pair<int, int>> adjacency;   // (i, j) with i < j, sorted
  int nonempty_cells = 0;
  double average_sides = 0.0;                   // over nonempty cells
};

DiagramStats diagram_stats(std::span<const ConvexCell> cells);

/// d2(p, x_i) - w_i <= d2(p, x_j) - w_j + tolerance for every j.
bool point_in_cell(Point2 p, int cell, const CenterSet& centers, const PowerWeights& weights,
                   double tolerance);

}  // namespace powerdist::geometry
