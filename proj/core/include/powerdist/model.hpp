#pragma once

// Domain types shared by every stage of the districting pipeline: weighted
// population points, center sets with balanced capacities, integral
// balanced assignments, power weights and per-run traces.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace powerdist {

/// Raised when caller-supplied data violates a documented precondition
/// (malformed input, unbalanced totals, impossible seeding, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A location in projected planar units.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// (a.x - b.x)^2 + (a.y - b.y)^2.
double squared_distance(Point2 a, Point2 b);

bool is_finite(Point2 p);

/// A census block reduced to its centroid and resident count.
struct Block {
  std::string id;
  Point2 location;
  std::int64_t population = 0;
};

/// Blocks plus the requested number of districts.
///
/// Construction validates: k >= 1, populations >= 0, finite locations,
/// unique ids, and total population m >= k.
class Instance {
 public:
  Instance(std::vector<Block> blocks, int k);

  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_[i]; }
  std::size_t size() const { return blocks_.size(); }
  int k() const { return k_; }
  std::int64_t total_population() const { return total_population_; }

 private:
  std::vector<Block> blocks_;
  int k_ = 1;
  std::int64_t total_population_ = 0;
};

/// floor(m/k) for the first i centers and ceil(m/k) for the remaining k-i,
/// where i makes the entries sum to m. Throws InputError if m < k or k < 1.
std::vector<std::int64_t> balanced_capacities(std::int64_t m, int k);

/// Ordered centers with their per-center resident quota.
struct CenterSet {
  std::vector<Point2> centers;
  std::vector<std::int64_t> capacities;

  std::size_t size() const { return centers.size(); }

  /// Centers paired with balanced_capacities(m, centers.size()).
  static CenterSet balanced(std::vector<Point2> centers, std::int64_t m);
};

/// `persons` residents of block `block` are assigned to center `center`.
struct AssignmentEntry {
  std::size_t block = 0;
  int center = 0;
  std::int64_t persons = 0;

  friend bool operator==(const AssignmentEntry&, const AssignmentEntry&) = default;
};

/// Sparse block-to-center resident counts. Entries are kept sorted by
/// (block, center) with strictly positive counts; a block whose residents
/// go to several centers appears once per center.
class BalancedAssignment {
 public:
  BalancedAssignment() = default;
  explicit BalancedAssignment(std::vector<AssignmentEntry> entries);

  const std::vector<AssignmentEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<std::int64_t> center_totals(std::size_t k) const;
  std::vector<std::int64_t> block_totals(std::size_t n) const;

  /// Throws InputError unless every block total equals its population and
  /// every center total equals its capacity.
  void validate(const Instance& inst, const CenterSet& centers) const;

  friend bool operator==(const BalancedAssignment&, const BalancedAssignment&) = default;

 private:
  std::vector<AssignmentEntry> entries_;
};

/// Power-diagram weights, one per center, in squared planar units.
struct PowerWeights {
  std::vector<double> w;

  std::size_t size() const { return w.size(); }
};

/// Sum over entries of persons * squared distance(block, center).
/// Validates the assignment first.
double assignment_cost(const Instance& inst, const CenterSet& centers,
                       const BalancedAssignment& asg);

struct IterationRecord {
  int iteration = 0;
  double cost = 0.0;              // squared planar units
  std::int64_t scaled_cost = 0;   // exact objective of the assignment step
  double max_displacement = 0.0;  // largest center move in the centroid step
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Axis-aligned bounding box of the given points (empty input gives a
/// degenerate box at the origin).
struct BoundingBox {
  Point2 min;
  Point2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  double diameter() const;

  static BoundingBox of(std::span<const Point2> points);
  static BoundingBox of(const Instance& inst);
};

}  // namespace powerdist
