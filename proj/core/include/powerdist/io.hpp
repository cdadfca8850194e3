#pragma once

// Block CSV ingestion, equirectangular projection, and the result-set
// files written by a solve (and read back by validation).
//
// All files are UTF-8 with LF line endings, '.' as decimal separator and
// no thousands separators. Reals are written in shortest round-trip form.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "powerdist/geometry.hpp"
#include "powerdist/lloyd.hpp"
#include "powerdist/model.hpp"

namespace powerdist::io {

inline constexpr double kEarthRadiusMeters = 6371000.0;

/// Equirectangular projection in meters: x = R lon cos(lat0), y = R lat,
/// angles in radians. Throws InputError unless |lat| < 89 degrees.
Point2 project(double lon_deg, double lat_deg, double reference_lat_deg);

struct ReadOptions {
  int k = 1;
  /// Columns are `block_id,lon,lat,population` and get projected with the
  /// mean input latitude as reference parallel; otherwise
  /// `block_id,x,y,population` in planar units.
  bool lonlat = false;
};

/// Reads a block CSV. Zero-population rows are kept. Malformed rows,
/// duplicate ids, negative populations and non-finite coordinates raise
/// InputError naming the file and line.
Instance read_blocks(const std::filesystem::path& path, const ReadOptions& opts);

struct CenterSummary {
  int index = 0;
  Point2 location;
  double weight = 0.0;
  std::int64_t capacity = 0;
  std::int64_t population = 0;
};

struct RunSummary {
  std::string instance;
  int k = 0;
  std::int64_t m = 0;
  std::uint64_t seed = 0;
  int restarts = 1;
  int iterations = 0;
  double final_cost = 0.0;
  std::int64_t final_scaled_cost = 0;
  bool converged = false;
  double scale = 0.0;
  Point2 origin;
  double diameter = 0.0;
  double grid_step = 0.0;
  double threshold = 0.0;
  std::vector<CenterSummary> centers;
  double wall_time_seconds = 0.0;
};

/// Everything a solve produces, in the engine's planar coordinates.
struct RunRecord {
  Instance instance;
  CenterSet centers;
  PowerWeights weights;
  BalancedAssignment assignment;
  RunTrace trace;
  RunSummary summary;
  std::vector<geometry::ConvexCell> cells;
};

struct RunInfo {
  std::string instance_name;
  int restarts = 1;
  double threshold = 0.0;
  double wall_time_seconds = 0.0;
};

/// Assembles summary and cells (frame: block bounding box grown by 5%).
RunRecord make_record(lloyd::Result result, const ScaledCostPolicy& policy, const RunInfo& info);

/// Writes into `dir` (created if missing):
///   blocks.csv      block_id,x,y,population   (engine coordinates)
///   assignment.csv  block_id,center_index,persons_assigned (one row per positive flow)
///   centers.csv     index,x,y,weight,capacity,population
///   cells.json      [{"center","weight","ring":[[x,y],...] (closed),"clipped"}]
///   summary.json    RunSummary
///   trace.csv       iteration,cost,max_displacement,scaled_cost
///   plotdata/       cell_<i>.dat rings, centers.dat, districts.gp
/// I/O failures raise std::runtime_error naming the path.
void write_outputs(const std::filesystem::path& dir, const RunRecord& record);

/// Reads a result set written by write_outputs. Missing or corrupt files
/// raise InputError or std::runtime_error.
RunRecord read_outputs(const std::filesystem::path& dir);

std::string summary_json(const RunSummary& summary);

}  // namespace powerdist::io
