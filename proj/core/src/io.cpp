#include "powerdist/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include <fmt/core.h>
#include <json.hpp>

namespace powerdist::io {
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

class CsvReader {
 public:
  explicit CsvReader(const fs::path& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw InputError(fmt::format("{}: cannot open file", path.string()));
  }

  // Next non-blank record, or false at end of file.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (trim(line).empty()) continue;
      fields = split(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(fmt::format("{}:{}: {}", path_.string(), line_, message));
  }

  std::size_t line() const { return line_; }

  void expect_header(const std::vector<std::string>& expected) {
    std::vector<std::string> fields;
    if (!next(fields)) fail("file is empty, expected a header row");
    if (fields != expected) {
      std::string want;
      for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
      fail(fmt::format("unexpected header, expected '{}'", want));
    }
  }

  double real(const std::string& field, std::string_view what) const {
    double value = 0.0;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(fmt::format("malformed {} '{}'", what, field));
    if (!std::isfinite(value)) fail(fmt::format("non-finite {} '{}'", what, field));
    return value;
  }

  std::int64_t integer(const std::string& field, std::string_view what) const {
    std::int64_t value = 0;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(fmt::format("malformed {} '{}'", what, field));
    return value;
  }

 private:
  std::vector<std::string> split(std::string_view line) const {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          current += c;
        }
      } else if (c == '"' && trim(current).empty()) {
        quoted = true;
        was_quoted = true;
        current.clear();
      } else if (c == ',') {
        fields.emplace_back(was_quoted ? current : std::string(trim(current)));
        current.clear();
        was_quoted = false;
      } else {
        current += c;
      }
    }
    if (quoted) fail("unterminated quoted field");
    fields.emplace_back(was_quoted ? current : std::string(trim(current)));
    return fields;
  }

  fs::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path.string()));
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("{}: cannot open file", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ordered_json summary_to_json(const RunSummary& s) {
  ordered_json centers = ordered_json::array();
  for (const CenterSummary& c : s.centers) {
    centers.push_back({{"index", c.index},
                       {"x", c.location.x},
                       {"y", c.location.y},
                       {"weight", c.weight},
                       {"capacity", c.capacity},
                       {"population", c.population}});
  }
  return ordered_json{{"instance", s.instance},
                      {"k", s.k},
                      {"m", s.m},
                      {"seed", s.seed},
                      {"restarts", s.restarts},
                      {"iterations", s.iterations},
                      {"final_cost", s.final_cost},
                      {"final_scaled_cost", s.final_scaled_cost},
                      {"converged", s.converged},
                      {"scale", s.scale},
                      {"origin", {s.origin.x, s.origin.y}},
                      {"diameter", s.diameter},
                      {"grid_step", s.grid_step},
                      {"threshold", s.threshold},
                      {"centers", centers},
                      {"wall_time_seconds", s.wall_time_seconds}};
}

RunSummary summary_from_json(const ordered_json& j) {
  RunSummary s;
  s.instance = j.at("instance").get<std::string>();
  s.k = j.at("k").get<int>();
  s.m = j.at("m").get<std::int64_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.restarts = j.at("restarts").get<int>();
  s.iterations = j.at("iterations").get<int>();
  s.final_cost = j.at("final_cost").get<double>();
  s.final_scaled_cost = j.at("final_scaled_cost").get<std::int64_t>();
  s.converged = j.at("converged").get<bool>();
  s.scale = j.at("scale").get<double>();
  s.origin = {j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
  s.diameter = j.at("diameter").get<double>();
  s.grid_step = j.at("grid_step").get<double>();
  s.threshold = j.at("threshold").get<double>();
  for (const auto& c : j.at("centers")) {
    s.centers.push_back({c.at("index").get<int>(),
                         {c.at("x").get<double>(), c.at("y").get<double>()},
                         c.at("weight").get<double>(),
                         c.at("capacity").get<std::int64_t>(),
                         c.at("population").get<std::int64_t>()});
  }
  s.wall_time_seconds = j.at("wall_time_seconds").get<double>();
  return s;
}

}  // namespace

Point2 project(double lon_deg, double lat_deg, double reference_lat_deg) {
  if (!(std::abs(lat_deg) < 89.0) || !(std::abs(reference_lat_deg) < 89.0)) {
    throw InputError(fmt::format("latitude {} outside the projectable range (|lat| < 89)", lat_deg));
  }
  if (!std::isfinite(lon_deg)) throw InputError("non-finite longitude");
  constexpr double kRad = std::numbers::pi / 180.0;
  return {kEarthRadiusMeters * lon_deg * kRad * std::cos(reference_lat_deg * kRad), kEarthRadiusMeters * lat_deg * kRad};
}

Instance read_blocks(const fs::path& path, const ReadOptions& opts) {
  CsvReader reader(path);
  reader.expect_header(opts.lonlat ? std::vector<std::string>{"block_id", "lon", "lat", "population"}
                                   : std::vector<std::string>{"block_id", "x", "y", "population"});
  std::vector<Block> blocks;
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    if (fields.size() != 4) reader.fail(fmt::format("expected 4 fields, found {}", fields.size()));
    if (fields[0].empty()) reader.fail("empty block_id");
    if (auto [it, fresh] = seen.emplace(fields[0], reader.line()); !fresh) {
      reader.fail(fmt::format("duplicate block_id '{}' (first seen on line {})", fields[0], it->second));
    }
    Block b;
    b.id = fields[0];
    b.location = {reader.real(fields[1], opts.lonlat ? "longitude" : "x"),
                  reader.real(fields[2], opts.lonlat ? "latitude" : "y")};
    b.population = reader.integer(fields[3], "population");
    if (b.population < 0) reader.fail(fmt::format("negative population {} for block '{}'", b.population, b.id));
    if (opts.lonlat && !(std::abs(b.location.y) < 89.0)) {
      reader.fail(fmt::format("latitude {} outside the projectable range (|lat| < 89)", b.location.y));
    }
    blocks.push_back(std::move(b));
  }
  if (blocks.empty()) throw InputError(fmt::format("{}: no block rows", path.string()));

  if (opts.lonlat) {
    double lat_sum = 0.0;
    for (const Block& b : blocks) lat_sum += b.location.y;
    const double reference = lat_sum / static_cast<double>(blocks.size());
    for (Block& b : blocks) b.location = project(b.location.x, b.location.y, reference);
  }
  try {
    return Instance(std::move(blocks), opts.k);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

RunRecord make_record(lloyd::Result result, const ScaledCostPolicy& policy, const RunInfo& info) {
  const std::vector<std::int64_t> populations = result.assignment.assignment.center_totals(result.centers.size());
  RunSummary summary;
  summary.instance = info.instance_name;
  summary.k = result.instance.k();
  summary.m = result.instance.total_population();
  summary.seed = result.trace.seed;
  summary.restarts = info.restarts;
  summary.iterations = static_cast<int>(result.trace.iterations.size());
  summary.final_cost = result.cost;
  summary.final_scaled_cost = result.assignment.scaled_cost;
  summary.converged = result.trace.converged;
  summary.scale = policy.scale();
  summary.origin = policy.origin();
  summary.diameter = policy.diameter();
  summary.grid_step = policy.grid_step();
  summary.threshold = info.threshold;
  summary.wall_time_seconds = info.wall_time_seconds;
  for (std::size_t x = 0; x < result.centers.size(); ++x) {
    summary.centers.push_back({static_cast<int>(x), result.centers.centers[x], result.assignment.weights.w[x],
                               result.centers.capacities[x], populations[x]});
  }
  auto cells = geometry::compute_cells(result.centers, result.assignment.weights,
                                       geometry::Frame::around(result.instance));
  return RunRecord{std::move(result.instance),
                   std::move(result.centers),
                   std::move(result.assignment.weights),
                   std::move(result.assignment.assignment),
                   std::move(result.trace),
                   std::move(summary),
                   std::move(cells)};
}

std::string summary_json(const RunSummary& summary) { return summary_to_json(summary).dump(2) + "\n"; }

void write_outputs(const fs::path& dir, const RunRecord& record) {
  std::error_code ec;
  fs::create_directories(dir / "plotdata", ec);
  if (ec) throw std::runtime_error(fmt::format("{}: cannot create directory: {}", dir.string(), ec.message()));

  std::string out = "block_id,x,y,population\n";
  for (const Block& b : record.instance.blocks()) {
    out += fmt::format("{},{},{},{}\n", csv_field(b.id), b.location.x, b.location.y, b.population);
  }
  write_file(dir / "blocks.csv", out);

  out = "block_id,center_index,persons_assigned\n";
  for (const AssignmentEntry& e : record.assignment.entries()) {
    out += fmt::format("{},{},{}\n", csv_field(record.instance.block(e.block).id), e.center, e.persons);
  }
  write_file(dir / "assignment.csv", out);

  const std::size_t k = record.centers.size();
  if (record.weights.size() != k) throw InputError(fmt::format("{} weights for {} centers", record.weights.size(), k));
  const std::vector<std::int64_t> populations = record.assignment.center_totals(k);
  out = "index,x,y,weight,capacity,population\n";
  for (std::size_t x = 0; x < k; ++x) {
    const Point2 c = record.centers.centers[x];
    out += fmt::format("{},{},{},{},{},{}\n", x, c.x, c.y, record.weights.w[x], record.centers.capacities[x],
                       populations[x]);
  }
  write_file(dir / "centers.csv", out);

  ordered_json cells = ordered_json::array();
  for (const geometry::ConvexCell& cell : record.cells) {
    ordered_json ring = ordered_json::array();
    for (const Point2& v : cell.vertices) ring.push_back({v.x, v.y});
    if (!cell.vertices.empty()) ring.push_back({cell.vertices.front().x, cell.vertices.front().y});
    cells.push_back({{"center", cell.center},
                     {"weight", record.weights.w[static_cast<std::size_t>(cell.center)]},
                     {"ring", ring},
                     {"clipped", cell.clipped}});
  }
  write_file(dir / "cells.json", cells.dump(2) + "\n");

  write_file(dir / "summary.json", summary_json(record.summary));

  out = "iteration,cost,max_displacement,scaled_cost\n";
  for (const IterationRecord& r : record.trace.iterations) {
    out += fmt::format("{},{},{},{}\n", r.iteration, r.cost, r.max_displacement, r.scaled_cost);
  }
  write_file(dir / "trace.csv", out);

  std::string centers_dat;
  std::string script = "set size ratio -1\nunset key\nplot \\\n";
  for (const geometry::ConvexCell& cell : record.cells) {
    out.clear();
    for (const Point2& v : cell.vertices) out += fmt::format("{} {}\n", v.x, v.y);
    if (!cell.vertices.empty()) out += fmt::format("{} {}\n", cell.vertices.front().x, cell.vertices.front().y);
    const std::string name = fmt::format("cell_{}.dat", cell.center);
    write_file(dir / "plotdata" / name, out);
    script += fmt::format("  '{}' with lines lc rgb 'black', \\\n", name);
  }
  for (std::size_t x = 0; x < k; ++x) {
    centers_dat += fmt::format("{} {} {}\n", record.centers.centers[x].x, record.centers.centers[x].y, x);
  }
  write_file(dir / "plotdata" / "centers.dat", centers_dat);
  script += "  'centers.dat' using 1:2 with points pt 7 lc rgb 'red'\n";
  write_file(dir / "plotdata" / "districts.gp", script);
}

RunRecord read_outputs(const fs::path& dir) {
  RunSummary summary;
  try {
    summary = summary_from_json(ordered_json::parse(read_file(dir / "summary.json")));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: corrupt summary: {}", (dir / "summary.json").string(), e.what()));
  }
  Instance instance = read_blocks(dir / "blocks.csv", ReadOptions{summary.k, false});
  std::unordered_map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < instance.size(); ++i) index_of.emplace(instance.block(i).id, i);

  CenterSet centers;
  PowerWeights weights;
  {
    CsvReader reader(dir / "centers.csv");
    reader.expect_header({"index", "x", "y", "weight", "capacity", "population"});
    std::vector<std::string> f;
    while (reader.next(f)) {
      if (f.size() != 6) reader.fail("expected 6 fields");
      if (reader.integer(f[0], "index") != static_cast<std::int64_t>(centers.size())) reader.fail("centers out of order");
      centers.centers.push_back({reader.real(f[1], "x"), reader.real(f[2], "y")});
      weights.w.push_back(reader.real(f[3], "weight"));
      centers.capacities.push_back(reader.integer(f[4], "capacity"));
    }
    if (static_cast<int>(centers.size()) != summary.k) {
      throw InputError(fmt::format("{}: {} centers listed, summary says k = {}", (dir / "centers.csv").string(),
                                   centers.size(), summary.k));
    }
  }

  std::vector<AssignmentEntry> entries;
  {
    CsvReader reader(dir / "assignment.csv");
    reader.expect_header({"block_id", "center_index", "persons_assigned"});
    std::vector<std::string> f;
    while (reader.next(f)) {
      if (f.size() != 3) reader.fail("expected 3 fields");
      const auto it = index_of.find(f[0]);
      if (it == index_of.end()) reader.fail(fmt::format("unknown block_id '{}'", f[0]));
      const std::int64_t center = reader.integer(f[1], "center_index");
      if (center < 0 || center >= summary.k) reader.fail(fmt::format("center_index {} out of range", center));
      const std::int64_t persons = reader.integer(f[2], "persons_assigned");
      if (persons <= 0) reader.fail("persons_assigned must be positive");
      entries.push_back({it->second, static_cast<int>(center), persons});
    }
  }

  RunTrace trace;
  trace.seed = summary.seed;
  trace.converged = summary.converged;
  {
    CsvReader reader(dir / "trace.csv");
    reader.expect_header({"iteration", "cost", "max_displacement", "scaled_cost"});
    std::vector<std::string> f;
    while (reader.next(f)) {
      if (f.size() != 4) reader.fail("expected 4 fields");
      trace.iterations.push_back({static_cast<int>(reader.integer(f[0], "iteration")), reader.real(f[1], "cost"),
                                  reader.integer(f[3], "scaled_cost"), reader.real(f[2], "max_displacement")});
    }
  }

  std::vector<geometry::ConvexCell> cells;
  try {
    const auto j = ordered_json::parse(read_file(dir / "cells.json"));
    for (const auto& c : j) {
      geometry::ConvexCell cell;
      cell.center = c.at("center").get<int>();
      cell.clipped = c.at("clipped").get<bool>();
      for (const auto& v : c.at("ring")) cell.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      if (cell.vertices.size() > 1 && cell.vertices.front() == cell.vertices.back()) cell.vertices.pop_back();
      cells.push_back(std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: corrupt cells: {}", (dir / "cells.json").string(), e.what()));
  }

  return RunRecord{std::move(instance), std::move(centers), std::move(weights), BalancedAssignment(std::move(entries)),
                   std::move(trace), std::move(summary), std::move(cells)};
}

}  // namespace powerdist::io
