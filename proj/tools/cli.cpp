#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "powerdist/geometry.hpp"
#include "powerdist/lloyd.hpp"

namespace powerdist::cli {
namespace fs = std::filesystem;

bool ValidationReport::passed() const {
  for (const Check& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

namespace {

template <typename Fn>
Check guarded(std::string name, Fn&& fn) {
  Check check{std::move(name), false, {}};
  try {
    fn(check);
  } catch (const std::exception& e) {
    check.passed = false;
    check.detail = e.what();
  }
  return check;
}

}  // namespace

ValidationReport validate_record(const io::RunRecord& r) {
  const Instance& inst = r.instance;
  const ScaledCostPolicy policy(r.summary.scale, r.summary.origin, r.summary.diameter);
  ValidationReport report;

  report.checks.push_back(guarded("balance", [&](Check& c) {
    r.assignment.validate(inst, r.centers);
    if (r.centers.capacities != balanced_capacities(inst.total_population(), inst.k())) {
      c.detail = "capacities are not the balanced floor/ceil split";
      return;
    }
    c.passed = true;
    c.detail = fmt::format("{} centers, capacities {}..{}", r.centers.size(), r.centers.capacities.front(),
                           r.centers.capacities.back());
  }));

  report.checks.push_back(guarded("power-consistency", [&](Check& c) {
    const double tol = policy.rounding_tolerance();
    const auto found = verify_power_consistency(inst, r.centers, r.assignment, r.weights, tol);
    c.passed = found.consistent();
    c.detail = c.passed ? fmt::format("all {} positive flows in their power cells (tolerance {:.3g})",
                                      r.assignment.size(), tol)
                        : fmt::format("{} positive flows outside their power cells, first: block '{}' -> {} "
                                      "(center {} closer by {:.6g})",
                                      found.violations.size(), inst.block(found.violations.front().block).id,
                                      found.violations.front().center, found.violations.front().better_center,
                                      found.violations.front().excess);
  }));

  report.checks.push_back(guarded("centroidal", [&](Check& c) {
    const CenterSet means = lloyd::centroid_step(inst, r.centers, r.assignment);
    const double allowed = r.summary.threshold + r.summary.grid_step / std::sqrt(2.0) + 1e-9 * r.summary.diameter;
    double worst = 0.0;
    for (std::size_t x = 0; x < r.centers.size(); ++x) {
      worst = std::max(worst, std::sqrt(squared_distance(means.centers[x], r.centers.centers[x])));
    }
    c.passed = worst <= allowed;
    c.detail = fmt::format("largest center-to-centroid distance {:.6g} (allowed {:.6g})", worst, allowed);
  }));

  report.checks.push_back(guarded("side-count", [&](Check& c) {
    const auto cells = geometry::compute_cells(r.centers, r.weights, geometry::Frame::around(inst));
    const auto stats = geometry::diagram_stats(cells);
    c.passed = stats.nonempty_cells < 3 || stats.average_sides < 6.0;
    c.detail = fmt::format("{} nonempty cells, average internal sides {:.4f}", stats.nonempty_cells,
                           stats.average_sides);
  }));

  report.checks.push_back(guarded("cost", [&](Check& c) {
    const double cost = assignment_cost(inst, r.centers, r.assignment);
    const double rel = std::abs(cost - r.summary.final_cost) / std::max(std::abs(cost), 1e-300);
    c.passed = rel <= 1e-6 || cost == r.summary.final_cost;
    c.detail = fmt::format("recomputed {:.12g}, recorded {:.12g}", cost, r.summary.final_cost);
  }));
  return report;
}

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const auto started = std::chrono::steady_clock::now();
    if (opts.restarts < 1) throw InputError("--restarts must be at least 1");
    if (opts.k < 1) throw InputError("--k must be at least 1");
    if (opts.max_iterations < 1) throw InputError("--max-iters must be at least 1");
    const Instance inst = io::read_blocks(opts.input, io::ReadOptions{opts.k, opts.lonlat});
    const auto policy = ScaledCostPolicy::for_instance(inst, opts.scale);

    std::optional<lloyd::Result> best;
    for (int r = 0; r < opts.restarts; ++r) {
      lloyd::Config cfg;
      cfg.seed = opts.seed + static_cast<std::uint64_t>(r);
      cfg.max_iterations = opts.max_iterations;
      cfg.threshold = opts.threshold;
      lloyd::Result result = lloyd::run(inst, cfg, policy);
      if (!best || result.assignment.scaled_cost < best->assignment.scaled_cost) best = std::move(result);
    }

    io::RunInfo info;
    info.instance_name = opts.input.stem().string();
    info.restarts = opts.restarts;
    info.threshold = opts.threshold.value_or(1e-9 * policy.diameter());
    info.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const bool converged = best->trace.converged;
    const io::RunRecord record = io::make_record(std::move(*best), policy, info);
    io::write_outputs(opts.out, record);

    out << fmt::format("{}: k={} m={} iterations={} cost={:.9g} converged={}\n", record.summary.instance,
                       record.summary.k, record.summary.m, record.summary.iterations, record.summary.final_cost,
                       converged ? "true" : "false");
    if (!converged) err << "warning: no convergence within " << opts.max_iterations << " iterations\n";
    return converged ? kOk : kNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_validate(const fs::path& dir, std::ostream& out, std::ostream& err) {
  std::optional<io::RunRecord> record;
  try {
    record = io::read_outputs(dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  const ValidationReport report = validate_record(*record);
  for (const Check& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  out << (report.passed() ? "valid" : "INVALID") << "\n";
  return report.passed() ? kOk : kValidationFailed;
}

int cmd_stats(const fs::path& dir, std::ostream& out, std::ostream& err) {
  std::optional<io::RunRecord> record;
  try {
    record = io::read_outputs(dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  const auto cells =
      geometry::compute_cells(record->centers, record->weights, geometry::Frame::around(record->instance));
  const auto stats = geometry::diagram_stats(cells);
  out << fmt::format("cells: {} (nonempty {})\n", cells.size(), stats.nonempty_cells);
  out << fmt::format("average internal sides: {:.6f}\n", stats.average_sides);
  out << "internal sides:";
  for (int s : stats.internal_sides) out << ' ' << s;
  out << "\nadjacent pairs: " << stats.adjacency.size() << "\n";
  for (const auto& [a, b] : stats.adjacency) out << "  " << a << " - " << b << "\n";
  out << "k\tm\titerations\n";
  out << fmt::format("{}\t{}\t{}\n", record->summary.k, record->summary.m, record->summary.iterations);
  return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Balanced centroidal power diagrams for districting"};
  app.require_subcommand(1);

  SolveOptions solve;
  double threshold = 0.0;
  auto* solve_cmd = app.add_subcommand("solve", "Compute balanced districts for a block CSV");
  solve_cmd->add_option("--input", solve.input, "Block CSV (block_id,x,y,population)")->required();
  solve_cmd->add_option("--k", solve.k, "Number of districts")->required();
  solve_cmd->add_option("--seed", solve.seed, "Random seed for center seeding")->required();
  solve_cmd->add_option("--restarts", solve.restarts, "Independent seeded runs; the cheapest is kept");
  solve_cmd->add_option("--max-iters", solve.max_iterations, "Iteration limit per run");
  auto* threshold_opt = solve_cmd->add_option("--threshold", threshold, "Convergence displacement, planar units");
  solve_cmd->add_option("--scale", solve.scale, "Integer cost scale for normalized squared distances");
  solve_cmd->add_flag("--lonlat", solve.lonlat, "Input columns are block_id,lon,lat,population (degrees)");
  solve_cmd->add_option("--out", solve.out, "Output directory")->required();

  fs::path dir;
  auto* validate_cmd = app.add_subcommand("validate", "Re-verify a result directory");
  validate_cmd->add_option("--dir", dir, "Result directory")->required();
  auto* stats_cmd = app.add_subcommand("stats", "Print diagram statistics for a result directory");
  stats_cmd->add_option("--dir", dir, "Result directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  if (*threshold_opt) solve.threshold = threshold;

  if (*solve_cmd) return cmd_solve(solve, out, err);
  if (*validate_cmd) return cmd_validate(dir, out, err);
  return cmd_stats(dir, out, err);
}

}  // namespace powerdist::cli
