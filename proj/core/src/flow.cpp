#include "powerdist/flow.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <queue>
#include <stdexcept>

#include <fmt/core.h>

#include "powerdist/model.hpp"

namespace powerdist::flow {
__extension__ typedef __int128 i128;
namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
constexpr int kFromSource = -1;

struct Candidate {
  std::int64_t key;
  std::uint32_t supply;
};

struct CandidateAfter {
  bool operator()(const Candidate& a, const Candidate& b) const {
    return a.key != b.key ? a.key > b.key : a.supply > b.supply;
  }
};

using CandidateHeap = std::priority_queue<Candidate, std::vector<Candidate>, CandidateAfter>;

void check_instance(const TransshipmentInstance& inst) {
  const std::size_t n = inst.num_supplies();
  const std::size_t k = inst.num_demands();
  if (inst.costs.size() != n * k) {
    throw InputError(fmt::format("cost matrix has {} entries, expected {} x {}", inst.costs.size(), n, k));
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) throw InputError("too many supply nodes");
  i128 total_supply = 0;
  i128 total_demand = 0;
  for (std::int64_t s : inst.supplies) {
    if (s < 0) throw InputError(fmt::format("negative supply {}", s));
    total_supply += s;
  }
  for (std::int64_t d : inst.demands) {
    if (d < 0) throw InputError(fmt::format("negative demand {}", d));
    total_demand += d;
  }
  if (total_supply != total_demand) {
    throw InputError(fmt::format("infeasible transshipment: total supply {} != total demand {}",
                                 static_cast<std::int64_t>(total_supply),
                                 static_cast<std::int64_t>(total_demand)));
  }
  std::int64_t max_abs_cost = 0;
  for (std::int64_t c : inst.costs) {
    if (c == std::numeric_limits<std::int64_t>::min()) throw InputError("cost out of range");
    max_abs_cost = std::max(max_abs_cost, c < 0 ? -c : c);
  }
  const i128 multiplier = std::max<i128>(total_supply, static_cast<i128>(k) + 2);
  if (static_cast<i128>(max_abs_cost) * multiplier > kMagnitudeLimit) {
    throw InputError(fmt::format(
        "cost magnitude {} times flow volume exceeds the solver's integer range; lower the cost scale",
        max_abs_cost));
  }
}

class DenseBipartiteSolver {
 public:
  explicit DenseBipartiteSolver(const TransshipmentInstance& inst)
      : inst_(inst),
        n_(inst.num_supplies()),
        k_(inst.num_demands()),
        sink_(inst.num_demands()),
        shipments_(n_),
        heaps_(k_ * k_),
        load_(k_, 0),
        potential_(k_ + 1, 0),
        dist_(k_ + 1, 0),
        parent_(k_ + 1, kFromSource),
        via_(k_ + 1, 0),
        settled_(k_ + 1, 0) {}

  FlowSolution solve() {
    for (std::size_t y = 0; y < n_; ++y) route_supply(y);
    return extract();
  }

 private:
  struct Shipment {
    std::uint32_t demand;
    std::int64_t amount;
  };

  std::int64_t shipped(std::size_t supply, std::size_t demand) const {
    for (const Shipment& s : shipments_[supply]) {
      if (s.demand == demand) return s.amount;
    }
    return 0;
  }

  void ship(std::size_t supply, std::size_t demand, std::int64_t delta) {
    auto& list = shipments_[supply];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].demand != demand) continue;
      list[i].amount += delta;
      assert(list[i].amount >= 0);
      if (list[i].amount == 0) {
        list[i] = list.back();
        list.pop_back();
      }
      return;
    }
    assert(delta > 0);
    list.push_back({static_cast<std::uint32_t>(demand), delta});
    // New residual arcs demand -> other: reroute this supply's units elsewhere.
    const std::int64_t here = inst_.cost(supply, demand);
    for (std::size_t to = 0; to < k_; ++to) {
      if (to == demand) continue;
      heaps_[demand * k_ + to].push({inst_.cost(supply, to) - here, static_cast<std::uint32_t>(supply)});
    }
  }

  std::int64_t reroute_cost(std::size_t from, std::size_t to, std::uint32_t& via) {
    CandidateHeap& heap = heaps_[from * k_ + to];
    while (!heap.empty() && shipped(heap.top().supply, from) == 0) heap.pop();
    if (heap.empty()) return kInf;
    via = heap.top().supply;
    return heap.top().key;
  }

  // Ships all of `supply` along successive shortest residual paths. Node
  // potentials keep reduced costs nonnegative; the search stops as soon as
  // the sink is settled and unsettled nodes get the sink distance.
  void route_supply(std::size_t supply) {
    std::int64_t remaining = inst_.supplies[supply];
    while (remaining > 0) {
      for (std::size_t x = 0; x < k_; ++x) {
        dist_[x] = inst_.cost(supply, x) - potential_[x];
        parent_[x] = kFromSource;
        settled_[x] = 0;
      }
      dist_[sink_] = kInf;
      parent_[sink_] = kFromSource;
      settled_[sink_] = 0;

      while (true) {
        std::size_t v = sink_;
        std::int64_t best = kInf;
        for (std::size_t u = 0; u <= k_; ++u) {
          if (!settled_[u] && dist_[u] < best) {
            best = dist_[u];
            v = u;
          }
        }
        if (best >= kInf) throw std::logic_error("min-cost flow: sink unreachable in residual graph");
        settled_[v] = 1;
        if (v == sink_) break;

        if (load_[v] < inst_.demands[v]) {
          const std::int64_t cand = dist_[v] + potential_[v] - potential_[sink_];
          if (cand < dist_[sink_]) {
            dist_[sink_] = cand;
            parent_[sink_] = static_cast<int>(v);
          }
        }
        if (load_[v] == 0) continue;
        for (std::size_t u = 0; u < k_; ++u) {
          if (u == v || settled_[u]) continue;
          std::uint32_t via = 0;
          const std::int64_t arc = reroute_cost(v, u, via);
          if (arc >= kInf) continue;
          const std::int64_t cand = dist_[v] + arc + potential_[v] - potential_[u];
          assert(cand >= dist_[v]);
          if (cand < dist_[u]) {
            dist_[u] = cand;
            parent_[u] = static_cast<int>(v);
            via_[u] = via;
          }
        }
      }

      const std::int64_t sink_dist = dist_[sink_];
      for (std::size_t v = 0; v <= k_; ++v) potential_[v] += std::min(dist_[v], sink_dist);

      const auto last = static_cast<std::size_t>(parent_[sink_]);
      std::int64_t delta = std::min(remaining, inst_.demands[last] - load_[last]);
      std::size_t u = last;
      while (parent_[u] != kFromSource) {
        const auto v = static_cast<std::size_t>(parent_[u]);
        delta = std::min(delta, shipped(via_[u], v));
        u = v;
      }
      const std::size_t first = u;
      assert(delta > 0);

      u = last;
      while (parent_[u] != kFromSource) {
        const auto v = static_cast<std::size_t>(parent_[u]);
        ship(via_[u], v, -delta);
        ship(via_[u], u, delta);
        u = v;
      }
      ship(supply, first, delta);
      load_[last] += delta;
      remaining -= delta;
    }
  }

  FlowSolution extract() const {
    FlowSolution sol;
    sol.demand_potentials.assign(potential_.begin(), potential_.begin() + static_cast<std::ptrdiff_t>(k_));
    if (k_ > 0) {
      const std::int64_t lowest = *std::min_element(sol.demand_potentials.begin(), sol.demand_potentials.end());
      for (std::int64_t& w : sol.demand_potentials) w -= lowest;
    }
    sol.supply_potentials.assign(n_, 0);
    for (std::size_t y = 0; y < n_; ++y) {
      std::int64_t z = kInf;
      for (std::size_t x = 0; x < k_; ++x) z = std::min(z, inst_.cost(y, x) - sol.demand_potentials[x]);
      sol.supply_potentials[y] = k_ > 0 ? z : 0;
    }

    for (std::size_t y = 0; y < n_; ++y) {
      for (const Shipment& s : shipments_[y]) {
        sol.flows.push_back({y, s.demand, s.amount});
        sol.objective += s.amount * inst_.cost(y, s.demand);
        if (inst_.cost(y, s.demand) - sol.demand_potentials[s.demand] != sol.supply_potentials[y]) {
          throw std::logic_error("min-cost flow: complementary slackness violated on a positive-flow arc");
        }
      }
    }
    std::sort(sol.flows.begin(), sol.flows.end(), [](const ArcFlow& a, const ArcFlow& b) {
      return a.supply != b.supply ? a.supply < b.supply : a.demand < b.demand;
    });
    return sol;
  }

  const TransshipmentInstance& inst_;
  std::size_t n_;
  std::size_t k_;
  std::size_t sink_;
  std::vector<std::vector<Shipment>> shipments_;
  std::vector<CandidateHeap> heaps_;  // [from * k + to]
  std::vector<std::int64_t> load_;
  std::vector<std::int64_t> potential_;  // demand nodes, then the sink
  std::vector<std::int64_t> dist_;
  std::vector<int> parent_;
  std::vector<std::uint32_t> via_;
  std::vector<char> settled_;
};

}  // namespace

FlowSolution solve_mcf(const TransshipmentInstance& inst) {
  check_instance(inst);
  return DenseBipartiteSolver(inst).solve();
}

}  // namespace powerdist::flow
