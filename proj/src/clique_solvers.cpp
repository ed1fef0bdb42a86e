#include "losplan/clique_solvers.hpp"

#include <algorithm>
#include <numeric>

namespace losplan {

namespace {

void require_regions(const PVGraph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (region_is_empty(g.region(i))) {
      const TriangleNode& n = g.node(i);
      throw SolverError("node (" + std::to_string(n.t + 1) + ", " + std::to_string(n.i + 1) +
                        ") has an empty visibility region; R is too large for the range");
    }
  }
}

std::vector<std::size_t> residual_order(const PVGraph& g, const DynamicBitset& alive, bool descending) {
  std::vector<std::size_t> ids;
  std::vector<std::size_t> deg(g.size(), 0);
  alive.for_each([&](std::size_t i) {
    ids.push_back(i);
    deg[i] = g.neighbors(i).and_count(alive);
  });
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    return descending ? deg[a] > deg[b] : deg[a] < deg[b];
  });
  return ids;
}

// Joint region of cluster plus v, or empty when they do not overlap.
bool try_extend(const Region& joint, const Region& next, Region& out) {
  if (!joint.bbox().overlaps(next.bbox())) return false;
  if (!regions_overlap(joint, next)) return false;
  out = region_intersection(joint, next);
  return !region_is_empty(out);
}

CliqueCluster finish(const PVGraph& g, std::vector<std::size_t> members, Region joint) {
#ifndef NDEBUG
  std::vector<const Region*> regs;
  for (std::size_t m : members) regs.push_back(&g.region(m));
  if (region_is_empty(visibility_of_set(regs))) throw SolverError("joint visibility drifted to empty");
#else
  (void)g;
#endif
  CliqueCluster c;
  c.ap_point = choose_ap_point(joint);
  c.members = std::move(members);
  c.joint_visibility = std::move(joint);
  return c;
}

}  // namespace

Plan mcc(const PVGraph& g, std::size_t exact_threshold) {
  require_regions(g);
  Plan plan;
  plan.mode = PlanMode::Full;
  plan.uncovered.assign(g.realization_count(), {});
  DynamicBitset alive(g.size());
  alive.set_all();
  while (alive.any()) {
    const std::vector<std::size_t> order = residual_order(g, alive, false);
    const std::size_t seed = order.front();
    std::vector<std::size_t> members{seed};
    Region joint = g.region(seed);
    DynamicBitset common = g.neighbors(seed);
    common &= alive;
    Region next;
    for (std::size_t k = 1; k < order.size(); ++k) {
      const std::size_t v = order[k];
      if (!common.test(v)) continue;
      if (!try_extend(joint, g.region(v), next)) continue;
      members.push_back(v);
      joint = std::move(next);
      common &= g.neighbors(v);
    }
    for (std::size_t m : members) alive.reset(m);
    plan.clusters.push_back(finish(g, std::move(members), std::move(joint)));
  }
  const IndependenceBound h = independence_lower_bound(g, exact_threshold);
  plan.lower_bound_h = h.h();
  plan.lower_bound_exact = h.exact;
  plan.gap_area_fraction.assign(g.realization_count(), 0.0);
  return plan;
}

Plan mcp(const PVGraph& g, double alpha_gap, GapThreshold threshold, std::size_t exact_threshold) {
  if (!(alpha_gap > 0.0 && alpha_gap < 1.0)) throw SolverError("alpha_gap must lie in (0, 1)");
  require_regions(g);
  Plan plan;
  plan.mode = PlanMode::Gap;
  plan.alpha_gap = alpha_gap;
  plan.threshold = threshold;
  const std::size_t T = g.realization_count();
  plan.uncovered.assign(T, {});
  std::vector<DynamicBitset> of_realization(T, DynamicBitset(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) of_realization[static_cast<std::size_t>(g.node(i).t)].set(i);

  DynamicBitset alive(g.size());
  alive.set_all();
  while (alive.any()) {
    const std::vector<std::size_t> order = residual_order(g, alive, true);
    std::vector<std::size_t> members;
    DynamicBitset in_cluster(g.size());
    Region joint;
    DynamicBitset common;
    Region next;
    for (const std::size_t v : order) {
      if (!alive.test(v)) continue;
      if (members.empty()) {
        joint = g.region(v);
        common = g.neighbors(v);
      } else {
        if (!common.test(v)) continue;
        if (!try_extend(joint, g.region(v), next)) continue;
        joint = std::move(next);
        common &= g.neighbors(v);
      }
      members.push_back(v);
      in_cluster.set(v);
      const auto t = static_cast<std::size_t>(g.node(v).t);
      DynamicBitset rest = of_realization[t];
      rest &= alive;
      rest.subtract(in_cluster);
      const double left = static_cast<double>(rest.count());
      const double limit = alpha_gap * g.per_realization()[t];
      const bool drop = threshold == GapThreshold::Inclusive ? left <= limit : left < limit;
      if (drop) {
        rest.for_each([&](std::size_t u) { plan.uncovered[t].push_back(u); });
        alive.subtract(rest);
      }
    }
    for (std::size_t m : members) alive.reset(m);
    plan.clusters.push_back(finish(g, std::move(members), std::move(joint)));
  }
  const IndependenceBound h = independence_lower_bound(g, exact_threshold);
  plan.lower_bound_h = h.h();
  plan.lower_bound_exact = h.exact;
  plan.gap_area_fraction.assign(T, 0.0);
  return plan;
}

namespace {

// Maximum clique of a small graph given as bit masks (Tomita-style with
// greedy colouring bounds).
class MaxClique {
 public:
  explicit MaxClique(std::vector<DynamicBitset> adj) : adj_(std::move(adj)) {}

  std::vector<std::size_t> solve() {
    DynamicBitset p(adj_.size());
    p.set_all();
    std::vector<std::size_t> cur;
    expand(cur, p);
    return best_;
  }

 private:
  void expand(std::vector<std::size_t>& cur, const DynamicBitset& p) {
    std::vector<std::size_t> order;
    std::vector<std::size_t> colour;
    colour_sort(p, order, colour);
    for (std::size_t k = order.size(); k-- > 0;) {
      if (cur.size() + colour[k] <= best_.size()) return;
      const std::size_t v = order[k];
      cur.push_back(v);
      DynamicBitset np = p;
      np &= adj_[v];
      // Only vertices earlier in this ordering remain candidates.
      for (std::size_t j = k; j < order.size(); ++j) np.reset(order[j]);
      if (!np.any()) {
        if (cur.size() > best_.size()) best_ = cur;
      } else {
        expand(cur, np);
      }
      cur.pop_back();
    }
  }

  void colour_sort(const DynamicBitset& p, std::vector<std::size_t>& order, std::vector<std::size_t>& colour) const {
    DynamicBitset uncoloured = p;
    std::size_t c = 0;
    while (uncoloured.any()) {
      ++c;
      DynamicBitset q = uncoloured;
      while (q.any()) {
        const std::size_t v = first(q);
        q.reset(v);
        uncoloured.reset(v);
        q.subtract(adj_[v]);
        order.push_back(v);
        colour.push_back(c);
      }
    }
  }

  static std::size_t first(const DynamicBitset& b) {
    std::size_t out = b.size();
    bool found = false;
    b.for_each([&](std::size_t i) {
      if (!found) {
        out = i;
        found = true;
      }
    });
    return out;
  }

  std::vector<DynamicBitset> adj_;
  std::vector<std::size_t> best_;
};

}  // namespace

IndependenceBound independence_lower_bound(const PVGraph& g, std::size_t exact_threshold) {
  IndependenceBound out;
  const std::size_t n = g.size();
  if (n == 0) {
    out.exact = true;
    return out;
  }
  if (n <= exact_threshold) {
    std::vector<DynamicBitset> comp(n, DynamicBitset(n));
    for (std::size_t i = 0; i < n; ++i) {
      comp[i].set_all();
      comp[i].subtract(g.neighbors(i));
      comp[i].reset(i);
    }
    out.set = MaxClique(std::move(comp)).solve();
    std::sort(out.set.begin(), out.set.end());
    out.exact = true;
    return out;
  }
  DynamicBitset alive(n);
  alive.set_all();
  while (alive.any()) {
    std::size_t best = n;
    std::size_t best_deg = 0;
    alive.for_each([&](std::size_t i) {
      const std::size_t d = g.neighbors(i).and_count(alive);
      if (best == n || d < best_deg) {
        best = i;
        best_deg = d;
      }
    });
    out.set.push_back(best);
    alive.reset(best);
    alive.subtract(g.neighbors(best));
  }
  std::sort(out.set.begin(), out.set.end());
  return out;
}

Point2 choose_ap_point(const Region& region) {
  if (region_is_empty(region)) throw SolverError("choose_ap_point: region below the area threshold");
  const BBox& b = region.bbox();
  return pole_of_inaccessibility(region, 1e-4 * std::max(b.width(), b.height())).point;
}

std::vector<std::string> validate_plan(const PVGraph& g, const Plan& plan) {
  std::vector<std::string> bad;
  std::vector<int> seen(g.size(), 0);
  for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
    const CliqueCluster& cl = plan.clusters[c];
    std::vector<const Region*> regs;
    for (std::size_t a = 0; a < cl.members.size(); ++a) {
      ++seen[cl.members[a]];
      regs.push_back(&g.region(cl.members[a]));
      for (std::size_t b = a + 1; b < cl.members.size(); ++b) {
        if (!g.adjacent(cl.members[a], cl.members[b])) bad.push_back("cluster " + std::to_string(c + 1) + " is not a clique");
      }
    }
    const Region joint = visibility_of_set(regs);
    if (region_is_empty(joint)) bad.push_back("cluster " + std::to_string(c + 1) + " has empty joint visibility");
    if (!point_in_region(cl.ap_point, cl.joint_visibility)) {
      bad.push_back("cluster " + std::to_string(c + 1) + " AP lies outside its joint visibility");
    }
  }
  for (std::size_t t = 0; t < plan.uncovered.size(); ++t) {
    for (std::size_t u : plan.uncovered[t]) ++seen[u];
    if (plan.mode == PlanMode::Full && !plan.uncovered[t].empty()) bad.push_back("full plan leaves nodes uncovered");
    const double limit = plan.alpha_gap * g.per_realization()[t];
    if (plan.mode == PlanMode::Gap && static_cast<double>(plan.uncovered[t].size()) > limit) {
      bad.push_back("realization " + std::to_string(t + 1) + " exceeds the tolerated gap");
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (seen[i] != 1) {
      bad.push_back("node " + std::to_string(i) + " assigned " + std::to_string(seen[i]) + " times");
      break;
    }
  }
  if (plan.mode == PlanMode::Full && plan.lower_bound_h > static_cast<int>(plan.g())) {
    bad.push_back("independence bound exceeds the cluster count");
  }
  return bad;
}

void measure_gap_area(const PVGraph& g, std::span<const double> free_area, Plan& plan) {
  plan.gap_area_fraction.assign(plan.uncovered.size(), 0.0);
  for (std::size_t t = 0; t < plan.uncovered.size(); ++t) {
    double a = 0.0;
    for (std::size_t u : plan.uncovered[t]) a += g.node(u).area();
    plan.gap_area_fraction[t] = free_area[t] > 0.0 ? a / free_area[t] : 0.0;
  }
}

}  // namespace losplan
