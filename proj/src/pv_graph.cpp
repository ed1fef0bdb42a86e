#include "losplan/pv_graph.hpp"

#include <numbers>
#include <ostream>
#include <thread>

#include "losplan/bounds.hpp"

namespace losplan {

void DynamicBitset::set_all() {
  for (auto& w : words_) w = ~std::uint64_t{0};
  if (n_ % 64 != 0 && !words_.empty()) words_.back() = (std::uint64_t{1} << (n_ % 64)) - 1;
}

std::size_t DynamicBitset::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

bool DynamicBitset::any() const {
  for (auto w : words_) {
    if (w) return true;
  }
  return false;
}

std::size_t DynamicBitset::and_count(const DynamicBitset& o) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(__builtin_popcountll(words_[i] & o.words_[i]));
  return c;
}

DynamicBitset& DynamicBitset::operator&=(const DynamicBitset& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

DynamicBitset& DynamicBitset::operator|=(const DynamicBitset& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

DynamicBitset& DynamicBitset::subtract(const DynamicBitset& o) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

PVGraph::PVGraph(std::vector<TriangleNode> nodes, std::vector<NodeRegion> regions, std::vector<DynamicBitset> adjacency,
                 std::vector<int> per_realization)
    : nodes_(std::move(nodes)),
      regions_(std::move(regions)),
      adjacency_(std::move(adjacency)),
      per_realization_(std::move(per_realization)) {}

std::size_t PVGraph::edge_count() const {
  std::size_t c = 0;
  for (const auto& a : adjacency_) c += a.count();
  return c / 2;
}

namespace {

unsigned worker_count(unsigned requested) {
  if (requested) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i, 0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) f(i, w);
    });
  }
  for (auto& t : pool) t.join();
}

// A disk of this radius has area kEpsArea.
const double kMinDiskRadius = std::sqrt(kEpsArea / std::numbers::pi) * 1.001;

NodeRegion describe(Region region) {
  NodeRegion nr;
  nr.bbox = region.bbox();
  if (!region_is_empty(region)) {
    const BBox& b = region.bbox();
    try {
      nr.pole = pole_of_inaccessibility(region, 1e-3 * std::max(b.width(), b.height()));
    } catch (const GeometryError&) {
      nr.pole = {};
    }
  }
  nr.region = std::move(region);
  return nr;
}

// A disk around one pole inside both regions proves the overlap.
bool pole_witness(const NodeRegion& a, const NodeRegion& b) {
  if (a.pole.clearance < kMinDiskRadius) return false;
  if (!b.bbox.contains(a.pole.point)) return false;
  if (!point_in_region(a.pole.point, b.region, 0.0)) return false;
  return std::min(a.pole.clearance, distance_to_boundary(a.pole.point, b.region)) >= kMinDiskRadius;
}

bool overlap(const NodeRegion& a, const NodeRegion& b, bool shortcuts) {
  if (region_is_empty(a.region) || region_is_empty(b.region)) return false;
  if (shortcuts && (pole_witness(a, b) || pole_witness(b, a))) return true;
  return regions_overlap(a.region, b.region);
}

std::vector<int> count_per_realization(const std::vector<TriangleNode>& nodes, std::size_t realizations) {
  std::vector<int> counts(realizations, 0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const TriangleNode& n = nodes[k];
    if (n.t < 0 || static_cast<std::size_t>(n.t) >= realizations) throw std::invalid_argument("graph: bad realization index");
    if (k > 0 && (n.t < nodes[k - 1].t)) throw std::invalid_argument("graph: nodes not ordered by realization");
    if (n.i != counts[static_cast<std::size_t>(n.t)]) throw std::invalid_argument("graph: triangle indices not consecutive");
    ++counts[static_cast<std::size_t>(n.t)];
  }
  return counts;
}

PVGraph assemble(std::vector<TriangleNode> nodes, std::vector<NodeRegion> regions, double r, std::size_t realizations,
                 const GraphOptions& opts) {
  std::vector<int> counts = count_per_realization(nodes, realizations);
  const std::size_t n = nodes.size();
  const unsigned threads = worker_count(opts.threads);
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> found(threads);
  parallel_for(n, threads, [&](std::size_t i, unsigned w) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!opts.brute_force && !pair_prefilter(nodes[i], regions[i], nodes[j], regions[j], r)) continue;
      if (overlap(regions[i], regions[j], !opts.brute_force)) found[w].emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  });
  std::vector<DynamicBitset> adj(n, DynamicBitset(n));
  for (const auto& list : found) {
    for (auto [i, j] : list) {
      adj[i].set(j);
      adj[j].set(i);
    }
  }
  return PVGraph(std::move(nodes), std::move(regions), std::move(adj), std::move(counts));
}

}  // namespace

bool pair_prefilter(const TriangleNode& a, const NodeRegion& ra, const TriangleNode& b, const NodeRegion& rb, double r) {
  if (!ra.bbox.overlaps(rb.bbox)) return false;
  const double lim = 4.0 * r * r * (1.0 + 1e-9);
  for (const Point2& p : a.v) {
    for (const Point2& q : b.v) {
      if (distance_squared(p, q) > lim) return false;
    }
  }
  return true;
}

PVGraph build_graph_from_regions(std::vector<TriangleNode> nodes, std::vector<Region> regions, double r,
                                 std::size_t realizations, const GraphOptions& opts) {
  if (regions.size() != nodes.size()) throw std::invalid_argument("graph: one region per node required");
  std::vector<NodeRegion> described(regions.size());
  parallel_for(regions.size(), worker_count(opts.threads),
               [&](std::size_t i, unsigned) { described[i] = describe(std::move(regions[i])); });
  return assemble(std::move(nodes), std::move(described), r, realizations, opts);
}

PVGraph build_graph_from_nodes(const Environment& env, std::vector<TriangleNode> nodes, const RangeSpec& range,
                               const GraphOptions& opts) {
  VisibilityCache cache(env, range);
  std::vector<Region> regions(nodes.size());
  parallel_for(nodes.size(), worker_count(opts.threads),
               [&](std::size_t i, unsigned) { regions[i] = cache.triangle(nodes[i]); });
  return build_graph_from_regions(std::move(nodes), std::move(regions), range.radius(env.diameter()), env.size(), opts);
}

PVGraph build_pv_graph(const Environment& env, const RangeSpec& range, double R, const GraphOptions& opts) {
  range.validate();
  const BoundsReport b = environment_bounds(env.spec(), range.radius(env.diameter()));
  if (!(R > 0.0)) throw std::invalid_argument("graph: R must be positive");
  if (R > b.R_upper * (1.0 + 1e-12)) {
    throw std::invalid_argument("graph: R = " + std::to_string(R) + " exceeds the upper bound R' = " +
                                std::to_string(b.R_upper));
  }
  std::vector<TriangleNode> nodes;
  for (const Realization& real : env.realizations()) {
    auto tris = hyper_triangulate(real, R);
    nodes.insert(nodes.end(), tris.begin(), tris.end());
  }
  return build_graph_from_nodes(env, std::move(nodes), range, opts);
}

GraphStats graph_stats(const PVGraph& g) {
  GraphStats s;
  s.nodes = g.size();
  s.edges = g.edge_count();
  s.density = s.nodes > 1 ? 2.0 * static_cast<double>(s.edges) / (static_cast<double>(s.nodes) * (s.nodes - 1)) : 0.0;
  s.per_realization.assign(g.per_realization().begin(), g.per_realization().end());
  for (std::size_t i = 0; i < g.size(); ++i) ++s.degree_histogram[g.degree(i)];
  return s;
}

void write_edge_list(const PVGraph& g, std::ostream& out) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const TriangleNode& a = g.node(i);
    g.neighbors(i).for_each([&](std::size_t j) {
      if (j <= i) return;
      const TriangleNode& b = g.node(j);
      out << a.t + 1 << ' ' << a.i + 1 << ' ' << b.t + 1 << ' ' << b.i + 1 << '\n';
    });
  }
}

}  // namespace losplan
