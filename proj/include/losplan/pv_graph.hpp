#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "losplan/environment.hpp"
#include "losplan/geometry.hpp"
#include "losplan/partition.hpp"
#include "losplan/visibility.hpp"

namespace losplan {

class DynamicBitset {
 public:
  DynamicBitset() = default;
  explicit DynamicBitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void set_all();
  std::size_t count() const;
  bool any() const;
  std::size_t and_count(const DynamicBitset& o) const;
  DynamicBitset& operator&=(const DynamicBitset& o);
  DynamicBitset& operator|=(const DynamicBitset& o);
  /// Clears every bit set in o.
  DynamicBitset& subtract(const DynamicBitset& o);
  bool operator==(const DynamicBitset&) const = default;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Per-node data the edge test needs.
struct NodeRegion {
  Region region;
  BBox bbox;
  /// Interior point with its clearance (zero clearance when region is empty).
  Pole pole;
};

/// Partition-based visibility graph over all realizations. Node ids are
/// 0-based and ordered by realization, then triangle index.
class PVGraph {
 public:
  PVGraph() = default;
  PVGraph(std::vector<TriangleNode> nodes, std::vector<NodeRegion> regions, std::vector<DynamicBitset> adjacency,
          std::vector<int> per_realization);

  std::size_t size() const { return nodes_.size(); }
  const TriangleNode& node(std::size_t id) const { return nodes_[id]; }
  std::span<const TriangleNode> nodes() const { return nodes_; }
  const Region& region(std::size_t id) const { return regions_[id].region; }
  const NodeRegion& node_region(std::size_t id) const { return regions_[id]; }
  const DynamicBitset& neighbors(std::size_t id) const { return adjacency_[id]; }
  bool adjacent(std::size_t a, std::size_t b) const { return adjacency_[a].test(b); }
  std::size_t degree(std::size_t id) const { return adjacency_[id].count(); }
  std::size_t edge_count() const;
  /// M^(t) for every realization.
  std::span<const int> per_realization() const { return per_realization_; }
  std::size_t realization_count() const { return per_realization_.size(); }

 private:
  std::vector<TriangleNode> nodes_;
  std::vector<NodeRegion> regions_;
  std::vector<DynamicBitset> adjacency_;
  std::vector<int> per_realization_;
};

struct GraphOptions {
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Test every pair by full region intersection (reference mode).
  bool brute_force = false;
};

/// Computes V_r for every node, then all edges. Nodes must be ordered by
/// realization and numbered 0..M^(t)-1 within each.
PVGraph build_graph_from_nodes(const Environment& env, std::vector<TriangleNode> nodes, const RangeSpec& range,
                               const GraphOptions& opts = {});

/// Same as above with precomputed regions (used for synthetic fixtures).
PVGraph build_graph_from_regions(std::vector<TriangleNode> nodes, std::vector<Region> regions, double r,
                                 std::size_t realizations, const GraphOptions& opts = {});

/// Hyper-triangulates every realization at R and builds the graph. Rejects R
/// above the ucal bound for this environment and range.
PVGraph build_pv_graph(const Environment& env, const RangeSpec& range, double R, const GraphOptions& opts = {});

/// False only when a and b provably share no visibility: disjoint region
/// boxes, or some vertex pair further than 2r apart.
bool pair_prefilter(const TriangleNode& a, const NodeRegion& ra, const TriangleNode& b, const NodeRegion& rb,
                    double r);

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  std::vector<int> per_realization;
  std::map<std::size_t, std::size_t> degree_histogram;
};
GraphStats graph_stats(const PVGraph& g);

/// One "t i t' i'" line per edge (1-based), sorted.
void write_edge_list(const PVGraph& g, std::ostream& out);

}  // namespace losplan
