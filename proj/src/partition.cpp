#include "losplan/partition.hpp"

#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace losplan {

namespace {

using Tri = std::array<Point2, 3>;

bool blocked_by_edges(Point2 a, Point2 b, const std::vector<std::vector<Point2>>& chains, double eps) {
  const Segment s{a, b};
  for (const auto& ch : chains) {
    const std::size_t n = ch.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 p = ch[i];
      const Point2 q = ch[(i + 1) % n];
      if (segments_properly_intersect(s, {p, q}, eps)) return true;
      if (p != a && p != b && point_segment_distance(p, a, b) <= eps) return true;
    }
  }
  return false;
}

// Splices every hole into the outer chain through a bridge to a visible vertex.
std::vector<Point2> bridge_holes(const Polygon& poly, double eps) {
  std::vector<Point2> merged(poly.outer.vertices().begin(), poly.outer.vertices().end());
  std::vector<std::vector<Point2>> holes;
  for (const Ring& h : poly.holes) holes.emplace_back(h.vertices().begin(), h.vertices().end());
  std::vector<std::size_t> order(holes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto leftmost = [&](std::size_t h) {
    return static_cast<std::size_t>(std::min_element(holes[h].begin(), holes[h].end()) - holes[h].begin());
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return holes[a][leftmost(a)] < holes[b][leftmost(b)]; });

  std::vector<bool> done(holes.size(), false);
  for (std::size_t hi : order) {
    const std::vector<Point2>& hole = holes[hi];
    const std::size_t hn = hole.size();
    const std::size_t k = leftmost(hi);
    const Point2 h = hole[k];
    const Point2 h_prev = hole[(k + hn - 1) % hn];
    const Point2 h_next = hole[(k + 1) % hn];

    std::vector<std::vector<Point2>> chains{merged};
    for (std::size_t j = 0; j < holes.size(); ++j) {
      if (!done[j]) chains.push_back(holes[j]);
    }
    std::vector<std::size_t> cand(merged.size());
    for (std::size_t j = 0; j < cand.size(); ++j) cand[j] = j;
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) {
      return distance_squared(merged[a], h) < distance_squared(merged[b], h);
    });
    const std::size_t mn = merged.size();
    std::size_t pick = mn;
    for (std::size_t j : cand) {
      const Point2 v = merged[j];
      if (v == h) continue;
      if (!direction_in_wedge(merged[(j + mn - 1) % mn], v, merged[(j + 1) % mn], h - v, 1e-12, false)) continue;
      if (!direction_in_wedge(h_prev, h, h_next, v - h, 1e-12, false)) continue;
      if (blocked_by_edges(h, v, chains, eps)) continue;
      pick = j;
      break;
    }
    if (pick == mn) throw GeometryError("triangulate: no visible bridge for hole");

    std::vector<Point2> next;
    next.reserve(mn + hn + 2);
    next.insert(next.end(), merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(pick) + 1);
    for (std::size_t s = 0; s < hn; ++s) next.push_back(hole[(k + s) % hn]);
    next.push_back(h);
    next.push_back(merged[pick]);
    next.insert(next.end(), merged.begin() + static_cast<std::ptrdiff_t>(pick) + 1, merged.end());
    merged = std::move(next);
    done[hi] = true;
  }
  return merged;
}

double min_angle(Point2 a, Point2 b, Point2 c) {
  auto ang = [](Point2 p, Point2 q, Point2 r) {
    const Point2 u = q - p;
    const Point2 w = r - p;
    return std::atan2(std::abs(cross(u, w)), dot(u, w));
  };
  return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)});
}

bool point_in_closed_triangle(Point2 p, Point2 a, Point2 b, Point2 c, double eps) {
  const double scale = std::max({distance(a, b), distance(b, c), distance(c, a)});
  const double tol = eps * scale;
  return orient(a, b, p) >= -tol && orient(b, c, p) >= -tol && orient(c, a, p) >= -tol;
}

class EarClipper {
  static constexpr double kDropFirst = 10.0;

 public:
  EarClipper(std::vector<Point2> pts, double eps) : pts_(std::move(pts)), eps_(eps) {
    const std::size_t n = pts_.size();
    prev_.resize(n);
    next_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      prev_[i] = (i + n - 1) % n;
      next_[i] = (i + 1) % n;
    }
    alive_.assign(n, true);
    quality_.assign(n, -1.0);
    degenerate_.assign(n, false);
    shared_.assign(n, false);
    {
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts_[a] < pts_[b]; });
      for (std::size_t k = 1; k < n; ++k) {
        if (pts_[idx[k]] == pts_[idx[k - 1]]) shared_[idx[k]] = shared_[idx[k - 1]] = true;
      }
    }
    count_ = n;
    for (std::size_t i = 0; i < n; ++i) update(i);
  }

  std::vector<Tri> run() {
    std::vector<Tri> out;
    while (count_ > 3) {
      std::size_t best = pts_.size();
      for (std::size_t i = 0; i < pts_.size(); ++i) {
        if (!alive_[i]) continue;
        if (quality_[i] >= 0.0 && (best == pts_.size() || quality_[i] > quality_[best])) best = i;
      }
      if (best == pts_.size()) {
        throw GeometryError("triangulate: no ear found (polygon not simple?)");
      }
      const std::size_t a = prev_[best];
      const std::size_t c = next_[best];
      if (!degenerate_[best]) out.push_back({pts_[a], pts_[best], pts_[c]});
      alive_[best] = false;
      next_[a] = c;
      prev_[c] = a;
      --count_;
      update(a);
      update(c);
    }
    std::size_t a = 0;
    while (!alive_[a]) ++a;
    const std::size_t b = next_[a];
    const std::size_t c = next_[b];
    if (orient(pts_[a], pts_[b], pts_[c]) > 0.0) out.push_back({pts_[a], pts_[b], pts_[c]});
    return out;
  }

 private:
  void update(std::size_t b) {
    quality_[b] = -1.0;
    degenerate_[b] = false;
    const std::size_t ia = prev_[b];
    const std::size_t ic = next_[b];
    const Point2 a = pts_[ia];
    const Point2 p = pts_[b];
    const Point2 c = pts_[ic];
    const double scale = std::max({distance(a, p), distance(p, c), distance(c, a)});
    const double o = orient(a, p, c);
    if (a == p || p == c) {
      quality_[b] = kDropFirst;
      degenerate_[b] = true;
      return;
    }
    if (std::abs(o) <= eps_ * scale) {
      // Straight vertex: removing it loses no area. Bridge ends are kept.
      if (dot(p - a, c - p) > 0.0 && !shared_[b]) {
        quality_[b] = kDropFirst;
        degenerate_[b] = true;
      }
      return;
    }
    if (o < 0.0) return;
    for (std::size_t j = next_[ic]; j != ia; j = next_[j]) {
      const Point2 q = pts_[j];
      if (q == a || q == p || q == c) continue;
      if (point_in_closed_triangle(q, a, p, c, eps_)) return;
    }
    // The diagonal must leave a and c into the polygon interior.
    if (!direction_in_wedge(pts_[prev_[ia]], a, p, c - a, 1e-12, true)) return;
    if (!direction_in_wedge(p, c, pts_[next_[ic]], a - c, 1e-12, true)) return;
    for (std::size_t j = ic; next_[j] != ia && j != ia; j = next_[j]) {
      if (segments_properly_intersect({a, c}, {pts_[j], pts_[next_[j]]}, eps_)) return;
    }
    quality_[b] = min_angle(a, p, c);
  }

  std::vector<Point2> pts_;
  double eps_;
  std::vector<std::size_t> prev_, next_;
  std::vector<bool> alive_;
  std::vector<double> quality_;
  std::vector<bool> degenerate_;
  std::vector<bool> shared_;
  std::size_t count_ = 0;
};

struct EdgeKey {
  std::uint32_t lo, hi;
  bool operator==(const EdgeKey&) const = default;
};
struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const {
    return std::hash<std::uint64_t>()((static_cast<std::uint64_t>(k.lo) << 32) | k.hi);
  }
};
EdgeKey key(std::uint32_t a, std::uint32_t b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

class Refiner {
 public:
  explicit Refiner(const std::vector<Tri>& tris) {
    std::unordered_map<Point2Key, std::uint32_t, Point2KeyHash> ids;
    for (const Tri& t : tris) {
      std::array<std::uint32_t, 3> ix;
      for (int k = 0; k < 3; ++k) {
        auto [it, fresh] = ids.try_emplace(Point2Key{t[k].x, t[k].y}, static_cast<std::uint32_t>(verts_.size()));
        if (fresh) verts_.push_back(t[k]);
        ix[k] = it->second;
      }
      add(ix);
    }
  }

  void refine_all(double R) {
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      while (longest_length(i) > R) refine(i);
    }
  }

  std::vector<Tri> triangles() const {
    std::vector<Tri> out;
    out.reserve(tris_.size());
    for (const auto& t : tris_) out.push_back({verts_[t[0]], verts_[t[1]], verts_[t[2]]});
    return out;
  }

 private:
  struct Point2Key {
    double x, y;
    bool operator==(const Point2Key&) const = default;
  };
  struct Point2KeyHash {
    std::size_t operator()(const Point2Key& k) const {
      return std::hash<double>()(k.x) * 1000003u ^ std::hash<double>()(k.y);
    }
  };

  std::size_t add(std::array<std::uint32_t, 3> t) {
    const std::size_t id = tris_.size();
    tris_.push_back(t);
    gen_.push_back(0);
    link(id);
    return id;
  }
  void link(std::size_t id) {
    const auto& t = tris_[id];
    for (int k = 0; k < 3; ++k) edges_[key(t[k], t[(k + 1) % 3])].push_back(static_cast<std::uint32_t>(id));
  }
  void unlink(std::size_t id) {
    const auto& t = tris_[id];
    for (int k = 0; k < 3; ++k) {
      auto it = edges_.find(key(t[k], t[(k + 1) % 3]));
      auto& v = it->second;
      v.erase(std::find(v.begin(), v.end(), static_cast<std::uint32_t>(id)));
      if (v.empty()) edges_.erase(it);
    }
  }

  // Index k of the longest edge (t[k], t[k+1]).
  int longest(std::size_t id) const {
    const auto& t = tris_[id];
    int best = 0;
    double bl = -1.0;
    for (int k = 0; k < 3; ++k) {
      const Point2 a = verts_[t[k]];
      const Point2 b = verts_[t[(k + 1) % 3]];
      const double l = distance(a, b);
      if (bl < 0.0 || l > bl * (1.0 + 1e-12)) {
        best = k;
        bl = l;
      } else if (l >= bl * (1.0 - 1e-12)) {
        const auto lex = [&](int e) {
          const Point2 p = verts_[t[e]];
          const Point2 q = verts_[t[(e + 1) % 3]];
          return std::pair{std::min(p, q), std::max(p, q)};
        };
        if (lex(k) < lex(best)) {
          best = k;
          bl = std::max(bl, l);
        }
      }
    }
    return best;
  }
  double longest_length(std::size_t id) const {
    const auto& t = tris_[id];
    const int k = longest(id);
    return distance(verts_[t[k]], verts_[t[(k + 1) % 3]]);
  }

  std::ptrdiff_t neighbor(std::size_t id, EdgeKey e) const {
    const auto& v = edges_.at(e);
    for (std::uint32_t o : v) {
      if (o != id) return o;
    }
    return -1;
  }

  // Splits triangle id at the midpoint vertex m of its edge k.
  void bisect(std::size_t id, int k, std::uint32_t m) {
    const auto t = tris_[id];
    const std::uint32_t a = t[k];
    const std::uint32_t b = t[(k + 1) % 3];
    const std::uint32_t c = t[(k + 2) % 3];
    unlink(id);
    tris_[id] = {a, m, c};
    ++gen_[id];
    link(id);
    add({m, b, c});
  }

  void refine(std::size_t target) {
    const std::uint32_t start_gen = gen_[target];
    while (gen_[target] == start_gen) {
      std::size_t cur = target;
      for (;;) {
        const int k = longest(cur);
        const EdgeKey e = key(tris_[cur][k], tris_[cur][(k + 1) % 3]);
        const std::ptrdiff_t n = neighbor(cur, e);
        if (n >= 0) {
          const auto& nt = tris_[static_cast<std::size_t>(n)];
          const int nk = longest(static_cast<std::size_t>(n));
          if (key(nt[nk], nt[(nk + 1) % 3]) != e) {
            cur = static_cast<std::size_t>(n);
            continue;
          }
        }
        const Point2 pa = verts_[e.lo];
        const Point2 pb = verts_[e.hi];
        const auto m = static_cast<std::uint32_t>(verts_.size());
        verts_.push_back((pa + pb) * 0.5);
        bisect(cur, k, m);
        if (n >= 0) {
          const auto& nt = tris_[static_cast<std::size_t>(n)];
          int nk = 0;
          while (key(nt[nk], nt[(nk + 1) % 3]) != e) ++nk;
          bisect(static_cast<std::size_t>(n), nk, m);
        }
        break;
      }
    }
  }

  std::vector<Point2> verts_;
  std::vector<std::array<std::uint32_t, 3>> tris_;
  std::vector<std::uint32_t> gen_;
  std::unordered_map<EdgeKey, std::vector<std::uint32_t>, EdgeKeyHash> edges_;
};

std::vector<TriangleNode> to_nodes(int t, const std::vector<Tri>& tris) {
  std::vector<TriangleNode> out;
  out.reserve(tris.size());
  for (std::size_t i = 0; i < tris.size(); ++i) out.push_back({t, static_cast<int>(i), tris[i]});
  return out;
}

}  // namespace

std::vector<Tri> triangulate_polygon(const Polygon& poly, double eps) {
  std::vector<Point2> chain = bridge_holes(poly, eps);
  std::vector<Tri> tris = EarClipper(std::move(chain), eps).run();
  double sum = 0.0;
  for (const Tri& t : tris) sum += 0.5 * orient(t[0], t[1], t[2]);
  const double want = poly.area();
  if (std::abs(sum - want) > std::max(kEpsArea, 1e-9 * want)) {
    throw GeometryError("triangulate: area not conserved (" + std::to_string(sum) + " vs " + std::to_string(want) + ")");
  }
  return tris;
}

std::vector<Tri> refine_triangles(std::vector<Tri> tris, double R) {
  if (!(R > 0.0)) throw GeometryError("hyper_triangulate: R must be positive");
  Refiner r(tris);
  r.refine_all(R);
  return r.triangles();
}

std::vector<TriangleNode> triangulate(const Realization& real) {
  std::vector<Tri> all;
  for (const Polygon& p : real.free_space().polygons()) {
    auto tris = triangulate_polygon(p, real.eps());
    all.insert(all.end(), tris.begin(), tris.end());
  }
  return to_nodes(real.index(), all);
}

std::vector<TriangleNode> hyper_triangulate(const Realization& real, double R) {
  if (!(R > 0.0)) throw GeometryError("hyper_triangulate: R must be positive");
  std::vector<Tri> all;
  for (const TriangleNode& n : triangulate(real)) all.push_back(n.v);
  return to_nodes(real.index(), refine_triangles(std::move(all), R));
}

}  // namespace losplan
