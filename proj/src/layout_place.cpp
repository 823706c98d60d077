// Copyright 2026 The Sandpile Compiler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <queue>

#include <absl/container/flat_hash_set.h>

#include "sandpile/place.hpp"

namespace sandpile {
namespace {

int64_t fdiv(int64_t a, int64_t b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int64_t fmod(int64_t a, int64_t b) { return a - fdiv(a, b) * b; }
Site scaled(const Site& s, int64_t k) { return {s.x * k, s.y * k, s.z * k}; }

constexpr int64_t kClear = 3;  // chebyshev clearance between foreign footprints

struct PortGeom {
  std::string name;
  Site site, exit, turn;
};

struct Shape {
  std::vector<std::pair<Site, int64_t>> footprint;
  std::vector<Site> blocked;  // lattice nodes (relative) within the clearance
  std::vector<PortGeom> ports;
  Site box_lo, box_hi;        // lattice-node box holding the clearance, exits and turns
};

int64_t ceil_div3(int64_t a) { return a >= 0 ? (a + 2) / 3 : -((-a) / 3); }
int64_t floor_div3(int64_t a) { return a >= 0 ? a / 3 : -((-a + 2) / 3); }

Shape make_shape(const Gadget& g) {
  Shape s;
  absl::flat_hash_set<Site> foot, dil;
  for (const auto& [site, c] : g.footprint) {
    s.footprint.emplace_back(site, c);
    foot.insert(site);
    for (int64_t dx = -kClear; dx <= kClear; ++dx)
      for (int64_t dy = -kClear; dy <= kClear; ++dy)
        for (int64_t dz = -kClear; dz <= kClear; ++dz) dil.insert(site + Site{dx, dy, dz});
  }
  Site lo = *dil.begin(), hi = lo;
  auto extend = [&](const Site& f) {
    lo = {std::min(lo.x, f.x), std::min(lo.y, f.y), std::min(lo.z, f.z)};
    hi = {std::max(hi.x, f.x), std::max(hi.y, f.y), std::max(hi.z, f.z)};
  };
  for (const Site& d : dil) {
    extend(d);
    if (d.x % 3 == 0 && d.y % 3 == 0 && d.z % 3 == 0) s.blocked.push_back({d.x / 3, d.y / 3, d.z / 3});
  }
  std::sort(s.blocked.begin(), s.blocked.end());
  for (const auto& p : g.ports) {
    if (p.site.x % 3 || p.site.y % 3 || p.site.z % 3) throw Error("port " + p.name + " is off the routing lattice");
    Site out{1, 0, 0};
    int touching = 0;
    for (const Site& d : kDirs3)
      if (foot.contains(p.site + d)) {
        out = Site{} - d;
        ++touching;
      }
    if (touching > 1) throw Error("port " + p.name + " is not the end of a stub");
    const PortGeom pg{p.name, p.site, p.site + scaled(out, 3), p.site + scaled(out, 6)};
    for (const auto& [f, c] : g.footprint) {
      if (f != p.site && chebyshev(f, pg.exit) <= kClear) throw Error("port " + p.name + " has a blocked exit");
      if (chebyshev(f, pg.turn) <= kClear) throw Error("port " + p.name + " has a blocked turn");
    }
    extend(pg.turn);
    s.ports.push_back(pg);
  }
  s.box_lo = {ceil_div3(lo.x), ceil_div3(lo.y), ceil_div3(lo.z)};
  s.box_hi = {floor_div3(hi.x), floor_div3(hi.y), floor_div3(hi.z)};
  return s;
}

int64_t claim_key(int net, int64_t du, int64_t dw) { return (int64_t{net} << 16) | ((du + 128) << 8) | (dw + 128); }

struct Attempt {
  int K;
  int64_t n;
  const PhysCircuit& pc;
  const PlaceOptions& opt;
  std::vector<Shape> shapes;  // per element
  // (element, port) -> terminal claim
  std::map<std::pair<int, std::string>, int64_t> port_claim;

  Attempt(int k, int64_t side, const PhysCircuit& c, const PlaceOptions& o, std::vector<Shape> sh,
          std::map<std::pair<int, std::string>, int64_t> claims_by_port)
      : K(k), n(side), pc(c), opt(o), shapes(std::move(sh)), port_claim(std::move(claims_by_port)) {}

  std::vector<uint8_t> occupied;  // per local node: inside a gadget box or its corridor
  std::vector<uint8_t> blocked;   // per local node
  absl::flat_hash_map<int64_t, int64_t> reserved_node;
  std::vector<Site> anchors;

  Site node_site(int64_t i, int64_t j, int64_t k) const { return {2 + 3 * i, 2 + 3 * j, 2 + 3 * k}; }
  int64_t node_index(const Site& c) const { return (c.x * K + c.y) * K + c.z; }

  bool fits(const Shape& sh, const Site& a) const {
    const Site lo = a + sh.box_lo, hi = a + sh.box_hi;
    if (lo.x < 1 || lo.y < 1 || lo.z < 1 || hi.x > K - 2 || hi.y > K - 2 || hi.z > K - 2) return false;
    for (int64_t i = lo.x; i <= hi.x; ++i)
      for (int64_t j = lo.y; j <= hi.y; ++j)
        for (int64_t k = lo.z; k <= hi.z; ++k)
          if (occupied[static_cast<size_t>(node_index({i, j, k}))]) return false;
    return true;
  }

  void commit(const Shape& sh, const Site& a, int e) {
    const int64_t gap = opt.corridor;
    const Site lo = a + sh.box_lo, hi = a + sh.box_hi;
    for (int64_t i = std::max<int64_t>(0, lo.x - gap); i <= std::min<int64_t>(K - 1, hi.x + gap); ++i)
      for (int64_t j = std::max<int64_t>(0, lo.y - gap); j <= std::min<int64_t>(K - 1, hi.y + gap); ++j)
        for (int64_t k = lo.z; k <= hi.z; ++k) occupied[static_cast<size_t>(node_index({i, j, k}))] = 1;
    for (const Site& b : sh.blocked) blocked[static_cast<size_t>(node_index(a + b))] = 1;
    for (const auto& p : sh.ports) {
      const int64_t claim = port_claim.at({e, p.name});
      const Site turn = a + Site{p.turn.x / 3, p.turn.y / 3, p.turn.z / 3};
      for (const Site& c : {a + Site{p.site.x / 3, p.site.y / 3, p.site.z / 3}, a + Site{p.exit.x / 3, p.exit.y / 3, p.exit.z / 3},
                            turn, turn + Site{0, 0, 1}, turn + Site{0, 0, -1}})
        reserved_node[node_index(c)] = claim;
    }
    anchors[static_cast<size_t>(e)] = node_site(a.x, a.y, a.z);
  }

  bool place() {
    const auto local = static_cast<size_t>(K) * K * K;
    occupied.assign(local, 0);
    blocked.assign(local, 0);
    reserved_node.clear();
    anchors.assign(pc.elements.size(), Site{});
    std::vector<int64_t> layers;
    for (int64_t k = 2; k <= K - 3; k += opt.layer_pitch) layers.push_back(k);
    const int64_t total = static_cast<int64_t>(layers.size()) * K * K;
    int64_t cursor = 0;
    for (size_t e = 0; e < pc.elements.size(); ++e) {
      const Shape& sh = shapes[e];
      bool placed = false;
      for (int64_t step = 0; step < total && !placed; ++step) {
        const int64_t p = (cursor + step) % total;
        const Site a{p % K, p / K % K, layers[static_cast<size_t>(p / (K * K))]};
        if (fits(sh, a)) {
          commit(sh, a, static_cast<int>(e));
          cursor = p;
          placed = true;
        }
      }
      if (!placed) return false;
    }
    return true;
  }

  // Routing over the universal cover of the tile: node (I, J, W) with I, W
  // unbounded across cubes and J inside the tile.
  int64_t umin = 0, umax = 0, wmin = 0, wmax = 0, NU = 0, NW = 0;
  std::vector<int64_t> claims;  // per local node, -1 free
  std::vector<int32_t> stamp, parent, dist;
  int32_t generation = 0;

  struct Tree {
    std::vector<std::array<int64_t, 3>> nodes;
    std::vector<std::pair<std::array<int64_t, 3>, std::array<int64_t, 3>>> edges;
  };
  std::vector<Tree> trees;

  int64_t local_index(int64_t I, int64_t J, int64_t W) const { return (fmod(I, K) * K + J) * K + fmod(W, K); }
  int64_t cover_index(int64_t I, int64_t J, int64_t W) const { return ((I - umin) * K + J) * NW + (W - wmin); }
  bool in_cover(int64_t I, int64_t J, int64_t W) const {
    return I >= umin && I < umin + NU && J >= 0 && J < K && W >= wmin && W < wmin + NW;
  }
  int64_t claim_at(int net, int64_t I, int64_t W) const {
    if (pc.nets[static_cast<size_t>(net)].periodic) return claim_key(net, 0, 0);
    return claim_key(net, fdiv(I, K), fdiv(W, K));
  }
  bool usable(int net, int64_t I, int64_t J, int64_t W) const {
    const int64_t li = local_index(I, J, W), claim = claim_at(net, I, W);
    if (auto it = reserved_node.find(li); it != reserved_node.end()) return it->second == claim;
    if (blocked[static_cast<size_t>(li)]) return false;
    return claims[static_cast<size_t>(li)] < 0 || claims[static_cast<size_t>(li)] == claim;
  }

  std::array<int64_t, 3> terminal_node(const Terminal& t) const {
    const Site s = anchors[static_cast<size_t>(t.element)] + pc.elements[static_cast<size_t>(t.element)].gadget.port(t.port).site;
    return {(s.x - 2) / 3 + t.du * K, (s.y - 2) / 3, (s.z - 2) / 3 + t.dw * K};
  }

  void claim_node(int net, const std::array<int64_t, 3>& c) {
    claims[static_cast<size_t>(local_index(c[0], c[1], c[2]))] = claim_at(net, c[0], c[2]);
  }

  // Shortest path from the tree to any goal; appends it to the tree.
  // A path through the cover may come back to a lattice node it already
  // used in another cube; such nodes are banned and the search repeated.
  absl::flat_hash_set<int64_t> banned;

  bool connect(int net, Tree& tree, const std::vector<std::array<int64_t, 3>>& goals) {
    banned.clear();
    for (int tries = 0; tries < 64; ++tries) {
      const int r = search(net, tree, goals);
      if (r >= 0) return r == 1;
    }
    return false;
  }

  // 1 found, 0 no path, -1 retry.
  int search(int net, Tree& tree, const std::vector<std::array<int64_t, 3>>& goals) {
    if (++generation == INT32_MAX) {
      std::fill(stamp.begin(), stamp.end(), 0);
      generation = 1;
    }
    absl::flat_hash_set<int64_t> goal_set;
    for (const auto& g : goals)
      if (in_cover(g[0], g[1], g[2])) goal_set.insert(cover_index(g[0], g[1], g[2]));
    if (goal_set.empty()) return 0;
    const bool single = goals.size() == 1;
    const auto& target = goals.front();
    auto h = [&](int64_t I, int64_t J, int64_t W) -> int32_t {
      if (!single) return 0;
      return static_cast<int32_t>(std::abs(I - target[0]) + std::abs(J - target[1]) + std::abs(W - target[2]));
    };
    using Item = std::pair<int32_t, int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    for (const auto& c : tree.nodes) {
      if (!in_cover(c[0], c[1], c[2])) continue;
      const int64_t ci = cover_index(c[0], c[1], c[2]);
      if (goal_set.contains(ci)) return 1;
      stamp[static_cast<size_t>(ci)] = generation;
      dist[static_cast<size_t>(ci)] = 0;
      parent[static_cast<size_t>(ci)] = -1;
      open.push({h(c[0], c[1], c[2]), ci});
    }
    auto decode = [&](int64_t ci) {
      const int64_t W = ci % NW + wmin, rest = ci / NW;
      return std::array<int64_t, 3>{rest / K + umin, rest % K, W};
    };
    int64_t found = -1;
    while (!open.empty()) {
      const auto [f, ci] = open.top();
      open.pop();
      const auto c = decode(ci);
      const int32_t g = dist[static_cast<size_t>(ci)];
      if (f > g + h(c[0], c[1], c[2])) continue;
      if (goal_set.contains(ci)) {
        found = ci;
        break;
      }
      for (const Site& d : kDirs3) {
        const int64_t I = c[0] + d.x, J = c[1] + d.y, W = c[2] + d.z;
        if (!in_cover(I, J, W) || !usable(net, I, J, W)) continue;
        const int64_t ni = cover_index(I, J, W);
        if (banned.contains(ni)) continue;
        const auto nis = static_cast<size_t>(ni);
        if (stamp[nis] == generation && dist[nis] <= g + 1) continue;
        stamp[nis] = generation;
        dist[nis] = g + 1;
        parent[nis] = static_cast<int32_t>(ci);
        open.push({g + 1 + h(I, J, W), ni});
      }
    }
    if (found < 0) return 0;
    absl::flat_hash_set<int64_t> seen;
    for (int64_t ci = found; ci >= 0; ci = parent[static_cast<size_t>(ci)]) {
      const auto c = decode(ci);
      if (!seen.insert(local_index(c[0], c[1], c[2])).second) {
        banned.insert(ci);
        return -1;
      }
    }
    for (int64_t ci = found; parent[static_cast<size_t>(ci)] >= 0; ci = parent[static_cast<size_t>(ci)]) {
      const auto c = decode(ci), p = decode(parent[static_cast<size_t>(ci)]);
      tree.nodes.push_back(c);
      tree.edges.push_back({p, c});
      claim_node(net, c);
    }
    return 1;
  }

  bool route() {
    umin = wmin = 0;
    umax = wmax = 0;
    for (const auto& net : pc.nets)
      for (const auto& t : net.terminals) {
        umin = std::min<int64_t>(umin, t.du);
        umax = std::max<int64_t>(umax, t.du);
        wmin = std::min<int64_t>(wmin, t.dw);
        wmax = std::max<int64_t>(wmax, t.dw);
      }
    umin = (umin - 1) * K;
    wmin = (wmin - 1) * K;
    NU = (umax + 2) * K - umin;
    NW = (wmax + 2) * K - wmin;
    const auto cover = static_cast<size_t>(NU * K * NW);
    stamp.assign(cover, 0);
    parent.assign(cover, -1);
    dist.assign(cover, 0);
    generation = 0;
    const auto local = static_cast<size_t>(K) * K * K;
    claims.assign(local, -1);

    std::vector<int> order(pc.nets.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto span = [&](int i) {
      const auto& net = pc.nets[static_cast<size_t>(i)];
      int lo = 0, hi = 0;
      for (const auto& t : net.terminals) {
        lo = std::min({lo, t.du, t.dw});
        hi = std::max({hi, t.du, t.dw});
      }
      return (net.periodic ? 100 : 0) + hi - lo;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const int sa = span(a), sb = span(b);
      if (sa != sb) return sa > sb;
      return pc.nets[static_cast<size_t>(a)].terminals.size() > pc.nets[static_cast<size_t>(b)].terminals.size();
    });

    trees.assign(pc.nets.size(), {});
    for (int ni : order) {
      const auto& net = pc.nets[static_cast<size_t>(ni)];
      Tree& tree = trees[static_cast<size_t>(ni)];
      std::vector<std::array<int64_t, 3>> targets;
      for (const auto& t : net.terminals) targets.push_back(terminal_node(t));
      size_t first = 0;
      for (size_t i = 0; i < net.terminals.size(); ++i)
        if (net.terminals[i].du == 0 && net.terminals[i].dw == 0) {
          first = i;
          break;
        }
      std::swap(targets[0], targets[first]);
      const auto root = targets[0];
      std::sort(targets.begin() + 1, targets.end(), [&](const auto& a, const auto& b) {
        auto d = [&](const auto& c) { return std::abs(c[0] - root[0]) + std::abs(c[1] - root[1]) + std::abs(c[2] - root[2]); };
        return d(a) < d(b);
      });
      tree.nodes.push_back(root);
      claim_node(ni, root);
      for (size_t i = 1; i < targets.size(); ++i)
        if (!connect(ni, tree, {targets[i]})) return false;
      for (const Site& f : net.fixed_nodes)
        if (!connect(ni, tree, {{f.x, f.y, f.z}})) return false;
      if (net.periodic) {
        for (const auto& shift : {std::array<int64_t, 3>{K, 0, 0}, std::array<int64_t, 3>{0, 0, K}}) {
          std::vector<std::array<int64_t, 3>> goals;
          for (const auto& c : tree.nodes) goals.push_back({c[0] + shift[0], c[1], c[2] + shift[2]});
          if (!connect(ni, tree, goals)) return false;
        }
      }
    }
    return true;
  }

  std::shared_ptr<PlacedTile> realize() const {
    auto t = std::make_shared<PlacedTile>();
    t->K = K;
    t->n = n;
    t->circuit = pc;
    t->anchors = anchors;
    for (size_t e = 0; e < pc.elements.size(); ++e)
      for (const auto& [f, c] : shapes[e].footprint) {
        TileSite ts;
        ts.chips = static_cast<int8_t>(c);
        ts.element = static_cast<int32_t>(e);
        if (!t->sites.try_emplace(anchors[e] + f, ts).second) throw Error("placement overlap");
      }
    auto fine = [&](int64_t I) { return fdiv(I, K) * n + 2 + 3 * fmod(I, K); };
    for (size_t ni = 0; ni < trees.size(); ++ni) {
      const bool periodic = pc.nets[ni].periodic;
      auto lay = [&](const Site& cover) {
        const Site local{fmod(cover.x, n), cover.y, fmod(cover.z, n)};
        TileSite ts;
        ts.chips = 5;
        ts.net = static_cast<int32_t>(ni);
        if (!periodic) {
          ts.du = static_cast<int8_t>(fdiv(cover.x, n));
          ts.dw = static_cast<int8_t>(fdiv(cover.z, n));
        }
        auto [it, inserted] = t->sites.try_emplace(local, ts);
        if (inserted) return;
        if (it->second.net == ts.net && it->second.du == ts.du && it->second.dw == ts.dw) return;
        if (it->second.element >= 0) return;  // port site of this net's gadget
        throw Error("route overlap at " + to_string(local));
      };
      const auto& tree = trees[ni];
      for (const auto& c : tree.nodes) {
        const Site s{fine(c[0]), 2 + 3 * c[1], fine(c[2])};
        if (!t->sites.contains(Site{fmod(s.x, n), s.y, fmod(s.z, n)}) ||
            t->sites.at(Site{fmod(s.x, n), s.y, fmod(s.z, n)}).element < 0)
          lay(s);
      }
      for (const auto& [a, b] : tree.edges) {
        Site p{fine(a[0]), 2 + 3 * a[1], fine(a[2])};
        const Site q{fine(b[0]), 2 + 3 * b[1], fine(b[2])};
        const Site step{(q.x > p.x) - (q.x < p.x), (q.y > p.y) - (q.y < p.y), (q.z > p.z) - (q.z < p.z)};
        for (p = p + step; p != q; p = p + step) lay(p);
      }
    }
    for (const auto& net : pc.nets) {
      if (net.periodic) {
        const auto& c = trees[static_cast<size_t>(&net - pc.nets.data())].nodes.front();
        t->probe.push_back({{fmod(fine(c[0]), n), 2 + 3 * c[1], fmod(fine(c[2]), n)}, {0, 0}});
        continue;
      }
      const Terminal& term = net.terminals.front();
      const Site s = anchors[static_cast<size_t>(term.element)] +
                     pc.elements[static_cast<size_t>(term.element)].gadget.port(term.port).site;
      t->probe.push_back({s, {term.du, term.dw}});
    }
    for (const auto& tr : trees) t->route_nodes += static_cast<int64_t>(tr.nodes.size());
    return t;
  }
};

int start_size(const std::vector<Shape>& shapes, int pitch) {
  double volume = 0;
  for (const auto& s : shapes) {
    const double du = static_cast<double>(s.box_hi.x - s.box_lo.x + 2), dv = static_cast<double>(s.box_hi.y - s.box_lo.y + 2);
    volume += du * dv * pitch;
  }
  return std::max(8, static_cast<int>(std::ceil(std::cbrt(2.0 * volume))));
}

}  // namespace

const TileSite* PlacedTile::at(const Site& local) const {
  auto it = sites.find(local);
  return it == sites.end() ? nullptr : &it->second;
}

Site PlacedTile::net_site(int net, int64_t x, int64_t t) const {
  const auto& [p, off] = probe.at(static_cast<size_t>(net));
  return {n * (x + off.first) + p.x, p.y, n * (t + off.second) + p.z};
}

std::shared_ptr<const PlacedTile> place_and_route(const PhysCircuit& c, const PlaceOptions& opt) {
  std::vector<Shape> shapes;
  std::map<std::pair<int, int>, size_t> cache;
  std::vector<Shape> distinct;
  for (const auto& e : c.elements) {
    const std::pair<int, int> key{static_cast<int>(e.kind), e.arity};
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, distinct.size()).first;
      distinct.push_back(make_shape(e.gadget));
    }
    shapes.push_back(distinct[it->second]);
  }
  std::map<std::pair<int, std::string>, int64_t> port_claim;
  for (size_t ni = 0; ni < c.nets.size(); ++ni)
    for (const auto& t : c.nets[ni].terminals) {
      const int64_t key = c.nets[ni].periodic ? claim_key(static_cast<int>(ni), 0, 0)
                                              : claim_key(static_cast<int>(ni), t.du, t.dw);
      if (!port_claim.emplace(std::pair{t.element, t.port}, key).second)
        throw Error("port " + t.port + " is attached twice");
    }
  for (size_t e = 0; e < c.elements.size(); ++e)
    for (const auto& p : c.elements[e].gadget.ports)
      if (!port_claim.contains({static_cast<int>(e), p.name})) throw Error("port " + p.name + " is unconnected");

  int K = opt.K > 0 ? opt.K : start_size(shapes, opt.layer_pitch);
  for (int attempt = 1;; ++attempt) {
    const int64_t n = 3 * int64_t{K} + 1;
    if (n > opt.max_n) throw Error("layout does not fit below the tile side cap " + std::to_string(opt.max_n));
    Attempt a(K, n, c, opt, shapes, port_claim);
    if (a.place() && a.route()) {
      auto t = a.realize();
      t->attempts = attempt;
      return t;
    }
    K = std::max(K + 1, static_cast<int>(std::ceil(K * opt.growth)));
  }
}

VertexClass vertex_class(const Site& s, int64_t n) {
  const int on = (fmod(s.x, n) == 0) + (fmod(s.y, n) == 0) + (fmod(s.z, n) == 0);
  return on == 0 ? VertexClass::Body : on == 1 ? VertexClass::Face : on == 2 ? VertexClass::Edge : VertexClass::Corner;
}

AuditReport audit(const PlacedTile& t) {
  AuditReport r;
  const int64_t n = t.n;
  auto wrap = [&](const Site& s) { return Site{fmod(s.x, n), fmod(s.y, n), fmod(s.z, n)}; };
  auto fail = [&](std::string msg) {
    r.ok = false;
    if (r.problems.size() < 20) r.problems.push_back(std::move(msg));
  };
  // Port sites and the route instance allowed to touch them.
  absl::flat_hash_map<Site, std::vector<std::array<int, 3>>> ports;
  for (size_t ni = 0; ni < t.circuit.nets.size(); ++ni) {
    const auto& net = t.circuit.nets[ni];
    for (const auto& term : net.terminals) {
      const Site s = t.anchors[static_cast<size_t>(term.element)] +
                     t.circuit.elements[static_cast<size_t>(term.element)].gadget.port(term.port).site;
      ports[s].push_back({static_cast<int>(ni), net.periodic ? 0 : term.du, net.periodic ? 0 : term.dw});
    }
  }
  absl::flat_hash_map<Site, int> deposits;
  for (const auto& [s, ts] : t.sites) {
    if (ts.chips < 0 || ts.chips > 5) fail("chip count out of range at " + to_string(s));
    if (vertex_class(s, n) == VertexClass::Edge || vertex_class(s, n) == VertexClass::Corner)
      fail("footprint on an edge vertex at " + to_string(s));
    for (const Site& d : kDirs3) {
      const Site nb = wrap(s + d);
      const TileSite* o = t.at(nb);
      if (!o) {
        ++deposits[nb];
        continue;
      }
      if (ts.element >= 0 && o->element >= 0) {
        if (ts.element != o->element) fail("gadgets touch at " + to_string(s));
      } else if (ts.element < 0 && o->element < 0) {
        // Same instance: the neighbour's cube shift cancels its owner offset.
        const int64_t su = fdiv(s.x + d.x, n), sw = fdiv(s.z + d.z, n);
        const bool periodic = ts.net == o->net && t.circuit.nets[static_cast<size_t>(ts.net)].periodic;
        if (ts.net != o->net || (!periodic && (ts.du != o->du - su || ts.dw != o->dw - sw)))
          fail("routes touch at " + to_string(s));
      } else {
        const TileSite& route = ts.element < 0 ? ts : *o;
        const Site port = ts.element < 0 ? nb : s;
        bool ok = false;
        if (auto it = ports.find(port); it != ports.end())
          for (const auto& p : it->second) ok = ok || (p[0] == route.net && p[1] == route.du && p[2] == route.dw);
        if (!ok) fail("route touches a gadget away from its port at " + to_string(port));
      }
    }
  }
  for (const auto& [s, k] : deposits) {
    switch (vertex_class(s, n)) {
      case VertexClass::Body:
        r.max_body_deposit = std::max<int64_t>(r.max_body_deposit, k);
        if (k > 2) fail("body site " + to_string(s) + " next to " + std::to_string(k) + " footprint sites");
        break;
      case VertexClass::Face:
        r.max_face_deposit = std::max<int64_t>(r.max_face_deposit, k);
        if (k > 1) fail("face site " + to_string(s) + " next to " + std::to_string(k) + " footprint sites");
        break;
      default: fail("edge or corner site " + to_string(s) + " next to the footprint");
    }
  }
  return r;
}

}  // namespace sandpile
