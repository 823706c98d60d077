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

#include "sandpile/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <queue>
#include <set>
#include <sstream>

namespace sandpile {

std::string to_string(const Site& s) {
  return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + "," + std::to_string(s.z) + ")";
}

void Graph::add_arc(Vertex from, Vertex to) {
  check(to);
  adj_.at(check(from)).push_back(to);
}

void Graph::add_edge(Vertex a, Vertex b) {
  add_arc(a, b);
  add_arc(b, a);
}

size_t Graph::component_count() const {
  // Weak connectivity.
  std::vector<std::vector<Vertex>> und(adj_.size());
  for (size_t v = 0; v < adj_.size(); ++v)
    for (Vertex w : adj_[v]) {
      und[v].push_back(w);
      und[w].push_back(static_cast<Vertex>(v));
    }
  std::vector<bool> seen(adj_.size(), false);
  size_t count = 0;
  for (size_t s = 0; s < adj_.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      size_t v = stack.back();
      stack.pop_back();
      for (Vertex w : und[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
  }
  return count;
}

bool Graph::is_simple_undirected() const {
  std::set<std::pair<Vertex, Vertex>> arcs;
  for (size_t v = 0; v < adj_.size(); ++v)
    for (Vertex w : adj_[v]) {
      if (w == static_cast<Vertex>(v)) return false;
      if (!arcs.emplace(static_cast<Vertex>(v), w).second) return false;
    }
  for (const auto& [a, b] : arcs)
    if (!arcs.contains({b, a})) return false;
  return true;
}

size_t Graph::undirected_edge_count() const {
  size_t arcs = 0;
  for (const auto& l : adj_) arcs += l.size();
  return arcs / 2;
}

int64_t Graph::diameter() const {
  int64_t best = 0;
  for (size_t s = 0; s < adj_.size(); ++s) {
    std::vector<int64_t> dist(adj_.size(), -1);
    std::queue<size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      size_t v = q.front();
      q.pop();
      best = std::max(best, dist[v]);
      for (Vertex w : adj_[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
    }
  }
  return best;
}

Graph Graph::torus(int64_t nx, int64_t ny, int64_t nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error("torus periods must be >= 1");
  Graph g(static_cast<size_t>(nx * ny * nz));
  auto idx = [&](int64_t x, int64_t y, int64_t z) {
    auto m = [](int64_t v, int64_t n) { return ((v % n) + n) % n; };
    return static_cast<Vertex>((m(x, nx) * ny + m(y, ny)) * nz + m(z, nz));
  };
  for (int64_t x = 0; x < nx; ++x)
    for (int64_t y = 0; y < ny; ++y)
      for (int64_t z = 0; z < nz; ++z)
        for (const Site& d : kDirs3) g.add_arc(idx(x, y, z), idx(x + d.x, y + d.y, z + d.z));
  return g;
}

bool is_unstable(const Graph& g, const Chips& c, Vertex v) {
  return c.at(static_cast<size_t>(v)) >= g.degree(v);
}

void topple(const Graph& g, Chips& c, Vertex v) {
  c.at(static_cast<size_t>(v)) -= g.degree(v);
  for (Vertex w : g.out(v)) ++c[static_cast<size_t>(w)];
}

StabilizeResult stabilize(const Graph& g, Chips chips, int64_t budget, std::mt19937_64* shuffle) {
  if (budget < 0) throw Error("budget must be non-negative");
  if (chips.size() != g.size()) throw Error("configuration size does not match graph");
  StabilizeResult r;
  r.odometer.assign(g.size(), 0);
  std::deque<Vertex> work;
  std::vector<bool> queued(g.size(), false);
  for (size_t v = 0; v < g.size(); ++v)
    if (is_unstable(g, chips, static_cast<Vertex>(v))) {
      work.push_back(static_cast<Vertex>(v));
      queued[v] = true;
    }
  while (!work.empty()) {
    if (shuffle) {
      std::uniform_int_distribution<size_t> pick(0, work.size() - 1);
      std::swap(work[pick(*shuffle)], work.front());
    }
    Vertex v = work.front();
    work.pop_front();
    queued[v] = false;
    if (!is_unstable(g, chips, v)) continue;
    if (r.topplings >= budget) {
      r.outcome = Outcome::BudgetExhausted;
      break;
    }
    topple(g, chips, v);
    ++r.odometer[v];
    ++r.topplings;
    if (is_unstable(g, chips, v)) {
      work.push_back(v);
      queued[v] = true;
    }
    for (Vertex w : g.out(v))
      if (!queued[w] && is_unstable(g, chips, w)) {
        work.push_back(w);
        queued[w] = true;
      }
  }
  r.chips = std::move(chips);
  return r;
}

SequenceResult run_sequence(const Graph& g, Chips chips, const TopplingSequence& seq) {
  SequenceResult r;
  for (Vertex v : seq) {
    if (!g.contains(v)) throw Error("vertex " + std::to_string(v) + " not in graph");
    if (!is_unstable(g, chips, v)) r.legal = false;
    topple(g, chips, v);
  }
  r.chips = std::move(chips);
  return r;
}

FiniteDecision decide_finite_halting(const Graph& g, const Chips& chips) {
  if (!g.is_simple_undirected())
    throw Error("unsupported graph class: the 2nmd cap needs a simple undirected graph");
  FiniteDecision d;
  const auto n = static_cast<int64_t>(g.size());
  const auto m = static_cast<int64_t>(g.undirected_edge_count());
  d.cap = 2 * n * m * g.diameter();
  d.run = stabilize(g, chips, d.cap + 1);
  d.halts = d.run.outcome == Outcome::Stable;
  return d;
}

namespace {

[[noreturn]] void graph_fail(size_t line, size_t col, const std::string& what) {
  throw Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

}  // namespace

GraphConfig parse_graph_config(const std::string& text) {
  GraphConfig cfg;
  std::istringstream in(text);
  std::string raw;
  bool sized = false, has_chips = false;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::vector<std::pair<std::string, size_t>> tok;
    for (size_t i = 0; i < raw.size();) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i >= raw.size() || raw[i] == '#') break;
      size_t j = i;
      while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
      tok.emplace_back(raw.substr(i, j - i), i + 1);
      i = j;
    }
    if (tok.empty()) continue;
    auto num = [&](size_t k) {
      const auto& [t, col] = tok[k];
      size_t used = 0;
      int64_t v = 0;
      try {
        v = std::stoll(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != t.size()) graph_fail(lineno, col, "expected an integer, got '" + t + "'");
      return v;
    };
    const std::string& key = tok[0].first;
    if (key == "vertices") {
      if (sized) graph_fail(lineno, tok[0].second, "vertex count given twice");
      if (tok.size() != 2) graph_fail(lineno, tok[0].second, "expected 'vertices N'");
      const int64_t n = num(1);
      if (n < 1) graph_fail(lineno, tok[1].second, "need at least one vertex");
      cfg.graph = Graph(static_cast<size_t>(n));
      cfg.chips.assign(static_cast<size_t>(n), 0);
      sized = true;
    } else if (key == "edge" || key == "arc") {
      if (!sized) graph_fail(lineno, tok[0].second, "'vertices N' must come first");
      if (tok.size() != 3) graph_fail(lineno, tok[0].second, "expected '" + key + " A B'");
      const int64_t a = num(1), b = num(2);
      for (size_t k : {size_t{1}, size_t{2}}) {
        const int64_t v = k == 1 ? a : b;
        if (v < 0 || v >= static_cast<int64_t>(cfg.graph.size())) graph_fail(lineno, tok[k].second, "vertex out of range");
      }
      if (key == "edge")
        cfg.graph.add_edge(static_cast<Vertex>(a), static_cast<Vertex>(b));
      else
        cfg.graph.add_arc(static_cast<Vertex>(a), static_cast<Vertex>(b));
    } else if (key == "chips") {
      if (!sized) graph_fail(lineno, tok[0].second, "'vertices N' must come first");
      if (tok.size() != cfg.graph.size() + 1)
        graph_fail(lineno, tok[0].second, "expected " + std::to_string(cfg.graph.size()) + " chip counts");
      for (size_t k = 1; k < tok.size(); ++k) {
        cfg.chips[k - 1] = num(k);
        if (cfg.chips[k - 1] < 0) graph_fail(lineno, tok[k].second, "chip counts must be non-negative");
      }
      has_chips = true;
    } else {
      graph_fail(lineno, tok[0].second, "unknown keyword '" + key + "'");
    }
  }
  if (!sized) graph_fail(lineno + 1, 1, "missing 'vertices N'");
  if (!has_chips) graph_fail(lineno + 1, 1, "missing 'chips' line");
  return cfg;
}

std::string emit_graph_config(const GraphConfig& g) {
  std::ostringstream out;
  out << "vertices " << g.graph.size() << '\n';
  const bool undirected = g.graph.is_simple_undirected();
  for (Vertex v = 0; v < static_cast<Vertex>(g.graph.size()); ++v)
    for (Vertex w : g.graph.out(v)) {
      if (!undirected)
        out << "arc " << v << ' ' << w << '\n';
      else if (v < w)
        out << "edge " << v << ' ' << w << '\n';
    }
  out << "chips";
  for (int64_t c : g.chips) out << ' ' << c;
  out << '\n';
  return out.str();
}

}  // namespace sandpile
