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

#include "sandpile/periodic.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/hash/hash.h>

#include <algorithm>
#include <sstream>

namespace sandpile {
namespace {

int64_t mod(int64_t v, int64_t n) { return ((v % n) + n) % n; }

}  // namespace

PeriodicBackground::PeriodicBackground(int64_t nx, int64_t ny, int64_t nz, std::vector<int64_t> pattern)
    : nx_(nx), ny_(ny), nz_(nz), pattern_(std::move(pattern)) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error("periods must be >= 1");
  if (pattern_.size() != static_cast<size_t>(nx * ny * nz))
    throw Error("pattern has " + std::to_string(pattern_.size()) + " entries, expected " +
                std::to_string(nx * ny * nz));
  for (int64_t c : pattern_)
    if (c < 0) throw Error("pattern entries must be non-negative");
}

size_t PeriodicBackground::index(int64_t x, int64_t y, int64_t z) const {
  return static_cast<size_t>((mod(z, nz_) * ny_ + mod(y, ny_)) * nx_ + mod(x, nx_));
}

int64_t PeriodicBackground::max_entry() const {
  return *std::max_element(pattern_.begin(), pattern_.end());
}

Background PeriodicBackground::as_background() const {
  return [bg = *this](const Site& s) { return bg.at(s); };
}

Vertex TorusState::vertex(const Site& s) const {
  return static_cast<Vertex>((mod(s.x, nx) * ny + mod(s.y, ny)) * nz + mod(s.z, nz));
}

TorusState to_torus(const PeriodicBackground& bg) {
  TorusState t;
  t.nx = bg.nx();
  t.ny = bg.ny();
  t.nz = bg.nz();
  t.graph = Graph::torus(t.nx, t.ny, t.nz);
  t.chips.assign(t.graph.size(), 0);
  for (int64_t x = 0; x < t.nx; ++x)
    for (int64_t y = 0; y < t.ny; ++y)
      for (int64_t z = 0; z < t.nz; ++z) t.chips[t.vertex({x, y, z})] = bg.at({x, y, z});
  t.odometer.assign(t.graph.size(), 0);
  return t;
}

char verdict_char(Verdict v) {
  switch (v) {
    case Verdict::No: return 'N';
    case Verdict::Yes: return 'Y';
    case Verdict::Conditional: return '?';
  }
  return '?';
}

PeriodicDecision decide_periodic(const PeriodicBackground& bg) {
  TorusState t = to_torus(bg);
  PeriodicDecision d;
  const Vertex origin = t.vertex({0, 0, 0});
  auto unstable = [&] {
    std::vector<Vertex> u;
    for (size_t v = 0; v < t.graph.size(); ++v)
      if (is_unstable(t.graph, t.chips, static_cast<Vertex>(v))) u.push_back(static_cast<Vertex>(v));
    return u;
  };

  auto first = unstable();
  if (first.empty()) return d;  // (N, N, N)

  struct Seen {
    int64_t round;
    int64_t total;
    Odometer odometer;
  };
  absl::flat_hash_map<Chips, Seen> history;
  int64_t total = 0;
  int64_t round = 0;
  history.emplace(t.chips, Seen{0, 0, t.odometer});
  for (auto u = first; !u.empty(); u = unstable()) {
    for (Vertex v : u) t.chips[v] -= t.graph.degree(v);
    for (Vertex v : u) {
      for (Vertex w : t.graph.out(v)) ++t.chips[w];
      ++t.odometer[v];
    }
    total += static_cast<int64_t>(u.size());
    ++round;
    auto [it, fresh] = history.try_emplace(t.chips, Seen{round, total, t.odometer});
    if (!fresh) {
      d.behaviour = PeriodicDecision::Behaviour::Loops;
      d.trace_length = round;
      d.loop_start = it->second.round;
      d.loop_length = round - it->second.round;
      d.loop_odometer_before = it->second.total;
      d.loop_odometer_after = total;
      d.loop_topplings.resize(t.odometer.size());
      for (size_t v = 0; v < t.odometer.size(); ++v)
        d.loop_topplings[v] = t.odometer[v] - it->second.odometer[v];
      d.origin_fired = t.odometer[origin] > 0;
      d.vertex = d.global = d.local = Verdict::Yes;
      return d;
    }
  }
  d.behaviour = PeriodicDecision::Behaviour::Stabilizes;
  d.trace_length = round;
  d.origin_fired = t.odometer[origin] > 0;
  // "If the origin fired" row, resolved here.
  d.vertex = d.origin_fired ? Verdict::Yes : Verdict::No;
  d.global = Verdict::Yes;
  d.local = Verdict::No;
  return d;
}

PFRun pf_simulate(const PFConfiguration& cfg, int64_t budget, const std::optional<Box>& window) {
  if (cfg.background.max_entry() >= 6)
    throw Error("background is unstable; p+f simulation needs a stable background "
                "(use decide-periodic for unstable periodic backgrounds)");
  PFRun r{SparseLattice(3, cfg.background.as_background()), {}, 0};
  for (const auto& [s, k] : cfg.delta) {
    if (k < 1) throw Error("delta entries must add at least one chip");
    r.lattice.add(s, k);
  }
  r.run = r.lattice.stabilize(budget, window);
  r.origin_topplings = r.lattice.odometer({0, 0, 0});
  return r;
}

std::string emit_pf(const PFConfiguration& cfg) {
  const auto& bg = cfg.background;
  std::ostringstream os;
  os << "periods " << bg.nx() << ' ' << bg.ny() << ' ' << bg.nz() << '\n' << "pattern\n";
  for (int64_t z = 0; z < bg.nz(); ++z)
    for (int64_t y = 0; y < bg.ny(); ++y) {
      for (int64_t x = 0; x < bg.nx(); ++x) os << (x ? " " : "") << bg.at({x, y, z});
      os << '\n';
    }
  os << "delta\n";
  for (const auto& [s, k] : cfg.delta) os << s.x << ' ' << s.y << ' ' << s.z << " +" << k << '\n';
  return os.str();
}

namespace {

struct Token {
  std::string text;
  size_t column;
};

std::vector<Token> split(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

[[noreturn]] void fail(size_t line, size_t col, const std::string& what) {
  throw Error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
}

int64_t integer(const Token& t, size_t line, bool plus_required = false) {
  std::string s = t.text;
  if (plus_required) {
    if (s.empty() || s[0] != '+') fail(line, t.column, "expected '+k', got '" + s + "'");
    s = s.substr(1);
  }
  try {
    size_t used = 0;
    int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(line, t.column, "expected an integer, got '" + t.text + "'");
  }
}

}  // namespace

PFConfiguration parse_pf(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  enum { Header, PatternKeyword, Pattern, DeltaKeyword, Delta } stage = Header;
  int64_t nx = 0, ny = 0, nz = 0;
  std::vector<int64_t> pattern;
  PFConfiguration cfg;
  while (std::getline(in, raw)) {
    ++lineno;
    auto tok = split(raw);
    if (tok.empty()) continue;
    switch (stage) {
      case Header:
        if (tok[0].text != "periods" || tok.size() != 4)
          fail(lineno, tok[0].column, "expected 'periods NX NY NZ'");
        nx = integer(tok[1], lineno);
        ny = integer(tok[2], lineno);
        nz = integer(tok[3], lineno);
        if (nx < 1 || ny < 1 || nz < 1) fail(lineno, tok[1].column, "periods must be >= 1");
        stage = PatternKeyword;
        break;
      case PatternKeyword:
        if (tok[0].text != "pattern" || tok.size() != 1) fail(lineno, tok[0].column, "expected 'pattern'");
        stage = Pattern;
        break;
      case Pattern:
        if (static_cast<int64_t>(tok.size()) != nx)
          fail(lineno, tok[0].column, "pattern row needs " + std::to_string(nx) + " entries");
        for (const auto& t : tok) {
          int64_t v = integer(t, lineno);
          if (v < 0) fail(lineno, t.column, "chip counts must be non-negative");
          pattern.push_back(v);
        }
        if (static_cast<int64_t>(pattern.size()) == nx * ny * nz) stage = DeltaKeyword;
        break;
      case DeltaKeyword:
        if (tok[0].text != "delta" || tok.size() != 1) fail(lineno, tok[0].column, "expected 'delta'");
        stage = Delta;
        break;
      case Delta: {
        if (tok.size() != 4) fail(lineno, tok[0].column, "expected 'x y z +k'");
        Site s{integer(tok[0], lineno), integer(tok[1], lineno), integer(tok[2], lineno)};
        int64_t k = integer(tok[3], lineno, true);
        if (k < 1) fail(lineno, tok[3].column, "delta must add at least one chip");
        if (!packable(s)) fail(lineno, tok[0].column, "site outside the representable lattice");
        cfg.delta[s] += k;
        break;
      }
    }
  }
  if (stage != Delta && stage != DeltaKeyword)
    fail(lineno + 1, 1, "unexpected end of input");
  cfg.background = PeriodicBackground(nx, ny, nz, std::move(pattern));
  return cfg;
}

}  // namespace sandpile
