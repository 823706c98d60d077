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

#include "sandpile/abelian2d.hpp"

#include <algorithm>
#include <sstream>

namespace sandpile::net2d {

Node& Network::at(int64_t x, int64_t y) { return nodes_[pack({x, y, 0})]; }

Node Network::node(int64_t x, int64_t y) const {
  auto it = nodes_.find(pack({x, y, 0}));
  return it == nodes_.end() ? Node{} : it->second;
}

void Network::set_normal(int64_t x, int64_t y, int64_t chips) {
  Node& n = at(x, y);
  n = Node{};
  n.chips = chips;
  enqueue(x, y);
}

void Network::set_crossover(int64_t x, int64_t y, int64_t vertical, int64_t horizontal) {
  Node& n = at(x, y);
  n = Node{};
  n.crossover = true;
  n.vertical = vertical;
  n.horizontal = horizontal;
  enqueue(x, y);
}

void Network::deliver(int64_t x, int64_t y, bool horizontal) {
  Node& n = at(x, y);
  if (!n.crossover) ++n.chips;
  else if (horizontal) ++n.horizontal;
  else ++n.vertical;
  enqueue(x, y);
}

std::optional<Channel> Network::unstable_channel(int64_t x, int64_t y) const {
  const Node n = node(x, y);
  if (!n.crossover) return n.chips >= 4 ? std::optional{Channel::Normal} : std::nullopt;
  if (n.horizontal >= 2) return Channel::Horizontal;
  if (n.vertical >= 2) return Channel::Vertical;
  return std::nullopt;
}

void Network::enqueue(int64_t x, int64_t y) {
  if (unstable_channel(x, y)) work_.push_back(pack({x, y, 0}));
}

void Network::fire(int64_t x, int64_t y, Channel c) {
  Node& n = at(x, y);
  switch (c) {
    case Channel::Normal:
      if (n.crossover) throw Error("normal firing of a crossover vertex");
      n.chips -= 4;
      ++n.fired;
      deliver(x + 1, y, true);
      deliver(x - 1, y, true);
      deliver(x, y + 1, false);
      deliver(x, y - 1, false);
      break;
    case Channel::Vertical:
      if (!n.crossover) throw Error("vertical firing of a normal vertex");
      n.vertical -= 2;
      ++n.fired_vertical;
      deliver(x, y + 1, false);
      deliver(x, y - 1, false);
      break;
    case Channel::Horizontal:
      if (!n.crossover) throw Error("horizontal firing of a normal vertex");
      n.horizontal -= 2;
      ++n.fired_horizontal;
      deliver(x + 1, y, true);
      deliver(x - 1, y, true);
      break;
  }
  enqueue(x, y);
}

Network::Run Network::stabilize(int64_t budget, std::mt19937_64* shuffle) {
  Run run;
  size_t head = 0;
  while (head < work_.size()) {
    if (shuffle) {
      std::uniform_int_distribution<size_t> pick(head, work_.size() - 1);
      std::swap(work_[head], work_[pick(*shuffle)]);
    }
    const Site s = unpack(work_[head++]);
    const auto c = unstable_channel(s.x, s.y);
    if (!c) continue;
    if (run.firings >= budget) {
      run.outcome = LatticeOutcome::BudgetExhausted;
      --head;
      break;
    }
    fire(s.x, s.y, *c);
    ++run.firings;
  }
  work_.erase(work_.begin(), work_.begin() + static_cast<std::ptrdiff_t>(head));
  return run;
}

std::string Network::grid(int64_t xlo, int64_t xhi, int64_t ylo, int64_t yhi) const {
  std::ostringstream os;
  for (int64_t y = yhi; y >= ylo; --y) {
    for (int64_t x = xlo; x <= xhi; ++x) {
      if (x != xlo) os << ' ';
      const Node n = node(x, y);
      if (n.crossover) os << n.horizontal << '/' << n.vertical;
      else if (n.chips == 0) os << '.';
      else os << n.chips;
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::pair<Site, Node>> Network::nodes() const {
  std::vector<std::pair<Site, Node>> out;
  for (const auto& [k, n] : nodes_) out.emplace_back(unpack(k), n);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::string Network::csv() const {
  std::ostringstream os;
  for (const auto& [s, n] : nodes()) {
    if (n.crossover) os << s.x << ',' << s.y << ",0," << n.horizontal << '/' << n.vertical << ",X\n";
    else if (n.chips != 0) os << s.x << ',' << s.y << ",0," << n.chips << ",N\n";
  }
  return os.str();
}

}  // namespace sandpile::net2d
