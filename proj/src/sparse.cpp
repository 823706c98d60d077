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

#include "sandpile/sparse.hpp"

#include <algorithm>
#include <sstream>

namespace sandpile {
namespace {

constexpr uint64_t kX = uint64_t{1} << 42;
constexpr uint64_t kY = uint64_t{1} << 21;
constexpr uint64_t kZ = 1;
constexpr std::array<uint64_t, 6> kPackedDirs{kX, -kX, kY, -kY, kZ, -kZ};

}  // namespace

int64_t Box::margin(const Site& s) const {
  return std::min({s.x - lo.x, hi.x - s.x, s.y - lo.y, hi.y - s.y, s.z - lo.z, hi.z - s.z});
}

std::string to_string(LatticeOutcome o) {
  switch (o) {
    case LatticeOutcome::Stable: return "Stable";
    case LatticeOutcome::BudgetExhausted: return "BudgetExhausted";
    case LatticeOutcome::WindowExceeded: return "WindowExceeded";
  }
  return "?";
}

SparseLattice::SparseLattice(int dim, Background bg) : dim_(dim), bg_(std::move(bg)) {
  if (dim != 2 && dim != 3) throw Error("lattice dimension must be 2 or 3");
}

SparseLattice::Cell& SparseLattice::cell(uint64_t key) {
  auto [it, inserted] = cells_.try_emplace(key);
  if (inserted) {
    const Site s = unpack(key);
    if (!packable(s) || std::abs(s.x) > kCoordLimit - 4 || std::abs(s.y) > kCoordLimit - 4 ||
        std::abs(s.z) > kCoordLimit - 4)
      throw Error("site " + to_string(s) + " outside the representable lattice");
    it->second.chips = static_cast<int32_t>(bg_(s));
  }
  return it->second;
}

int64_t SparseLattice::chips(const Site& s) const {
  if (auto it = cells_.find(pack(s)); it != cells_.end()) return it->second.chips;
  return bg_(s);
}

int64_t SparseLattice::odometer(const Site& s) const {
  if (auto it = cells_.find(pack(s)); it != cells_.end()) return it->second.odo;
  return 0;
}

void SparseLattice::enqueue_if_unstable(uint64_t key, Cell& c) {
  if (c.chips >= degree() && !c.queued) {
    work_.push_back(key);
    c.queued = true;
  }
}

void SparseLattice::add(const Site& s, int64_t k) {
  if (!packable(s)) throw Error("site " + to_string(s) + " outside the representable lattice");
  const uint64_t key = pack(s);
  Cell& c = cell(key);
  c.chips = static_cast<int32_t>(c.chips + k);
  enqueue_if_unstable(key, c);
}

void SparseLattice::set(const Site& s, int64_t k) {
  if (!packable(s)) throw Error("site " + to_string(s) + " outside the representable lattice");
  const uint64_t key = pack(s);
  Cell& c = cell(key);
  c.chips = static_cast<int32_t>(k);
  enqueue_if_unstable(key, c);
}

void SparseLattice::topple(const Site& s) {
  const uint64_t key = pack(s);
  cell(key).chips -= static_cast<int32_t>(degree());
  for (int d = 0; d < degree(); ++d) {
    const uint64_t nk = key + kPackedDirs[d];
    Cell& n = cell(nk);
    ++n.chips;
    enqueue_if_unstable(nk, n);
  }
}

LatticeRun SparseLattice::stabilize(int64_t budget, const std::optional<Box>& window,
                                    std::mt19937_64* shuffle) {
  if (budget < 0) throw Error("budget must be non-negative");
  LatticeRun run;
  const int deg = static_cast<int>(degree());
  while (!work_.empty()) {
    if (shuffle) {
      std::uniform_int_distribution<size_t> pick(0, work_.size() - 1);
      std::swap(work_[pick(*shuffle)], work_.front());
    }
    const uint64_t key = work_.front();
    auto it = cells_.find(key);
    if (it->second.chips < deg) {
      it->second.queued = false;
      work_.pop_front();
      continue;
    }
    if (run.topplings >= budget) {
      run.outcome = LatticeOutcome::BudgetExhausted;
      break;
    }
    if (window && window->margin(unpack(key)) < 2) {
      run.outcome = LatticeOutcome::WindowExceeded;
      run.diagnostic = "toppling at " + to_string(unpack(key)) +
                       " is within 2 sites of the materialization window";
      break;
    }
    work_.pop_front();
    Cell& c = it->second;
    c.queued = false;
    // Topple as many times as the count allows; each firing is one unit of budget.
    int64_t times = 1;
    if (!shuffle) times = std::min<int64_t>(c.chips / deg, budget - run.topplings);
    c.chips -= static_cast<int32_t>(times * deg);
    c.odo += static_cast<uint32_t>(times);
    if (watching_ && key == watch_key_ && watch_step_ < 0) watch_step_ = total_topplings_ + 1;
    run.topplings += times;
    total_topplings_ += times;
    if (c.chips >= deg) {
      c.queued = true;
      work_.push_back(key);
    }
    for (int d = 0; d < deg; ++d) {
      const uint64_t nk = key + kPackedDirs[d];
      Cell& n = cell(nk);
      n.chips = static_cast<int32_t>(n.chips + times);
      if (n.chips >= deg && !n.queued) {
        n.queued = true;
        work_.push_back(nk);
      }
    }
  }
  return run;
}

int64_t SparseLattice::max_odometer() const {
  int64_t m = 0;
  for (const auto& [k, c] : cells_) m = std::max<int64_t>(m, c.odo);
  return m;
}

std::vector<std::pair<Site, int64_t>> SparseLattice::odometer_entries() const {
  std::vector<std::pair<Site, int64_t>> out;
  for (const auto& [k, c] : cells_)
    if (c.odo) out.emplace_back(unpack(k), c.odo);
  std::sort(out.begin(), out.end());
  return out;
}

std::string SparseLattice::export_csv(const Box& box) const {
  std::ostringstream os;
  for (int64_t z = box.lo.z; z <= box.hi.z; ++z)
    for (int64_t y = box.hi.y; y >= box.lo.y; --y)
      for (int64_t x = box.lo.x; x <= box.hi.x; ++x)
        if (int64_t c = chips({x, y, z}); c != 0) os << x << ',' << y << ',' << z << ',' << c << '\n';
  return os.str();
}

std::string SparseLattice::export_slice(const Box& box, int64_t z) const {
  std::string out;
  for (int64_t y = box.hi.y; y >= box.lo.y; --y) {
    for (int64_t x = box.lo.x; x <= box.hi.x; ++x) {
      const int64_t c = chips({x, y, z});
      if (c == 0) out += '.';
      else if (c < 0) out += '-';
      else if (c < 10) out += static_cast<char>('0' + c);
      else out += '+';
    }
    out += '\n';
  }
  return out;
}

LatticeRun stabilize_in_growing_window(const std::function<SparseLattice()>& make, Box window,
                                       int64_t budget, int max_attempts, SparseLattice& out) {
  LatticeRun run;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    out = make();
    run = out.stabilize(budget, window);
    if (run.outcome != LatticeOutcome::WindowExceeded) return run;
    const int64_t grow = std::max<int64_t>(
        {window.hi.x - window.lo.x, window.hi.y - window.lo.y, window.hi.z - window.lo.z, 2});
    window = window.grown(grow / 2 + 1);
  }
  return run;
}

}  // namespace sandpile
