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

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace sandpile {

/// Raised for malformed inputs and contract violations across the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vertex of Z^3. Z^2 instances keep z == 0 and use a 4-neighbourhood.
struct Site {
  int64_t x = 0;
  int64_t y = 0;
  int64_t z = 0;

  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;

  Site operator+(const Site& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Site operator-(const Site& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

inline constexpr std::array<Site, 6> kDirs3{{
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
inline constexpr std::array<Site, 4> kDirs2{{
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}};

inline int64_t manhattan(const Site& a, const Site& b) {
  auto d = [](int64_t v) { return v < 0 ? -v : v; };
  return d(a.x - b.x) + d(a.y - b.y) + d(a.z - b.z);
}

inline int64_t chebyshev(const Site& a, const Site& b) {
  auto d = [](int64_t v) { return v < 0 ? -v : v; };
  int64_t m = d(a.x - b.x);
  m = std::max(m, d(a.y - b.y));
  return std::max(m, d(a.z - b.z));
}

inline bool adjacent(const Site& a, const Site& b) { return manhattan(a, b) == 1; }

// Coordinates are packed into 21-bit fields; the usable range is +-2^20.
inline constexpr int64_t kCoordLimit = int64_t{1} << 20;

inline bool packable(const Site& s) {
  auto ok = [](int64_t v) { return v > -kCoordLimit && v < kCoordLimit; };
  return ok(s.x) && ok(s.y) && ok(s.z);
}

inline uint64_t pack(const Site& s) {
  constexpr uint64_t mask = (uint64_t{1} << 21) - 1;
  return ((static_cast<uint64_t>(s.x + kCoordLimit) & mask) << 42) |
         ((static_cast<uint64_t>(s.y + kCoordLimit) & mask) << 21) |
         (static_cast<uint64_t>(s.z + kCoordLimit) & mask);
}

inline Site unpack(uint64_t k) {
  constexpr uint64_t mask = (uint64_t{1} << 21) - 1;
  return {static_cast<int64_t>((k >> 42) & mask) - kCoordLimit,
          static_cast<int64_t>((k >> 21) & mask) - kCoordLimit,
          static_cast<int64_t>(k & mask) - kCoordLimit};
}

std::string to_string(const Site& s);

}  // namespace sandpile

template <>
struct std::hash<sandpile::Site> {
  size_t operator()(const sandpile::Site& s) const noexcept {
    return std::hash<uint64_t>{}(sandpile::pack(s));
  }
};
