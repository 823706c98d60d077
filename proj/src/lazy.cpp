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

#include "sandpile/lazy.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace sandpile {

int PatternElem::single() const {
  if (!is_letter() || mask == 0) throw Error("pattern element is not a single state");
  return std::countr_zero(mask);
}

void LazyAutomaton::validate() const {
  if (size == 0 || size > 64) throw Error("lazy automata support 1..64 states");
  const uint64_t all = size == 64 ? ~uint64_t{0} : (uint64_t{1} << size) - 1;
  for (const auto& r : rules) {
    if (r.pattern.size() != static_cast<size_t>(2 * radius + 1)) throw Error("pattern length must be 2r+1");
    if (std::all_of(r.pattern.begin(), r.pattern.end(), [](const PatternElem& e) { return e.wild; }))
      throw Error("(*, ..., *) is not a legal pattern");
    for (const auto& e : r.pattern)
      if (!e.wild && (e.mask == 0 || (e.mask & ~all))) throw Error("pattern letter outside S");
    if (r.result < 0 || static_cast<size_t>(r.result) >= size) throw Error("rule result must be a state of S");
  }
}

std::vector<PartialRule> expand_rules(const LazyAutomaton& a) {
  std::vector<PartialRule> out;
  for (const auto& r : a.rules) {
    std::vector<PartialRule> partial{PartialRule{{}, r.result}};
    for (const auto& e : r.pattern) {
      std::vector<PartialRule> next;
      for (const auto& p : partial) {
        if (e.wild) {
          next.push_back(p);
          next.back().pattern.push_back(e);
          continue;
        }
        for (int s = 0; s < 64; ++s)
          if ((e.mask >> s) & 1U) {
            next.push_back(p);
            next.back().pattern.push_back(PatternElem::letter(s));
          }
      }
      partial = std::move(next);
    }
    out.insert(out.end(), partial.begin(), partial.end());
  }
  return out;
}

std::string dump_rules(const LazyAutomaton& a, bool expanded) {
  std::ostringstream os;
  const auto rules = expanded ? expand_rules(a) : a.rules;
  for (const auto& r : rules) {
    for (size_t k = 0; k < r.pattern.size(); ++k) {
      const auto& e = r.pattern[k];
      if (k) os << ' ';
      if (static_cast<int>(k) == a.radius) os << '_';
      if (e.wild) os << '*';
      else if (e.is_letter()) os << a.labels[static_cast<size_t>(e.single())];
      else os << e.name;
    }
    os << " -> " << a.labels[static_cast<size_t>(r.result)] << '\n';
  }
  return os.str();
}

bool LazyRow::all_lazy() const {
  return std::all_of(cells.begin(), cells.end(), [](int c) { return c == kLazy; });
}

std::optional<std::pair<int64_t, int64_t>> LazyRow::support() const {
  std::optional<std::pair<int64_t, int64_t>> s;
  for (size_t i = 0; i < cells.size(); ++i)
    if (cells[i] != kLazy) {
      const int64_t x = origin + static_cast<int64_t>(i);
      if (!s) s = std::pair{x, x};
      s->second = x;
    }
  return s;
}

void LazyRow::trim() {
  auto s = support();
  if (!s) {
    cells.clear();
    return;
  }
  std::vector<int> kept(cells.begin() + (s->first - origin), cells.begin() + (s->second - origin + 1));
  cells = std::move(kept);
  origin = s->first;
}

std::variant<LazyRow, Malfunction> lazy_step(const LazyAutomaton& a, const LazyRow& row) {
  const int64_t r = a.radius;
  LazyRow next;
  next.time = row.time + 1;
  next.origin = row.origin - r;
  next.cells.assign(row.cells.size() + static_cast<size_t>(2 * r), kLazy);
  if (row.cells.empty()) return next;
  for (size_t i = 0; i < next.cells.size(); ++i) {
    const int64_t x = next.origin + static_cast<int64_t>(i);
    std::vector<size_t> hits;
    for (size_t k = 0; k < a.rules.size(); ++k) {
      const auto& p = a.rules[k].pattern;
      bool ok = true;
      for (int64_t j = -r; j <= r && ok; ++j) ok = p[static_cast<size_t>(j + r)].matches(row.at(x + j));
      if (ok) hits.push_back(k);
    }
    if (hits.size() >= 2) return Malfunction{x, next.time, std::move(hits)};
    if (hits.size() == 1) next.cells[i] = a.rules[hits[0]].result;
  }
  next.trim();
  return next;
}

LazyTrace lazy_run(const LazyAutomaton& a, const LazyRow& row0, int64_t steps) {
  LazyTrace tr;
  tr.rows.push_back(row0);
  tr.rows.back().trim();
  if (tr.rows.back().all_lazy()) {
    tr.status = LazyTrace::Status::Halted;
    return tr;
  }
  for (int64_t t = 0; t < steps; ++t) {
    auto res = lazy_step(a, tr.rows.back());
    if (auto* m = std::get_if<Malfunction>(&res)) {
      tr.status = LazyTrace::Status::Malfunction;
      tr.time = m->time;
      tr.malfunction = *m;
      return tr;
    }
    tr.rows.push_back(std::get<LazyRow>(std::move(res)));
    if (tr.rows.back().all_lazy()) {
      tr.status = LazyTrace::Status::Halted;
      tr.time = tr.rows.back().time;
      return tr;
    }
  }
  return tr;
}

LazyCompilation tm_to_lazy(const TuringMachine& m) {
  m.validate();
  LazyCompilation c;
  c.space = {m.g(), m.q()};
  const auto& sp = c.space;
  auto& a = c.automaton;
  a.radius = 2;
  a.size = m.g() + m.q() * m.g() + 2;
  if (a.size > 64) throw Error("machine too large for the lazy compiler (more than 64 states)");
  c.left_front = sp.special(0);
  c.right_front = sp.special(1);
  for (size_t l = 0; l < m.g(); ++l) a.labels.push_back("t(" + m.alphabet[l] + ")");
  for (size_t q = 0; q < m.q(); ++q)
    for (size_t l = 0; l < m.g(); ++l) a.labels.push_back("h(" + m.states[q] + "," + m.alphabet[l] + ")");
  a.labels.push_back("<");
  a.labels.push_back(">");
  c.all_states = (uint64_t{1} << a.size) - 1;
  c.tape_or_head = c.all_states & ~(uint64_t{1} << c.left_front) & ~(uint64_t{1} << c.right_front);

  const auto A = PatternElem::any_of(c.tape_or_head, "TH");
  const auto S = PatternElem::any_of(c.all_states, "S");
  const auto W = PatternElem::wildcard();
  auto L = [](int s) { return PatternElem::letter(s); };
  auto add = [&](std::vector<PatternElem> p, int result) { a.rules.push_back({std::move(p), result}); };
  const int G = static_cast<int>(m.g());
  const int blank = sp.tape(m.blank);

  // Out of sight of the wavefronts: no head within distance one.
  for (int g1 = 0; g1 < G; ++g1)
    for (int g2 = 0; g2 < G; ++g2)
      for (int g3 = 0; g3 < G; ++g3) add({A, L(g1), L(g2), L(g3), A}, sp.tape(g2));

  for (int q = 0; q < static_cast<int>(m.q()); ++q) {
    if (m.final[static_cast<size_t>(q)]) continue;  // no rules for final heads
    for (int g = 0; g < G; ++g) {
      const Transition t = *m.rule(q, g);
      const int h = sp.head(q, g);
      // Head leaves the present square.
      for (int g1 = 0; g1 < G; ++g1)
        for (int g2 = 0; g2 < G; ++g2) add({A, L(g1), L(h), L(g2), A}, sp.tape(t.write));
      for (int g1 = 0; g1 < G; ++g1) {
        // Head on the right: arrives when moving left, otherwise the square is unchanged.
        add({A, A, L(g1), L(h), A}, t.move == Move::Left ? sp.head(t.next, g1) : sp.tape(g1));
        // Head on the left: arrives when moving right.
        add({A, L(h), L(g1), A, A}, t.move == Move::Right ? sp.head(t.next, g1) : sp.tape(g1));
      }
    }
  }

  // Wavefronts advance and leave blank tape behind.
  const int lf = c.left_front, rf = c.right_front;
  add({W, W, W, L(lf), S}, lf);
  add({S, L(rf), W, W, W}, rf);
  add({W, W, L(lf), S, S}, blank);
  add({S, S, L(rf), W, W}, blank);
  add({W, L(lf), S, S, S}, blank);
  add({S, S, S, L(rf), W}, blank);
  add({L(lf), S, S, S, S}, blank);
  add({S, S, S, S, L(rf)}, blank);
  a.validate();

  // Initial row: <, three blanks, input with the head on square 0, three blanks, >.
  const TapeSnapshot s0 = initial_snapshot(m);
  const int64_t len = std::max<int64_t>(1, static_cast<int64_t>(m.input.size()));
  LazyRow& row = c.initial;
  row.origin = -4;
  row.cells.push_back(lf);
  for (int i = 0; i < 3; ++i) row.cells.push_back(blank);
  for (int64_t x = 0; x < len; ++x) {
    const int letter = s0.read(x, m.blank);
    row.cells.push_back(x == 0 ? sp.head(m.start, letter) : sp.tape(letter));
  }
  for (int i = 0; i < 3; ++i) row.cells.push_back(blank);
  row.cells.push_back(rf);
  return c;
}

std::optional<TapeSnapshot> decode_lazy_row(const LazyCompilation& c, const TuringMachine& m,
                                            const LazyRow& row) {
  std::optional<int64_t> lpos, rpos;
  for (size_t i = 0; i < row.cells.size(); ++i) {
    const int64_t x = row.origin + static_cast<int64_t>(i);
    if (row.cells[i] == c.left_front) {
      if (lpos) return std::nullopt;
      lpos = x;
    }
    if (row.cells[i] == c.right_front) {
      if (rpos) return std::nullopt;
      rpos = x;
    }
  }
  if (!lpos || !rpos || *lpos >= *rpos) return std::nullopt;
  TapeSnapshot s;
  int heads = 0;
  for (int64_t x = *lpos + 1; x < *rpos; ++x) {
    const int v = row.at(x);
    if (v == kLazy) return std::nullopt;
    if (c.space.is_head(v)) {
      ++heads;
      s.head = x;
      s.state = c.space.head_state(v);
    }
    const int letter = c.space.letter_of(v);
    if (letter != m.blank) s.tape[x] = letter;
  }
  if (heads != 1) return std::nullopt;
  s.halted = m.final[static_cast<size_t>(s.state)];
  return s;
}

}  // namespace sandpile
