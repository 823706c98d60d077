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

#include "sandpile/tm.hpp"

#include <algorithm>
#include <sstream>

namespace sandpile {

int TuringMachine::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw Error("unknown state '" + name + "'");
  return static_cast<int>(it - states.begin());
}

int TuringMachine::letter_index(const std::string& name) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), name);
  if (it == alphabet.end()) throw Error("unknown letter '" + name + "'");
  return static_cast<int>(it - alphabet.begin());
}

void TuringMachine::validate() const {
  if (states.empty()) throw Error("machine has no states");
  if (alphabet.empty()) throw Error("machine has no letters");
  if (start < 0 || static_cast<size_t>(start) >= q()) throw Error("start state out of range");
  if (blank < 0 || static_cast<size_t>(blank) >= g()) throw Error("blank letter out of range");
  if (final.size() != q() || delta.size() != q() * g()) throw Error("machine tables have the wrong size");
  for (size_t s = 0; s < q(); ++s)
    for (size_t l = 0; l < g(); ++l) {
      const auto& r = rule(static_cast<int>(s), static_cast<int>(l));
      if (final[s] && r) throw Error("final state '" + states[s] + "' has a transition");
      if (!final[s] && !r)
        throw Error("transition function is not total: missing (" + states[s] + ", " + alphabet[l] + ")");
    }
}

TuringMachine parse_machine(const std::string& text) {
  TuringMachine m;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  std::vector<std::vector<std::string>> rules;
  std::vector<std::string> rule_lines;
  std::string header_at = "line 1, column 1";
  std::string start, blank;
  std::vector<std::string> finals, input;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const size_t col = line.find_first_not_of(" \t") + 1;
    const std::string where = "line " + std::to_string(lineno) + ", column " + std::to_string(col);
    const std::string key = tok[0];
    std::vector<std::string> rest(tok.begin() + 1, tok.end());
    if (key == "states") m.states = rest;
    else if (key == "alphabet") m.alphabet = rest;
    else if (key == "blank" && rest.size() == 1) blank = rest[0], header_at = where;
    else if (key == "start" && rest.size() == 1) start = rest[0], header_at = where;
    else if (key == "final") finals = rest;
    else if (key == "input") input = rest;
    else if (tok.size() == 6 && tok[2] == "->") {
      rules.push_back(tok);
      rule_lines.push_back(where);
    } else {
      throw Error(where + ": cannot parse '" + line.substr(col - 1) + "'");
    }
  }
  try {
    m.final.assign(m.q(), false);
    m.delta.assign(m.q() * m.g(), std::nullopt);
    m.start = m.state_index(start);
    m.blank = m.letter_index(blank);
    for (const auto& f : finals) m.final[static_cast<size_t>(m.state_index(f))] = true;
    for (const auto& l : input) m.input.push_back(m.letter_index(l));
  } catch (const Error& e) {
    throw Error(header_at + ": machine header: " + e.what());
  }
  for (size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    try {
      const int s = m.state_index(r[0]), l = m.letter_index(r[1]);
      if (r[5] != "L" && r[5] != "R") throw Error("direction must be L or R");
      auto& slot = m.delta[static_cast<size_t>(s) * m.g() + static_cast<size_t>(l)];
      if (slot) throw Error("duplicate transition");
      slot = Transition{m.state_index(r[3]), m.letter_index(r[4]), r[5] == "L" ? Move::Left : Move::Right};
    } catch (const Error& e) {
      throw Error(rule_lines[i] + ": " + e.what());
    }
  }
  m.validate();
  return m;
}

std::string emit_machine(const TuringMachine& m) {
  std::ostringstream os;
  auto list = [&](const char* key, const std::vector<std::string>& v) {
    os << key;
    for (const auto& s : v) os << ' ' << s;
    os << '\n';
  };
  list("states", m.states);
  list("alphabet", m.alphabet);
  os << "blank " << m.alphabet[static_cast<size_t>(m.blank)] << '\n';
  os << "start " << m.states[static_cast<size_t>(m.start)] << '\n';
  std::vector<std::string> finals, input;
  for (size_t s = 0; s < m.q(); ++s)
    if (m.final[s]) finals.push_back(m.states[s]);
  for (int l : m.input) input.push_back(m.alphabet[static_cast<size_t>(l)]);
  list("final", finals);
  if (!input.empty()) list("input", input);
  for (size_t s = 0; s < m.q(); ++s)
    for (size_t l = 0; l < m.g(); ++l)
      if (const auto& r = m.rule(static_cast<int>(s), static_cast<int>(l)))
        os << m.states[s] << ' ' << m.alphabet[l] << " -> " << m.states[static_cast<size_t>(r->next)] << ' '
           << m.alphabet[static_cast<size_t>(r->write)] << ' ' << (r->move == Move::Left ? 'L' : 'R') << '\n';
  return os.str();
}

TapeSnapshot initial_snapshot(const TuringMachine& m) {
  TapeSnapshot s;
  for (size_t i = 0; i < m.input.size(); ++i)
    if (m.input[i] != m.blank) s.tape[static_cast<int64_t>(i)] = m.input[i];
  s.state = m.start;
  s.halted = m.final[static_cast<size_t>(m.start)];
  return s;
}

TapeSnapshot tm_step(const TuringMachine& m, const TapeSnapshot& s) {
  if (s.halted) throw Error("cannot step a halted machine");
  const auto& r = m.rule(s.state, s.read(s.head, m.blank));
  if (!r) throw Error("no transition for the current state and letter");
  TapeSnapshot n = s;
  if (r->write == m.blank) n.tape.erase(s.head);
  else n.tape[s.head] = r->write;
  n.head += r->move == Move::Left ? -1 : 1;
  n.state = r->next;
  n.halted = m.final[static_cast<size_t>(r->next)];
  return n;
}

std::vector<TapeSnapshot> tm_trace(const TuringMachine& m, int64_t steps) {
  std::vector<TapeSnapshot> out{initial_snapshot(m)};
  for (int64_t t = 0; t < steps; ++t)
    out.push_back(out.back().halted ? out.back() : tm_step(m, out.back()));
  return out;
}

std::string describe(const TuringMachine& m, const TapeSnapshot& s) {
  std::ostringstream os;
  int64_t lo = s.head, hi = s.head;
  if (!s.tape.empty()) {
    lo = std::min(lo, s.tape.begin()->first);
    hi = std::max(hi, s.tape.rbegin()->first);
  }
  os << m.states[static_cast<size_t>(s.state)] << "@" << s.head << " [" << lo << "] ";
  for (int64_t x = lo; x <= hi; ++x) os << m.alphabet[static_cast<size_t>(s.read(x, m.blank))];
  if (s.halted) os << " (halted)";
  return os.str();
}

CellularAutomaton tm_to_ca(const TuringMachine& m) {
  m.validate();
  CellularAutomaton ca;
  ca.space = {m.g(), m.q()};
  ca.size = m.g() + m.q() * m.g() + 1;
  ca.error = ca.space.special(0);
  ca.quiescent = ca.space.tape(m.blank);
  for (size_t l = 0; l < m.g(); ++l) ca.labels.push_back("t(" + m.alphabet[l] + ")");
  for (size_t q = 0; q < m.q(); ++q)
    for (size_t l = 0; l < m.g(); ++l) ca.labels.push_back("h(" + m.states[q] + "," + m.alphabet[l] + ")");
  ca.labels.push_back("e");

  const auto& sp = ca.space;
  const int n = static_cast<int>(ca.size);
  ca.table.assign(ca.size * ca.size * ca.size, ca.error);
  for (int l = 0; l < n; ++l)
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        int& out = ca.table[(static_cast<size_t>(l) * ca.size + static_cast<size_t>(c)) * ca.size +
                            static_cast<size_t>(r)];
        if (l == ca.error || c == ca.error || r == ca.error) continue;  // e
        const int heads = sp.is_head(l) + sp.is_head(c) + sp.is_head(r);
        if (heads >= 2) continue;  // e
        if (sp.is_head(c)) {
          const int q = sp.head_state(c);
          if (m.final[static_cast<size_t>(q)]) {
            out = c;  // frozen
          } else {
            out = sp.tape(m.rule(q, sp.letter_of(c))->write);
          }
          continue;
        }
        const int letter = sp.letter_of(c);
        out = sp.tape(letter);
        if (sp.is_head(r) && !m.final[static_cast<size_t>(sp.head_state(r))]) {
          const auto& t = *m.rule(sp.head_state(r), sp.letter_of(r));
          if (t.move == Move::Left) out = sp.head(t.next, letter);
        } else if (sp.is_head(l) && !m.final[static_cast<size_t>(sp.head_state(l))]) {
          const auto& t = *m.rule(sp.head_state(l), sp.letter_of(l));
          if (t.move == Move::Right) out = sp.head(t.next, letter);
        }
      }
  return ca;
}

CARow encode_ca_row(const CellularAutomaton& ca, const TapeSnapshot& s) {
  int64_t lo = s.head, hi = s.head;
  if (!s.tape.empty()) {
    lo = std::min(lo, s.tape.begin()->first);
    hi = std::max(hi, s.tape.rbegin()->first);
  }
  CARow row;
  row.origin = lo;
  row.background = ca.quiescent;
  const int blank = ca.quiescent;  // t(beta) has the blank's index
  for (int64_t x = lo; x <= hi; ++x) {
    const int letter = s.read(x, blank);
    row.cells.push_back(x == s.head ? ca.space.head(s.state, letter) : ca.space.tape(letter));
  }
  return row;
}

std::vector<CARow> ca_run(const CellularAutomaton& ca, const CARow& row0, int64_t steps) {
  std::vector<CARow> out{row0};
  for (int64_t t = 0; t < steps; ++t) {
    const CARow& prev = out.back();
    CARow next;
    next.origin = prev.origin - 1;
    next.background = ca.f(prev.background, prev.background, prev.background);
    next.time = prev.time + 1;
    next.cells.resize(prev.cells.size() + 2);
    for (size_t i = 0; i < next.cells.size(); ++i) {
      const int64_t x = next.origin + static_cast<int64_t>(i);
      next.cells[i] = ca.f(prev.at(x - 1), prev.at(x), prev.at(x + 1));
    }
    out.push_back(std::move(next));
  }
  return out;
}

std::optional<TapeSnapshot> decode_ca_row(const CellularAutomaton& ca, const TuringMachine& m,
                                          const CARow& row) {
  if (row.background != ca.quiescent) return std::nullopt;
  TapeSnapshot s;
  int heads = 0;
  for (size_t i = 0; i < row.cells.size(); ++i) {
    const int v = row.cells[i];
    const int64_t x = row.origin + static_cast<int64_t>(i);
    if (v == ca.error) return std::nullopt;
    if (ca.space.is_head(v)) {
      ++heads;
      s.head = x;
      s.state = ca.space.head_state(v);
    }
    const int letter = ca.space.letter_of(v);
    if (letter != m.blank) s.tape[x] = letter;
  }
  if (heads != 1) return std::nullopt;
  s.halted = m.final[static_cast<size_t>(s.state)];
  return s;
}

namespace corpus {

TuringMachine right_mover() {
  return parse_machine("states A H\nalphabet 0 1\nblank 0\nstart A\nfinal H\nA 0 -> A 0 R\nA 1 -> A 1 R\n");
}

TuringMachine one_rule_halter() {
  return parse_machine("states A H\nalphabet 0 1\nblank 0\nstart A\nfinal H\nA 0 -> H 1 R\nA 1 -> H 1 R\n");
}

TuringMachine unary_incrementer(int ones) {
  std::string input = "input";
  for (int i = 0; i < ones; ++i) input += " 1";
  return parse_machine("states A H\nalphabet 0 1\nblank 0\nstart A\nfinal H\n" + input +
                       "\nA 1 -> A 1 R\nA 0 -> H 1 R\n");
}

TuringMachine busy_beaver3() {
  return parse_machine(
      "states A B C H\nalphabet 0 1\nblank 0\nstart A\nfinal H\n"
      "A 0 -> B 1 R\nA 1 -> H 1 R\n"
      "B 0 -> B 1 L\nB 1 -> C 0 R\n"
      "C 0 -> C 1 L\nC 1 -> A 1 L\n");
}

}  // namespace corpus
}  // namespace sandpile
