#include "synchrolab/automaton.hpp"

#include <sstream>
#include <stdexcept>

namespace synchrolab {

Transformation Transformation::identity(int n) {
  std::vector<uint8_t> m(n);
  for (int q = 0; q < n; ++q) m[q] = static_cast<uint8_t>(q);
  return Transformation(std::move(m));
}

Transformation Transformation::then(const Transformation& u) const {
  std::vector<uint8_t> m(map.size());
  for (size_t q = 0; q < map.size(); ++q) m[q] = u.map[map[q]];
  return Transformation(std::move(m));
}

bool Transformation::is_identity() const {
  for (size_t q = 0; q < map.size(); ++q)
    if (map[q] != q) return false;
  return true;
}

bool Transformation::is_permutation() const {
  uint64_t seen = 0;
  for (uint8_t v : map) {
    if (seen >> v & 1) return false;
    seen |= uint64_t(1) << v;
  }
  return true;
}

StateSet Transformation::cyclic_states() const {
  const int n = size();
  // color: 0 unvisited, 1 on current walk, 2 done
  std::vector<uint8_t> color(n, 0);
  std::vector<int> walk;
  StateSet cyc;
  for (int s = 0; s < n; ++s) {
    if (color[s]) continue;
    walk.clear();
    int q = s;
    while (color[q] == 0) {
      color[q] = 1;
      walk.push_back(q);
      q = map[q];
    }
    if (color[q] == 1) {
      // found a new cycle; mark it from q onwards
      size_t i = walk.size();
      while (i > 0 && walk[i - 1] != q) --i;
      for (size_t j = i - 1; j < walk.size(); ++j) cyc.insert(walk[j]);
    }
    for (int v : walk) color[v] = 2;
  }
  return cyc;
}

bool Transformation::has_nontrivial_cycle() const {
  StateSet cyc = cyclic_states();
  for (uint64_t m = cyc.bits; m; m &= m - 1) {
    int q = std::countr_zero(m);
    if (map[q] != q) return true;
  }
  return false;
}

int Transformation::cycle_count() const {
  StateSet cyc = cyclic_states();
  int count = 0;
  uint64_t left = cyc.bits;
  while (left) {
    int q = std::countr_zero(left);
    ++count;
    int p = q;
    do {
      left &= ~(uint64_t(1) << p);
      p = map[p];
    } while (p != q);
  }
  return count;
}

Automaton::Automaton(int n, int k, std::vector<uint8_t> delta)
    : n_(n), k_(k), delta_(std::move(delta)) {
  if (n < 1 || n > 64) throw std::invalid_argument("state count must be in [1, 64]");
  if (k < 0) throw std::invalid_argument("alphabet size must be >= 0");
  if (delta_.size() != size_t(n) * size_t(k))
    throw std::invalid_argument("transition table size mismatch");
  for (uint8_t v : delta_)
    if (v >= n) throw std::invalid_argument("transition target out of range");
}

Transformation Automaton::letter_action(Letter x) const {
  if (x < 0 || x >= k_) throw std::invalid_argument("letter out of range");
  auto r = row(x);
  return Transformation(std::vector<uint8_t>(r.begin(), r.end()));
}

Transformation Automaton::action(const Word& w) const {
  Transformation t = Transformation::identity(n_);
  for (Letter x : w) {
    if (x < 0 || x >= k_) throw std::invalid_argument("letter out of range");
    for (int q = 0; q < n_; ++q) t.map[q] = next(t.map[q], x);
  }
  return t;
}

StateSet Automaton::image(StateSet s, Letter x) const {
  if (x < 0 || x >= k_) throw std::invalid_argument("letter out of range");
  StateSet out;
  for (uint64_t m = s.bits; m; m &= m - 1) out.insert(next(std::countr_zero(m), x));
  return out;
}

Automaton Automaton::extended(const Transformation& t) const {
  if (t.size() != n_) throw std::invalid_argument("letter size mismatch");
  std::vector<uint8_t> d = delta_;
  d.insert(d.end(), t.map.begin(), t.map.end());
  return Automaton(n_, k_ + 1, std::move(d));
}

StateSet apply(const Automaton& a, StateSet s, const Word& w) {
  for (Letter x : w) s = a.image(s, x);
  return s;
}

int word_rank(const Automaton& a, const Word& w) {
  return apply(a, StateSet::full(a.n()), w).size();
}

Automaton restrict_alphabet(const Automaton& a, const std::vector<Letter>& letters) {
  if (letters.empty()) throw std::invalid_argument("sub-alphabet must be non-empty");
  std::vector<uint8_t> d;
  d.reserve(letters.size() * size_t(a.n()));
  for (Letter x : letters) {
    if (x < 0 || x >= a.k()) throw std::invalid_argument("letter out of range");
    auto r = a.row(x);
    d.insert(d.end(), r.begin(), r.end());
  }
  return Automaton(a.n(), static_cast<int>(letters.size()), std::move(d));
}

std::string to_line(const Automaton& a) {
  std::string s = std::to_string(a.n()) + " " + std::to_string(a.k()) + " :";
  for (Letter x = 0; x < a.k(); ++x) {
    if (x > 0) s += " ;";
    for (State q = 0; q < a.n(); ++q) s += " " + std::to_string(a.next(q, x));
  }
  return s;
}

Automaton parse_line(const std::string& line) {
  std::istringstream in(line);
  int n = 0, k = 0;
  std::string tok;
  if (!(in >> n >> k)) throw std::invalid_argument("expected 'n k' prefix");
  if (n < 1 || n > 64 || k < 0) throw std::invalid_argument("bad n or k");
  if (!(in >> tok) || tok != ":") throw std::invalid_argument("expected ':' after n k");
  std::vector<uint8_t> delta;
  delta.reserve(size_t(n) * size_t(k));
  for (int x = 0; x < k; ++x) {
    if (x > 0) {
      if (!(in >> tok) || tok != ";") throw std::invalid_argument("expected ';' between rows");
    }
    for (int q = 0; q < n; ++q) {
      int v;
      if (!(in >> v)) throw std::invalid_argument("row too short");
      if (v < 0 || v >= n) throw std::invalid_argument("transition target out of range");
      delta.push_back(static_cast<uint8_t>(v));
    }
  }
  if (in >> tok) throw std::invalid_argument("trailing tokens");
  return Automaton(n, k, std::move(delta));
}

std::string format_word(const Word& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(w[i]);
  }
  return s;
}

Word parse_word(const std::string& s, int k) {
  std::istringstream in(s);
  Word w;
  int v;
  while (in >> v) {
    if (v < 0 || v >= k) throw std::invalid_argument("letter out of range");
    w.push_back(v);
  }
  return w;
}

}  // namespace synchrolab
