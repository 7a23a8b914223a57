#pragma once
#include <bit>
#include <cstdint>
#include <compare>
#include <span>
#include <string>
#include <vector>

namespace synchrolab {

using State = int;
using Letter = int;

// Letters of a word, left-to-right; the empty word acts as the identity.
using Word = std::vector<Letter>;

// A subset of the states as a 64-bit mask. All desk-scale targets fit n <= 64.
struct StateSet {
  uint64_t bits = 0;

  static StateSet full(int n) {
    return {n == 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1};
  }
  static StateSet single(State q) { return {uint64_t(1) << q}; }

  bool contains(State q) const { return bits >> q & 1; }
  void insert(State q) { bits |= uint64_t(1) << q; }
  void erase(State q) { bits &= ~(uint64_t(1) << q); }
  int size() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }
  bool singleton() const { return std::has_single_bit(bits); }
  State lowest() const { return std::countr_zero(bits); }
  bool subset_of(StateSet t) const { return (bits & ~t.bits) == 0; }

  std::vector<State> states() const {
    std::vector<State> out;
    for (uint64_t m = bits; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend auto operator<=>(const StateSet&, const StateSet&) = default;
};

// A self-map of the state set: the action of a letter or a word.
struct Transformation {
  std::vector<uint8_t> map;

  Transformation() = default;
  explicit Transformation(std::vector<uint8_t> m) : map(std::move(m)) {}
  static Transformation identity(int n);

  int size() const { return static_cast<int>(map.size()); }
  State operator()(State q) const { return map[q]; }

  // this applied first, then u.
  Transformation then(const Transformation& u) const;
  bool is_identity() const;
  bool is_permutation() const;
  // true iff the functional graph contains a cycle of length >= 2
  bool has_nontrivial_cycle() const;
  // states lying on cycles (including fixed points)
  StateSet cyclic_states() const;
  int cycle_count() const;

  friend auto operator<=>(const Transformation&, const Transformation&) = default;
};

// Complete deterministic automaton: n states, k letters, delta total.
// States and letters are 0-based everywhere.
class Automaton {
 public:
  Automaton(int n, int k, std::vector<uint8_t> delta);

  int n() const { return n_; }
  int k() const { return k_; }
  State next(State q, Letter x) const { return delta_[size_t(x) * n_ + q]; }

  std::span<const uint8_t> row(Letter x) const {
    return {delta_.data() + size_t(x) * n_, size_t(n_)};
  }
  const std::vector<uint8_t>& table() const { return delta_; }

  Transformation letter_action(Letter x) const;
  Transformation action(const Word& w) const;
  StateSet image(StateSet s, Letter x) const;

  // appends one letter; used by the generator
  Automaton extended(const Transformation& t) const;

  friend auto operator<=>(const Automaton&, const Automaton&) = default;

 private:
  int n_, k_;
  std::vector<uint8_t> delta_;  // delta_[x*n + q] = delta(q, x)
};

StateSet apply(const Automaton& a, StateSet s, const Word& w);
int word_rank(const Automaton& a, const Word& w);
Automaton restrict_alphabet(const Automaton& a, const std::vector<Letter>& letters);

// Corpus line format: "n k : r0 ; r1 ; ... ; r(k-1)", rx[q] = delta(q, x).
std::string to_line(const Automaton& a);
Automaton parse_line(const std::string& line);

std::string format_word(const Word& w);  // "0 1 0 0"
Word parse_word(const std::string& s, int k);

}  // namespace synchrolab
