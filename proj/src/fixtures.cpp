#include "synchrolab/fixtures.hpp"

#include <stdexcept>

namespace synchrolab {

namespace {

Automaton from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  int k = static_cast<int>(rows.size());
  int n = static_cast<int>(rows.begin()->size());
  std::vector<uint8_t> d;
  d.reserve(size_t(n) * size_t(k));
  for (auto& r : rows)
    for (int v : r) d.push_back(static_cast<uint8_t>(v));
  return Automaton(n, k, std::move(d));
}

Automaton cerny(int n) {
  // a: cyclic shift, b: merges state 0 into 1
  std::vector<uint8_t> d(size_t(n) * 2);
  for (int q = 0; q < n; ++q) d[q] = static_cast<uint8_t>((q + 1) % n);
  for (int q = 0; q < n; ++q) d[size_t(n) + q] = static_cast<uint8_t>(q);
  d[size_t(n)] = 1;
  return Automaton(n, 2, std::move(d));
}

// Ternary aperiodic series: a shifts forward on v1..v(n-1), b shifts backward,
// c sends the middle state to vn; everything else is a self-loop.
// States 0..n-1 stand for v1..vn.
Automaton aperiodic3(int n) {
  std::vector<uint8_t> d(size_t(n) * 3);
  for (int q = 0; q < n; ++q) {
    d[q] = static_cast<uint8_t>(q <= n - 3 ? q + 1 : q);
    d[size_t(n) + q] = static_cast<uint8_t>((q >= 1 && q <= n - 2) ? q - 1 : q);
    d[size_t(2) * n + q] = static_cast<uint8_t>(q);
  }
  d[size_t(2) * n + (n / 2 - 1)] = static_cast<uint8_t>(n - 1);
  return Automaton(n, 3, std::move(d));
}

}  // namespace

Automaton fixture(const std::string& name, int n) {
  if (name == "cerny") {
    if (n < 2) throw std::invalid_argument("cerny requires n >= 2");
    return cerny(n);
  }
  if (name == "aperiodic3") {
    if (n < 2) throw std::invalid_argument("aperiodic3 requires n >= 2");
    return aperiodic3(n);
  }
  if (name == "fig1")
    return from_rows({{0, 2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 11},
                      {1, 0, 7, 7, 5, 4, 6, 3, 9, 8, 11, 10},
                      {0, 1, 3, 2, 4, 5, 6, 7, 8, 9, 10, 11}});
  if (name == "g1")
    return from_rows({{2, 1, 2, 3, 4}, {3, 1, 3, 0, 4}, {1, 0, 2, 4, 3}});
  if (name == "g2")
    return from_rows({{2, 1, 2, 3, 4, 5}, {3, 1, 3, 0, 5, 4}, {1, 0, 2, 4, 3, 5}});
  if (name == "g3")
    return from_rows({{1, 0, 2, 4, 3, 5}, {3, 4, 2, 4, 1, 5}, {0, 2, 3, 2, 5, 4}});
  if (name == "g4")
    return from_rows({{3, 1, 2, 3, 4, 5}, {4, 2, 1, 4, 0, 5}, {1, 0, 2, 3, 5, 4}});
  if (name == "kari")
    return from_rows({{1, 2, 0, 4, 5, 3}, {0, 1, 5, 3, 2, 2}});
  if (name == "kari_prime")
    return from_rows({{1, 2, 0, 4, 5, 3, 6, 7, 8},
                      {0, 1, 5, 3, 2, 2, 7, 8, 6},
                      {1, 2, 0, 4, 5, 3, 7, 6, 8}});
  throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<std::string> fixture_names() {
  return {"cerny", "fig1", "g1", "g2", "g3", "g4", "aperiodic3", "kari", "kari_prime"};
}

}  // namespace synchrolab
