#pragma once
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "synchrolab/automaton.hpp"

namespace synchrolab {

// Thrown when an operation would need a 2^n table beyond the configured
// width. SYNCHROLAB_MAX_SUBSET_BITS overrides the default of 24.
struct SubsetGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int max_subset_bits();
void check_subset_guard(int n);

struct ResetResult {
  long long length = 0;
  Word witness;
};

bool is_synchronizing(const Automaton& a);

// Shortest reset word via forward BFS from Q over the power automaton.
std::optional<ResetResult> reset_length(const Automaton& a);

// Shortest word w with |Qw| <= r; r = n gives the empty word.
std::optional<ResetResult> shortest_word_of_rank(const Automaton& a, int r);

// lengths[r] = shortest |w| with |Qw| <= r, for r = 0..n (kUnreachable if none).
// One BFS answers every rank at once.
inline constexpr long long kUnreachable = std::numeric_limits<long long>::max();
std::vector<long long> rank_word_lengths(const Automaton& a);

// Shortest w with q not in Qw.
std::optional<ResetResult> avoid_length(const Automaton& a, State q);

// Per-subset shortest synchronization lengths, singletons at level 0.
struct SyncProfile {
  int n = 0;
  static constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> levels;  // indexed by subset mask

  uint32_t operator[](StateSet s) const { return levels[s.bits]; }
  bool synchronizable(StateSet s) const { return levels[s.bits] != kInf; }
};
SyncProfile sync_profile(const Automaton& a);

// Reconstructs a shortest synchronizing word for a subset out of a profile.
Word profile_witness(const Automaton& a, const SyncProfile& p, StateSet s);

// Worst case total length of the greedy compressing algorithm started at Q,
// over all adversarial choices of shortest compressing words.
std::optional<long long> greedy_compress_worst(const Automaton& a);

// Dual worst case for the greedy extending algorithm. The adversarial mode
// also lets the adversary pick the starting singleton; best picks the
// cheapest start.
enum class ExtendStart { adversarial, best };
std::optional<long long> greedy_extend_worst(const Automaton& a,
                                             ExtendStart start = ExtendStart::adversarial);

// For a one-cluster letter a with cycle C and level l: max over non-empty
// proper S subset of C of the least |w| with |S (w a^l)^-1 ∩ C| > |S|.
struct OneClusterExtensionScan {
  bool all_extendable = true;
  long long max_word_len = 0;
  StateSet worst_subset;  // attains the max
  StateSet stuck_subset;  // set when !all_extendable
};
OneClusterExtensionScan one_cluster_extension_max(const Automaton& a, Letter x);

}  // namespace synchrolab
