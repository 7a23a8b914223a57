#pragma once
#include <functional>
#include <string>

namespace synchrolab::driver {

// Ordered chunk execution: workers compute chunk payloads in parallel, the
// coordinator consumes them strictly in chunk order. With a checkpoint path
// the consumed payloads are appended to a results file and the checkpoint
// (campaign id, next chunk, byte offset, digest) is atomically rewritten
// after every chunk, so an interrupted run resumes without double-counting.
struct Config {
  int workers = 1;
  std::string campaign_id;       // must match an existing checkpoint
  std::string checkpoint_path;   // empty: in-memory run, no resume
  long long abort_after = -1;    // stop after this many fresh chunks (test hook)
};

struct RunResult {
  bool completed = true;
  long long fresh_chunks = 0;
  long long replayed_chunks = 0;
};

// worker(i): pure function of the chunk index.
// consume(i, payload): called in ascending i; returns the payload to store.
// replay(i, stored): called in ascending i for chunks replayed from disk.
RunResult run(const Config& cfg, long long num_chunks,
              const std::function<std::string(long long)>& worker,
              const std::function<std::string(long long, std::string&&)>& consume,
              const std::function<void(long long, const std::string&)>& replay);

uint64_t fnv1a(const std::string& data, uint64_t seed = 1469598103934665603ull);

}  // namespace synchrolab::driver
