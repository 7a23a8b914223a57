#include "synchrolab/driver.hpp"

#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

namespace synchrolab::driver {

uint64_t fnv1a(const std::string& data, uint64_t seed) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

struct Checkpoint {
  std::string campaign_id;
  long long next_chunk = 0;
  long long results_bytes = 0;
  uint64_t digest = fnv1a("");
};

std::string results_path_of(const std::string& checkpoint_path) {
  return checkpoint_path + ".results";
}

bool load_checkpoint(const std::string& path, Checkpoint& cp) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  std::istringstream ss(line);
  std::string digest_hex;
  if (!(ss >> cp.campaign_id >> cp.next_chunk >> cp.results_bytes >> digest_hex)) return false;
  cp.digest = std::stoull(digest_hex, nullptr, 16);
  return true;
}

void store_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(cp.digest));
    out << cp.campaign_id << " " << cp.next_chunk << " " << cp.results_bytes << " " << buf
        << "\n";
    if (!out) throw std::runtime_error("cannot write checkpoint file: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

RunResult run(const Config& cfg, long long num_chunks,
              const std::function<std::string(long long)>& worker,
              const std::function<std::string(long long, std::string&&)>& consume,
              const std::function<void(long long, const std::string&)>& replay) {
  RunResult result;
  Checkpoint cp;
  cp.campaign_id = cfg.campaign_id;
  const bool persistent = !cfg.checkpoint_path.empty();
  std::string results_file = persistent ? results_path_of(cfg.checkpoint_path) : "";

  if (persistent) {
    Checkpoint old;
    if (load_checkpoint(cfg.checkpoint_path, old)) {
      if (old.campaign_id != cfg.campaign_id)
        throw std::runtime_error("checkpoint belongs to campaign '" + old.campaign_id +
                                 "', refusing to resume '" + cfg.campaign_id + "'");
      // replay the validated prefix of the results file
      std::ifstream in(results_file, std::ios::binary);
      if (!in) throw std::runtime_error("checkpoint present but results file missing");
      std::string prefix(old.results_bytes, '\0');
      in.read(prefix.data(), old.results_bytes);
      if (in.gcount() != old.results_bytes || fnv1a(prefix) != old.digest)
        throw std::runtime_error("results file does not match checkpoint digest");
      std::istringstream lines(prefix);
      std::string line;
      long long idx = 0;
      while (std::getline(lines, line)) {
        replay(idx, nlohmann::json::parse(line).get<std::string>());
        ++idx;
      }
      if (idx != old.next_chunk)
        throw std::runtime_error("results file chunk count does not match checkpoint");
      cp = old;
      result.replayed_chunks = idx;
    } else {
      // fresh start: truncate any stale results
      std::ofstream(results_file, std::ios::trunc);
      store_checkpoint(cfg.checkpoint_path, cp);
    }
  }

  const long long start = cp.next_chunk;
  if (start >= num_chunks) return result;

  std::ofstream results_out;
  if (persistent) {
    results_out.open(results_file, std::ios::binary | std::ios::app);
    if (!results_out) throw std::runtime_error("cannot open results file: " + results_file);
  }

  auto commit = [&](long long idx, std::string&& payload) {
    std::string stored = consume(idx, std::move(payload));
    if (persistent) {
      std::string line = nlohmann::json(stored).dump();
      line += "\n";
      results_out << line;
      results_out.flush();
      if (!results_out) throw std::runtime_error("write to results file failed");
      cp.digest = fnv1a(line, cp.digest);
      cp.results_bytes += static_cast<long long>(line.size());
      cp.next_chunk = idx + 1;
      store_checkpoint(cfg.checkpoint_path, cp);
    }
    ++result.fresh_chunks;
  };

  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (long long i = start; i < num_chunks; ++i) {
      commit(i, worker(i));
      if (cfg.abort_after >= 0 && result.fresh_chunks >= cfg.abort_after) {
        result.completed = false;
        return result;
      }
    }
    return result;
  }

  std::mutex mu;
  std::condition_variable cv_done;
  long long next_to_start = start;
  long long next_to_commit = start;
  std::map<long long, std::string> ready;
  std::exception_ptr error;
  bool stop = false;
  const long long max_ahead = workers * 4;

  auto worker_loop = [&] {
    for (;;) {
      long long idx;
      {
        std::unique_lock<std::mutex> lock(mu);
        cv_done.wait(lock, [&] {
          return stop || error || next_to_start < std::min(num_chunks, next_to_commit + max_ahead);
        });
        if (stop || error || next_to_start >= num_chunks) return;
        idx = next_to_start++;
      }
      try {
        std::string payload = worker(idx);
        std::unique_lock<std::mutex> lock(mu);
        ready.emplace(idx, std::move(payload));
        cv_done.notify_all();
      } catch (...) {
        std::unique_lock<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        cv_done.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);

  {
    std::unique_lock<std::mutex> lock(mu);
    while (next_to_commit < num_chunks && !error) {
      cv_done.wait(lock, [&] { return error || ready.count(next_to_commit) > 0; });
      if (error) break;
      auto node = ready.extract(next_to_commit);
      std::string payload = std::move(node.mapped());
      long long idx = next_to_commit;
      lock.unlock();
      commit(idx, std::move(payload));
      lock.lock();
      ++next_to_commit;
      cv_done.notify_all();
      if (cfg.abort_after >= 0 && result.fresh_chunks >= cfg.abort_after) {
        result.completed = false;
        break;
      }
    }
    stop = true;
    cv_done.notify_all();
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return result;
}

}  // namespace synchrolab::driver
