#include "synchrolab/verify.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "synchrolab/bounds.hpp"
#include "synchrolab/driver.hpp"
#include "synchrolab/search.hpp"
#include "synchrolab/structure.hpp"

namespace synchrolab {

using nlohmann::json;

long long cerny_bound(int n) { return static_cast<long long>(n - 1) * (n - 1); }

long long conjecture6_formula(int n, int s) {
  long long c1 = (n - s + s - 1) / s;  // ceil((n - s) / s)
  long long c2 = (n + s - 1) / s;      // ceil(n / s)
  return cerny_bound(n) - c1 * (2LL * n - static_cast<long long>(s) * c2 - 1);
}

namespace {

template <typename T>
void cap_sorted(std::vector<T>& v, size_t cap) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() > cap) v.resize(cap);
}

void update_max(CampaignResult& r, const std::string& key, long long value,
                const std::string& witness) {
  MaxAgg& m = r.maxima[key];
  if (value > m.value) {
    m.value = value;
    m.witnesses.assign(1, witness);
  } else if (value == m.value) {
    m.witnesses.push_back(witness);
  }
}

}  // namespace

void CampaignResult::normalize() {
  for (auto& [key, m] : maxima) cap_sorted(m.witnesses, kWitnessCap);
  cap_sorted(violations, kFindingCap);
  cap_sorted(tight, kFindingCap);
  std::sort(chunks.begin(), chunks.end());
}

void CampaignResult::merge(const CampaignResult& other) {
  scanned += other.scanned;
  synchronizing += other.synchronizing;
  in_hypothesis += other.in_hypothesis;
  for (auto& [len, cnt] : other.spectrum) spectrum[len] += cnt;
  for (auto& [key, m] : other.maxima) {
    MaxAgg& mine = maxima[key];
    if (m.value > mine.value) {
      mine = m;
    } else if (m.value == mine.value) {
      mine.witnesses.insert(mine.witnesses.end(), m.witnesses.begin(), m.witnesses.end());
    }
  }
  violation_count += other.violation_count;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  tight_count += other.tight_count;
  tight.insert(tight.end(), other.tight.begin(), other.tight.end());
  chunks.insert(chunks.end(), other.chunks.begin(), other.chunks.end());
  normalize();
}

json CampaignResult::to_json() const {
  json j;
  j["campaign"] = campaign;
  j["class"] = {{"n", n}, {"k", k}, {"filters", filters}, {"threshold", threshold}};
  j["scanned"] = scanned;
  j["synchronizing"] = synchronizing;
  j["in_hypothesis"] = in_hypothesis;
  json spec = json::object();
  for (auto& [len, cnt] : spectrum) spec[std::to_string(len)] = cnt;
  j["spectrum"] = spec;
  json mx = json::object();
  for (auto& [key, m] : maxima) mx[key] = {{"value", m.value}, {"witnesses", m.witnesses}};
  j["maxima"] = mx;
  j["violation_count"] = violation_count;
  json viol = json::array();
  for (auto& v : violations) viol.push_back({{"a", v.line}, {"detail", v.detail}});
  j["violations"] = viol;
  j["tight_count"] = tight_count;
  json tj = json::array();
  for (auto& t : tight) tj.push_back({{"a", t.line}, {"detail", t.detail}});
  j["tight"] = tj;
  j["chunks"] = chunks;
  return j;
}

CampaignResult CampaignResult::from_json(const json& j) {
  CampaignResult r;
  r.campaign = j.at("campaign").get<std::string>();
  r.n = j.at("class").at("n").get<int>();
  r.k = j.at("class").at("k").get<int>();
  r.filters = j.at("class").at("filters").get<std::string>();
  r.threshold = j.at("class").at("threshold").get<long long>();
  r.scanned = j.at("scanned").get<long long>();
  r.synchronizing = j.at("synchronizing").get<long long>();
  r.in_hypothesis = j.at("in_hypothesis").get<long long>();
  for (auto& [key, val] : j.at("spectrum").items()) r.spectrum[std::stoll(key)] = val.get<long long>();
  for (auto& [key, val] : j.at("maxima").items()) {
    MaxAgg m;
    m.value = val.at("value").get<long long>();
    m.witnesses = val.at("witnesses").get<std::vector<std::string>>();
    r.maxima[key] = m;
  }
  r.violation_count = j.at("violation_count").get<long long>();
  for (auto& v : j.at("violations"))
    r.violations.push_back({v.at("a").get<std::string>(), v.at("detail").get<std::string>()});
  r.tight_count = j.at("tight_count").get<long long>();
  for (auto& t : j.at("tight"))
    r.tight.push_back({t.at("a").get<std::string>(), t.at("detail").get<std::string>()});
  r.chunks = j.at("chunks").get<std::vector<long long>>();
  return r;
}

std::vector<std::pair<long long, long long>> spectrum_gaps(const CampaignResult& r) {
  std::vector<std::pair<long long, long long>> gaps;
  long long bound = cerny_bound(r.n);
  long long prev_attained = -1;
  long long gap_start = -1;
  for (long long len = 1; len <= bound; ++len) {
    bool attained = r.spectrum.count(len) && r.spectrum.at(len) > 0;
    if (attained) {
      if (gap_start >= 0 && prev_attained >= 0) gaps.emplace_back(gap_start, len - 1);
      gap_start = -1;
      prev_attained = len;
    } else if (gap_start < 0) {
      gap_start = len;
    }
  }
  return gaps;
}

// ---- conjecture checkers ----

CheckOutcome check_conjecture1(const Automaton& a) {
  CheckOutcome out;
  const int n = a.n();
  if (!is_synchronizing(a)) return out;
  for (Letter x = 0; x < a.k(); ++x) {
    auto occ = one_cluster_data(a, x);
    if (!occ || occ->m < 2 || is_prime(occ->m)) continue;  // proved for prime cycles
    out.in_hypothesis = true;
    auto scan = one_cluster_extension_max(a, x);
    if (!scan.all_extendable) {
      out.violation = true;
      out.detail = "letter " + std::to_string(x) + ": subset mask " +
                   std::to_string(scan.stuck_subset.bits) + " has no extending word";
      return out;
    }
    if (scan.max_word_len > n) {
      out.violation = true;
      out.detail = "letter " + std::to_string(x) + ": subset mask " +
                   std::to_string(scan.worst_subset.bits) + " needs |w| = " +
                   std::to_string(scan.max_word_len) + " > n";
      return out;
    }
    auto& all = out.stats["extension_word"];
    all = std::max(all, scan.max_word_len);
    if (occ->m < n) {
      auto& sub = out.stats["extension_word_subcycle"];
      sub = std::max(sub, scan.max_word_len);
    }
  }
  return out;
}

CheckOutcome check_conjecture2(const Automaton& a) {
  CheckOutcome out;
  const int n = a.n();
  if (n < 2) return out;
  auto rr = reset_length(a);
  if (!rr) return out;
  auto scan = aperiodicity_scan(a);
  if (scan.aperiodic == Tri::unknown) {
    out.detail = "aperiodicity indeterminate (semigroup cap)";
    out.stats["aperiodicity_unknown"] = 1;
    return out;
  }
  if (scan.aperiodic != Tri::yes) return out;
  out.in_hypothesis = true;
  out.stats["reset_length"] = rr->length;
  long long bound = n + (n + 1) / 2 - 2;
  if (rr->length > bound) {
    out.violation = true;
    out.detail = "reset length " + std::to_string(rr->length) + " > n + ceil(n/2) - 2 = " +
                 std::to_string(bound);
  }
  return out;
}

CheckOutcome check_conjecture3(const Automaton& a) {
  CheckOutcome out;
  const int n = a.n();
  if (!is_strongly_connected(a)) return out;
  auto rr = reset_length(a);
  if (!rr) return out;
  auto scan = aperiodicity_scan(a);
  if (scan.aperiodic == Tri::unknown) {
    out.detail = "aperiodicity indeterminate (semigroup cap)";
    out.stats["aperiodicity_unknown"] = 1;
    return out;
  }
  if (scan.aperiodic != Tri::yes) return out;
  out.in_hypothesis = true;
  out.stats["reset_length"] = rr->length;
  if (rr->length > n - 1) {
    out.violation = true;
    out.detail = "reset length " + std::to_string(rr->length) + " > n - 1";
  } else if (rr->length == n - 1 && !is_bidirectional_path(a)) {
    out.violation = true;
    out.detail = "reset length n - 1 met but digraph is not a bidirectional path";
  } else if (rr->length == n - 1) {
    out.tight.push_back("reset length n - 1 on a bidirectional path");
  }
  return out;
}

CheckOutcome check_conjecture4(const Automaton& a) {
  CheckOutcome out;
  const int n = a.n();
  if (n < 2 || !is_strongly_connected(a) || !is_synchronizing(a)) return out;
  out.in_hypothesis = true;
  long long bound = 2LL * n - 2;
  for (State q = 0; q < n; ++q) {
    auto res = avoid_length(a, q);
    if (!res) {
      out.violation = true;
      out.detail = "state " + std::to_string(q) + " cannot be avoided";
      return out;
    }
    if (res->length > bound) {
      out.violation = true;
      out.detail = "state " + std::to_string(q) + " needs avoiding word of length " +
                   std::to_string(res->length) + " > 2n - 2";
      return out;
    }
    auto& mx = out.stats["avoid_length"];
    mx = std::max(mx, res->length);
    if (res->length == bound)
      out.tight.push_back("state " + std::to_string(q) + " attains avoid length 2n - 2 = " +
                          std::to_string(bound));
  }
  return out;
}

CheckOutcome check_conjecture5(const Automaton& a) {
  CheckOutcome out;
  const int n = a.n();
  auto lengths = rank_word_lengths(a);
  std::optional<bool> kari;  // evaluated at most once
  for (int d = 1; d <= n - 1; ++d) {
    int r = n - d;
    if (lengths[r] == kUnreachable) break;  // no word of rank <= r
    out.in_hypothesis = true;
    long long len = lengths[r];
    if (len <= static_cast<long long>(d) * d) continue;
    if (d == 4 && len == 17) {
      if (!kari) kari = is_kari_like(a);
      if (*kari) {
        out.stats["kari_exempt"] = 1;
        out.tight.push_back("rank n-4 word of length 17 exempted as Kari-like");
        continue;
      }
    }
    out.violation = true;
    out.detail = "rank <= " + std::to_string(r) + " needs length " + std::to_string(len) +
                 " > d^2 = " + std::to_string(static_cast<long long>(d) * d);
    return out;
  }
  return out;
}

CheckOutcome check_conjecture6(const Automaton& a) {
  CheckOutcome out;
  const int n = a.n();
  if (!is_synchronizing(a)) return out;
  out.in_hypothesis = true;
  SyncProfile profile = sync_profile(a);
  const size_t nsub = size_t(1) << n;
  int tight_kept = 0;
  for (size_t s = 1; s < nsub; ++s) {
    int size = std::popcount(s);
    long long level = profile.levels[s];
    long long bound = conjecture6_formula(n, size);
    if (level == SyncProfile::kInf || level > bound) {
      out.violation = true;
      out.detail = "subset mask " + std::to_string(s) + " (|S| = " + std::to_string(size) +
                   ") has L(S) = " +
                   (level == SyncProfile::kInf ? std::string("inf") : std::to_string(level)) +
                   " > " + std::to_string(bound);
      return out;
    }
    if (size > 1 && level == bound && tight_kept < 4) {
      out.tight.push_back("subset mask " + std::to_string(s) + " (|S| = " + std::to_string(size) +
                          ") meets the bound L(S) = " + std::to_string(bound));
      ++tight_kept;
    }
  }
  return out;
}

CheckOutcome run_checker(const std::string& name, const Automaton& a) {
  if (name == "conj1") return check_conjecture1(a);
  if (name == "conj2") return check_conjecture2(a);
  if (name == "conj3") return check_conjecture3(a);
  if (name == "conj4") return check_conjecture4(a);
  if (name == "conj5") return check_conjecture5(a);
  if (name == "conj6") return check_conjecture6(a);
  throw std::invalid_argument("unknown checker: " + name);
}

// ---- campaign fold ----

json fold_automaton(const std::string& campaign, const Automaton& a, CampaignResult& r) {
  ++r.scanned;
  const std::string line = to_line(a);
  json props = json::object();

  if (campaign == "cerny" || campaign == "gaps") {
    auto rr = reset_length(a);
    props["synchronizing"] = static_cast<bool>(rr);
    if (rr) {
      ++r.synchronizing;
      ++r.in_hypothesis;
      ++r.spectrum[rr->length];
      update_max(r, "reset_length", rr->length, line);
      props["reset_length"] = rr->length;
      if (rr->length > cerny_bound(a.n())) {
        ++r.violation_count;
        r.violations.push_back(
            {line, "reset length " + std::to_string(rr->length) + " exceeds (n-1)^2"});
      }
    }
    return props;
  }

  if (campaign == "problem1" || campaign == "problem1x") {
    auto rr = reset_length(a);
    props["synchronizing"] = static_cast<bool>(rr);
    if (!rr) return props;
    ++r.synchronizing;
    ++r.in_hypothesis;
    ++r.spectrum[rr->length];
    update_max(r, "reset_length", rr->length, line);
    auto compress = greedy_compress_worst(a);
    if (compress) {
      update_max(r, "greedy_compress", *compress, line);
      props["greedy_compress_worst"] = *compress;
    }
    if (is_strongly_connected(a)) {
      auto extend = greedy_extend_worst(a);
      if (extend) {
        update_max(r, "greedy_extend", *extend, line);
        props["greedy_extend_worst"] = *extend;
      }
    }
    return props;
  }

  CheckOutcome out = run_checker(campaign, a);
  if (is_synchronizing(a)) ++r.synchronizing;
  props["in_hypothesis"] = out.in_hypothesis;
  if (!out.in_hypothesis) {
    if (!out.detail.empty()) props["note"] = out.detail;
    return props;
  }
  ++r.in_hypothesis;
  props["violation"] = out.violation;
  if (out.violation) {
    ++r.violation_count;
    r.violations.push_back({line, out.detail});
    props["detail"] = out.detail;
  }
  for (auto& t : out.tight) {
    ++r.tight_count;
    r.tight.push_back({line, t});
  }
  for (auto& [key, value] : out.stats) update_max(r, key, value, line);
  return props;
}

// ---- campaign driver ----

namespace {

std::string filters_tag(const ClassFilters& f) {
  std::string s;
  if (f.strongly_connected) s += "strongly_connected,";
  if (f.irreducible) s += "irreducible,";
  if (s.empty()) return "-";
  s.pop_back();
  return s;
}

size_t auto_chunk(size_t items) { return std::max<size_t>(1, (items + 127) / 128); }

std::string plan_id(const std::string& prefix, const GenerationPlan& plan) {
  std::ostringstream os;
  os << prefix << "/n" << plan.n << "k" << plan.k << "/f:" << filters_tag(plan.filters) << "/t"
     << plan.prune_threshold << "/dl" << (plan.dedupe_letters ? 1 : 0);
  return os.str();
}

}  // namespace

GenerationRun run_generation(const GenerationPlan& plan, const CampaignOptions& opts,
                             const std::string& id_prefix) {
  GenerationRun gen;
  std::vector<Automaton> parents = plan_parents(plan);
  const size_t chunk =
      plan.chunk_size > 0 ? static_cast<size_t>(plan.chunk_size) : auto_chunk(parents.size());
  const long long num_chunks = parents.empty() ? 0 : (parents.size() + chunk - 1) / chunk;

  driver::Config cfg;
  cfg.workers = opts.workers;
  cfg.campaign_id = plan_id(id_prefix, plan) + "/gen/cs" + std::to_string(chunk);
  if (!opts.checkpoint_path.empty()) cfg.checkpoint_path = opts.checkpoint_path + ".gen";
  cfg.abort_after = opts.abort_after;

  std::unordered_set<std::string> seen;
  auto worker = [&](long long i) {
    auto cands = expand_final(plan, parents, size_t(i) * chunk, size_t(i + 1) * chunk);
    std::string payload;
    for (auto& c : cands) {
      for (unsigned char b : c.canonical_key) {
        static const char* hex = "0123456789abcdef";
        payload += hex[b >> 4];
        payload += hex[b & 15];
      }
      payload += '\t';
      payload += to_line(c.automaton);
      payload += '\n';
    }
    return payload;
  };
  auto consume = [&](long long, std::string&& payload) {
    std::string stored;
    std::istringstream in(payload);
    std::string entry;
    while (std::getline(in, entry)) {
      size_t tab = entry.find('\t');
      std::string key = entry.substr(0, tab);
      std::string line = entry.substr(tab + 1);
      if (seen.insert(key).second) {
        gen.corpus.push_back(line);
        stored += line;
        stored += '\n';
      }
    }
    return stored;
  };
  auto replay = [&](long long, const std::string& stored) {
    std::istringstream in(stored);
    std::string line;
    while (std::getline(in, line)) {
      Automaton a = parse_line(line);
      std::string key = canonical_key(a, plan.dedupe_letters);
      std::string hexkey;
      for (unsigned char b : key) {
        static const char* hex = "0123456789abcdef";
        hexkey += hex[b >> 4];
        hexkey += hex[b & 15];
      }
      seen.insert(hexkey);
      gen.corpus.push_back(line);
    }
  };

  auto rr = driver::run(cfg, num_chunks, worker, consume, replay);
  gen.completed = rr.completed;
  return gen;
}

bool campaign_known(const std::string& name) {
  static const std::vector<std::string> names = {"cerny", "gaps",  "conj1", "conj2",    "conj3",
                                                 "conj4", "conj5", "conj6", "problem1", "problem1x"};
  return std::find(names.begin(), names.end(), name) != names.end();
}

GenerationPlan campaign_plan(const std::string& name, int n, int k, long long threshold,
                             ClassFilters filters) {
  GenerationPlan plan;
  plan.n = n;
  plan.k = k;
  plan.prune_threshold = threshold;
  plan.filters = filters;
  if (name == "gaps" || name == "problem1x") plan.filters.strongly_connected = true;
  if (name == "problem1") plan.filters.irreducible = true;
  return plan;
}

CampaignRun run_campaign(const std::string& name, const GenerationPlan& plan,
                         const CampaignOptions& opts) {
  if (!campaign_known(name)) throw std::invalid_argument("unknown campaign: " + name);
  CampaignRun run;
  CampaignResult& total = run.result;
  total.campaign = name;
  total.n = plan.n;
  total.k = plan.k;
  total.filters = filters_tag(plan.filters);
  total.threshold = plan.prune_threshold;

  CampaignOptions gen_opts = opts;
  GenerationRun gen = run_generation(plan, gen_opts, "campaign-" + name);
  if (!gen.completed) {
    run.completed = false;
    return run;
  }

  const size_t chunk = auto_chunk(gen.corpus.size());
  const long long num_chunks =
      gen.corpus.empty() ? 0 : (gen.corpus.size() + chunk - 1) / chunk;

  driver::Config cfg;
  cfg.workers = opts.workers;
  cfg.campaign_id = plan_id("campaign-" + name, plan) + "/chk/cs" + std::to_string(chunk);
  if (!opts.checkpoint_path.empty()) cfg.checkpoint_path = opts.checkpoint_path + ".chk";
  cfg.abort_after = opts.abort_after;

  std::ofstream stream_out;
  if (!opts.stream_path.empty()) {
    stream_out.open(opts.stream_path, std::ios::trunc);
    if (!stream_out) throw std::runtime_error("cannot open stream file: " + opts.stream_path);
  }

  auto worker = [&](long long i) {
    CampaignResult part;
    part.campaign = name;
    part.n = plan.n;
    part.k = plan.k;
    part.filters = total.filters;
    part.threshold = plan.prune_threshold;
    part.chunks.push_back(i);
    json recs = json::array();
    const size_t begin = size_t(i) * chunk;
    const size_t end = std::min(gen.corpus.size(), begin + chunk);
    for (size_t idx = begin; idx < end; ++idx) {
      Automaton a = parse_line(gen.corpus[idx]);
      json props = fold_automaton(name, a, part);
      recs.push_back({{"a", gen.corpus[idx]}, {"props", props}});
    }
    part.normalize();
    json payload = {{"res", part.to_json()}, {"recs", recs}};
    return payload.dump();
  };
  auto absorb = [&](const std::string& payload) {
    json j = json::parse(payload);
    total.merge(CampaignResult::from_json(j.at("res")));
    if (stream_out.is_open())
      for (auto& rec : j.at("recs")) stream_out << rec.dump() << "\n";
  };
  auto consume = [&](long long, std::string&& payload) {
    absorb(payload);
    return std::move(payload);
  };
  auto replay = [&](long long, const std::string& stored) { absorb(stored); };

  auto rr = driver::run(cfg, num_chunks, worker, consume, replay);
  run.completed = rr.completed;
  total.normalize();
  return run;
}

const std::vector<GridCampaign>& grid_campaigns() {
  static const std::vector<GridCampaign> defs = [] {
    std::vector<GridCampaign> v;
    v.push_back({"grid-cerny-binary-n12",
                 "Cerny verification over all non-isomorphic binary automata with 12 states; "
                 "also yields the complete list of strongly connected synchronizing automata "
                 "with reset length >= 94",
                 "about 100 CPU-years (reported run: ~200 Opteron cores)",
                 json{{"violations", 0},
                      {"generated_total_approx", 1e15},
                      {"reset_length_counts",
                       {{"94", 3},
                        {"99", 3},
                        {"100", 21},
                        {"101", 9},
                        {"102", 2},
                        {"110", 2},
                        {"111", 1},
                        {"112", 1},
                        {"121", 1}}}},
                 false});
    v.push_back({"grid-cerny-ternary-n8",
                 "Cerny verification over all non-isomorphic ternary automata with 8 states",
                 "about 1.25 CPU-years",
                 json{{"violations", 0}, {"generated_total_approx", 2.1e10}}, false});
    v.push_back({"grid-gaps-binary-n9-12",
                 "Reset-length gap counts near the Cerny bound for binary n = 9..12",
                 "CPU-months to CPU-years per n",
                 json{{"gaps", {{"9", 2}, {"10", 2}, {"11", 3}, {"12", 3}}}}, false});
    v.push_back({"grid-problem1-binary-n7",
                 "Worst cases of the greedy extending vs compressing algorithm over strongly "
                 "connected synchronizing binary automata with 7 states",
                 "multi-hour single run; enable explicitly",
                 json{{"greedy_extend_max", 48}, {"greedy_compress_max", 43}}, true});
    return v;
  }();
  return defs;
}

CampaignRun run_grid_campaign(const std::string& name, const CampaignOptions& opts) {
  for (const auto& g : grid_campaigns()) {
    if (g.name != name) continue;
    if (!g.runnable)
      throw std::runtime_error("grid campaign '" + name + "' is not runnable at desk scale (" +
                               g.estimated_cost + ")");
    GenerationPlan plan = campaign_plan("problem1x", 7, 2, 0, {});
    return run_campaign("problem1x", plan, opts);
  }
  throw std::invalid_argument("unknown grid campaign: " + name);
}

}  // namespace synchrolab
