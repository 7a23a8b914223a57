#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "synchrolab/automaton.hpp"
#include "synchrolab/fixtures.hpp"
#include "synchrolab/search.hpp"
#include "synchrolab/verify.hpp"

using namespace synchrolab;
namespace oracle = synchrolab::testing;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("synchrolab_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("conjecture 6 formula") {
  for (int n = 2; n <= 10; ++n) {
    CHECK(conjecture6_formula(n, n) == cerny_bound(n));
    CHECK(conjecture6_formula(n, 1) == 0);
  }
  CHECK(conjecture6_formula(5, 2) == 10);
}

TEST_CASE("conjecture 6 checker on the cerny automaton") {
  CheckOutcome out = check_conjecture6(fixture("cerny", 5));
  CHECK(out.in_hypothesis);
  CHECK_FALSE(out.violation);
  bool pair_tight = false;
  for (const auto& t : out.tight) pair_tight = pair_tight || t.find("|S| = 2") != std::string::npos;
  CHECK(pair_tight);  // L(S) = 10 for a pair, meeting the formula exactly
}

TEST_CASE("conjecture 2 checker on the aperiodic series") {
  for (int n = 2; n <= 8; ++n) {
    CheckOutcome out = check_conjecture2(fixture("aperiodic3", n));
    CHECK(out.in_hypothesis);
    CHECK_FALSE(out.violation);
    CHECK(out.stats.at("reset_length") == n + n / 2 - 2);
  }
  CHECK_FALSE(check_conjecture2(fixture("cerny", 4)).in_hypothesis);  // not aperiodic
}

TEST_CASE("conjecture 3 checker") {
  // merge/shift pair on two states: aperiodic, strongly connected, reset 1
  Automaton two(2, 2, {1, 1, 0, 0});
  CheckOutcome out = check_conjecture3(two);
  CHECK(out.in_hypothesis);
  CHECK_FALSE(out.violation);
  CHECK_FALSE(check_conjecture3(fixture("cerny", 5)).in_hypothesis);
}

TEST_CASE("conjecture 4 checker") {
  CheckOutcome out = check_conjecture4(fixture("cerny", 4));
  CHECK(out.in_hypothesis);
  CHECK_FALSE(out.violation);
  CHECK(out.stats.at("avoid_length") <= 2 * 4 - 2);
  CHECK_FALSE(check_conjecture4(fixture("kari_prime")).in_hypothesis);  // not connected
}

TEST_CASE("conjecture 5 checker exempts kari-like automata") {
  CheckOutcome kari = check_conjecture5(fixture("kari"));
  CHECK(kari.in_hypothesis);
  CHECK_FALSE(kari.violation);
  CHECK(kari.stats.count("kari_exempt") == 1);

  CheckOutcome kp = check_conjecture5(fixture("kari_prime"));
  CHECK_FALSE(kp.violation);
  CHECK(kp.stats.count("kari_exempt") == 1);

  CHECK_FALSE(check_conjecture5(fixture("cerny", 5)).violation);

  // permutation automata have no word of rank below n: out of hypothesis
  CHECK_FALSE(check_conjecture5(Automaton(3, 1, {1, 2, 0})).in_hypothesis);
}

TEST_CASE("conjecture 1 checker") {
  CheckOutcome c4 = check_conjecture1(fixture("cerny", 4));
  CHECK(c4.in_hypothesis);  // the cycle letter has non-prime length 4
  CHECK_FALSE(c4.violation);
  CHECK(c4.stats.at("extension_word") <= 4);

  // prime cycle lengths are out of hypothesis
  CHECK_FALSE(check_conjecture1(fixture("cerny", 5)).in_hypothesis);
}

TEST_CASE("checkers are deterministic") {
  for (const char* name : {"conj1", "conj2", "conj3", "conj4", "conj5", "conj6"}) {
    CheckOutcome a = run_checker(name, fixture("cerny", 4));
    CheckOutcome b = run_checker(name, fixture("cerny", 4));
    CHECK(a.in_hypothesis == b.in_hypothesis);
    CHECK(a.violation == b.violation);
    CHECK(a.detail == b.detail);
    CHECK(a.tight == b.tight);
  }
}

TEST_CASE("campaign result merge is commutative and associative") {
  auto make = [](long long scanned, long long len, const std::string& witness) {
    CampaignResult r;
    r.campaign = "cerny";
    r.n = 4;
    r.k = 2;
    r.scanned = scanned;
    r.synchronizing = scanned / 2;
    r.spectrum[len] = scanned;
    MaxAgg m;
    m.value = len;
    m.witnesses = {witness};
    r.maxima["reset_length"] = m;
    r.violations.push_back({witness, "detail"});
    r.violation_count = 1;
    r.chunks.push_back(scanned);
    return r;
  };
  CampaignResult a = make(2, 5, "a-line"), b = make(4, 9, "b-line"), c = make(6, 9, "c-line");

  CampaignResult ab = a;
  ab.merge(b);
  CampaignResult ba = b;
  ba.merge(a);
  CHECK(ab.to_json() == ba.to_json());

  CampaignResult ab_c = ab;
  ab_c.merge(c);
  CampaignResult bc = b;
  bc.merge(c);
  CampaignResult a_bc = a;
  a_bc.merge(bc);
  CHECK(ab_c.to_json() == a_bc.to_json());
  CHECK(ab_c.maxima["reset_length"].value == 9);
  CHECK(ab_c.maxima["reset_length"].witnesses ==
        std::vector<std::string>{"b-line", "c-line"});
}

TEST_CASE("campaign result json round trip") {
  CampaignResult r;
  r.campaign = "conj4";
  r.n = 4;
  r.k = 3;
  r.filters = "strongly_connected";
  r.scanned = 10;
  r.in_hypothesis = 4;
  r.spectrum[6] = 2;
  r.maxima["avoid_length"] = {6, {"w1", "w2"}};
  r.tight.push_back({"w1", "state 0"});
  r.tight_count = 1;
  r.chunks = {0, 1, 2};
  CHECK(CampaignResult::from_json(r.to_json()).to_json() == r.to_json());
}

TEST_CASE("cerny campaign at n = 4") {
  GenerationPlan plan = campaign_plan("cerny", 4, 2, 0, {});
  CampaignOptions opts;
  CampaignRun run = run_campaign("cerny", plan, opts);
  REQUIRE(run.completed);
  const CampaignResult& r = run.result;
  CHECK(r.violation_count == 0);
  CHECK(r.maxima.at("reset_length").value == 9);

  long long total = 0;
  for (auto& [len, cnt] : r.spectrum) total += cnt;
  CHECK(total == r.synchronizing);

  // spectrum totals equal the class cardinality of the same plan
  long long class_size = 0, sync_size = 0;
  run_plan(plan, [&](const Automaton& b) {
    ++class_size;
    if (is_synchronizing(b)) ++sync_size;
  });
  CHECK(r.scanned == class_size);
  CHECK(r.synchronizing == sync_size);
}

TEST_CASE("campaign reports are worker-count independent") {
  GenerationPlan plan = campaign_plan("conj4", 4, 2, 0, {});
  CampaignOptions one, four;
  one.workers = 1;
  four.workers = 4;
  CampaignRun a = run_campaign("conj4", plan, one);
  CampaignRun b = run_campaign("conj4", plan, four);
  CHECK(a.result.to_json().dump() == b.result.to_json().dump());
  CHECK(a.result.violation_count == 0);
}

TEST_CASE("interrupted campaigns resume to byte-identical reports") {
  TempDir tmp;
  GenerationPlan plan = campaign_plan("cerny", 4, 2, 0, {});

  CampaignOptions plain;
  CampaignRun reference = run_campaign("cerny", plan, plain);

  CampaignOptions interrupted;
  interrupted.checkpoint_path = tmp.file("cp");
  interrupted.abort_after = 3;
  CampaignRun partial = run_campaign("cerny", plan, interrupted);
  CHECK_FALSE(partial.completed);

  CampaignOptions resume;
  resume.checkpoint_path = tmp.file("cp");
  CampaignRun final_run = run_campaign("cerny", plan, resume);
  REQUIRE(final_run.completed);
  CHECK(final_run.result.to_json().dump() == reference.result.to_json().dump());
}

TEST_CASE("checkpoints refuse to resume a different campaign") {
  TempDir tmp;
  GenerationPlan plan = campaign_plan("cerny", 4, 2, 0, {});
  CampaignOptions opts;
  opts.checkpoint_path = tmp.file("cp");
  run_campaign("cerny", plan, opts);

  GenerationPlan other = campaign_plan("cerny", 3, 2, 0, {});
  CHECK_THROWS_AS(run_campaign("cerny", other, opts), std::runtime_error);
}

TEST_CASE("spectrum gaps") {
  CampaignResult r;
  r.campaign = "gaps";
  r.n = 6;
  r.k = 2;
  r.spectrum = {{1, 4}, {2, 9}, {3, 1}, {21, 1}, {25, 1}};
  auto gaps = spectrum_gaps(r);
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0] == std::pair<long long, long long>{4, 20});
  CHECK(gaps[1] == std::pair<long long, long long>{22, 24});

  // unattained lengths above the last attained value are not a gap
  r.spectrum.erase(25);
  gaps = spectrum_gaps(r);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0] == std::pair<long long, long long>{4, 20});
}

TEST_CASE("grid campaign registry") {
  const auto& defs = grid_campaigns();
  REQUIRE(defs.size() == 4);
  bool n12 = false, n8 = false, gapsdef = false, n7 = false;
  for (const auto& g : defs) {
    if (g.name == "grid-cerny-binary-n12") {
      n12 = true;
      CHECK_FALSE(g.runnable);
      CHECK(g.expected.at("reset_length_counts").at("100") == 21);
      CHECK(g.expected.at("reset_length_counts").at("121") == 1);
    }
    if (g.name == "grid-cerny-ternary-n8") n8 = true;
    if (g.name == "grid-gaps-binary-n9-12") {
      gapsdef = true;
      CHECK(g.expected.at("gaps").at("11") == 3);
    }
    if (g.name == "grid-problem1-binary-n7") {
      n7 = true;
      CHECK(g.runnable);
      CHECK(g.expected.at("greedy_extend_max") == 48);
      CHECK(g.expected.at("greedy_compress_max") == 43);
    }
  }
  CHECK(n12);
  CHECK(n8);
  CHECK(gapsdef);
  CHECK(n7);
  CHECK_THROWS_AS(run_grid_campaign("grid-cerny-binary-n12", {}), std::runtime_error);
  CHECK_THROWS_AS(run_grid_campaign("no-such-grid", {}), std::invalid_argument);
}

TEST_CASE("problem1 campaign at ternary n = 3") {
  GenerationPlan plan = campaign_plan("problem1", 3, 3, 0, {});
  CampaignOptions opts;
  opts.workers = 2;
  CampaignRun run = run_campaign("problem1", plan, opts);
  REQUIRE(run.completed);
  CHECK(run.result.maxima.count("greedy_compress") == 1);
  CHECK(run.result.maxima.at("greedy_compress").value >= run.result.maxima.at("reset_length").value);
}
