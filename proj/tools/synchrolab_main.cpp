#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "synchrolab/automaton.hpp"
#include "synchrolab/bounds.hpp"
#include "synchrolab/canonical.hpp"
#include "synchrolab/fixtures.hpp"
#include "synchrolab/genx.hpp"
#include "synchrolab/search.hpp"
#include "synchrolab/structure.hpp"
#include "synchrolab/verify.hpp"

using nlohmann::json;
using namespace synchrolab;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitViolations = 1;
constexpr int kExitInputError = 2;

std::vector<std::string> read_lines(const std::string& input, const std::string& inline_line) {
  std::vector<std::string> lines;
  if (!inline_line.empty()) {
    lines.push_back(inline_line);
    return lines;
  }
  if (input.empty() || input == "-") {
    std::string line;
    while (std::getline(std::cin, line))
      if (!line.empty()) lines.push_back(line);
    return lines;
  }
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot open input file: " + input);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

std::string tri_name(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "unknown";
  }
}

json classify_props(const Automaton& a) {
  json props;
  props["n"] = a.n();
  props["k"] = a.k();
  bool sync = is_synchronizing(a);
  props["synchronizing"] = sync;
  props["strongly_connected"] = is_strongly_connected(a);
  auto ap = aperiodicity_scan(a);
  props["aperiodic"] = tri_name(ap.aperiodic);
  props["permutation_automaton"] = is_permutation_automaton(a);
  props["bidirectional_path"] = is_bidirectional_path(a);
  props["kari_like"] = is_kari_like(a);
  if (sync) props["irreducibly_synchronizing"] = is_irreducibly_synchronizing(a);
  return props;
}

json bounds_json(const Automaton& a) {
  BoundReport rep = bound_report(a);
  json j;
  j["synchronizing"] = rep.synchronizing;
  json items = json::array();
  for (const auto& item : rep.items) {
    json inputs;
    for (auto& [key, value] : item.inputs) inputs[key] = value;
    items.push_back({{"name", item.name}, {"inputs", inputs}, {"value", item.value}});
  }
  j["bounds"] = items;
  if (rep.best) j["best"] = *rep.best;
  return j;
}

json analyze_props(const Automaton& a) {
  json props = classify_props(a);
  auto lengths = rank_word_lengths(a);
  int rank = a.n();
  for (int r = 1; r <= a.n(); ++r)
    if (lengths[r] != kUnreachable) {
      rank = r;
      break;
    }
  props["rank"] = rank;
  if (auto rr = reset_length(a)) {
    props["reset_length"] = rr->length;
    props["witness"] = format_word(rr->witness);
  }
  props["bounds"] = bounds_json(a)["bounds"];
  return props;
}

int for_each_line(const std::string& input, const std::string& inline_line,
                  const std::string& out_path, const std::string& format,
                  const std::function<json(const Automaton&)>& props) {
  std::ofstream file;
  std::ostream& out = open_out(file, out_path);
  int exit_code = kExitClean;
  auto lines = read_lines(input, inline_line);
  if (format == "tsv")
    out << "#a\tsynchronizing\treset_length\trank\tstrongly_connected\taperiodic\n";
  long long lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    json rec;
    try {
      Automaton a = parse_line(line);
      rec = {{"a", line}, {"props", props(a)}};
    } catch (const std::exception& e) {
      rec = {{"a", line}, {"error", e.what()}, {"line_number", lineno}};
      exit_code = kExitInputError;
    }
    if (format == "tsv") {
      if (rec.contains("error")) {
        out << "#error line " << lineno << ": " << rec["error"].get<std::string>() << "\n";
        continue;
      }
      const json& p = rec["props"];
      auto cell = [&](const char* key) -> std::string {
        if (!p.contains(key)) return "-";
        const json& v = p[key];
        return v.is_string() ? v.get<std::string>() : v.dump();
      };
      out << line << "\t" << cell("synchronizing") << "\t" << cell("reset_length") << "\t"
          << cell("rank") << "\t" << cell("strongly_connected") << "\t" << cell("aperiodic")
          << "\n";
    } else {
      out << rec.dump() << "\n";
    }
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synchrolab: exact analysis of synchronizing automata"};
  app.require_subcommand(1);

  std::string input, inline_line, out_path, format = "jsonl";
  std::string name, checkpoint, fixture_name;
  int n = 0, k = 2, workers = 1, chunk_size = 0, m = 0;
  long long threshold = 0, abort_after = -1;
  bool strongly_connected = false, irreducible = false, enable_grid = false;

  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("input", input, "input file of automaton lines ('-' = stdin)");
    cmd->add_option("--line", inline_line, "inline automaton line");
    cmd->add_option("--out", out_path, "output path (default stdout)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "per-automaton properties and bounds");
  add_io(analyze);
  analyze->add_option("--format", format, "jsonl | tsv")
      ->check(CLI::IsMember({"jsonl", "tsv"}));

  CLI::App* classify = app.add_subcommand("classify", "structural classifiers only");
  add_io(classify);

  CLI::App* bounds_cmd = app.add_subcommand("bounds", "upper-bound report per automaton");
  add_io(bounds_cmd);

  CLI::App* fixture_cmd = app.add_subcommand("fixture", "print a named fixture automaton");
  fixture_cmd->add_option("name", fixture_name, "fixture name")->required();
  fixture_cmd->add_option("--n", n, "series size (cerny, aperiodic3)");

  CLI::App* dstar_cmd = app.add_subcommand("dstar", "exact D*(m, k) by both routes");
  dstar_cmd->add_option("--m", m, "cycle length")->required();

  CLI::App* generate = app.add_subcommand("generate", "isomorph-free corpus generation");
  generate->add_option("--n", n, "state count")->required();
  generate->add_option("--k", k, "alphabet size")->required();
  generate->add_option("--threshold", threshold, "drop parents whose extensions reset below this");
  generate->add_flag("--strongly-connected", strongly_connected, "emit strongly connected only");
  generate->add_flag("--irreducible", irreducible, "emit irreducibly synchronizing only");
  generate->add_option("--workers", workers, "worker threads");
  generate->add_option("--chunk-size", chunk_size, "parents per chunk (0 = auto)");
  generate->add_option("--checkpoint", checkpoint, "checkpoint path for resume");
  generate->add_option("--out", out_path, "corpus output path (default stdout)");
  generate->add_option("--abort-after-chunks", abort_after, "test hook: stop early")
      ->group("");

  CLI::App* campaign = app.add_subcommand("campaign", "verification campaign over a class");
  campaign->add_option("--name", name, "cerny | gaps | conj1..conj6 | problem1 | grid-*")
      ->required();
  campaign->add_option("--n", n, "state count");
  campaign->add_option("--k", k, "alphabet size");
  campaign->add_option("--threshold", threshold, "generation pruning threshold");
  campaign->add_flag("--strongly-connected", strongly_connected, "restrict the class");
  campaign->add_flag("--irreducible", irreducible, "restrict the class");
  campaign->add_option("--workers", workers, "worker threads");
  campaign->add_option("--chunk-size", chunk_size, "parents per chunk (0 = auto)");
  campaign->add_option("--checkpoint", checkpoint, "checkpoint path for resume");
  campaign->add_option("--out", out_path, "per-automaton JSONL stream path");
  campaign->add_option("--format", format, "report format: jsonl | tsv")
      ->check(CLI::IsMember({"jsonl", "tsv"}));
  campaign->add_flag("--enable-grid", enable_grid, "allow runnable grid campaigns");
  campaign->add_option("--abort-after-chunks", abort_after, "test hook: stop early")
      ->group("");

  CLI::App* grid = app.add_subcommand("grid", "list grid-scale campaign definitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitClean : kExitInputError;
  }

  try {
    if (app.got_subcommand(analyze))
      return for_each_line(input, inline_line, out_path, format, analyze_props);
    if (app.got_subcommand(classify))
      return for_each_line(input, inline_line, out_path, "jsonl", classify_props);
    if (app.got_subcommand(bounds_cmd))
      return for_each_line(input, inline_line, out_path, "jsonl", bounds_json);

    if (app.got_subcommand(fixture_cmd)) {
      std::cout << to_line(fixture(fixture_name, n ? n : -1)) << "\n";
      return kExitClean;
    }

    if (app.got_subcommand(dstar_cmd)) {
      json rows = json::array();
      bool all_agree = true;
      for (int kk = 1; kk <= m - 1; ++kk) {
        int a = dstar(m, kk), b = dstar_bruteforce(m, kk);
        all_agree = all_agree && a == b;
        rows.push_back({{"k", kk}, {"cyclotomic", a}, {"rank_oracle", b}, {"agree", a == b}});
      }
      json out = {{"m", m}, {"values", rows}, {"agree", all_agree}};
      std::cout << out.dump(2) << "\n";
      return all_agree ? kExitClean : kExitViolations;
    }

    if (app.got_subcommand(generate)) {
      GenerationPlan plan;
      plan.n = n;
      plan.k = k;
      plan.prune_threshold = threshold;
      plan.filters = {strongly_connected, irreducible};
      plan.chunk_size = chunk_size;
      CampaignOptions opts;
      opts.workers = workers;
      opts.checkpoint_path = checkpoint;
      opts.abort_after = abort_after;
      GenerationRun gen = run_generation(plan, opts);
      std::ofstream file;
      std::ostream& out = open_out(file, out_path);
      for (const auto& line : gen.corpus) out << line << "\n";
      if (!gen.completed) {
        std::cerr << "generation interrupted; resume with the same checkpoint\n";
        return kExitClean;
      }
      return kExitClean;
    }

    if (app.got_subcommand(campaign)) {
      CampaignOptions opts;
      opts.workers = workers;
      opts.checkpoint_path = checkpoint;
      opts.stream_path = out_path;
      opts.abort_after = abort_after;

      CampaignRun run;
      if (name.rfind("grid-", 0) == 0) {
        const auto& defs = grid_campaigns();
        auto it = std::find_if(defs.begin(), defs.end(),
                               [&](const GridCampaign& g) { return g.name == name; });
        if (it == defs.end()) throw std::invalid_argument("unknown grid campaign: " + name);
        if (!it->runnable || !enable_grid) {
          json j = {{"name", it->name},
                    {"description", it->description},
                    {"estimated_cost", it->estimated_cost},
                    {"expected", it->expected},
                    {"runnable_with_flag", it->runnable}};
          std::cerr << "grid campaign not run"
                    << (it->runnable ? " (pass --enable-grid to run it)" : " at desk scale")
                    << "\n";
          std::cout << j.dump(2) << "\n";
          return kExitInputError;
        }
        run = run_grid_campaign(name, opts);
      } else {
        if (n < 1) throw std::invalid_argument("campaign requires --n");
        GenerationPlan plan =
            campaign_plan(name, n, k, threshold, {strongly_connected, irreducible});
        plan.chunk_size = chunk_size;
        run = run_campaign(name, plan, opts);
      }

      json report = run.result.to_json();
      report["completed"] = run.completed;
      if (name == "gaps") {
        json gaps = json::array();
        for (auto& [lo, hi] : spectrum_gaps(run.result)) gaps.push_back({{"from", lo}, {"to", hi}});
        report["gaps"] = gaps;
      }
      if (format == "tsv") {
        std::cout << "#reset_length\tcount\n";
        for (auto& [len, cnt] : run.result.spectrum) std::cout << len << "\t" << cnt << "\n";
      } else {
        std::cout << report.dump(2) << "\n";
      }
      if (!run.completed) {
        std::cerr << "campaign interrupted; resume with the same checkpoint\n";
        return kExitClean;
      }
      return run.result.violation_count > 0 ? kExitViolations : kExitClean;
    }

    if (app.got_subcommand(grid)) {
      json out = json::array();
      for (const auto& g : grid_campaigns())
        out.push_back({{"name", g.name},
                       {"description", g.description},
                       {"estimated_cost", g.estimated_cost},
                       {"expected", g.expected},
                       {"runnable_with_flag", g.runnable}});
      std::cout << out.dump(2) << "\n";
      return kExitClean;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitClean;
}
