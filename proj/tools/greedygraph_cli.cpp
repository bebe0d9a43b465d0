// greedygraph: simulation campaigns, oracles, curve dumps and the acceptance suite.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greedygraph/acceptance.hpp"
#include "greedygraph/branching.hpp"
#include "greedygraph/lambda_tracker.hpp"
#include "greedygraph/numerics.hpp"
#include "greedygraph/patterns.hpp"
#include "greedygraph/predictor.hpp"
#include "greedygraph/process.hpp"
#include "json.hpp"

namespace gg = greedygraph;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 1;
constexpr int kExitUsage = 2;

struct Config {
  std::vector<std::uint64_t> n;
  double eps = 0.1;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  std::string pattern = "C4";
  std::string snapshots_dir;
  std::size_t grid = 1024;
  int depth = 40;
  std::uint64_t k = 8;
  std::optional<double> zeta;
  unsigned jobs = 1;
  std::string out;
  std::string profile = "quick";
  std::optional<double> cutoff;
  std::optional<std::uint64_t> round;
  std::size_t sample = 2000;
  std::string csv;
  bool timing = false;
};

json config_json(const std::string& command, const Config& c) {
  json j = {{"command", command}, {"n", c.n},         {"eps", c.eps},   {"trials", c.trials},
            {"seed", c.seed},       {"pattern", c.pattern}, {"grid", c.grid}, {"depth", c.depth},
            {"k", c.k},             {"jobs", c.jobs},   {"profile", c.profile}, {"sample", c.sample}};
  j["zeta"] = c.zeta ? json(*c.zeta) : json(nullptr);
  j["cutoff"] = c.cutoff ? json(*c.cutoff) : json(nullptr);
  j["round"] = c.round ? json(*c.round) : json(nullptr);
  j["rounds_snapshots"] = c.snapshots_dir.empty() ? json(nullptr) : json(c.snapshots_dir);
  return j;
}

// Wraps a payload with the provenance every output file carries.
json envelope(const std::string& command, const Config& c, json payload, double seconds) {
  json j = {{"tool", {{"name", "greedygraph"}, {"version", GREEDYGRAPH_VERSION}}},
            {"config", config_json(command, c)},
            {"seed", c.seed}};
  if (c.timing) j["wall_clock_seconds"] = seconds;
  j["result"] = std::move(payload);
  return j;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string csv_header(const std::string& command, const Config& c) {
  return "# greedygraph " + std::string(GREEDYGRAPH_VERSION) + " config " + config_json(command, c).dump() + "\n";
}

void write_snapshot(const std::string& dir, const std::string& name, const gg::BitGraph& g) {
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / name);
  if (!f) throw std::runtime_error("cannot write snapshot in " + dir);
  gg::write_edge_list(f, g);
}

json edge_summary(const std::vector<double>& edges) {
  const auto s = gg::SampleStats::of(edges);
  return {{"mean", s.mean}, {"sd", s.sd}, {"count", s.count}};
}

json run_process_campaign(const Config& c, gg::ProcessMode mode) {
  json rows = json::array();
  for (std::uint64_t n : c.n) {
    const auto ctx = gg::RoundContext::make(n, c.eps);
    const bool snapshots = !c.snapshots_dir.empty();
    const std::function<json(std::uint64_t)> trial = [&](std::uint64_t t) {
      gg::ProcessParams params{ctx, c.seed, t, mode, snapshots && mode == gg::ProcessMode::kRounds, c.cutoff};
      const gg::RunTrace trace = gg::run_process(params);
      if (!trace.final_graph.audit_triangle_free()) throw std::logic_error("process produced a triangle");
      if (snapshots) {
        const std::string stem = "n" + std::to_string(n) + "_t" + std::to_string(t);
        if (mode == gg::ProcessMode::kRounds) {
          for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
            write_snapshot(c.snapshots_dir, stem + "_i" + std::to_string(i) + ".edges", trace.snapshots[i].graph());
          }
        } else {
          write_snapshot(c.snapshots_dir, stem + "_final.edges", trace.final_graph.graph());
        }
      }
      return gg::trace_to_json(params, trace);
    };
    const auto traces = gg::run_indexed(c.trials, c.jobs, trial);
    std::vector<double> edges;
    for (const auto& t : traces) edges.push_back(t["final_edges"].get<double>());
    const double predicted = static_cast<double>(n) * (n - 1) / 2.0 * ctx.Phi_at(ctx.total_rounds()) / std::sqrt(n);
    rows.push_back({{"n", n},
                    {"k", ctx.k()},
                    {"rounds", ctx.total_rounds()},
                    {"equivalent_cutoff", gg::equivalent_cutoff(ctx)},
                    {"predicted_edges", predicted},
                    {"final_edges", edge_summary(edges)},
                    {"trials", traces}});
  }
  return rows;
}

int cmd_oracle(const Config& c, double& elapsed) {
  const auto start = std::chrono::steady_clock::now();
  json rows = json::array();
  for (std::uint64_t n : c.n) rows.push_back(gg::oracle_to_json(gg::exhaustive_oracle(static_cast<std::uint32_t>(n))));
  elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(c.out, envelope("oracle", c, rows, elapsed).dump(2) + "\n");
  return kExitOk;
}

int cmd_lambda(const Config& c) {
  const auto start = std::chrono::steady_clock::now();
  json rows = json::array();
  std::ostringstream csv;
  csv << csv_header("lambda", c);
  for (std::uint64_t n : c.n) {
    const auto ctx = gg::RoundContext::make(n, c.eps);
    gg::ProcessParams params{ctx, c.seed, 0, gg::ProcessMode::kRounds, true, std::nullopt};
    const auto trace = gg::run_rounds(params);
    const auto report = gg::check_trajectories(trace, ctx, c.sample, c.seed);
    gg::write_lambda_csv(csv, report, ctx);
    json windows = json::array();
    for (const auto& w : report.rounds) {
      windows.push_back({{"i", w.round},         {"Gamma", w.Gamma},
                         {"center1", w.center1}, {"center2", w.center2},
                         {"frac_lam1_1x", w.frac_lam1_1x}, {"frac_lam1_5x", w.frac_lam1_5x},
                         {"frac_lam2_1x", w.frac_lam2_1x}, {"frac_lam2_5x", w.frac_lam2_5x},
                         {"mean_ratio1", w.mean_ratio1}, {"sd_ratio1", w.sd_ratio1},
                         {"mean_ratio2", w.mean_ratio2}, {"sd_ratio2", w.sd_ratio2},
                         {"cap0", w.cap0},       {"max_lam0", w.max_lam0},
                         {"cap1", w.cap1},       {"max_lam1", w.max_lam1},
                         {"cap0_violations", w.cap0_violations}, {"cap1_violations", w.cap1_violations}});
    }
    rows.push_back({{"n", n}, {"k", ctx.k()}, {"rounds", ctx.total_rounds()}, {"windows", windows}});
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.csv.empty()) emit(c.csv, csv.str());
  emit(c.out, envelope("lambda", c, rows, elapsed).dump(2) + "\n");
  return kExitOk;
}

int cmd_branching(const Config& c) {
  const auto start = std::chrono::steady_clock::now();
  json rows = json::array();
  std::ostringstream csv;
  csv << csv_header("branching", c);
  for (std::uint64_t n : c.n) {
    const auto base = gg::RoundContext::make(n, c.eps);
    const std::uint64_t i = c.round.value_or(base.total_rounds() / 2);
    if (i > base.total_rounds()) throw CLI::ValidationError("--round", "must be at most I = k^2");
    const auto ctx = base.at_round(i);
    const auto gated = gg::gated_limit_recursion(ctx, c.depth, c.grid);
    const auto& limit = gated.levels;
    const auto model = gg::SurvivalModel::make(ctx, c.k, c.depth, c.grid, c.zeta);
    const auto finite = gg::finite_m_recursion(model);
    const auto closed = gg::closed_form(ctx, ctx.delta());
    json row = {{"n", n},
                {"round", i},
                {"delta", ctx.delta()},
                {"Phi", ctx.Phi_at(i)},
                {"phi", ctx.phi_at(i)},
                {"closed_form", {{"P_delta", closed.P}, {"p_delta", closed.p}}},
                {"limit_p_delta", limit.back().p.back()},
                {"grid_gate", {{"grid_points", gated.grid_points}, {"doubling_change", gated.doubling_change},
                               {"converged", gated.converged}}},
                {"finite_m", {{"k", model.k}, {"m", model.m()}, {"zeta", model.zeta}, {"n1", model.n1},
                              {"n2", model.n2}, {"p_delta", finite.back().p.back()}}}};
    if (c.trials >= 1000) {
      const auto mc = gg::simulate_tree(model, ctx.delta(), c.trials, c.seed);
      row["monte_carlo"] = {{"trials", mc.trials}, {"mean", mc.mean}, {"std_error", mc.std_error},
                            {"z", mc.std_error > 0 ? (mc.mean - finite.back().p.back()) / mc.std_error : 0.0}};
    } else {
      row["monte_carlo"] = nullptr;
    }
    rows.push_back(row);
    gg::write_curves_csv(csv, limit, ctx);
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.csv.empty()) emit(c.csv, csv.str());
  emit(c.out, envelope("branching", c, rows, elapsed).dump(2) + "\n");
  return kExitOk;
}

int cmd_predict(const Config& c, bool with_gnm) {
  const auto start = std::chrono::steady_clock::now();
  const auto pattern = gg::load_pattern(c.pattern);
  json rows = json::array();
  for (std::uint64_t n : c.n) {
    const auto ctx = gg::RoundContext::make(n, c.eps);
    const auto report = with_gnm ? gg::compare_with_gnm(pattern, ctx, c.trials, c.seed, c.jobs)
                                 : gg::predict_campaign(pattern, ctx, c.trials, c.seed, c.jobs);
    rows.push_back(gg::report_to_json(report));
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(c.out, envelope(with_gnm ? "compare-gnm" : "predict", c, rows, elapsed).dump(2) + "\n");
  return kExitOk;
}

int cmd_accept(const Config& c) {
  gg::AcceptanceOptions options;
  options.profile = gg::parse_profile(c.profile);
  options.seed = c.seed;
  options.jobs = c.jobs;
  const auto start = std::chrono::steady_clock::now();
  const auto results = gg::run_acceptance(options, [](const gg::CriterionResult& r) {
    std::cout << gg::format_line(r) << std::endl;
  });
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool passed = true;
  for (const auto& r : results) passed = passed && r.passed;
  if (!c.out.empty()) {
    Config timed = c;
    timed.timing = true;
    json payload = {{"passed", passed}, {"criteria", gg::results_to_json(results)}};
    emit(c.out, envelope("accept", timed, payload, elapsed).dump(2) + "\n");
  }
  std::cout << (passed ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return passed ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle-free process simulator and verification toolkit", "greedygraph"};
  app.set_version_flag("--version", std::string(GREEDYGRAPH_VERSION));
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command-line flags override it");

  Config c;
  app.add_option("--n", c.n, "vertex counts (space or comma separated)")->delimiter(',');
  app.add_option("--eps", c.eps, "exponent eps in (0, 1/2)")->check(CLI::Range(0.0, 0.5));
  app.add_option("--trials", c.trials, "independent trials");
  app.add_option("--seed", c.seed, "base seed")->envname("GREEDYGRAPH_SEED");
  app.add_option("--pattern", c.pattern, "catalog name (K2, P3, C4, ...) or edge-list file");
  app.add_option("--rounds-snapshots", c.snapshots_dir, "directory for per-round edge-list snapshots");
  app.add_option("--grid", c.grid, "survival grid points (>= 256)");
  app.add_option("--depth", c.depth, "tree depth L");
  app.add_option("--k", c.k, "finite tree scale k = m phi(i delta)")->check(CLI::PositiveNumber);
  app.add_option("--zeta", c.zeta, "singleton thinning factor in [0.1, 0.9]")->check(CLI::Range(0.1, 0.9));
  app.add_option("--jobs", c.jobs, "trial-level workers")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--profile", c.profile, "acceptance profile")->check(CLI::IsMember({"quick", "full"}));
  app.add_option("--cutoff", c.cutoff, "birthtime cutoff p for simulate")->check(CLI::Range(0.0, 1.0));
  app.add_option("--round", c.round, "round i for branching (default I/2)");
  app.add_option("--sample", c.sample, "edges sampled per round for lambda");
  app.add_option("--csv", c.csv, "CSV dump for lambda samples or branching curves");
  app.add_flag("--timing", c.timing, "embed wall-clock seconds in the output");

  auto* simulate = app.add_subcommand("simulate", "one-shot process on K_n (optionally cut at p)");
  auto* rounds = app.add_subcommand("rounds", "round-based process through round I");
  auto* oracle = app.add_subcommand("oracle", "exact outcome law for n in {3, 4, 5}");
  auto* lambda = app.add_subcommand("lambda", "Lambda trajectory windows per round");
  auto* branching = app.add_subcommand("branching", "survival curves and tree Monte Carlo");
  auto* predict = app.add_subcommand("predict", "pattern-count predictions against TF_I");
  auto* gnm = app.add_subcommand("compare-gnm", "TF_I pattern counts against G(n, m)");
  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  for (auto* sub : {simulate, rounds, oracle, lambda, branching, predict, gnm, accept}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c.n.empty()) {
      if (oracle->parsed()) c.n = {4};
      else if (!accept->parsed()) throw CLI::RequiredError("--n");
    }
    if (simulate->parsed() || rounds->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const auto mode = simulate->parsed() ? gg::ProcessMode::kExact : gg::ProcessMode::kRounds;
      json rows = run_process_campaign(c, mode);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(c.out, envelope(simulate->parsed() ? "simulate" : "rounds", c, rows, elapsed).dump(2) + "\n");
      return kExitOk;
    }
    double elapsed = 0.0;
    if (oracle->parsed()) return cmd_oracle(c, elapsed);
    if (lambda->parsed()) return cmd_lambda(c);
    if (branching->parsed()) return cmd_branching(c);
    if (predict->parsed()) return cmd_predict(c, false);
    if (gnm->parsed()) return cmd_predict(c, true);
    if (accept->parsed()) return cmd_accept(c);
  } catch (const CLI::Error& e) {
    std::cerr << "greedygraph: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "greedygraph: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "greedygraph: error: " << e.what() << "\n";
    return 3;
  }
  return kExitUsage;
}
