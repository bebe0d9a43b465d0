#include "greedygraph/predictor.hpp"

#include <cmath>
#include <stdexcept>

#include "greedygraph/process.hpp"
#include "greedygraph/rng.hpp"

namespace greedygraph {
namespace {

// ln of the number of copies of F in K_n: ln(n!/(n-v)!) - ln aut(F).
double log_copies_in_complete(const PatternGraph& pattern, std::uint64_t n) {
  if (!pattern.triangle_free()) throw std::invalid_argument("prediction needs a triangle-free pattern");
  if (pattern.vertex_count() > n) throw std::invalid_argument("pattern has more vertices than the host");
  double log_falling = 0.0;
  for (std::uint32_t j = 0; j < pattern.vertex_count(); ++j) log_falling += std::log(static_cast<double>(n - j));
  return log_falling - std::log(static_cast<double>(pattern.aut()));
}

TrialCounts count_in(const BitGraph& g, const PatternGraph& pattern) {
  return {count_copies(g, pattern), g.triangle_count(), g.edge_count()};
}

std::vector<double> column(const std::vector<TrialCounts>& rows, std::uint64_t TrialCounts::*field) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(static_cast<double>(r.*field));
  return out;
}

nlohmann::json stats_json(const SampleStats& s) { return {{"mean", s.mean}, {"sd", s.sd}, {"count", s.count}}; }

}  // namespace

SampleStats SampleStats::of(const std::vector<double>& xs) {
  SampleStats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

double log_predict_copies(const PatternGraph& pattern, const RoundContext& ctx) {
  const double p = ctx.Phi_at(ctx.total_rounds()) / std::sqrt(static_cast<double>(ctx.n()));
  return log_copies_in_complete(pattern, ctx.n()) + pattern.edge_count() * std::log(p);
}

double predict_copies(const PatternGraph& pattern, const RoundContext& ctx) {
  return std::exp(log_predict_copies(pattern, ctx));
}

double predict_copies_ln_form(const PatternGraph& pattern, const RoundContext& ctx) {
  const double n = static_cast<double>(ctx.n());
  const double log_p = 0.5 * (std::log(ctx.eps() * std::log(n)) - std::log(n));
  return std::exp(log_copies_in_complete(pattern, ctx.n()) + pattern.edge_count() * log_p);
}

std::uint64_t gnm_edge_count(const RoundContext& ctx) {
  const double n = static_cast<double>(ctx.n());
  return static_cast<std::uint64_t>(std::floor(0.5 * std::pow(n, 1.5) * std::sqrt(ctx.eps() * std::log(n))));
}

BitGraph sample_gnm(Vertex n, std::uint64_t m, std::uint64_t seed, std::uint64_t trial) {
  const EdgeIndex index(n);
  if (m > index.count()) throw std::invalid_argument("sample_gnm: m exceeds C(n, 2)");
  auto rng = StreamRng::for_stream(seed, trial, 0, StreamPurpose::kGnm);
  BitGraph g(n);
  while (g.edge_count() < m) {
    const auto [u, v] = index.decode(EdgeId{rng.below(index.count())});
    if (!g.has_edge(u, v)) g.insert_edge(u, v);
  }
  return g;
}

PredictionReport predict_campaign(const PatternGraph& pattern, const RoundContext& ctx, std::uint64_t trials,
                                  std::uint64_t seed, unsigned jobs) {
  if (trials == 0) throw std::invalid_argument("campaign needs at least one trial");
  PredictionReport report;
  report.pattern = pattern.name();
  report.n = ctx.n();
  report.eps = ctx.eps();
  report.trials = trials;
  report.seed = seed;
  report.predicted = predict_copies(pattern, ctx);
  report.predicted_ln_form = predict_copies_ln_form(pattern, ctx);

  const std::function<TrialCounts(std::uint64_t)> run = [&](std::uint64_t t) {
    ProcessParams params{ctx, seed, t, ProcessMode::kRounds, false, std::nullopt};
    return count_in(run_rounds(params).final_graph.graph(), pattern);
  };
  const auto rows = run_indexed(trials, jobs, run);
  report.copies = SampleStats::of(column(rows, &TrialCounts::copies));
  report.edges = SampleStats::of(column(rows, &TrialCounts::edges));
  for (const auto& r : rows) report.max_tf_triangles = std::max(report.max_tf_triangles, r.triangles);
  report.ratio = report.copies.mean / report.predicted;
  report.ratio_se = report.copies.std_error() / report.predicted;
  return report;
}

PredictionReport compare_with_gnm(const PatternGraph& pattern, const RoundContext& ctx, std::uint64_t trials,
                                  std::uint64_t seed, unsigned jobs) {
  PredictionReport report = predict_campaign(pattern, ctx, trials, seed, jobs);
  GnmComparison cmp;
  cmp.m = gnm_edge_count(ctx);
  const auto n = static_cast<Vertex>(ctx.n());
  const std::function<TrialCounts(std::uint64_t)> run = [&](std::uint64_t t) {
    return count_in(sample_gnm(n, cmp.m, seed, t), pattern);
  };
  const auto rows = run_indexed(trials, jobs, run);
  cmp.copies = SampleStats::of(column(rows, &TrialCounts::copies));
  cmp.triangles = SampleStats::of(column(rows, &TrialCounts::triangles));
  cmp.min_triangles = rows.front().triangles;
  for (const auto& r : rows) cmp.min_triangles = std::min(cmp.min_triangles, r.triangles);
  if (report.copies.mean > 0.0) {
    cmp.ratio_to_tf = cmp.copies.mean / report.copies.mean;
    // Delta method for a ratio of independent means.
    const double a = cmp.copies.mean > 0.0 ? cmp.copies.std_error() / cmp.copies.mean : 0.0;
    const double b = report.copies.std_error() / report.copies.mean;
    cmp.ratio_to_tf_se = cmp.ratio_to_tf * std::sqrt(a * a + b * b);
  }
  report.gnm = cmp;
  return report;
}

nlohmann::json report_to_json(const PredictionReport& report) {
  nlohmann::json j = {
      {"pattern", report.pattern},
      {"n", report.n},
      {"eps", report.eps},
      {"trials", report.trials},
      {"seed", report.seed},
      {"predicted", report.predicted},
      {"predicted_ln_form", report.predicted_ln_form},
      {"empirical_mean", report.copies.mean},
      {"empirical_sd", report.copies.sd},
      {"ratio", report.ratio},
      {"ratio_se", report.ratio_se},
      {"tf_edges", stats_json(report.edges)},
      {"tf_max_triangles", report.max_tf_triangles},
  };
  if (report.gnm) {
    const GnmComparison& g = *report.gnm;
    j["gnm"] = {{"m", g.m},
                {"copies", stats_json(g.copies)},
                {"triangles", stats_json(g.triangles)},
                {"min_triangles", g.min_triangles},
                {"ratio_to_tf", g.ratio_to_tf},
                {"ratio_to_tf_se", g.ratio_to_tf_se}};
  } else {
    j["gnm"] = nullptr;
  }
  return j;
}

}  // namespace greedygraph
