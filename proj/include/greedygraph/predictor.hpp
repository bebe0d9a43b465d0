#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "greedygraph/graph.hpp"
#include "greedygraph/numerics.hpp"
#include "greedygraph/patterns.hpp"
#include "json.hpp"

namespace greedygraph {

/// ln of the expected number of copies of F in TF_I:
///   ln[(v_F!/aut(F)) C(n, v_F)] + e_F ln(Phi(I delta)/sqrt(n)).
/// Throws std::invalid_argument if F contains a triangle or v_F > n.
double log_predict_copies(const PatternGraph& pattern, const RoundContext& ctx);
double predict_copies(const PatternGraph& pattern, const RoundContext& ctx);

/// Same count with Phi(I delta)^2 replaced by ln(n^eps), for reference.
double predict_copies_ln_form(const PatternGraph& pattern, const RoundContext& ctx);

/// floor(n^{3/2} sqrt(ln n^eps) / 2): the comparison edge count.
std::uint64_t gnm_edge_count(const RoundContext& ctx);

/// Uniform G(n, m) by rejection over EdgeIds; deterministic in (seed, trial).
BitGraph sample_gnm(Vertex n, std::uint64_t m, std::uint64_t seed, std::uint64_t trial);

/// Runs fn(0..count-1) on up to `jobs` threads and returns results in index
/// order, so aggregates never depend on scheduling.
template <typename T>
std::vector<T> run_indexed(std::uint64_t count, unsigned jobs, const std::function<T(std::uint64_t)>& fn) {
  std::vector<T> out(count);
  const unsigned workers = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::uint64_t>(count, 1))));
  if (workers == 1) {
    for (std::uint64_t t = 0; t < count; ++t) out[t] = fn(t);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t t = w; t < count; t += workers) out[t] = fn(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct SampleStats {
  double mean = 0.0;
  double sd = 0.0;
  std::uint64_t count = 0;

  static SampleStats of(const std::vector<double>& xs);
  double std_error() const { return count ? sd / std::sqrt(static_cast<double>(count)) : 0.0; }
};

struct TrialCounts {
  std::uint64_t copies = 0;
  std::uint64_t triangles = 0;
  std::uint64_t edges = 0;
};

struct GnmComparison {
  std::uint64_t m = 0;
  SampleStats copies;
  SampleStats triangles;
  std::uint64_t min_triangles = 0;
  double ratio_to_tf = 0.0;  // G(n,m) copies mean / TF_I copies mean
  double ratio_to_tf_se = 0.0;
};

struct PredictionReport {
  std::string pattern;
  std::uint64_t n = 0;
  double eps = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double predicted = 0.0;
  double predicted_ln_form = 0.0;
  SampleStats copies;     // copies of F in TF_I
  SampleStats edges;      // |TF_I|
  std::uint64_t max_tf_triangles = 0;
  double ratio = 0.0;     // empirical mean / predicted
  double ratio_se = 0.0;
  std::optional<GnmComparison> gnm;
};

/// Copies of F in TF_I over `trials` round-process runs; trial t uses (seed, t).
PredictionReport predict_campaign(const PatternGraph& pattern, const RoundContext& ctx, std::uint64_t trials,
                                  std::uint64_t seed, unsigned jobs = 1);

/// predict_campaign plus the same number of G(n, m) samples.
PredictionReport compare_with_gnm(const PatternGraph& pattern, const RoundContext& ctx, std::uint64_t trials,
                                  std::uint64_t seed, unsigned jobs = 1);

/// {pattern, n, eps, trials, predicted, empirical_mean, empirical_sd, ratio, ratio_se, gnm: {...}}
nlohmann::json report_to_json(const PredictionReport& report);

}  // namespace greedygraph
