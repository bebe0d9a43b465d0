#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "greedygraph/graph.hpp"
#include "greedygraph/numerics.hpp"
#include "greedygraph/process.hpp"

namespace greedygraph {

/// Potential triangles through an edge g = {u, v}, classified by the third
/// vertex w:
///   lam0: both {u,w} and {v,w} are in TF_i.
///   lam1: one is in TF_i; the other is unbirthed and individually addable.
///   lam2: both are unbirthed and individually addable.
/// "Individually addable" means TF_i plus that one edge stays triangle-free.
struct LambdaCounts {
  std::uint64_t lam0 = 0;
  std::uint64_t lam1 = 0;
  std::uint64_t lam2 = 0;
  friend bool operator==(const LambdaCounts&, const LambdaCounts&) = default;
};

/// Answers Lambda queries against one snapshot. Each vertex's row of
/// unbirthed addable partners is built on first use (O(deg * n / 64)) and
/// reused, so a query costs O(n / 64) words once its rows exist.
class LambdaScanner {
 public:
  explicit LambdaScanner(const EvolvingGraph& state);

  LambdaCounts counts(Vertex u, Vertex v);

 private:
  const std::vector<std::uint64_t>& addable_row(Vertex x);

  const EvolvingGraph& state_;
  std::vector<std::vector<std::uint64_t>> addable_;
};

/// One-off query; see LambdaScanner for batches.
LambdaCounts lambda_sets(const EvolvingGraph& state, Vertex u, Vertex v);

struct LambdaSample {
  std::uint64_t round = 0;
  Edge edge;
  bool birthed = false;
  LambdaCounts counts;
};

struct RoundWindow {
  std::uint64_t round = 0;
  double center1 = 0.0;  // 2 sqrt(n) Phi(i delta) phi(i delta)
  double center2 = 0.0;  // n phi(i delta)^2
  double Gamma = 0.0;
  std::uint64_t window_samples = 0;  // unbirthed edges sampled
  double frac_lam1_1x = 0.0;         // fraction with |lam1/center1 - 1| <= Gamma
  double frac_lam1_5x = 0.0;
  double frac_lam2_1x = 0.0;
  double frac_lam2_5x = 0.0;
  double mean_ratio1 = 0.0;
  double sd_ratio1 = 0.0;
  double mean_ratio2 = 0.0;
  double sd_ratio2 = 0.0;
  double cap0 = 0.0;  // i n^{5 eps}
  double cap1 = 0.0;  // i sqrt(n)
  std::uint64_t cap_samples = 0;
  std::uint64_t max_lam0 = 0;
  std::uint64_t max_lam1 = 0;
  std::uint64_t cap0_violations = 0;
  std::uint64_t cap1_violations = 0;
};

struct TrajectoryReport {
  std::vector<RoundWindow> rounds;
  std::vector<LambdaSample> samples;
};

/// For every recorded round: samples min(sample_size, #unbirthed) unbirthed
/// edges for the lam1/lam2 windows, and sample_size edges drawn from all of
/// K_n (birthed included) for the lam0/lam1 caps. Requires a trace recorded
/// with snapshots; throws std::invalid_argument otherwise.
TrajectoryReport check_trajectories(const RunTrace& trace, const RoundContext& ctx, std::size_t sample_size,
                                    std::uint64_t seed);

/// Columns: i, edge, lam0, lam1, lam2, center1, center2, Gamma_i, birthed.
void write_lambda_csv(std::ostream& out, const TrajectoryReport& report, const RoundContext& ctx);

}  // namespace greedygraph
