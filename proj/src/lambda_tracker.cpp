#include "greedygraph/lambda_tracker.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "greedygraph/rng.hpp"

namespace greedygraph {
namespace {

std::uint64_t popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i) c += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return c;
}

std::vector<Edge> sample_edges(const EvolvingGraph& state, std::size_t want, bool unbirthed_only, StreamRng& rng) {
  const Vertex n = state.n();
  const EdgeIndex index(n);
  const std::uint64_t population = unbirthed_only ? index.count() - state.birthed_count() : index.count();
  std::vector<Edge> out;
  if (population == 0 || want == 0) return out;

  if (population <= 2 * want) {
    std::vector<Edge> all;
    all.reserve(population);
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        if (!unbirthed_only || !state.is_birthed(u, v)) all.emplace_back(u, v);
      }
    }
    const std::size_t take = std::min<std::size_t>(want, all.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::swap(all[i], all[i + rng.below(all.size() - i)]);
    }
    all.resize(take);
    return all;
  }

  std::unordered_set<std::uint64_t> seen;
  while (out.size() < want) {
    const EdgeId id{rng.below(index.count())};
    const Edge e = index.decode(id);
    if (unbirthed_only && state.is_birthed(e.first, e.second)) continue;
    if (seen.insert(id.value).second) out.push_back(e);
  }
  return out;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double sd() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum_sq - count * m * m) / (count - 1)));
  }
};

// lam/center, with 0/0 read as an exact hit.
double ratio(std::uint64_t lam, double center) {
  if (center == 0.0) return lam == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(lam) / center;
}

}  // namespace

LambdaScanner::LambdaScanner(const EvolvingGraph& state) : state_(state), addable_(state.n()) {}

const std::vector<std::uint64_t>& LambdaScanner::addable_row(Vertex x) {
  auto& row = addable_[x];
  if (!row.empty()) return row;
  const BitGraph& tf = state_.graph();
  const std::size_t words = tf.words_per_row();
  // Vertices sharing a TF neighbor with x: {x, w} would close a triangle.
  std::vector<std::uint64_t> closed(words, 0);
  for (Vertex y : tf.neighbors(x)) {
    const auto r = tf.row(y);
    for (std::size_t i = 0; i < words; ++i) closed[i] |= r[i];
  }
  const auto born = state_.birthed().row(x);
  row.assign(words, 0);
  for (std::size_t i = 0; i < words; ++i) row[i] = ~born[i] & ~closed[i];
  row[x / 64] &= ~(std::uint64_t{1} << (x % 64));
  const Vertex n = state_.n();
  if (n % 64 != 0) row[words - 1] &= (std::uint64_t{1} << (n % 64)) - 1;
  return row;
}

LambdaCounts LambdaScanner::counts(Vertex u, Vertex v) {
  const BitGraph& tf = state_.graph();
  if (u == v || u >= tf.n() || v >= tf.n()) throw std::invalid_argument("lambda query needs two distinct vertices");
  const auto tf_u = tf.row(u);
  const auto tf_v = tf.row(v);
  const std::span<const std::uint64_t> add_u = addable_row(u);
  const std::span<const std::uint64_t> add_v = addable_row(v);
  LambdaCounts c;
  c.lam0 = popcount_and(tf_u, tf_v);
  c.lam1 = popcount_and(tf_u, add_v) + popcount_and(tf_v, add_u);
  c.lam2 = popcount_and(add_u, add_v);
  return c;
}

LambdaCounts lambda_sets(const EvolvingGraph& state, Vertex u, Vertex v) {
  LambdaScanner scanner(state);
  return scanner.counts(u, v);
}

TrajectoryReport check_trajectories(const RunTrace& trace, const RoundContext& ctx, std::size_t sample_size,
                                    std::uint64_t seed) {
  if (trace.snapshots.empty()) throw std::invalid_argument("check_trajectories: trace has no snapshots");
  const double n = static_cast<double>(ctx.n());
  const double root_n = std::sqrt(n);
  TrajectoryReport report;

  const std::uint64_t last = std::min<std::uint64_t>(trace.snapshots.size() - 1, ctx.total_rounds());
  for (std::uint64_t i = 0; i <= last; ++i) {
    const EvolvingGraph& state = trace.snapshots[i];
    LambdaScanner scanner(state);
    auto rng = StreamRng::for_stream(seed, 0, i, StreamPurpose::kSample);

    RoundWindow w;
    w.round = i;
    w.center1 = 2.0 * root_n * ctx.Phi_at(i) * ctx.phi_at(i);
    w.center2 = n * ctx.phi_at(i) * ctx.phi_at(i);
    w.Gamma = ctx.Gamma_at(i);
    w.cap0 = static_cast<double>(i) * std::pow(n, 5.0 * ctx.eps());
    w.cap1 = static_cast<double>(i) * root_n;

    Moments r1;
    Moments r2;
    std::uint64_t in1_1 = 0, in1_5 = 0, in2_1 = 0, in2_5 = 0;
    auto check_caps = [&](const LambdaCounts& c) {
      ++w.cap_samples;
      w.max_lam0 = std::max(w.max_lam0, c.lam0);
      w.max_lam1 = std::max(w.max_lam1, c.lam1);
      if (static_cast<double>(c.lam0) > w.cap0) ++w.cap0_violations;
      if (static_cast<double>(c.lam1) > w.cap1) ++w.cap1_violations;
    };

    for (const Edge& e : sample_edges(state, sample_size, true, rng)) {
      const LambdaCounts c = scanner.counts(e.first, e.second);
      report.samples.push_back({i, e, false, c});
      const double a = ratio(c.lam1, w.center1);
      const double b = ratio(c.lam2, w.center2);
      r1.add(a);
      r2.add(b);
      in1_1 += std::fabs(a - 1.0) <= w.Gamma;
      in1_5 += std::fabs(a - 1.0) <= 5.0 * w.Gamma;
      in2_1 += std::fabs(b - 1.0) <= w.Gamma;
      in2_5 += std::fabs(b - 1.0) <= 5.0 * w.Gamma;
      check_caps(c);
    }
    for (const Edge& e : sample_edges(state, sample_size, false, rng)) {
      const LambdaCounts c = scanner.counts(e.first, e.second);
      const bool born = state.is_birthed(e.first, e.second);
      report.samples.push_back({i, e, born, c});
      check_caps(c);
    }

    w.window_samples = r1.count;
    if (r1.count > 0) {
      const double total = static_cast<double>(r1.count);
      w.frac_lam1_1x = in1_1 / total;
      w.frac_lam1_5x = in1_5 / total;
      w.frac_lam2_1x = in2_1 / total;
      w.frac_lam2_5x = in2_5 / total;
    }
    w.mean_ratio1 = r1.mean();
    w.sd_ratio1 = r1.sd();
    w.mean_ratio2 = r2.mean();
    w.sd_ratio2 = r2.sd();
    report.rounds.push_back(w);
  }
  return report;
}

void write_lambda_csv(std::ostream& out, const TrajectoryReport& report, const RoundContext& ctx) {
  out << "i,edge,lam0,lam1,lam2,center1,center2,Gamma_i,birthed\n";
  out.precision(17);
  const double n = static_cast<double>(ctx.n());
  for (const auto& s : report.samples) {
    const double center1 = 2.0 * std::sqrt(n) * ctx.Phi_at(s.round) * ctx.phi_at(s.round);
    const double center2 = n * ctx.phi_at(s.round) * ctx.phi_at(s.round);
    out << s.round << ',' << s.edge.first << '-' << s.edge.second << ',' << s.counts.lam0 << ',' << s.counts.lam1
        << ',' << s.counts.lam2 << ',' << center1 << ',' << center2 << ',' << ctx.Gamma_at(s.round) << ','
        << (s.birthed ? 1 : 0) << '\n';
  }
}

}  // namespace greedygraph
