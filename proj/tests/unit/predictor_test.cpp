#include <gtest/gtest.h>

#include <cmath>

#include "greedygraph/predictor.hpp"

using namespace greedygraph;

namespace {

PatternGraph cat(const char* name) { return *catalog_pattern(name); }

double choose(double n, int r) {
  double out = 1.0;
  for (int j = 0; j < r; ++j) out *= (n - j) / (j + 1);
  return out;
}

}  // namespace

TEST(Predict, SingleEdge) {
  const RoundContext ctx = RoundContext::make(100000, 0.1);
  const double n = 100000.0;
  const double x = ctx.Phi_at(ctx.total_rounds()) / std::sqrt(n);
  EXPECT_NEAR(predict_copies(cat("K2"), ctx) / (choose(n, 2) * x), 1.0, 1e-12);
}

TEST(Predict, FourCycle) {
  const RoundContext ctx = RoundContext::make(5000, 0.1);
  const double n = 5000.0;
  const double x = ctx.Phi_at(ctx.total_rounds()) / std::sqrt(n);
  EXPECT_NEAR(predict_copies(cat("C4"), ctx) / (3.0 * choose(n, 4) * std::pow(x, 4)), 1.0, 1e-12);
  EXPECT_NEAR(std::exp(log_predict_copies(cat("C4"), ctx)) / predict_copies(cat("C4"), ctx), 1.0, 1e-12);
}

TEST(Predict, LnFormReplacesPhiSquared) {
  const RoundContext ctx = RoundContext::make(5000, 0.1);
  const double Phi2 = std::pow(ctx.Phi_at(ctx.total_rounds()), 2);
  const double ln_neps = 0.1 * std::log(5000.0);
  const double expected = predict_copies(cat("P3"), ctx) * (ln_neps / Phi2);  // e_F / 2 = 1
  EXPECT_NEAR(predict_copies_ln_form(cat("P3"), ctx) / expected, 1.0, 1e-12);
}

TEST(Predict, MonotoneInNAndEps) {
  double prev = 0.0;
  for (std::uint64_t n : {1000U, 5000U, 20000U, 100000U}) {
    const double v = predict_copies(cat("C4"), RoundContext::make(n, 0.1));
    EXPECT_GT(v, prev);
    prev = v;
  }
  prev = 0.0;
  // eps enters only through k = floor(n^eps); compare across distinct k.
  for (double eps : {0.1, 0.2, 0.3}) {
    const double v = predict_copies(cat("C4"), RoundContext::make(100000, eps));
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Predict, DisjointEdgesFactorize) {
  const RoundContext ctx = RoundContext::make(100000, 0.1);
  const auto two = PatternGraph::from_edges("2K2", 4, {{0, 1}, {2, 3}});
  const double k2 = predict_copies(cat("K2"), ctx);
  // Y_{2K2} counts unordered pairs of disjoint edges: about (Y_{K2})^2 / 2.
  EXPECT_NEAR(predict_copies(two, ctx) / (0.5 * k2 * k2), 1.0, 10.0 / 100000);
}

TEST(Predict, RejectsTrianglesAndLargePatterns) {
  EXPECT_THROW(predict_copies(cat("K3"), RoundContext::make(1000, 0.1)), std::invalid_argument);
  EXPECT_THROW(predict_copies(cat("S7"), RoundContext::make(5, 0.1)), std::invalid_argument);
}

TEST(Gnm, EdgeCount) {
  const RoundContext ctx = RoundContext::make(5000, 0.1);
  const double expected = 0.5 * std::pow(5000.0, 1.5) * std::sqrt(0.1 * std::log(5000.0));
  EXPECT_EQ(gnm_edge_count(ctx), static_cast<std::uint64_t>(std::floor(expected)));
}

TEST(Gnm, SamplesExactlyMEdgesDeterministically) {
  const BitGraph a = sample_gnm(300, 2000, 4, 0);
  EXPECT_EQ(a.edge_count(), 2000U);
  EXPECT_EQ(a, sample_gnm(300, 2000, 4, 0));
  EXPECT_NE(a, sample_gnm(300, 2000, 4, 1));
  EXPECT_NE(a, sample_gnm(300, 2000, 5, 0));
  EXPECT_THROW(sample_gnm(10, 46, 1, 0), std::invalid_argument);
}

TEST(RunIndexed, OrderIndependentOfJobs) {
  const std::function<std::uint64_t(std::uint64_t)> fn = [](std::uint64_t t) {
    return sample_gnm(80, 300, 9, t).triangle_count();
  };
  EXPECT_EQ(run_indexed<std::uint64_t>(17, 1, fn), run_indexed<std::uint64_t>(17, 3, fn));
  const std::function<int(std::uint64_t)> boom = [](std::uint64_t t) -> int {
    if (t == 5) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(run_indexed<int>(8, 2, boom), std::runtime_error);
}

TEST(SampleStats, MeanAndDeviation) {
  const SampleStats s = SampleStats::of({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.sd, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.std_error(), std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

TEST(Campaign, SmallRunAndJson) {
  const RoundContext ctx = RoundContext::make(400, 0.1);
  const PredictionReport one = compare_with_gnm(cat("P3"), ctx, 4, 3, 1);
  const PredictionReport two = compare_with_gnm(cat("P3"), ctx, 4, 3, 2);
  EXPECT_EQ(one.copies.mean, two.copies.mean);
  EXPECT_EQ(one.max_tf_triangles, 0U);
  ASSERT_TRUE(one.gnm.has_value());
  EXPECT_EQ(one.gnm->m, gnm_edge_count(ctx));
  const auto j = report_to_json(one);
  for (const char* key : {"pattern", "n", "eps", "trials", "seed", "predicted", "predicted_ln_form", "empirical_mean",
                          "empirical_sd", "ratio", "ratio_se", "tf_edges", "tf_max_triangles", "gnm"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(report_to_json(predict_campaign(cat("K2"), ctx, 2, 3))["gnm"].is_null());
}
