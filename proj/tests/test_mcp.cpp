#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "htype/catalog.hpp"
#include "htype/errors.hpp"
#include "htype/mcp.hpp"
#include "htype/quadrature.hpp"
#include "support/oracles.hpp"

using namespace htype;
using std::numbers::pi;

namespace {

std::vector<double> linspace_open(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(lo + (hi - lo) * i / (n + 1));
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(GaussLegendre, KnownRules) {
  const auto r2 = gauss_legendre(2);
  EXPECT_NEAR(r2.nodes[1], 1.0 / std::sqrt(3.0), 2e-16);
  EXPECT_DOUBLE_EQ(r2.weights[0], 1.0);
  const auto r3 = gauss_legendre(3);
  EXPECT_NEAR(r3.nodes[2], std::sqrt(0.6), 2e-16);
  EXPECT_NEAR(r3.weights[1], 8.0 / 9.0, 2e-16);
  EXPECT_THROW(gauss_legendre(0), Error);
}

TEST(GaussLegendre, ExactOnPolynomials) {
  for (int n : {1, 4, 8, 16, 24}) {
    const auto r = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += r.weights[static_cast<std::size_t>(i)] * std::pow(r.nodes[static_cast<std::size_t>(i)], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(PairwiseSum, MatchesExactIntegerSum) {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 0.0);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}

TEST(Dimensions, Formulas) {
  EXPECT_EQ(geodesic_dimension(catalog_spec("heisenberg3")), 5);
  EXPECT_EQ(hausdorff_dimension(catalog_spec("heisenberg3")), 4);
  EXPECT_EQ(geodesic_dimension(catalog_spec("htype4x3")), 13);
  EXPECT_EQ(hausdorff_dimension(catalog_spec("htype4x3")), 10);
  EXPECT_EQ(geodesic_dimension(catalog_spec("contact12")), 4 + 3);
  for (const auto& name : catalog_names())
    EXPECT_LT(hausdorff_dimension(catalog_spec(name)), geodesic_dimension(catalog_spec(name)));
}

TEST(Distortion, SpecExamples) {
  EXPECT_EQ(distortion_coefficient(0.0, 5.0, 0.3, 2.0), std::pow(0.3, 5.0));
  EXPECT_EQ(distortion_coefficient(-1.0, 5.0, 0.3, 0.0), 0.3);
  EXPECT_LE(distortion_coefficient(-1.0, 5.0, 0.5, 2.0), 1.0 / 32.0);
  // Direct evaluation with s_K(x) = sinh(√-K x)/√-K.
  const double a = 2.0 / 2.0;
  EXPECT_NEAR(distortion_coefficient(-1.0, 5.0, 0.5, 2.0), 0.5 * std::pow(std::sinh(0.5 * a) / std::sinh(a), 4.0), 1e-16);
  EXPECT_EQ(code_of([] { distortion_coefficient(0.1, 5.0, 0.5, 1.0); }), ErrorCode::UnsupportedPositiveK);
  EXPECT_EQ(code_of([] { distortion_coefficient(0.0, 1.0, 0.5, 1.0); }), ErrorCode::InvalidArgument);
}

TEST(Distortion, LargeArgumentsStayFinite) {
  const double d = distortion_coefficient(-1.0, 3.0, 0.5, 5000.0);
  EXPECT_TRUE(std::isfinite(d));
  EXPECT_GE(d, 0.0);
  EXPECT_NEAR(distortion_coefficient(-1.0, 3.0, 0.5, 50.0),
              0.5 * std::pow(std::sinh(0.5 * 50 / std::sqrt(2.0)) / std::sinh(50 / std::sqrt(2.0)), 2.0), 1e-25);
}

TEST(Distortion, BelowFlatBound) {
  CounterRng rng(kDefaultSeed, 50);
  for (int i = 0; i < 1000; ++i) {
    const double K = -rng.uniform(0.01, 5.0), N = rng.uniform(1.5, 20.0), t = rng.uniform(), d = rng.uniform(0.0, 10.0);
    const double c = distortion_coefficient(K, N, t, d);
    EXPECT_LE(c, std::pow(t, N) * (1 + 1e-14));
    if (t > 0.0 && t < 1.0 && d > 0.01) EXPECT_LT(c, std::pow(t, N));
  }
}

TEST(ScalarInequalities, SpecExamples) {
  EXPECT_NEAR(lemma_g(pi / 4), std::sqrt(2.0) / 2 * (1 - pi / 4), 1e-16);
  EXPECT_NEAR(lemma_g(pi / 2), 1.0, 2e-16);
  EXPECT_GE(lemma_g(pi / 4), lemma_g(pi / 2) / 8);
  EXPECT_GE(lemma_f(pi / 2), lemma_f(pi) / 8);
  const double one[] = {1.0};
  const double xs[] = {0.3, 1.0, 2.0};
  EXPECT_EQ(check_g_inequality(one, xs, 3.0).min_slack, 0.0);
  EXPECT_EQ(check_f_inequality(one, xs, 3.0).min_slack, 0.0);
}

TEST(ScalarInequalities, HoldForThreeFailBelow) {
  const auto ts = linspace_open(0.0, 1.0, 100);
  const auto gx = linspace_open(0.0, pi, 100);
  const auto fx = linspace_open(0.0, 2 * pi, 100);
  EXPECT_TRUE(check_g_inequality(ts, gx, 3.0).passed);
  EXPECT_TRUE(check_f_inequality(ts, fx, 3.0).passed);
  for (double N : {2.9, 2.0}) {
    const auto g = check_g_inequality(ts, gx, N);
    const auto f = check_f_inequality(ts, fx, N);
    EXPECT_FALSE(g.passed);
    EXPECT_FALSE(f.passed);
    // The failure is a small-x phenomenon: g ~ x³/3, f ~ x³/6.
    const double small[] = {0.01};
    EXPECT_FALSE(check_g_inequality(ts, small, N).passed);
    EXPECT_FALSE(check_f_inequality(ts, small, N).passed);
  }
  const double bad[] = {pi};
  EXPECT_THROW(check_g_inequality(ts, bad, 3.0), Error);
}

TEST(JacobianContraction, Examples) {
  const auto h = catalog_group("heisenberg3");
  const Covector l{Eigen::Vector2d(1, 0), Eigen::VectorXd::Constant(1, pi)};
  EXPECT_GE(jacobian(h, l.scaled(0.5)) / jacobian(h, l), 0.25);
  const Covector flat{Eigen::Vector2d(0.3, 0.7), Eigen::VectorXd::Zero(1)};
  EXPECT_NEAR(jacobian(h, flat.scaled(0.4)) / jacobian(h, flat), 0.16, 1e-15);
  const auto grid = default_t_grid();
  for (const auto& name : catalog_names()) {
    const auto r = check_jacobian_contraction(catalog_group(name), 50, grid);
    EXPECT_TRUE(r.passed) << name;
    EXPECT_EQ(r.samples, 50u);
  }
  EXPECT_THROW(check_jacobian_contraction(h, 0, grid), Error);
}

TEST(CovectorBox, Validation) {
  const auto h = catalog_group("heisenberg3");
  EXPECT_NO_THROW(validate_box(h, default_box(h)));
  CovectorBox wide = default_box(h);
  wide.upper(2) = 2 * pi;
  EXPECT_EQ(code_of([&] { validate_box(h, wide); }), ErrorCode::BoxOutsideDomain);
  CovectorBox straddle = default_box(h);
  straddle.lower(0) = straddle.lower(1) = -0.5;
  EXPECT_EQ(code_of([&] { validate_box(h, straddle); }), ErrorCode::BoxOutsideDomain);
  CovectorBox inverted = default_box(h);
  std::swap(inverted.lower(0), inverted.upper(0));
  EXPECT_EQ(code_of([&] { validate_box(h, inverted); }), ErrorCode::BoxOutsideDomain);
  const auto d = catalog_group("degenerate-corank1");
  CovectorBox kernel_only{Eigen::Vector<double, 5>(0.5, 0.5, -0.1, -0.1, 0.5), Eigen::Vector<double, 5>(1, 1, 0.1, 0.1, 1)};
  EXPECT_EQ(code_of([&] { validate_box(d, kernel_only); }), ErrorCode::BoxOutsideDomain);
}

TEST(ContractionRatio, HeisenbergDefaultBox) {
  const auto h = catalog_group("heisenberg3");
  const auto box = default_box(h);
  EXPECT_EQ(contraction_ratio(h, box, 1.0), 1.0);
  EXPECT_GE(contraction_ratio(h, box, 0.5), 0.03125);
  EXPECT_THROW(contraction_ratio(h, box, 0.5, {3, 1}), Error);
  EXPECT_THROW(contraction_ratio(h, box, 0.0), Error);
}

TEST(ContractionRatio, MonotoneAndAboveBound) {
  for (const auto& name : catalog_names()) {
    const auto sc = catalog_group(name);
    const auto box = default_box(sc);
    const int N = geodesic_dimension(sc.spec);
    double prev = 0.0;
    for (double t : default_t_grid()) {
      const double r = contraction_ratio(sc, box, t);
      EXPECT_GT(r, prev) << name;
      EXPECT_LE(r, 1.0);
      EXPECT_GE(r, std::pow(t, N) * (1 - 1e-9)) << name << " t=" << t;
      prev = r;
    }
  }
}

TEST(ContractionRatio, QuadratureConverges) {
  for (const auto& name : catalog_names()) {
    const auto sc = catalog_group(name);
    const auto box = default_box(sc);
    const int hi = sc.dimension() > 5 ? 12 : 16;
    for (double t : {0.1, 0.5, 0.9})
      EXPECT_NEAR(contraction_ratio(sc, box, t, {8, 0}), contraction_ratio(sc, box, t, {hi, 0}), 1e-8) << name;
  }
}

TEST(Quadrature, KernelMatchesReference) {
  const auto grid = default_t_grid();
  const DistortionModel model{-1.0, 6.0};
  for (const auto& name : catalog_names()) {
    const auto sc = catalog_group(name);
    const auto box = default_box(sc);
    const int q = sc.dimension() > 5 ? 4 : 6;
    const auto fast = integrate_contraction(sc, box, grid, {q, 1}, &model);
    const auto ref = integrate_contraction_reference(sc, box, grid, q, &model);
    EXPECT_NEAR(fast.base, ref.base, 1e-12 * ref.base) << name;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(fast.scaled[i], ref.scaled[i], 1e-12 * ref.scaled[i]) << name;
      EXPECT_NEAR(fast.weighted[i], ref.weighted[i], 1e-12 * ref.weighted[i]) << name;
    }
  }
}

TEST(Quadrature, BoxVolumeAtZeroVIsExact) {
  // J(u, 0) is a polynomial of degree 2p in u: Gauss-Legendre with q >= p + 1 is exact.
  const auto h = catalog_group("heisenberg3");
  CovectorBox box{Eigen::Vector3d(0.5, 0.5, -1e-3), Eigen::Vector3d(1.5, 1.5, 1e-3)};
  const double one[] = {1.0};
  const auto r = integrate_contraction(h, box, one, {4, 1});
  // ∫∫ (u1² + u2²)/12 over [0.5, 1.5]² ≈ 2·(13/12)/12, times the v-width; J varies by O(v²).
  EXPECT_NEAR(r.base / 2e-3, 2.0 * (13.0 / 12.0) / 12.0, 1e-6);
}

TEST(Quadrature, WorkerCountDoesNotChangeBits) {
  const auto sc = catalog_group("htype4x3");
  const auto box = default_box(sc);
  const auto grid = default_t_grid();
  const DistortionModel model{-0.5, 13.0};
  const auto a = integrate_contraction(sc, box, grid, {5, 1}, &model);
  for (int w : {2, 3, 4}) {
    const auto b = integrate_contraction(sc, box, grid, {5, w}, &model);
    EXPECT_EQ(a.base, b.base);
    EXPECT_EQ(a.scaled, b.scaled);
    EXPECT_EQ(a.weighted, b.weighted);
  }
}

TEST(McpReport, Verdicts) {
  const auto grid = default_t_grid();
  for (const auto& name : catalog_names()) {
    const auto sc = catalog_group(name);
    const double N = geodesic_dimension(sc.spec);
    const auto flat = mcp_report(sc, 0.0, N, default_box(sc), grid);
    EXPECT_TRUE(flat.passed()) << name;
    EXPECT_EQ(flat.group_id, name);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(flat.bounds[i], std::pow(grid[i], N));
    const auto hyperbolic = mcp_report(sc, -1.0, N, default_box(sc), grid);
    EXPECT_TRUE(hyperbolic.passed()) << name;
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(hyperbolic.bounds[i], flat.bounds[i]);
    const auto sharp = mcp_report(sc, 0.0, N - 0.5, sharpness_box(sc), grid);
    EXPECT_FALSE(sharp.passed()) << name;
  }
  const auto h = catalog_group("heisenberg3");
  EXPECT_EQ(code_of([&] { mcp_report(h, 0.1, 5.0, default_box(h), grid); }), ErrorCode::UnsupportedPositiveK);
}

TEST(Sharpness, WitnessOnCatalog) {
  for (const auto& name : catalog_names()) {
    const auto sc = catalog_group(name);
    const auto w = sharpness_witness(sc, 0.5);
    EXPECT_EQ(w.t_grid.size(), 32u);
    for (std::size_t i = 0; i < w.t_grid.size(); ++i) {
      EXPECT_LT(w.ratios[i], w.bounds[i]) << name;
      EXPECT_GT(w.margins[i], 0.0);
    }
  }
  const auto h = catalog_group("heisenberg3");
  EXPECT_EQ(code_of([&] { sharpness_witness(h, 0.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { sharpness_witness(h, 1.5); }), ErrorCode::InvalidArgument);
}

TEST(Sharpness, FlatBoxScalesLikeGeodesicDimension) {
  // With v pinned near 0 the ratio approaches t^{n + 2p} = t^N, below t^{N - ε}.
  const auto h = catalog_group("heisenberg3");
  CovectorBox box{Eigen::Vector3d(0.9, -0.1, -1e-6), Eigen::Vector3d(1.1, 0.1, 1e-6)};
  for (double t : {0.2, 0.5, 0.8}) EXPECT_NEAR(contraction_ratio(h, box, t) / std::pow(t, 5.0), 1.0, 1e-9);
}
