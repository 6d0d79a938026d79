#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sobolev/atlas_config.hpp"
#include "sobolev/expr_parser.hpp"
#include "sobolev/manifold_norms.hpp"
#include "trig_family.hpp"

namespace sobolev {
namespace {

constexpr double kPi = std::numbers::pi;

const Manifold& torus1() {
  static const Manifold m = builtin_manifold("torus1");
  return m;
}
const Manifold& circle() {
  static const Manifold m = builtin_manifold("s1-stereo");
  return m;
}
const Manifold& circle_alt() {
  static const Manifold m = [] {
    Atlas a = atlas_from_json(Json::parse(R"({"schema":"v1","manifold":"s1-stereo","charts":[
        {"kind":"stereo-south","bump":{"plateau":1.2,"support":2.5}},
        {"kind":"stereo-north","bump":{"plateau":1.2,"support":2.5}}]})"));
    PartitionOfUnity p = default_partition(a, "alternate");
    MetricField g = builtin_metric(a);
    return Manifold{a, p, g};
  }();
  return m;
}

TEST(Lq, Examples) {
  EXPECT_NEAR(manifold_lq_norm(torus1(), Expr::constant(1.0), 2.0, 512).def2.value, 1.0, 1e-12);
  LqReport s1 = manifold_lq_norm(circle(), Expr::constant(1.0), 2.0, 512);
  EXPECT_NEAR(s1.def2.value, std::sqrt(2 * kPi), 0.005 * std::sqrt(2 * kPi));
  LqReport sn = manifold_lq_norm(torus1(), parse_expr("sin(2*pi*x1)", 1), 2.0, 512);
  EXPECT_NEAR(sn.def2.value, 1.0 / std::sqrt(2.0), 0.005 / std::sqrt(2.0));
  EXPECT_EQ(sn.def2.terms.size(), 2u);
  EXPECT_GT(sn.ratio, 0.0);
}

TEST(Lq, SphereArea) {
  Manifold s2 = builtin_manifold("s2-stereo");
  EXPECT_NEAR(manifold_lq_norm(s2, Expr::constant(1.0), 2.0, 64).def2.value, std::sqrt(4 * kPi),
              0.01 * std::sqrt(4 * kPi));
  Manifold t2 = builtin_manifold("torus2");
  EXPECT_NEAR(manifold_lq_norm(t2, parse_expr("sin(2*pi*x1)*sin(2*pi*x2)", 2), 2.0, 64).def2.value, 0.5, 0.005);
}

TEST(Lq, Errors) {
  EXPECT_THROW(manifold_lq_norm(torus1(), parse_expr("x1", 1), 2.0, 64), InvalidArgument);
  EXPECT_THROW(manifold_lq_norm(torus1(), parse_expr("x2", 2), 2.0, 64), InvalidArgument);
  EXPECT_THROW(manifold_lq_norm(torus1(), Expr::constant(1.0), 1.0, 64), InvalidArgument);
}

// Property: Def 1 / Def 2 ratio lies in a fixed bracket and is scale invariant.
TEST(Properties, LqDefinitionsEquivalent) {
  double lo = 1e300, hi = 0;
  for (const auto& u : testing::circle_trig_family()) {
    LqReport a = manifold_lq_norm(circle(), u, 2.0, 256);
    LqReport b = manifold_lq_norm(circle(), 5.0 * u, 2.0, 256);
    EXPECT_NEAR(b.ratio, a.ratio, 1e-8 * a.ratio);
    lo = std::min(lo, a.ratio);
    hi = std::max(hi, a.ratio);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 10.0);
}

TEST(ChartNorm, ZeroHomogeneityAndRegression) {
  EXPECT_EQ(chart_sobolev_norm(torus1(), Expr::constant(0.0), 1.0, 2.0, 128).value, 0.0);
  Expr u = parse_expr("cos(2*pi*x1) + 0.3", 1);
  double a = chart_sobolev_norm(torus1(), u, 1.5, 2.0, 128).value;
  double b = chart_sobolev_norm(torus1(), -3.0 * u, 1.5, 2.0, 128).value;
  EXPECT_NEAR(b, 3.0 * a, 1e-10 * b);

  // v* from the brute-force oracle below at N = 1024.
  constexpr double kPinned = 10.7474;
  ManifoldNormReport r = chart_sobolev_norm(torus1(), Expr::constant(1.0), 1.0, 2.0, 256);
  EXPECT_NEAR(r.value, kPinned, 0.01 * kPinned);
  EXPECT_EQ(r.terms.size(), 2u);
}

// Oracle: sample psi_a directly, differentiate by central differences.
TEST(ChartNorm, BruteForceOracle) {
  const Manifold& M = torus1();
  const int N = 1024;
  double total = 0.0;
  for (std::size_t a = 0; a < M.atlas.size(); ++a) {
    const BoxDomain& box = M.atlas.chart(a).truncation;
    double h = box.length(0) / N, l2 = 0.0, d2 = 0.0;
    auto psi = [&](double x) { return eval(M.pou.psi[a], {x - std::floor(x)}); };
    for (int i = 0; i < N; ++i) {
      double x = box.lo[0] + (i + 0.5) * h;
      double v = psi(x), dv = (psi(x + 1e-6) - psi(x - 1e-6)) / 2e-6;
      l2 += v * v * h;
      d2 += dv * dv * h;
    }
    total += std::sqrt(l2) + std::sqrt(d2);
  }
  EXPECT_NEAR(chart_sobolev_norm(M, Expr::constant(1.0), 1.0, 2.0, 512).value, total, 1e-6 * total);
}

// Property: a function supported where psi_0 = 1 has chart norm equal to the
// Euclidean norm of its local representation.
TEST(Properties, SingleChartReduction) {
  Expr t = (Expr::var(1) - 0.35) / 0.3;
  Expr u = std::exp(1.0) * expinv(0, 4.0 * t * (1.0 - t));
  // Periodize so the torus periodicity check accepts it.
  Expr periodic = substitute(u, {Expr::var(1)}) + substitute(u, {Expr::var(1) - 1.0}) +
                  substitute(u, {Expr::var(1) + 1.0});
  for (double e : {0.0, 0.5, 1.0, 2.0}) {
    double chart = chart_sobolev_norm(torus1(), periodic, e, 2.0, 192).value;
    double euclid = sobolev_norm(periodic, torus1().atlas.chart(0).truncation, e, 2.0, 192).value;
    EXPECT_NEAR(chart, euclid, 1e-12 * euclid) << e;
  }
}

TEST(ConnectionNorm, Examples) {
  Expr u = parse_expr("sin(2*pi*x1)", 1);
  ManifoldNormReport r = connection_sobolev_norm(torus1(), u, 1, 2.0, 512);
  double expected = std::sqrt(0.5 + 4 * kPi * kPi / 2);
  EXPECT_NEAR(r.value, expected, 0.005 * expected);
  EXPECT_EQ(r.terms.size(), 2u);

  double k0 = connection_sobolev_norm(circle(), parse_expr("x1 + 2", 2), 0, 2.0, 256).value;
  EXPECT_DOUBLE_EQ(k0, manifold_lq_norm(circle(), parse_expr("x1 + 2", 2), 2.0, 256).def2.value);

  for (int k : {0, 1, 2}) {
    double c = connection_sobolev_norm(torus1(), Expr::constant(-3.0), k, 3.0, 256).value;
    EXPECT_NEAR(c, 3.0, 1e-9);  // midpoint error of the partition integrals
  }
  ManifoldNormReport sum = connection_sobolev_norm(torus1(), u, 1, 2.0, 512, Combination::Sum);
  EXPECT_NEAR(sum.value, sum.terms[0].value + sum.terms[1].value, 1e-14);
}

TEST(Compare, SameAtlasGivesRatioOne) {
  NormChoice a{NormChoice::Kind::Chart, &circle(), Combination::LqSum, "chart"};
  ComparisonReport r = compare_norms(testing::circle_trig_family(), a, a, 1.0, 2.0, 128);
  for (const auto& c : r.entries) EXPECT_EQ(c.ratio, 1.0);
  EXPECT_EQ(r.lower, 1.0);
  EXPECT_EQ(r.upper, 1.0);
}

// Property: brackets across partitions and chart vs connection are finite,
// scale invariant, and stable under refinement.
TEST(Properties, EquivalenceBrackets) {
  NormChoice p1{NormChoice::Kind::Chart, &circle(), Combination::LqSum, "default partition"};
  NormChoice p2{NormChoice::Kind::Chart, &circle_alt(), Combination::LqSum, "alternate partition"};
  NormChoice conn{NormChoice::Kind::Connection, &circle(), Combination::LqSum, "connection"};
  auto family = testing::circle_trig_family();
  for (const auto& [A, B] : {std::pair{p1, p2}, std::pair{p1, conn}}) {
    ComparisonReport coarse = compare_norms(family, A, B, 1.0, 2.0, 256);
    ComparisonReport fine = compare_norms(family, A, B, 1.0, 2.0, 512);
    EXPECT_TRUE(std::isfinite(coarse.lower) && std::isfinite(coarse.upper));
    EXPECT_GT(coarse.lower, 0.0);
    EXPECT_LE(coarse.scale_deviation, 1e-8);
    EXPECT_NEAR(fine.lower, coarse.lower, 0.05 * coarse.lower);
    EXPECT_NEAR(fine.upper, coarse.upper, 0.05 * coarse.upper);
  }
}

TEST(Properties, ChartVersusConnectionOnEveryBuiltin) {
  for (const char* name : {"torus1", "torus2", "s2-stereo"}) {
    Manifold M = builtin_manifold(name);
    int n = M.atlas.ambient_dim();
    std::vector<Expr> family;
    if (M.atlas.is_sphere()) {
      family = {parse_expr("1 + x3", 3), parse_expr("x1*x2", 3), parse_expr("x1 - x3^2", 3)};
    } else {
      family = {parse_expr("sin(2*pi*x1) + 2", n), parse_expr("cos(2*pi*x1)^2", n)};
    }
    NormChoice A{NormChoice::Kind::Chart, &M, Combination::LqSum, "chart"};
    NormChoice B{NormChoice::Kind::Connection, &M, Combination::LqSum, "connection"};
    ComparisonReport r = compare_norms(family, A, B, 1.0, 2.0, n == 1 ? 256 : 32);
    EXPECT_TRUE(std::isfinite(r.upper)) << name;
    EXPECT_GT(r.lower, 0.0) << name;
    EXPECT_LE(r.scale_deviation, 1e-8) << name;
  }
}

TEST(Compare, Errors) {
  NormChoice conn{NormChoice::Kind::Connection, &circle(), Combination::LqSum, "connection"};
  EXPECT_THROW(compare_norms({}, conn, conn, 1.0, 2.0, 64), InvalidArgument);
  EXPECT_THROW(compare_norms({Expr::constant(1.0)}, conn, conn, 0.5, 2.0, 64), InvalidArgument);
}

}  // namespace
}  // namespace sobolev
