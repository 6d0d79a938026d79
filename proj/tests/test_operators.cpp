#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sobolev/expr_parser.hpp"
#include "sobolev/operators.hpp"

using namespace sobolev;

namespace {

constexpr double kPi = std::numbers::pi;

double at(const Expr& e, std::vector<double> x) { return eval(e, x); }

Exponent ex(int s, int p) { return Exponent::finite(Rational(s), Rational(p)); }

}  // namespace

TEST(Operators, ParseIds) {
  EXPECT_EQ(parse_operator_id("laplace"), OperatorId::Laplace);
  EXPECT_STREQ(to_string(OperatorId::Grad), "grad");
  EXPECT_THROW(parse_operator_id("curl"), InvalidArgument);
}

TEST(Operators, DOnTorusIsCoordinateDerivative) {
  Manifold M = builtin_manifold("torus1");
  TensorField u = manifold_function(M, parse_expr("sin(2*pi*x1)", 1));
  TensorField du = apply_operator(make_operator(OperatorId::D, M.metric), u);
  ASSERT_EQ(du.slots, std::vector<Slot>{Slot::Co});
  for (std::size_t a = 0; a < M.atlas.size(); ++a)
    for (double t : {0.1, 0.37, 0.5, 0.8}) {
      double x = M.atlas.from_chart(a, std::vector<double>{t})[0];
      EXPECT_NEAR(at(du.components[a][0], {t}), 2 * kPi * std::cos(2 * kPi * x), 1e-12);
    }
}

TEST(Operators, DivOnTorusOfSineField) {
  Manifold M = builtin_manifold("torus1");
  std::vector<std::vector<Expr>> comps;
  for (std::size_t a = 0; a < M.atlas.size(); ++a) comps.push_back({parse_expr("sin(2*pi*x1)", 1)});
  TensorField X = tensor_field(1, {Slot::Contra}, comps);
  TensorField div = apply_operator(make_operator(OperatorId::Div, M.metric), X);
  EXPECT_TRUE(div.slots.empty());
  for (double t : {0.05, 0.3, 0.7}) EXPECT_NEAR(at(div.components[0][0], {t}), 2 * kPi * std::cos(2 * kPi * t), 1e-12);
}

TEST(Operators, LaplaceOnTorus) {
  Manifold M = builtin_manifold("torus1");
  TensorField u = manifold_function(M, parse_expr("sin(2*pi*x1)", 1));
  TensorField L = apply_operator(make_operator(OperatorId::Laplace, M.metric), u);
  for (double t : {0.05, 0.3, 0.7})
    EXPECT_NEAR(at(L.components[0][0], {t}), -4 * kPi * kPi * std::sin(2 * kPi * t), 1e-10);
}

TEST(Operators, DivOnRoundSphereMatchesDerivedFormula) {
  Manifold M = builtin_manifold("s2-stereo");
  TensorField X = tensor_field(2, {Slot::Contra}, {{Expr::var(1), Expr::constant(0.0)}, {Expr::var(1), Expr::constant(0.0)}});
  TensorField div = apply_operator(make_operator(OperatorId::Div, M.metric), X);
  for (auto x : std::vector<std::vector<double>>{{0.3, -0.2}, {1.5, 0.7}, {-2.0, 2.5}}) {
    double r2 = x[0] * x[0] + x[1] * x[1];
    EXPECT_NEAR(at(div.components[0][0], x), 1.0 - 4.0 * x[0] * x[0] / (1.0 + r2), 1e-12);
  }
}

TEST(Operators, ValenceMismatchThrows) {
  Manifold M = builtin_manifold("s1-stereo");
  TensorField f = manifold_function(M, parse_expr("x1", 2));
  EXPECT_THROW(apply_operator(make_operator(OperatorId::Div, M.metric), f), ValenceError);
  TensorField df = apply_operator(make_operator(OperatorId::D, M.metric), f);
  EXPECT_THROW(apply_operator(make_operator(OperatorId::Grad, M.metric), df), ValenceError);
}

TEST(Operators, GradIsSharpOfD) {
  for (const char* name : {"s1-stereo", "s2-stereo", "torus2"}) {
    Manifold M = builtin_manifold(name);
    const int amb = M.atlas.ambient_dim();
    TensorField f = manifold_function(M, parse_expr(amb == 3 ? "x1*x2 + x3^2" : "sin(2*pi*x1)*cos(2*pi*x2)", amb));
    if (M.atlas.is_sphere() && amb == 2) f = manifold_function(M, parse_expr("x1*x2 + x1^3", 2));
    TensorField grad = apply_operator(make_operator(OperatorId::Grad, M.metric), f);
    TensorField sharp = musical(apply_operator(make_operator(OperatorId::D, M.metric), f), M.metric, Musical::Sharp, 0);
    for (std::size_t a = 0; a < M.atlas.size(); ++a)
      for (std::size_t i = 0; i < grad.count(); ++i) {
        Program pg(grad.components[a][i]), ps(sharp.components[a][i]);
        for (std::size_t k = 0; k < 20; ++k) {
          auto h = halton(k + 1, M.atlas.dim());
          std::vector<double> t(M.atlas.dim());
          const auto& box = M.atlas.chart(a).truncation;
          for (int j = 0; j < M.atlas.dim(); ++j) t[j] = box.lo[j] + h[j] * (box.hi[j] - box.lo[j]);
          EXPECT_NEAR(pg(t), ps(t), 1e-10) << name;
        }
      }
  }
}

TEST(Operators, ResultsAgreeOnOverlaps) {
  Manifold M = builtin_manifold("s2-stereo");
  TensorField f = manifold_function(M, parse_expr("x1*x2 + x3", 3));
  EXPECT_LT(overlap_discrepancy(M.atlas, f), 1e-12);
  EXPECT_LT(overlap_discrepancy(M.atlas, apply_operator(make_operator(OperatorId::D, M.metric), f)), 1e-10);
  EXPECT_LT(overlap_discrepancy(M.atlas, apply_operator(make_operator(OperatorId::Grad, M.metric), f)), 1e-10);
  EXPECT_LT(overlap_discrepancy(M.atlas, apply_operator(make_operator(OperatorId::Laplace, M.metric), f)), 1e-9);
}

TEST(Operators, SupportDoesNotGrow) {
  Manifold M = builtin_manifold("torus1");
  // Bump supported in |x - 0.5| < 0.2.
  Expr u = smooth_cutoff((pow(Expr::var(1) - 0.5, 2) - 0.01) / (0.04 - 0.01));
  TensorField f = tensor_field(1, {}, {{u}, {u}});
  for (OperatorId id : {OperatorId::D, OperatorId::Grad, OperatorId::Laplace}) {
    TensorField Pu = apply_operator(make_operator(id, M.metric), f);
    Program prog(Pu.components[0][0]);
    for (int i = 0; i < 200; ++i) {
      double t = 0.02 + 0.96 * i / 199.0;
      if (std::fabs(t - 0.5) >= 0.2) EXPECT_LE(std::fabs(prog(std::vector<double>{t})), 1e-12) << t;
    }
  }
}

TEST(Operators, DivergenceIntegratesToZero) {
  for (const char* name : {"s1-stereo", "s2-stereo", "torus1", "torus2"}) {
    Manifold M = builtin_manifold(name);
    const int amb = M.atlas.ambient_dim();
    const char* src = amb == 3 ? "x1*x2 + x3^3" : (M.atlas.is_sphere() ? "x1^2*x2 + x1" : "sin(2*pi*x1)");
    if (std::string(name) == "torus2") src = "sin(2*pi*x1)*cos(2*pi*x2) + cos(2*pi*x2)";
    TensorField X = apply_operator(make_operator(OperatorId::Grad, M.metric), manifold_function(M, parse_expr(src, amb)));
    TensorField div = apply_operator(make_operator(OperatorId::Div, M.metric), X);
    IntegralReport I = manifold_integral(M, div, M.atlas.dim() == 1 ? 256 : 64);
    EXPECT_LE(std::fabs(I.value), I.error_estimate + 1e-10) << name << " value " << I.value;
  }
  Manifold T = builtin_manifold("torus1");
  TensorField X = tensor_field(1, {Slot::Contra}, {{parse_expr("sin(2*pi*x1)", 1)}, {parse_expr("sin(2*pi*x1)", 1)}});
  IntegralReport I = manifold_integral(T, apply_operator(make_operator(OperatorId::Div, T.metric), X), 256);
  EXPECT_LE(std::fabs(I.value), I.error_estimate + 1e-10);
}

TEST(Operators, BoundForDOnTorus) {
  Manifold M = builtin_manifold("torus1");
  std::vector<Expr> fam;
  for (const char* s : {"sin(2*pi*x1)", "cos(4*pi*x1)", "1 + sin(2*pi*x1)", "sin(6*pi*x1)^2"}) fam.push_back(parse_expr(s, 1));
  BoundReport r = empirical_bound(make_operator(OperatorId::D, M.metric), M, ex(1, 2), ex(0, 2), fam, 128);
  EXPECT_LE(r.sup, 1.0);
  EXPECT_LT(r.relative_change, 0.1);
  EXPECT_LT(r.scale_deviation, 1e-8);
  ASSERT_TRUE(r.prescreen);
  EXPECT_TRUE(r.prescreen->admissible());
}

TEST(Operators, LaplaceBoundMatchesClosedForm) {
  Manifold M = builtin_manifold("torus1");
  std::vector<Expr> fam;
  for (int k = 1; k <= 5; ++k) fam.push_back(parse_expr("sin(2*pi*" + std::to_string(k) + "*x1)", 1));
  BoundReport r = empirical_bound(make_operator(OperatorId::Laplace, M.metric), M, ex(2, 2), ex(0, 2), fam, 128);
  for (int k = 1; k <= 5; ++k) {
    double w = 2 * kPi * k;
    double expect = w * w / (1 + w + w * w);
    EXPECT_NEAR(r.entries[k - 1].ratio, expect, 0.01 * expect) << k;
    EXPECT_LT(r.entries[k - 1].ratio, 1.0);
  }
  EXPECT_LT(r.relative_change, 0.1);
}

TEST(Operators, BoundRejectsEmptyFamilyAndNegativeExponents) {
  Manifold M = builtin_manifold("torus1");
  LocalOperator d = make_operator(OperatorId::D, M.metric);
  EXPECT_THROW(empirical_bound(d, M, ex(1, 2), ex(0, 2), std::vector<Expr>{}, 64), InvalidArgument);
  EXPECT_THROW(empirical_bound(d, M, ex(1, 2), ex(-1, 2), std::vector<Expr>{parse_expr("sin(2*pi*x1)", 1)}, 64),
               InvalidArgument);
}

TEST(Operators, PrescreenUsesChartImageClass) {
  Atlas s2 = builtin_atlas("s2-stereo");
  BoundPrescreen ps = prescreen_bound(s2, OperatorId::D, ex(1, 2), ex(0, 2));
  EXPECT_EQ(ps.domain, DomainClass::FullSpace);
  EXPECT_TRUE(ps.admissible());
  BoundPrescreen bad = prescreen_bound(s2, OperatorId::D, ex(1, 2), ex(1, 2));
  EXPECT_FALSE(bad.admissible());
}
