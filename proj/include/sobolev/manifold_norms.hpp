#pragma once

// Norms of functions and tensor fields on built-in manifolds.
//
// All integrals run over chart truncation boxes; every integrand carries a
// partition-of-unity factor whose support lies inside the box, so the
// truncation loses nothing.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sobolev/geometry.hpp"
#include "sobolev/quadrature.hpp"

namespace sobolev {

struct ChartTerm {
  std::size_t chart = 0;
  std::string chart_name;
  std::size_t component = 0;
  std::string label;
  double value = 0.0;
  double error_estimate = 0.0;
};

struct ManifoldNormReport {
  std::string kind;         // "lq-def2", "lq-def1", "chart-sobolev", "connection"
  std::string combination;  // how value follows from terms[].value
  double value = 0.0;
  std::vector<ChartTerm> terms;
  std::string atlas_id;
  std::string pou_id;
  int grid = 0;
  double e = 0.0;
  double q = 2.0;
  double error_estimate = 0.0;
};

/// Both L^q definitions and their ratio def1 / def2.
struct LqReport {
  ManifoldNormReport def2;
  ManifoldNormReport def1;
  double ratio = 0.0;
};

namespace detail {

inline std::string atlas_id(const Atlas& atlas) {
  std::string id = atlas.manifold() + "[";
  for (std::size_t a = 0; a < atlas.size(); ++a) {
    const Chart& c = atlas.chart(a);
    id += (a ? "," : "") + c.name + ":" + format_number(c.bump.plateau) + "/" + format_number(c.bump.support);
  }
  return id + "]";
}

inline ManifoldNormReport empty_report(const Manifold& M, std::string kind, int N, double e, double q) {
  ManifoldNormReport r;
  r.kind = std::move(kind);
  r.atlas_id = atlas_id(M.atlas);
  r.pou_id = M.pou.id;
  r.grid = N;
  r.e = e;
  r.q = q;
  return r;
}

/// Torus functions must be 1-periodic in each ambient variable.
inline void check_periodic(const Atlas& atlas, const Expr& u) {
  if (atlas.is_sphere()) return;
  Program prog(u);
  for (const auto& p : atlas.sample_points(64)) {
    double base = prog(p);
    for (int a = 0; a < atlas.dim(); ++a) {
      auto q = p;
      q[a] += 1.0;
      double shifted = prog(q);
      if (std::fabs(shifted - base) > 1e-9 * std::max(1.0, std::fabs(base)))
        throw InvalidArgument("function is not 1-periodic in x" + std::to_string(a + 1) +
                              "; torus functions must be periodic");
    }
  }
}

/// sum over cells of psi sqrt(det g) |A|^q vol on one chart.
inline double chart_lq_integral(const TensorField& field, const Manifold& M, std::size_t a, const Grid& g, double q) {
  FiberNorm norm(field, M.metric, a);
  Program weight({M.pou.local[a], M.metric.chart(a).sqrt_det});
  double sum = 0.0;
  std::vector<double> x;
  double w[2];
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.midpoint(i, x);
    weight.eval(x, w);
    if (w[0] == 0.0) continue;
    sum += w[0] * w[1] * abs_pow(norm(x), q);
  }
  return sum * g.cell_volume();
}

inline void check_p_q(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("q must be a finite real > 1");
}

}  // namespace detail

/// Field of an ambient scalar function, with a periodicity check on tori.
inline TensorField manifold_function(const Manifold& M, const Expr& u) {
  if (max_variable(u) > M.atlas.ambient_dim())
    throw InvalidArgument("function uses x" + std::to_string(max_variable(u)) + " but " + M.atlas.manifold() +
                          " has ambient dimension " + std::to_string(M.atlas.ambient_dim()));
  detail::check_periodic(M.atlas, u);
  return scalar_field(M.atlas, u);
}

/// Intrinsic definition: (sum_a int psi_a |u|^q sqrt(det g))^{1/q}.
inline ManifoldNormReport lq_norm_intrinsic(const Manifold& M, const TensorField& u, double q, int N) {
  detail::check_p_q(q);
  ManifoldNormReport r = detail::empty_report(M, "lq-def2", N, 0.0, q);
  r.combination = "(sum of terms)^(1/q)";
  double fine = 0.0, coarse = 0.0;
  for (std::size_t a = 0; a < M.atlas.size(); ++a) {
    Grid g(M.atlas.chart(a).truncation, N);
    double f = detail::chart_lq_integral(u, M, a, g, q);
    double c = detail::chart_lq_integral(u, M, a, g.coarse(), q);
    fine += f;
    coarse += c;
    r.terms.push_back({a, M.atlas.chart(a).name, 0, "int psi |u|^q dV", f, std::fabs(f - c)});
  }
  r.value = std::pow(fine, 1.0 / q);
  r.error_estimate = std::fabs(r.value - std::pow(coarse, 1.0 / q));
  return r;
}

/// Chart definition: sum_a sum_l ||(psi_a u)^l o phi_a^{-1}||_{L^q}.
inline ManifoldNormReport lq_norm_charts(const Manifold& M, const TensorField& u, double q, int N) {
  detail::check_p_q(q);
  ManifoldNormReport r = detail::empty_report(M, "lq-def1", N, 0.0, q);
  r.combination = "sum of terms";
  for (std::size_t a = 0; a < M.atlas.size(); ++a)
    for (std::size_t l = 0; l < u.components[a].size(); ++l) {
      NormReport nr = lp_norm(M.pou.local[a] * u.components[a][l], M.atlas.chart(a).truncation, q, N);
      r.terms.push_back({a, M.atlas.chart(a).name, l, "||psi u^l||_Lq", nr.value, nr.error_estimate});
      r.value += nr.value;
      r.error_estimate += nr.error_estimate;
    }
  return r;
}

inline LqReport manifold_lq_norm(const Manifold& M, const TensorField& u, double q, int N) {
  LqReport r{lq_norm_intrinsic(M, u, q, N), lq_norm_charts(M, u, q, N), 0.0};
  r.ratio = r.def2.value > 0.0 ? r.def1.value / r.def2.value : std::numeric_limits<double>::quiet_NaN();
  return r;
}

inline LqReport manifold_lq_norm(const Manifold& M, const Expr& u, double q, int N) {
  return manifold_lq_norm(M, manifold_function(M, u), q, N);
}

/// sum_a sum_l ||(psi_a u^l) o phi_a^{-1}||_{W^{e,q}(truncation box)}.
/// For fractional e the Gagliardo seminorm is taken over the truncation box.
inline ManifoldNormReport chart_sobolev_norm(const Manifold& M, const TensorField& u, double e, double q, int N,
                                             NormVariant variant = NormVariant::Seminorm) {
  detail::check_p_q(q);
  ManifoldNormReport r = detail::empty_report(M, "chart-sobolev", N, e, q);
  r.combination = "sum of terms";
  for (std::size_t a = 0; a < M.atlas.size(); ++a)
    for (std::size_t l = 0; l < u.components[a].size(); ++l) {
      NormReport nr = sobolev_norm(M.pou.local[a] * u.components[a][l], M.atlas.chart(a).truncation, e, q, N, variant);
      r.terms.push_back({a, M.atlas.chart(a).name, l, "||psi u^l||_W^{e,q}", nr.value, nr.error_estimate});
      r.value += nr.value;
      r.error_estimate += nr.error_estimate;
    }
  return r;
}

inline ManifoldNormReport chart_sobolev_norm(const Manifold& M, const Expr& u, double e, double q, int N,
                                             NormVariant variant = NormVariant::Seminorm) {
  return chart_sobolev_norm(M, manifold_function(M, u), e, q, N, variant);
}

enum class Combination { LqSum, Sum };

/// (sum_{i<=k} ||nabla^i u||_{L^q}^q)^{1/q}, or the plain sum of the
/// terms with Combination::Sum. L^q norms use the intrinsic definition.
inline ManifoldNormReport connection_sobolev_norm(const Manifold& M, const TensorField& u, int k, double q, int N,
                                                  Combination comb = Combination::LqSum) {
  if (k < 0) throw InvalidArgument("k must be >= 0");
  detail::check_p_q(q);
  ManifoldNormReport r = detail::empty_report(M, "connection", N, k, q);
  r.combination = comb == Combination::LqSum ? "(sum of terms^q)^(1/q)" : "sum of terms";
  TensorField cur = u;
  double acc = 0.0;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) cur = covariant_derivative(cur, M.metric, 1);
    ManifoldNormReport part = lq_norm_intrinsic(M, cur, q, N);
    r.terms.push_back({0, "all", static_cast<std::size_t>(i), "||nabla^" + std::to_string(i) + " u||_Lq", part.value,
                       part.error_estimate});
    acc += comb == Combination::LqSum ? std::pow(part.value, q) : part.value;
    r.error_estimate += part.error_estimate;
  }
  r.value = comb == Combination::LqSum ? std::pow(acc, 1.0 / q) : acc;
  return r;
}

inline ManifoldNormReport connection_sobolev_norm(const Manifold& M, const Expr& u, int k, double q, int N,
                                                  Combination comb = Combination::LqSum) {
  return connection_sobolev_norm(M, manifold_function(M, u), k, q, N, comb);
}

// ---------------------------------------------------------------------------
// Comparison harness.

struct NormChoice {
  enum class Kind { Chart, Connection, LqCharts, LqIntrinsic } kind = Kind::Chart;
  const Manifold* manifold = nullptr;
  Combination combination = Combination::LqSum;
  std::string label;
};

inline ManifoldNormReport evaluate_norm(const NormChoice& c, const TensorField& u, double e, double q, int N) {
  if (!c.manifold) throw InvalidArgument("norm choice without a manifold");
  const Manifold& M = *c.manifold;
  switch (c.kind) {
    case NormChoice::Kind::Chart: return chart_sobolev_norm(M, u, e, q, N);
    case NormChoice::Kind::Connection: {
      if (e != std::floor(e) || e < 0) throw InvalidArgument("the connection norm needs an integer order e >= 0");
      return connection_sobolev_norm(M, u, static_cast<int>(e), q, N, c.combination);
    }
    case NormChoice::Kind::LqCharts: return lq_norm_charts(M, u, q, N);
    case NormChoice::Kind::LqIntrinsic: return lq_norm_intrinsic(M, u, q, N);
  }
  throw InvalidArgument("unknown norm choice");
}

inline ManifoldNormReport evaluate_norm(const NormChoice& c, const Expr& u, double e, double q, int N) {
  if (!c.manifold) throw InvalidArgument("norm choice without a manifold");
  return evaluate_norm(c, manifold_function(*c.manifold, u), e, q, N);
}

struct ComparisonEntry {
  std::string function;
  double a = 0.0;
  double b = 0.0;
  double ratio = 0.0;
  double ratio_scaled = 0.0;  // same ratio for 5u
};

struct ComparisonReport {
  std::string label_a;
  std::string label_b;
  double e = 0.0;
  double q = 2.0;
  int grid = 0;
  std::vector<ComparisonEntry> entries;
  double lower = 0.0;  // min ratio
  double upper = 0.0;  // max ratio
  double scale_deviation = 0.0;  // max |ratio(5u)/ratio(u) - 1|
};

/// Per-function ratio A/B and the bracket [min, max] over the family.
inline ComparisonReport compare_norms(const std::vector<Expr>& family, const NormChoice& A, const NormChoice& B,
                                      double e, double q, int N) {
  if (family.empty()) throw InvalidArgument("empty function family");
  ComparisonReport r;
  r.label_a = A.label;
  r.label_b = B.label;
  r.e = e;
  r.q = q;
  r.grid = N;
  r.lower = std::numeric_limits<double>::infinity();
  r.upper = -std::numeric_limits<double>::infinity();
  for (const auto& u : family) {
    ComparisonEntry c;
    c.function = to_string(u);
    c.a = evaluate_norm(A, u, e, q, N).value;
    c.b = evaluate_norm(B, u, e, q, N).value;
    if (!(c.b > 0.0)) throw DomainError("norm B vanishes for " + c.function);
    c.ratio = c.a / c.b;
    Expr scaled = 5.0 * u;
    c.ratio_scaled = evaluate_norm(A, scaled, e, q, N).value / evaluate_norm(B, scaled, e, q, N).value;
    r.scale_deviation = std::max(r.scale_deviation, std::fabs(c.ratio_scaled / c.ratio - 1.0));
    r.lower = std::min(r.lower, c.ratio);
    r.upper = std::max(r.upper, c.ratio);
    r.entries.push_back(std::move(c));
  }
  return r;
}

}  // namespace sobolev
