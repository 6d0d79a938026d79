#pragma once

// d, grad, div and the Laplace-Beltrami operator on built-in manifolds,
// applied chart by chart to local representations, and empirical
// operator-norm estimates over function families.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sobolev/exponents.hpp"
#include "sobolev/manifold_norms.hpp"

namespace sobolev {

enum class OperatorId { D, Grad, Div, Laplace };

inline const char* to_string(OperatorId id) {
  switch (id) {
    case OperatorId::D: return "d";
    case OperatorId::Grad: return "grad";
    case OperatorId::Div: return "div";
    case OperatorId::Laplace: return "laplace";
  }
  return "?";
}

inline OperatorId parse_operator_id(const std::string& s) {
  if (s == "d") return OperatorId::D;
  if (s == "grad") return OperatorId::Grad;
  if (s == "div") return OperatorId::Div;
  if (s == "laplace") return OperatorId::Laplace;
  throw InvalidArgument("unknown operator '" + s + "' (expected d, grad, div or laplace)");
}

/// Differential order of each operator.
inline int operator_order(OperatorId id) { return id == OperatorId::Laplace ? 2 : 1; }

/// Local representation of one operator in one chart.
struct ChartOperator {
  OperatorId id = OperatorId::D;
  int n = 0;
  ExprMatrix inverse;  // g^{ij}
  Expr sqrt_det;

  std::vector<Expr> gradient_of(const Expr& f) const {
    std::vector<Expr> out;
    for (int i = 0; i < n; ++i) out.push_back(diff(f, i + 1));
    return out;
  }
  std::vector<Expr> raise(const std::vector<Expr>& w) const {
    std::vector<Expr> out;
    for (int i = 0; i < n; ++i) {
      Expr v = Expr::constant(0.0);
      for (int j = 0; j < n; ++j) v = v + inverse[i][j] * w[j];
      out.push_back(v);
    }
    return out;
  }
  Expr divergence(const std::vector<Expr>& Y) const {
    Expr v = Expr::constant(0.0);
    for (int j = 0; j < n; ++j) v = v + diff(sqrt_det * Y[j], j + 1);
    return v / sqrt_det;
  }

  std::vector<Expr> operator()(const std::vector<Expr>& u) const {
    switch (id) {
      case OperatorId::D: return gradient_of(u.at(0));
      case OperatorId::Grad: return raise(gradient_of(u.at(0)));
      case OperatorId::Div: return {divergence(u)};
      case OperatorId::Laplace: return {divergence(raise(gradient_of(u.at(0))))};
    }
    throw InvalidArgument("unknown operator");
  }
};

struct LocalOperator {
  OperatorId id = OperatorId::D;
  std::vector<Slot> source;
  std::vector<Slot> target;
  std::vector<ChartOperator> blocks;
  std::optional<Exponent> from;
  std::optional<Exponent> to;
};

inline ChartOperator local_representation(OperatorId id, const MetricField& g, std::size_t chart) {
  const ChartMetric& cm = g.chart(chart);
  return ChartOperator{id, g.dim(), cm.inverse, cm.sqrt_det};
}

inline LocalOperator make_operator(OperatorId id, const MetricField& g) {
  LocalOperator op;
  op.id = id;
  switch (id) {
    case OperatorId::D: op.target = {Slot::Co}; break;
    case OperatorId::Grad: op.target = {Slot::Contra}; break;
    case OperatorId::Div: op.source = {Slot::Contra}; break;
    case OperatorId::Laplace: break;
  }
  for (std::size_t a = 0; a < g.size(); ++a) op.blocks.push_back(local_representation(id, g, a));
  return op;
}

inline TensorField apply_operator(const LocalOperator& op, const TensorField& u) {
  if (u.slots != op.source)
    throw ValenceError(std::string(to_string(op.id)) + " expects a " +
                       (op.source.empty() ? "scalar function" : "vector field") + ", got a tensor of rank " +
                       std::to_string(u.rank()));
  if (u.components.size() != op.blocks.size())
    throw InvalidArgument("field and operator have different chart counts");
  TensorField out;
  out.n = u.n;
  out.slots = op.target;
  for (std::size_t a = 0; a < op.blocks.size(); ++a) out.components.push_back(op.blocks[a](u.components[a]));
  return out;
}

/// Largest disagreement between chart representations of a scalar or
/// rank-1 field on chart overlaps, at Halton sample points.
inline double overlap_discrepancy(const Atlas& atlas, const TensorField& f, std::size_t samples = 256) {
  if (f.rank() > 1) throw InvalidArgument("overlap check supports scalars and rank-1 fields");
  const int n = atlas.dim();
  std::vector<Program> progs;
  for (const auto& c : f.components) progs.emplace_back(c);
  double worst = 0.0;
  std::vector<double> A(f.count()), B(f.count());
  for (const auto& p : atlas.sample_points(samples))
    for (std::size_t a = 0; a < atlas.size(); ++a)
      for (std::size_t b = 0; b < atlas.size(); ++b) {
        if (a == b || !atlas.in_domain(a, p) || !atlas.in_domain(b, p)) continue;
        auto t = atlas.to_chart(a, p);
        TransitionMap tm = atlas.transition(a, b);
        if (!tm.in_domain(t)) continue;
        auto tau = tm.map(t);
        auto J = tm.jacobian(t);
        progs[a].eval(t, A);
        progs[b].eval(tau, B);
        for (int i = 0; i < static_cast<int>(f.count()); ++i) {
          double expect = 0.0;
          if (f.rank() == 0)
            expect = B[0];
          else if (f.slots[0] == Slot::Co)
            for (int k = 0; k < n; ++k) expect += J[k][i] * B[k];  // A_i = dtau^k/dt^i B_k
          else
            expect = A[i];
          double have = A[i];
          if (f.rank() == 1 && f.slots[0] == Slot::Contra) {
            have = 0.0;  // B^i = dtau^i/dt^k A^k
            for (int k = 0; k < n; ++k) have += J[i][k] * A[k];
            expect = B[i];
          }
          worst = std::max(worst, std::fabs(have - expect) / std::max(1.0, std::fabs(expect)));
        }
      }
  return worst;
}

struct IntegralReport {
  double value = 0.0;
  double error_estimate = 0.0;
  int grid = 0;
};

/// Signed integral of a scalar field against dV_g, with the N vs N/2 difference
/// as error estimate.
inline IntegralReport manifold_integral(const Manifold& M, const TensorField& f, int N) {
  if (f.rank() != 0) throw ValenceError("only scalar fields can be integrated");
  auto run = [&](int cells) {
    double total = 0.0;
    std::vector<double> x;
    double w[3];
    for (std::size_t a = 0; a < M.atlas.size(); ++a) {
      Grid g(M.atlas.chart(a).truncation, cells);
      Program prog({M.pou.local[a], M.metric.chart(a).sqrt_det, f.components[a][0]});
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        g.midpoint(i, x);
        prog.eval(x, w);
        if (w[0] != 0.0) sum += w[0] * w[1] * w[2];
      }
      total += sum * g.cell_volume();
    }
    return total;
  };
  IntegralReport r;
  r.grid = N;
  r.value = run(N);
  r.error_estimate = std::fabs(r.value - run(std::max(1, N / 2)));
  return r;
}

// ---------------------------------------------------------------------------
// Empirical operator norms.

enum class BoundNorm { ConnectionSum, Connection, Chart };

inline const char* to_string(BoundNorm b) {
  switch (b) {
    case BoundNorm::ConnectionSum: return "connection-sum";
    case BoundNorm::Connection: return "connection";
    case BoundNorm::Chart: return "chart";
  }
  return "?";
}

struct BoundEntry {
  std::string function;
  double source_norm = 0.0;
  double target_norm = 0.0;
  double ratio = 0.0;
  double ratio_refined = 0.0;  // at 2N
  double ratio_scaled = 0.0;   // for 5u
};

struct BoundPrescreen {
  DomainClass domain = DomainClass::FullSpace;
  Verdict derivative;
  std::optional<Verdict> embedding;
  bool admissible() const { return derivative.admissible() && embedding && embedding->admissible(); }
};

struct BoundReport {
  OperatorId op = OperatorId::D;
  Exponent from;
  Exponent to;
  BoundNorm norm = BoundNorm::ConnectionSum;
  std::optional<BoundPrescreen> prescreen;
  std::vector<BoundEntry> entries;
  int grid = 0;
  double sup = 0.0;
  double sup_refined = 0.0;
  double relative_change = 0.0;
  double scale_deviation = 0.0;
};

namespace detail {

inline NormChoice bound_choice(const Manifold& M, BoundNorm b) {
  NormChoice c;
  c.manifold = &M;
  c.kind = b == BoundNorm::Chart ? NormChoice::Kind::Chart : NormChoice::Kind::Connection;
  c.combination = b == BoundNorm::ConnectionSum ? Combination::Sum : Combination::LqSum;
  return c;
}

/// Chart images: R^n for stereographic charts, bounded boxes on tori.
inline DomainClass chart_domain_class(const Atlas& atlas) {
  return atlas.is_sphere() ? DomainClass::FullSpace : DomainClass::BoundedLipschitz;
}

}  // namespace detail

/// Exponent pair check transferred to chart images: differentiation of the
/// operator's order, then embedding of the result into the requested target.
inline BoundPrescreen prescreen_bound(const Atlas& atlas, OperatorId op, const Exponent& from, const Exponent& to) {
  BoundPrescreen ps;
  ps.domain = detail::chart_domain_class(atlas);
  ps.derivative = check_derivative(SpaceSpec{from, atlas.dim(), ps.domain}, operator_order(op));
  if (ps.derivative.admissible() && ps.derivative.target)
    ps.embedding = check_embedding(SpaceSpec{*ps.derivative.target, atlas.dim(), ps.domain},
                                   SpaceSpec{to, atlas.dim(), ps.domain});
  return ps;
}

/// sup over the family of ||P u||_{to} / ||u||_{from}, at N and 2N.
inline BoundReport empirical_bound(const LocalOperator& op, const Manifold& M, const Exponent& from,
                                   const Exponent& to, const std::vector<TensorField>& family,
                                   const std::vector<std::string>& labels, int N,
                                   BoundNorm norm = BoundNorm::ConnectionSum) {
  if (family.empty()) throw InvalidArgument("empirical bound needs a nonempty function family");
  if (from.p_infinite || to.p_infinite) throw InfiniteExponentError("p = infinity has no numerical norm");
  if (from.s < 0 || to.s < 0) throw InvalidArgument("numerical norms need e >= 0 and target e >= 0");
  if (norm != BoundNorm::Chart && (!is_integer(from.s) || !is_integer(to.s)))
    throw InvalidArgument("connection norms need integer exponents; use the chart norm for fractional ones");
  BoundReport r;
  r.op = op.id;
  r.from = from;
  r.to = to;
  r.norm = norm;
  r.grid = N;
  r.prescreen = prescreen_bound(M.atlas, op.id, from, to);
  const NormChoice choice = detail::bound_choice(M, norm);
  const double e = to_double(from.s), q = to_double(from.p);
  const double et = to_double(to.s), qt = to_double(to.p);
  auto ratio_at = [&](const TensorField& u, const TensorField& Pu, int cells, BoundEntry* fill) {
    double a = evaluate_norm(choice, u, e, q, cells).value;
    double b = evaluate_norm(choice, Pu, et, qt, cells).value;
    if (fill) {
      fill->source_norm = a;
      fill->target_norm = b;
    }
    return a > 0.0 ? b / a : std::numeric_limits<double>::quiet_NaN();
  };
  for (std::size_t i = 0; i < family.size(); ++i) {
    const TensorField& u = family[i];
    TensorField Pu = apply_operator(op, u);
    BoundEntry en;
    en.function = i < labels.size() ? labels[i] : "u" + std::to_string(i);
    en.ratio = ratio_at(u, Pu, N, &en);
    en.ratio_refined = ratio_at(u, Pu, 2 * N, nullptr);
    TensorField u5 = u, Pu5 = Pu;
    for (auto& c : u5.components)
      for (auto& x : c) x = 5.0 * x;
    for (auto& c : Pu5.components)
      for (auto& x : c) x = 5.0 * x;
    en.ratio_scaled = ratio_at(u5, Pu5, N, nullptr);
    r.sup = std::max(r.sup, en.ratio);
    r.sup_refined = std::max(r.sup_refined, en.ratio_refined);
    r.scale_deviation = std::max(r.scale_deviation, std::fabs(en.ratio_scaled - en.ratio) / std::max(en.ratio, 1e-300));
    r.entries.push_back(std::move(en));
  }
  r.relative_change = r.sup > 0.0 ? std::fabs(r.sup_refined - r.sup) / r.sup : 0.0;
  return r;
}

/// Family of ambient scalar functions.
inline BoundReport empirical_bound(const LocalOperator& op, const Manifold& M, const Exponent& from,
                                   const Exponent& to, const std::vector<Expr>& family, int N,
                                   BoundNorm norm = BoundNorm::ConnectionSum) {
  if (family.empty()) throw InvalidArgument("empirical bound needs a nonempty function family");
  std::vector<TensorField> fields;
  std::vector<std::string> labels;
  for (const auto& f : family) {
    fields.push_back(manifold_function(M, f));
    labels.push_back(to_string(f));
  }
  return empirical_bound(op, M, from, to, fields, labels, N, norm);
}

}  // namespace sobolev
