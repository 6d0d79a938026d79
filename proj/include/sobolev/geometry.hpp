#pragma once

// Riemannian data per chart: metric, inverse, density, Christoffel symbols,
// tensor fields with covariant derivatives, fiber norms and index
// raising/lowering. Everything is symbolic over the chart variables.

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sobolev/atlas.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/expr.hpp"

namespace sobolev {

using ExprMatrix = std::vector<std::vector<Expr>>;

struct ChristoffelField {
  int n = 0;
  std::vector<Expr> gamma;  // [k][i][j], k slowest

  const Expr& operator()(int k, int i, int j) const { return gamma[(k * n + i) * n + j]; }
};

struct ChartMetric {
  ExprMatrix g;
  ExprMatrix inverse;
  Expr det;
  Expr sqrt_det;
  ChristoffelField christoffel;
};

namespace detail {

inline Expr determinant(const ExprMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (n == 3)
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  throw InvalidArgument("symbolic inverse is implemented for n <= 3");
}

inline ExprMatrix adjugate_inverse(const ExprMatrix& m, const Expr& det) {
  const std::size_t n = m.size();
  ExprMatrix inv(n, std::vector<Expr>(n));
  if (n == 1) {
    inv[0][0] = 1.0 / det;
    return inv;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // Cofactor C_ji.
      ExprMatrix minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Expr> row;
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(m[r][c]);
        minor.push_back(row);
      }
      Expr cof = determinant(minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[i][j] = cof / det;
    }
  return inv;
}

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij); (i,j) and (j,i) share one Expr.
inline ChristoffelField christoffel_symbols(const ExprMatrix& g, const ExprMatrix& ginv) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<std::vector<Expr>>> dg(n, std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) dg[a][b][c] = diff(g[b][c], a + 1);  // d_a g_bc
  ChristoffelField out;
  out.n = n;
  out.gamma.resize(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Expr sum = Expr::constant(0.0);
        for (int l = 0; l < n; ++l) sum = sum + ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        Expr v = 0.5 * sum;
        out.gamma[(k * n + i) * n + j] = v;
        out.gamma[(k * n + j) * n + i] = v;
      }
  return out;
}

}  // namespace detail

class MetricField {
 public:
  MetricField() = default;

  /// Per-chart symmetric component matrices. Inverse, density and
  /// Christoffel symbols are built eagerly; symmetry and positive
  /// definiteness are checked on sample points of each box in `boxes`.
  MetricField(std::vector<ExprMatrix> components, const std::vector<BoxDomain>& boxes) {
    if (components.size() != boxes.size()) throw InvalidArgument("one sample box per chart is required");
    for (std::size_t a = 0; a < components.size(); ++a) {
      ExprMatrix& g = components[a];
      const std::size_t n = g.size();
      for (const auto& row : g)
        if (row.size() != n) throw InvalidArgument("metric components must form a square matrix");
      ChartMetric cm;
      cm.g = g;
      cm.det = detail::determinant(g);
      if (cm.det.is_const(0.0)) throw DomainError("metric determinant is identically zero");
      cm.inverse = detail::adjugate_inverse(g, cm.det);
      cm.sqrt_det = sqrt(cm.det);
      cm.christoffel = detail::christoffel_symbols(g, cm.inverse);
      check(cm, boxes[a]);
      charts_.push_back(std::move(cm));
    }
  }

  std::size_t size() const { return charts_.size(); }
  const ChartMetric& chart(std::size_t a) const { return charts_.at(a); }
  int dim() const { return charts_.empty() ? 0 : static_cast<int>(charts_[0].g.size()); }

 private:
  static void check(const ChartMetric& cm, const BoxDomain& box) {
    const std::size_t n = cm.g.size();
    for (std::size_t k = 1; k <= 16; ++k) {
      auto h = halton(k, static_cast<int>(n));
      std::vector<double> t(n);
      for (std::size_t i = 0; i < n; ++i) t[i] = box.lo[i] + h[i] * box.length(static_cast<int>(i));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (std::fabs(eval(cm.g[i][j], t) - eval(cm.g[j][i], t)) > 1e-12)
            throw InvalidArgument("metric components are not symmetric");
      // Leading principal minors.
      for (std::size_t m = 1; m <= n; ++m) {
        ExprMatrix lead(m, std::vector<Expr>(m));
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) lead[i][j] = cm.g[i][j];
        if (!(eval(detail::determinant(lead), t) > 0.0)) throw DomainError("metric is not positive definite");
      }
    }
  }

  std::vector<ChartMetric> charts_;
};

/// Closed-form metrics of the built-ins: round on spheres, flat on tori.
inline MetricField builtin_metric(const Atlas& atlas) {
  std::vector<ExprMatrix> comps;
  std::vector<BoxDomain> boxes;
  const int n = atlas.dim();
  for (const auto& c : atlas.charts()) {
    ExprMatrix g(n, std::vector<Expr>(n, Expr::constant(0.0)));
    Expr diag = Expr::constant(1.0);
    if (c.kind != ChartKind::TorusBox) {
      Expr r2 = Expr::constant(0.0);
      for (int i = 1; i <= n; ++i) r2 = r2 + pow(Expr::var(i), 2);
      diag = 4.0 * pow(1.0 + r2, -2);
    }
    for (int i = 0; i < n; ++i) g[i][i] = diag;
    comps.push_back(g);
    boxes.push_back(c.truncation);
  }
  return MetricField(comps, boxes);
}

/// Induced metric sum_k d_i X^k d_j X^k of the chart inverses.
inline MetricField pullback_metric(const Atlas& atlas) {
  std::vector<ExprMatrix> comps;
  std::vector<BoxDomain> boxes;
  const int n = atlas.dim();
  for (const auto& c : atlas.charts()) {
    ExprMatrix g(n, std::vector<Expr>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr sum = Expr::constant(0.0);
        for (const auto& X : c.inverse) sum = sum + diff(X, i + 1) * diff(X, j + 1);
        g[i][j] = sum;
      }
    comps.push_back(g);
    boxes.push_back(c.truncation);
  }
  return MetricField(comps, boxes);
}

struct MetricAux {
  ExprMatrix inverse;
  Expr sqrt_det;
};

inline MetricAux metric_aux(const MetricField& g, std::size_t chart) {
  return {g.chart(chart).inverse, g.chart(chart).sqrt_det};
}

inline const ChristoffelField& christoffel(const MetricField& g, std::size_t chart) {
  return g.chart(chart).christoffel;
}

/// Atlas, partition of unity and metric of a built-in manifold.
struct Manifold {
  Atlas atlas;
  PartitionOfUnity pou;
  MetricField metric;
};

inline Manifold builtin_manifold(const std::string& name) {
  Atlas atlas = builtin_atlas(name);
  PartitionOfUnity pou = default_partition(atlas);
  MetricField metric = builtin_metric(atlas);
  return Manifold{std::move(atlas), std::move(pou), std::move(metric)};
}

// ---------------------------------------------------------------------------
// Tensor fields.

enum class Slot { Co, Contra };

/// Components per chart, flattened with the first slot slowest.
struct TensorField {
  int n = 0;
  std::vector<Slot> slots;
  std::vector<std::vector<Expr>> components;

  std::size_t rank() const { return slots.size(); }
  std::size_t count() const {
    std::size_t c = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) c *= static_cast<std::size_t>(n);
    return c;
  }
  std::size_t covariant() const {
    std::size_t k = 0;
    for (Slot s : slots) k += s == Slot::Co;
    return k;
  }
  std::size_t contravariant() const { return rank() - covariant(); }
};

namespace detail {

inline std::vector<int> unflatten_index(std::size_t flat, std::size_t rank, int n) {
  std::vector<int> idx(rank);
  for (std::size_t s = rank; s-- > 0;) {
    idx[s] = static_cast<int>(flat % n);
    flat /= n;
  }
  return idx;
}

inline std::size_t flatten_index(const std::vector<int>& idx, int n) {
  std::size_t f = 0;
  for (int i : idx) f = f * n + static_cast<std::size_t>(i);
  return f;
}

}  // namespace detail

/// Scalar field from an ambient Expr: local representations u o phi_a^{-1}.
inline TensorField scalar_field(const Atlas& atlas, const Expr& u) {
  TensorField f;
  f.n = atlas.dim();
  for (const auto& c : atlas.charts()) f.components.push_back({substitute(u, c.inverse)});
  return f;
}

/// Field with explicit per-chart components (already in chart variables).
inline TensorField tensor_field(int n, std::vector<Slot> slots, std::vector<std::vector<Expr>> components) {
  TensorField f{n, std::move(slots), std::move(components)};
  for (const auto& c : f.components)
    if (c.size() != f.count()) throw ValenceError("component count does not match the valence");
  return f;
}

/// The metric itself as a (0,2) tensor field.
inline TensorField metric_tensor(const MetricField& g) {
  TensorField f;
  f.n = g.dim();
  f.slots = {Slot::Co, Slot::Co};
  for (std::size_t a = 0; a < g.size(); ++a) {
    std::vector<Expr> comp;
    for (const auto& row : g.chart(a).g)
      for (const auto& e : row) comp.push_back(e);
    f.components.push_back(comp);
  }
  return f;
}

/// One covariant derivative per order; each step appends a covariant slot
/// (the differentiation index) after the existing ones.
inline TensorField covariant_derivative(const TensorField& field, const MetricField& g, int order = 1) {
  if (order < 1) throw InvalidArgument("order must be >= 1");
  if (field.components.size() != g.size()) throw InvalidArgument("field and metric have different chart counts");
  TensorField cur = field;
  const int n = field.n;
  for (int step = 0; step < order; ++step) {
    TensorField next;
    next.n = n;
    next.slots = cur.slots;
    next.slots.push_back(Slot::Co);
    const std::size_t r = cur.rank();
    for (std::size_t a = 0; a < cur.components.size(); ++a) {
      const ChristoffelField& G = g.chart(a).christoffel;
      const auto& T = cur.components[a];
      std::vector<Expr> out;
      out.reserve(T.size() * n);
      for (std::size_t flat = 0; flat < T.size(); ++flat) {
        std::vector<int> I = detail::unflatten_index(flat, r, n);
        for (int i = 0; i < n; ++i) {
          Expr v = diff(T[flat], i + 1);
          for (std::size_t s = 0; s < r; ++s) {
            std::vector<int> J = I;
            for (int b = 0; b < n; ++b) {
              J[s] = b;
              const Expr& Tb = T[detail::flatten_index(J, n)];
              if (cur.slots[s] == Slot::Contra)
                v = v + G(I[s], i, b) * Tb;
              else
                v = v - G(b, i, I[s]) * Tb;
            }
          }
          out.push_back(v);
        }
      }
      next.components.push_back(std::move(out));
    }
    cur = std::move(next);
  }
  return cur;
}

enum class Musical { Flat, Sharp };

/// Lowers (Flat) a contravariant slot with g_ij or raises (Sharp) a
/// covariant slot with g^ij.
inline TensorField musical(const TensorField& field, const MetricField& g, Musical dir, std::size_t slot) {
  if (slot >= field.rank()) throw ValenceError("slot " + std::to_string(slot) + " out of range");
  Slot need = dir == Musical::Flat ? Slot::Contra : Slot::Co;
  if (field.slots[slot] != need)
    throw ValenceError(std::string(dir == Musical::Flat ? "flat" : "sharp") + " needs a " +
                       (need == Slot::Co ? "covariant" : "contravariant") + " slot");
  TensorField out = field;
  out.slots[slot] = dir == Musical::Flat ? Slot::Co : Slot::Contra;
  const int n = field.n;
  for (std::size_t a = 0; a < field.components.size(); ++a) {
    const ExprMatrix& M = dir == Musical::Flat ? g.chart(a).g : g.chart(a).inverse;
    const auto& T = field.components[a];
    for (std::size_t flat = 0; flat < T.size(); ++flat) {
      std::vector<int> I = detail::unflatten_index(flat, field.rank(), n);
      Expr v = Expr::constant(0.0);
      std::vector<int> J = I;
      for (int j = 0; j < n; ++j) {
        J[slot] = j;
        v = v + M[I[slot]][j] * T[detail::flatten_index(J, n)];
      }
      out.components[a][flat] = v;
    }
  }
  return out;
}

/// Pointwise fiber norm of a tensor field in one chart: every covariant slot
/// is contracted with g^ij and every contravariant slot with g_ij.
class FiberNorm {
 public:
  FiberNorm(const TensorField& field, const MetricField& g, std::size_t chart)
      : n_(field.n), slots_(field.slots), count_(field.count()) {
    std::vector<Expr> outs = field.components.at(chart);
    const ChartMetric& cm = g.chart(chart);
    for (const auto& row : cm.g) outs.insert(outs.end(), row.begin(), row.end());
    for (const auto& row : cm.inverse) outs.insert(outs.end(), row.begin(), row.end());
    prog_ = std::make_unique<Program>(outs);
    buf_.resize(outs.size());
  }

  double operator()(std::span<const double> t) const {
    prog_->eval(t, buf_);
    const std::size_t nn = static_cast<std::size_t>(n_) * n_;
    const double* A = buf_.data();
    const double* G = A + count_;
    const double* Ginv = G + nn;
    // C = A with each slot multiplied by its metric.
    std::vector<double> C(A, A + count_), tmp(count_);
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      const double* M = slots_[s] == Slot::Co ? Ginv : G;
      std::size_t inner = 1;
      for (std::size_t q = s + 1; q < slots_.size(); ++q) inner *= n_;
      const std::size_t outer = count_ / (inner * n_);
      for (std::size_t o = 0; o < outer; ++o)
        for (int i = 0; i < n_; ++i)
          for (std::size_t in = 0; in < inner; ++in) {
            double v = 0.0;
            for (int j = 0; j < n_; ++j) v += M[i * n_ + j] * C[(o * n_ + j) * inner + in];
            tmp[(o * n_ + i) * inner + in] = v;
          }
      std::swap(C, tmp);
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < count_; ++k) sq += A[k] * C[k];
    if (sq < 0.0) {
      if (sq < -1e-12 * std::max(1.0, std::fabs(sq))) throw DomainError("metric is not positive definite at this point");
      sq = 0.0;
    }
    return std::sqrt(sq);
  }

 private:
  int n_;
  std::vector<Slot> slots_;
  std::size_t count_;
  std::unique_ptr<Program> prog_;
  mutable std::vector<double> buf_;
};

inline double fiber_norm(const TensorField& field, const MetricField& g, std::size_t chart,
                         std::span<const double> t) {
  return FiberNorm(field, g, chart)(t);
}

}  // namespace sobolev
