#pragma once

// Midpoint-rule Sobolev-Slobodeckij norms on axis-aligned boxes.
//
// Grids are uniform per axis, samples sit at cell midpoints, and flat cell
// indices run with the last axis fastest. Every quadrature reports a
// two-grid error estimate |v(N) - v(N/2)|; the Gagliardo seminorm adds a
// bound for the excluded diagonal cell pairs.
//
// Cost: lp_norm is O(N^n), gagliardo_seminorm is O(N^{2n}).

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sobolev/errors.hpp"
#include "sobolev/expr.hpp"

namespace sobolev {

struct BoxDomain {
  std::vector<double> lo;
  std::vector<double> hi;

  BoxDomain() = default;
  BoxDomain(std::vector<double> lower, std::vector<double> upper) : lo(std::move(lower)), hi(std::move(upper)) {
    if (lo.empty() || lo.size() != hi.size()) throw InvalidArgument("box bounds must be nonempty and match");
    for (std::size_t a = 0; a < lo.size(); ++a) {
      if (!std::isfinite(lo[a]) || !std::isfinite(hi[a])) throw InvalidArgument("box bounds must be finite");
      if (!(lo[a] < hi[a])) throw InvalidArgument("box must have nonempty interior");
    }
  }
  static BoxDomain interval(double a, double b) { return BoxDomain({a}, {b}); }
  static BoxDomain cube(int n, double a, double b) {
    return BoxDomain(std::vector<double>(n, a), std::vector<double>(n, b));
  }

  int dim() const { return static_cast<int>(lo.size()); }
  double length(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= length(a);
    return v;
  }
  bool contains(const BoxDomain& other) const {
    if (other.dim() != dim()) return false;
    for (int a = 0; a < dim(); ++a)
      if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
    return true;
  }
  bool contains_point(std::span<const double> x) const {
    for (int a = 0; a < dim(); ++a)
      if (!(x[a] > lo[a] && x[a] < hi[a])) return false;
    return true;
  }
  bool operator==(const BoxDomain&) const = default;
};

/// Uniform cell grid on a box.
struct Grid {
  BoxDomain box;
  std::vector<int> cells;  // per axis

  Grid(BoxDomain b, std::vector<int> n) : box(std::move(b)), cells(std::move(n)) {
    if (static_cast<int>(cells.size()) != box.dim()) throw InvalidArgument("grid resolution must match box dimension");
    for (int c : cells)
      if (c < 1) throw InvalidArgument("grid resolution must be >= 1");
  }
  Grid(BoxDomain b, int n) : Grid(b, std::vector<int>(b.dim(), n)) {}

  int dim() const { return box.dim(); }
  double h(int axis) const { return box.length(axis) / cells[axis]; }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= h(a);
    return v;
  }
  std::size_t size() const {
    std::size_t s = 1;
    for (int c : cells) s *= static_cast<std::size_t>(c);
    return s;
  }
  void unflatten(std::size_t flat, std::vector<int>& idx) const {
    idx.resize(dim());
    for (int a = dim() - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % cells[a]);
      flat /= cells[a];
    }
  }
  void midpoint(std::size_t flat, std::vector<double>& x) const {
    x.resize(dim());
    for (int a = dim() - 1; a >= 0; --a) {
      int i = static_cast<int>(flat % cells[a]);
      flat /= cells[a];
      x[a] = box.lo[a] + (i + 0.5) * h(a);
    }
  }
  /// Grid with half the cells per axis (rounded up), used for two-grid estimates.
  Grid coarse() const {
    std::vector<int> c(cells);
    for (int& v : c) v = std::max(1, (v + 1) / 2);
    return Grid(box, c);
  }
};

/// Sampled function on a box: values at cell midpoints. When `source` is
/// set the samples came from it, multiplied by the indicator of `support`
/// if that is set too.
struct GridFunction {
  BoxDomain domain;
  std::vector<int> resolution;
  std::vector<double> values;
  std::optional<Expr> source;
  std::optional<BoxDomain> support;

  Grid grid() const { return Grid(domain, resolution); }
};

struct NormTerm {
  std::string label;
  std::vector<int> multi_index;
  std::string kind;  // "lp" or "seminorm"
  double value = 0.0;
  double error_estimate = 0.0;
};

/// value = sum of terms[].value; error_estimate = sum of the term estimates.
struct NormReport {
  double value = 0.0;
  std::vector<NormTerm> terms;
  BoxDomain box;
  std::vector<int> grid;
  double s = 0.0;
  double p = 2.0;
  std::string variant = "seminorm";
  double error_estimate = 0.0;

  void add(NormTerm t) {
    value += t.value;
    error_estimate += t.error_estimate;
    terms.push_back(std::move(t));
  }
};

enum class NormVariant { Seminorm, FullNorm };

inline int default_resolution(int n) {
  switch (n) {
    case 1: return 256;
    case 2: return 64;
    case 3: return 16;
    default: return 8;
  }
}

namespace detail {

inline void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must be a finite real > 1");
}

inline double abs_pow(double v, double p) {
  double a = std::fabs(v);
  return p == 2.0 ? a * a : std::pow(a, p);
}

/// Samples e (times the indicator of `support`, if given) at the midpoints of g.
inline std::vector<double> sample(const Expr& e, const Grid& g, const std::optional<BoxDomain>& support = {}) {
  if (max_variable(e) > g.dim())
    throw InvalidArgument("expression uses x" + std::to_string(max_variable(e)) + " on a " +
                          std::to_string(g.dim()) + "-dimensional box");
  Program prog(e);
  std::vector<double> out(g.size());
  std::vector<double> x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    g.midpoint(i, x);
    out[i] = (support && !support->contains_point(x)) ? 0.0 : prog(x);
  }
  return out;
}

inline double lp_value(const std::vector<double>& v, double cell_volume, double p) {
  double sum = 0.0;
  for (double x : v) sum += abs_pow(x, p);
  return std::pow(sum * cell_volume, 1.0 / p);
}

struct GagliardoSums {
  double half = 0.0;      // pairs i < j
  double full = 0.0;      // all ordered pairs i != j (only when requested)
  double diagonal = 0.0;  // bound on the excluded i == j cell pairs
};

/// Unnormalized double sums sum |u_i - u_j|^p K(x_i - x_j); multiply by
/// cell_volume^2 to get the integral.
inline GagliardoSums gagliardo_sums(const std::vector<double>& u, const Grid& g, double theta, double p,
                                    bool want_full = false) {
  const int n = g.dim();
  const double expo = (n + theta * p) / 2.0;  // applied to |x - y|^2

  // Kernel depends only on the index difference; tabulate it.
  std::vector<int> span(n), stride(n);
  std::size_t table = 1;
  for (int a = n - 1; a >= 0; --a) {
    span[a] = 2 * g.cells[a] - 1;
    stride[a] = static_cast<int>(table);
    table *= static_cast<std::size_t>(span[a]);
  }
  std::vector<double> kernel(table);
  {
    std::vector<int> d(n);
    for (std::size_t t = 0; t < table; ++t) {
      std::size_t rest = t;
      double r2 = 0.0;
      for (int a = n - 1; a >= 0; --a) {
        d[a] = static_cast<int>(rest % span[a]) - (g.cells[a] - 1);
        rest /= span[a];
        double dx = d[a] * g.h(a);
        r2 += dx * dx;
      }
      kernel[t] = r2 > 0.0 ? std::pow(r2, -expo) : 0.0;
    }
  }
  auto offset = [&](const std::vector<int>& i, const std::vector<int>& j) {
    std::size_t t = 0;
    for (int a = 0; a < n; ++a) t += static_cast<std::size_t>(i[a] - j[a] + g.cells[a] - 1) * stride[a];
    return t;
  };

  GagliardoSums out;
  const std::size_t m = u.size();
  std::vector<int> ii, jj;
  // One partial sum per row i, combined in row order.
  for (std::size_t i = 0; i < m; ++i) {
    g.unflatten(i, ii);
    double row_half = 0.0, row_full = 0.0;
    for (std::size_t j = want_full ? 0 : i + 1; j < m; ++j) {
      if (j == i) continue;
      g.unflatten(j, jj);
      double term = abs_pow(u[i] - u[j], p) * kernel[offset(ii, jj)];
      if (j > i) row_half += term;
      row_full += term;
    }
    out.half += row_half;
    out.full += row_full;
  }

  // Diagonal: on a cell of diameter D with local Lipschitz constant L,
  // int_cell int_cell |u(x)-u(y)|^p/|x-y|^{n+theta p} <= vol L^p w D^{p(1-theta)} / (p(1-theta)),
  // w the surface area of the unit sphere in R^n.
  const double w = 2.0 * std::pow(boost::math::constants::pi<double>(), n / 2.0) / boost::math::tgamma(n / 2.0);
  double diam2 = 0.0;
  for (int a = 0; a < n; ++a) diam2 += g.h(a) * g.h(a);
  const double gamma = p * (1.0 - theta);
  const double per_cell = w * std::pow(diam2, gamma / 2.0) / gamma;
  double lsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    g.unflatten(i, ii);
    double grad2 = 0.0;
    for (int a = 0; a < n; ++a) {
      double best = 0.0;
      std::size_t st = 1;
      for (int b = n - 1; b > a; --b) st *= static_cast<std::size_t>(g.cells[b]);
      if (ii[a] > 0) best = std::max(best, std::fabs(u[i] - u[i - st]));
      if (ii[a] + 1 < g.cells[a]) best = std::max(best, std::fabs(u[i + st] - u[i]));
      best /= g.h(a);
      grad2 += best * best;
    }
    lsum += std::pow(grad2, p / 2.0);
  }
  // Converted to the unnormalized scale of `half` (integral / vol^2), halved.
  out.diagonal = lsum * per_cell / g.cell_volume() / 2.0;
  return out;
}

inline double gagliardo_value(const GagliardoSums& s, const Grid& g, double p) {
  double vol = g.cell_volume();
  return std::pow(2.0 * s.half * vol * vol, 1.0 / p);
}

/// Samples d^nu of a function on a grid.
using DerivativeSampler = std::function<std::vector<double>(const std::vector<int>& nu, const Grid& g)>;

inline void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie strictly between 0 and 1");
}

inline NormTerm lp_term(const DerivativeSampler& f, const std::vector<int>& nu, const Grid& g, double p,
                        std::string label) {
  double fine = lp_value(f(nu, g), g.cell_volume(), p);
  Grid c = g.coarse();
  double coarse = lp_value(f(nu, c), c.cell_volume(), p);
  return NormTerm{std::move(label), nu, "lp", fine, std::fabs(fine - coarse)};
}

inline NormTerm seminorm_term(const DerivativeSampler& f, const std::vector<int>& nu, const Grid& g, double theta,
                              double p, std::string label) {
  GagliardoSums s = gagliardo_sums(f(nu, g), g, theta, p);
  double fine = gagliardo_value(s, g, p);
  Grid c = g.coarse();
  double coarse = gagliardo_value(gagliardo_sums(f(nu, c), c, theta, p), c, p);
  double vol = g.cell_volume();
  double with_diag = std::pow(2.0 * (s.half + s.diagonal) * vol * vol, 1.0 / p);
  return NormTerm{std::move(label), nu, "seminorm", fine, (with_diag - fine) + std::fabs(fine - coarse)};
}

/// All multi-indices of length n with |nu| = order, lexicographically descending.
inline std::vector<std::vector<int>> multi_indices(int n, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> nu(n, 0);
  auto rec = [&](auto&& self, int axis, int left) -> void {
    if (axis == n - 1) {
      nu[axis] = left;
      out.push_back(nu);
      return;
    }
    for (int k = left; k >= 0; --k) {
      nu[axis] = k;
      self(self, axis + 1, left - k);
    }
  };
  rec(rec, 0, order);
  return out;
}

inline std::string derivative_label(const std::vector<int>& nu) {
  int order = 0;
  for (int k : nu) order += k;
  if (order == 0) return "u";
  std::string s = "d";
  for (std::size_t a = 0; a < nu.size(); ++a)
    for (int r = 0; r < nu[a]; ++r) s += std::to_string(a + 1);
  return s + " u";
}

inline NormReport sobolev_core(const DerivativeSampler& f, const Grid& g, double s, double p, NormVariant variant) {
  check_p(p);
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("numerical norms need a finite s >= 0");
  const int k = static_cast<int>(std::floor(s));
  const double theta = s - k;
  NormReport r;
  r.box = g.box;
  r.grid = g.cells;
  r.s = s;
  r.p = p;
  r.variant = variant == NormVariant::Seminorm ? "seminorm" : "full";
  for (int order = 0; order <= k; ++order)
    for (const auto& nu : multi_indices(g.dim(), order))
      r.add(lp_term(f, nu, g, p, "||" + derivative_label(nu) + "||_Lp"));
  if (theta > 0.0) {
    for (const auto& nu : multi_indices(g.dim(), k)) {
      if (variant == NormVariant::FullNorm)
        r.add(lp_term(f, nu, g, p, "||" + derivative_label(nu) + "||_Lp (W^theta part)"));
      r.add(seminorm_term(f, nu, g, theta, p, "|" + derivative_label(nu) + "|_W^theta"));
    }
  }
  return r;
}

inline DerivativeSampler expr_sampler(const Expr& u, std::optional<BoxDomain> support = {}) {
  auto cache = std::make_shared<std::vector<std::pair<std::vector<int>, Expr>>>();
  return [u, support, cache](const std::vector<int>& nu, const Grid& g) {
    for (const auto& [key, e] : *cache)
      if (key == nu) return sample(e, g, support);
    Expr d = diff_multi(u, nu);
    cache->emplace_back(nu, d);
    return sample(d, g, support);
  };
}

inline DerivativeSampler values_sampler(const GridFunction& f) {
  return [f](const std::vector<int>& nu, const Grid& g) {
    for (int k : nu)
      if (k != 0) throw InvalidArgument("derivatives of a sampled function without a source expression");
    if (g.cells == f.resolution) return f.values;
    // Coarsening by averaging children; only halving is supported.
    Grid fine = f.grid();
    std::vector<double> out(g.size(), 0.0);
    std::vector<double> count(g.size(), 0.0);
    std::vector<int> idx;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      fine.unflatten(i, idx);
      std::size_t c = 0;
      for (int a = 0; a < fine.dim(); ++a) c = c * g.cells[a] + static_cast<std::size_t>(idx[a] * g.cells[a] / fine.cells[a]);
      out[c] += f.values[i];
      count[c] += 1.0;
    }
    for (std::size_t c = 0; c < out.size(); ++c) out[c] /= count[c];
    return out;
  };
}

inline DerivativeSampler grid_function_sampler(const GridFunction& f) {
  if (f.source) return expr_sampler(*f.source, f.support);
  return values_sampler(f);
}

}  // namespace detail

/// Samples u at the cell midpoints of an N-per-axis grid on `box`.
inline GridFunction sample(const Expr& u, const BoxDomain& box, int N) {
  Grid g(box, N);
  return GridFunction{box, g.cells, detail::sample(u, g), u, std::nullopt};
}

/// Composite midpoint rule (sum |u(mid)|^p cellvol)^{1/p}.
inline NormReport lp_norm(const Expr& u, const BoxDomain& box, double p, int N) {
  return detail::sobolev_core(detail::expr_sampler(u), Grid(box, N), 0.0, p, NormVariant::Seminorm);
}

inline NormReport lp_norm(const GridFunction& u, double p) {
  return detail::sobolev_core(detail::grid_function_sampler(u), u.grid(), 0.0, p, NormVariant::Seminorm);
}

namespace detail {
inline NormReport seminorm_report(const DerivativeSampler& f, const Grid& g, double theta, double p) {
  check_p(p);
  check_theta(theta);
  NormReport r;
  r.box = g.box;
  r.grid = g.cells;
  r.s = theta;
  r.p = p;
  std::vector<int> zero(g.dim(), 0);
  r.add(seminorm_term(f, zero, g, theta, p, "|u|_W^theta"));
  return r;
}
}  // namespace detail

/// Gagliardo seminorm by the midpoint rule over cell pairs, diagonal pairs
/// excluded. Their bounded contribution goes into error_estimate.
inline NormReport gagliardo_seminorm(const Expr& u, const BoxDomain& box, double theta, double p, int N) {
  return detail::seminorm_report(detail::expr_sampler(u), Grid(box, N), theta, p);
}

inline NormReport gagliardo_seminorm(const GridFunction& u, double theta, double p) {
  return detail::seminorm_report(detail::grid_function_sampler(u), u.grid(), theta, p);
}

/// ||u||_{W^{k,p}} + sum_{|nu|=k} |d^nu u|_{W^{theta,p}}, s = k + theta.
/// FullNorm replaces the seminorms by full W^{theta,p} norms.
inline NormReport sobolev_norm(const Expr& u, const BoxDomain& box, double s, double p, int N,
                               NormVariant variant = NormVariant::Seminorm) {
  return detail::sobolev_core(detail::expr_sampler(u), Grid(box, N), s, p, variant);
}

inline NormReport sobolev_norm(const GridFunction& u, double s, double p,
                               NormVariant variant = NormVariant::Seminorm) {
  return detail::sobolev_core(detail::grid_function_sampler(u), u.grid(), s, p, variant);
}

/// Extends u, compactly supported in `inner`, by zero to `outer`. N is the
/// per-axis resolution on `inner`; the outer grid uses the same spacing, so
/// inner faces must lie on outer grid lines. Throws SupportError when
/// |u| > tol on the outermost cell layer of inner or on its faces.
inline GridFunction extend_by_zero(const Expr& u, const BoxDomain& inner, const BoxDomain& outer, int N,
                                   double tol = 1e-12) {
  if (!outer.contains(inner)) throw InvalidArgument("inner box must lie inside outer box");
  const int n = inner.dim();
  std::vector<int> cells(n);
  for (int a = 0; a < n; ++a) {
    double h = inner.length(a) / N;
    double total = outer.length(a) / h;
    double before = (inner.lo[a] - outer.lo[a]) / h;
    if (std::fabs(total - std::round(total)) > 1e-9 * total || std::fabs(before - std::round(before)) > 1e-9 * total)
      throw InvalidArgument("inner box is not aligned with the outer grid");
    cells[a] = static_cast<int>(std::round(total));
  }

  // Support check on inner's boundary layer and faces.
  Grid ig(inner, N);
  Program prog(u);
  std::vector<double> x;
  std::vector<int> idx;
  auto violation = [&](const std::vector<double>& pt) {
    double v = prog(pt);
    if (std::fabs(v) > tol) {
      std::string where;
      for (double c : pt) where += (where.empty() ? "" : ", ") + format_number(c);
      throw SupportError("function does not vanish near the boundary of the inner box: |u(" + where +
                         ")| = " + format_number(std::fabs(v)));
    }
  };
  for (std::size_t i = 0; i < ig.size(); ++i) {
    ig.unflatten(i, idx);
    bool layer = false;
    for (int a = 0; a < n; ++a) layer = layer || idx[a] == 0 || idx[a] == N - 1;
    if (!layer) continue;
    ig.midpoint(i, x);
    violation(x);
    for (int a = 0; a < n; ++a) {
      if (idx[a] != 0 && idx[a] != N - 1) continue;
      std::vector<double> face(x);
      face[a] = idx[a] == 0 ? inner.lo[a] : inner.hi[a];
      violation(face);
    }
  }

  Grid og(outer, cells);
  return GridFunction{outer, cells, detail::sample(u, og, inner), u, inner};
}

/// Copies the samples of f on the cells of `sub`, which must be aligned with f's grid.
inline GridFunction restrict(const GridFunction& f, const BoxDomain& sub) {
  Grid g = f.grid();
  if (!f.domain.contains(sub)) throw InvalidArgument("restriction box must lie inside the function's domain");
  const int n = g.dim();
  std::vector<int> first(n), cells(n);
  for (int a = 0; a < n; ++a) {
    double h = g.h(a);
    double off = (sub.lo[a] - f.domain.lo[a]) / h;
    double len = sub.length(a) / h;
    if (std::fabs(off - std::round(off)) > 1e-9 * g.cells[a] || std::fabs(len - std::round(len)) > 1e-9 * g.cells[a])
      throw InvalidArgument("restriction box is not aligned with the grid");
    first[a] = static_cast<int>(std::round(off));
    cells[a] = static_cast<int>(std::round(len));
  }
  Grid sg(sub, cells);
  std::vector<double> values(sg.size());
  std::vector<int> idx;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sg.unflatten(i, idx);
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) flat = flat * g.cells[a] + static_cast<std::size_t>(idx[a] + first[a]);
    values[i] = f.values[flat];
  }
  std::optional<BoxDomain> support = f.support;
  return GridFunction{sub, cells, std::move(values), f.source, support};
}

}  // namespace sobolev
