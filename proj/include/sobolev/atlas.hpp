#pragma once

// Built-in compact manifolds with explicit atlases.
//
// Manifold points are ambient coordinates: S^1 in R^2, S^2 in R^3, and the
// torus R^n/Z^n as representatives in [0,1)^n. Chart inverses are vectors
// of Exprs in the chart variables, so an ambient Expr u has the local
// representation substitute(u, chart.inverse). Functions on a torus must
// therefore be written 1-periodic in every ambient variable.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sobolev/errors.hpp"
#include "sobolev/expr.hpp"
#include "sobolev/quadrature.hpp"

namespace sobolev {

enum class ChartKind { StereoNorth, StereoSouth, TorusBox };
enum class ImageKind { FullSpace, Ball, Box };
enum class AtlasClass { Nice, SuperNice, GL, GGL };

inline const char* to_string(ChartKind k) {
  switch (k) {
    case ChartKind::StereoNorth: return "stereo-north";
    case ChartKind::StereoSouth: return "stereo-south";
    case ChartKind::TorusBox: return "box";
  }
  return "?";
}
inline const char* to_string(ImageKind k) {
  switch (k) {
    case ImageKind::FullSpace: return "full-space";
    case ImageKind::Ball: return "ball";
    case ImageKind::Box: return "box";
  }
  return "?";
}
inline const char* to_string(AtlasClass c) {
  switch (c) {
    case AtlasClass::Nice: return "nice";
    case AtlasClass::SuperNice: return "super nice";
    case AtlasClass::GL: return "GL";
    case AtlasClass::GGL: return "GGL";
  }
  return "?";
}

/// Bump seed parameters. Stereographic charts: radii in chart coordinates,
/// eta = 1 on |t| <= plateau and 0 on |t| >= support. Torus boxes:
/// half-widths around the chart center per axis.
struct BumpSpec {
  double plateau = 0.0;
  double support = 0.0;
};

struct Chart {
  std::string name;
  ChartKind kind = ChartKind::TorusBox;
  ImageKind image = ImageKind::FullSpace;
  std::vector<double> center;  // torus boxes
  double half_width = 0.5;     // torus boxes
  BoxDomain truncation;
  BumpSpec bump;
  std::vector<Expr> inverse;  // chart coordinates -> ambient coordinates

  int dim() const { return truncation.dim(); }
};

struct TransitionMap {
  int from = 0;
  int to = 0;
  std::function<std::vector<double>(std::span<const double>)> map;
  std::function<std::vector<std::vector<double>>(std::span<const double>)> jacobian;  // [i][j] = d out_i / d t_j
  std::function<bool(std::span<const double>)> in_domain;

  std::vector<double> operator()(std::span<const double> t) const {
    if (!in_domain(t)) throw InvalidArgument("point outside the overlap");
    return map(t);
  }
};

namespace detail {

/// Representative of v in (c - 1/2, c + 1/2].
inline double wrap_near(double v, double c) { return v - std::round(v - c); }

inline double radical_inverse(std::size_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline double stereo_last(double radius) { return (radius * radius - 1.0) / (radius * radius + 1.0); }

}  // namespace detail

/// Halton point number i (from 1) in [0,1)^d.
inline std::vector<double> halton(std::size_t i, int d) {
  static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13};
  std::vector<double> out(d);
  for (int a = 0; a < d; ++a) out[a] = detail::radical_inverse(i, primes[a]);
  return out;
}

class Atlas {
 public:
  Atlas(std::string manifold, int n, std::vector<Chart> charts) : manifold_(std::move(manifold)), n_(n), charts_(std::move(charts)) {
    if (charts_.empty()) throw InvalidArgument("an atlas needs at least one chart");
    stereo_ = charts_.front().kind != ChartKind::TorusBox;
    for (const auto& c : charts_) {
      if ((c.kind != ChartKind::TorusBox) != stereo_) throw InvalidArgument("cannot mix stereographic and box charts");
      if (c.dim() != n_) throw InvalidArgument("chart " + c.name + " has the wrong dimension");
    }
    classification_ = stereo_ ? AtlasClass::SuperNice : AtlasClass::GL;
    // Stereographic overlaps map onto R^n minus a point, which is neither
    // bounded nor all of R^n.
    self_glc_ = !stereo_;
  }

  const std::string& manifold() const { return manifold_; }
  int dim() const { return n_; }
  int ambient_dim() const { return stereo_ ? n_ + 1 : n_; }
  bool is_sphere() const { return stereo_; }
  std::size_t size() const { return charts_.size(); }
  const Chart& chart(std::size_t a) const { return charts_.at(a); }
  const std::vector<Chart>& charts() const { return charts_; }
  AtlasClass classification() const { return classification_; }
  bool self_gl_compatible() const { return self_glc_; }

  /// Whether the manifold point p lies in the chart's coordinate domain.
  bool in_domain(std::size_t a, std::span<const double> p) const {
    const Chart& c = chart(a);
    switch (c.kind) {
      case ChartKind::StereoNorth: return p[n_] < 1.0;
      case ChartKind::StereoSouth: return p[n_] > -1.0;
      case ChartKind::TorusBox:
        for (int i = 0; i < n_; ++i)
          if (!(std::fabs(detail::wrap_near(p[i], c.center[i]) - c.center[i]) < c.half_width)) return false;
        return true;
    }
    return false;
  }

  /// Forward chart map phi_a(p).
  std::vector<double> to_chart(std::size_t a, std::span<const double> p) const {
    if (!in_domain(a, p)) throw InvalidArgument("point is outside the domain of chart " + chart(a).name);
    const Chart& c = chart(a);
    std::vector<double> t(n_);
    if (c.kind == ChartKind::TorusBox) {
      for (int i = 0; i < n_; ++i) t[i] = detail::wrap_near(p[i], c.center[i]);
    } else {
      double denom = c.kind == ChartKind::StereoNorth ? 1.0 - p[n_] : 1.0 + p[n_];
      for (int i = 0; i < n_; ++i) t[i] = p[i] / denom;
    }
    return t;
  }

  /// Inverse chart map, evaluated from the chart's inverse Exprs. Torus
  /// points are reduced to [0,1)^n.
  std::vector<double> from_chart(std::size_t a, std::span<const double> t) const {
    const Chart& c = chart(a);
    std::vector<double> p(c.inverse.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = eval(c.inverse[i], t);
    if (!stereo_)
      for (double& v : p) v -= std::floor(v);
    return p;
  }

  /// True when U_a and U_b intersect.
  bool overlaps(std::size_t a, std::size_t b) const {
    if (stereo_ || a == b) return true;
    const Chart& ca = chart(a);
    const Chart& cb = chart(b);
    for (int i = 0; i < n_; ++i) {
      double d = std::fabs(detail::wrap_near(ca.center[i], cb.center[i]) - cb.center[i]);
      if (!(d < ca.half_width + cb.half_width)) return false;
    }
    return true;
  }

  /// phi_b o phi_a^{-1} on phi_a(U_a cap U_b).
  TransitionMap transition(std::size_t a, std::size_t b) const {
    if (a >= size() || b >= size()) throw InvalidArgument("chart index out of range");
    if (!overlaps(a, b))
      throw EmptyOverlapError("charts " + chart(a).name + " and " + chart(b).name + " do not overlap");
    TransitionMap tm;
    tm.from = static_cast<int>(a);
    tm.to = static_cast<int>(b);
    const int n = n_;
    if (!stereo_) {
      const Chart cb = chart(b);
      const Chart ca = chart(a);
      tm.in_domain = [ca, cb, n](std::span<const double> t) {
        for (int i = 0; i < n; ++i) {
          if (!(std::fabs(t[i] - ca.center[i]) < ca.half_width)) return false;
          if (!(std::fabs(detail::wrap_near(t[i], cb.center[i]) - cb.center[i]) < cb.half_width)) return false;
        }
        return true;
      };
      tm.map = [cb, n](std::span<const double> t) {
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i) out[i] = detail::wrap_near(t[i], cb.center[i]);
        return out;
      };
      tm.jacobian = [n](std::span<const double>) {
        std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) J[i][i] = 1.0;
        return J;
      };
      return tm;
    }
    if (chart(a).kind == chart(b).kind) {
      tm.in_domain = [](std::span<const double>) { return true; };
      tm.map = [](std::span<const double> t) { return std::vector<double>(t.begin(), t.end()); };
      tm.jacobian = [n](std::span<const double>) {
        std::vector<std::vector<double>> J(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) J[i][i] = 1.0;
        return J;
      };
      return tm;
    }
    // Opposite stereographic charts: inversion in the unit sphere.
    tm.in_domain = [](std::span<const double> t) {
      for (double v : t)
        if (v != 0.0) return true;
      return false;
    };
    tm.map = [](std::span<const double> t) {
      double r2 = 0.0;
      for (double v : t) r2 += v * v;
      std::vector<double> out(t.begin(), t.end());
      for (double& v : out) v /= r2;
      return out;
    };
    tm.jacobian = [n](std::span<const double> t) {
      double r2 = 0.0;
      for (double v : t) r2 += v * v;
      std::vector<std::vector<double>> J(n, std::vector<double>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J[i][j] = ((i == j ? r2 : 0.0) - 2.0 * t[i] * t[j]) / (r2 * r2);
      return J;
    };
    return tm;
  }

  /// Quasirandom manifold points (Halton), in ambient coordinates.
  std::vector<std::vector<double>> sample_points(std::size_t count) const {
    std::vector<std::vector<double>> pts;
    pts.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
      if (!stereo_) {
        pts.push_back(halton(k, n_));
      } else if (n_ == 1) {
        double phi = 2.0 * std::numbers::pi * detail::radical_inverse(k, 2);
        pts.push_back({std::cos(phi), std::sin(phi)});
      } else {
        auto h = halton(k, 2);
        double z = 2.0 * h[0] - 1.0;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = 2.0 * std::numbers::pi * h[1];
        pts.push_back({r * std::cos(phi), r * std::sin(phi), z});
      }
    }
    return pts;
  }

 private:
  std::string manifold_;
  int n_;
  std::vector<Chart> charts_;
  bool stereo_ = false;
  AtlasClass classification_ = AtlasClass::GL;
  bool self_glc_ = true;
};

// ---------------------------------------------------------------------------
// Chart construction.

inline constexpr double kStereoTruncation = 4.0;

inline Chart stereo_chart(bool north, int n, BumpSpec bump = {1.5, 3.0}, double truncation = kStereoTruncation) {
  if (n < 1 || n > 2) throw InvalidArgument("stereographic charts are built in for S^1 and S^2 only");
  if (!(bump.plateau > 0.0 && bump.plateau < bump.support))
    throw InvalidArgument("stereographic bump needs 0 < plateau < support");
  if (!(bump.support < truncation)) throw InvalidArgument("bump support must lie inside the truncation box");
  Chart c;
  c.name = north ? "north" : "south";
  c.kind = north ? ChartKind::StereoNorth : ChartKind::StereoSouth;
  c.image = ImageKind::FullSpace;
  c.truncation = BoxDomain::cube(n, -truncation, truncation);
  c.bump = bump;
  Expr r2 = Expr::constant(0.0);
  for (int i = 1; i <= n; ++i) r2 = r2 + pow(Expr::var(i), 2);
  Expr denom = 1.0 + r2;
  for (int i = 1; i <= n; ++i) c.inverse.push_back(2.0 * Expr::var(i) / denom);
  c.inverse.push_back(north ? (r2 - 1.0) / denom : (1.0 - r2) / denom);
  return c;
}

inline Chart torus_chart(std::string name, std::vector<double> center, double half_width = 0.5,
                         BumpSpec bump = {0.3, 0.45}, double truncation_half_width = 0.48) {
  const int n = static_cast<int>(center.size());
  if (n < 1) throw InvalidArgument("torus chart needs a center");
  if (!(half_width > 0.0 && half_width <= 0.5)) throw InvalidArgument("torus chart half-width must lie in (0, 1/2]");
  if (!(bump.plateau > 0.0 && bump.plateau < bump.support))
    throw InvalidArgument("torus bump needs 0 < plateau < support");
  if (!(bump.support < truncation_half_width && truncation_half_width < half_width + 1e-15))
    throw InvalidArgument("torus chart needs support < truncation half-width <= half-width");
  Chart c;
  c.name = std::move(name);
  c.kind = ChartKind::TorusBox;
  c.image = ImageKind::Box;
  c.center = center;
  c.half_width = half_width;
  std::vector<double> lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = center[i] - truncation_half_width;
    hi[i] = center[i] + truncation_half_width;
  }
  c.truncation = BoxDomain(lo, hi);
  c.bump = bump;
  for (int i = 1; i <= n; ++i) c.inverse.push_back(Expr::var(i));
  return c;
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"s1-stereo", "s2-stereo", "torus1", "torus2"};
  return names;
}

inline Atlas builtin_atlas(const std::string& name) {
  if (name == "s1-stereo") return Atlas(name, 1, {stereo_chart(true, 1), stereo_chart(false, 1)});
  if (name == "s2-stereo") return Atlas(name, 2, {stereo_chart(true, 2), stereo_chart(false, 2)});
  if (name == "torus1") return Atlas(name, 1, {torus_chart("box0", {0.5}), torus_chart("box1", {0.0})});
  if (name == "torus2")
    return Atlas(name, 2,
                 {torus_chart("box00", {0.5, 0.5}), torus_chart("box10", {0.0, 0.5}),
                  torus_chart("box01", {0.5, 0.0}), torus_chart("box11", {0.0, 0.0})});
  throw InvalidArgument("unknown manifold '" + name + "'");
}

// ---------------------------------------------------------------------------
// Partitions of unity.

/// Seed eta_a of chart a as an ambient Expr: 1 on the plateau, 0 outside
/// the support, smooth in between (built from exp(-1/t)).
inline Expr bump_seed(const Atlas& atlas, std::size_t a) {
  const Chart& c = atlas.chart(a);
  const int n = atlas.dim();
  if (c.kind != ChartKind::TorusBox) {
    // |t| = r on the chart corresponds to a level of the last ambient coordinate.
    Expr z = Expr::var(n + 1);
    if (c.kind == ChartKind::StereoSouth) z = -z;
    double za = detail::stereo_last(c.bump.plateau);
    double zb = detail::stereo_last(c.bump.support);
    return smooth_cutoff((z - za) / (zb - za));
  }
  const double pl2 = c.bump.plateau * c.bump.plateau;
  const double sp2 = c.bump.support * c.bump.support;
  Expr eta = Expr::constant(1.0);
  for (int i = 0; i < n; ++i) {
    // Periodized; at most one shift is active since support < 1/2.
    Expr axis = Expr::constant(0.0);
    for (int k = -1; k <= 1; ++k) {
      Expr d = Expr::var(i + 1) - (c.center[i] + k);
      axis = axis + smooth_cutoff((pow(d, 2) - pl2) / (sp2 - pl2));
    }
    eta = eta * axis;
  }
  return eta;
}

struct PartitionOfUnity {
  std::string id;
  std::vector<Expr> seeds;  // eta_a, ambient
  std::vector<Expr> psi;    // psi_a, ambient
  std::vector<Expr> local;  // psi_a o phi_a^{-1}, chart coordinates

  std::size_t size() const { return psi.size(); }
  double sum(std::span<const double> p) const {
    double s = 0.0;
    for (const auto& e : psi) s += eval(e, p);
    return s;
  }
};

/// psi_1 = eta_1, psi_a = eta_a prod_{b<a} (1 - eta_b). Throws CoverError
/// with a witness when the sum drops below 1 - 1e-9 at a sample point.
inline PartitionOfUnity build_partition_of_unity(const Atlas& atlas, const std::vector<Expr>& seeds,
                                                 std::string id = "default", std::size_t samples = 4096) {
  if (seeds.size() != atlas.size()) throw InvalidArgument("one seed per chart is required");
  PartitionOfUnity pou;
  pou.id = std::move(id);
  pou.seeds = seeds;
  Expr remainder = Expr::constant(1.0);
  for (const auto& eta : seeds) {
    pou.psi.push_back(eta * remainder);
    remainder = remainder * (1.0 - eta);
  }
  for (std::size_t a = 0; a < atlas.size(); ++a) pou.local.push_back(substitute(pou.psi[a], atlas.chart(a).inverse));

  auto points = atlas.sample_points(samples);
  if (atlas.is_sphere()) {
    // Poles and equator explicitly.
    std::vector<double> north(atlas.ambient_dim(), 0.0), south(atlas.ambient_dim(), 0.0), eq(atlas.ambient_dim(), 0.0);
    north.back() = 1.0;
    south.back() = -1.0;
    eq.front() = 1.0;
    points.push_back(north);
    points.push_back(south);
    points.push_back(eq);
  }
  for (const auto& p : points) {
    double s = pou.sum(p);
    if (s < 1.0 - 1e-9) throw CoverError("bump plateaus do not cover the manifold (sum of psi = " + format_number(s) + ")", p);
  }
  return pou;
}

inline PartitionOfUnity default_partition(const Atlas& atlas, std::string id = "default") {
  std::vector<Expr> seeds;
  for (std::size_t a = 0; a < atlas.size(); ++a) seeds.push_back(bump_seed(atlas, a));
  return build_partition_of_unity(atlas, seeds, std::move(id));
}

}  // namespace sobolev
