#pragma once

// Command-line front end. execute() parses arguments, runs one command and
// writes a JSON document. Exit codes: 0 computed / Admissible,
// 1 NotGuaranteed, 2 usage or parse error, 3 numerical domain error.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sobolev/expr_parser.hpp"
#include "sobolev/report_json.hpp"

namespace sobolev::cli {

enum ExitCode { kOk = 0, kNotGuaranteed = 1, kUsage = 2, kDomain = 3 };

struct Options {
  int n = 1;
  std::string a, b, from, to, target;
  std::string domain = "full";
  std::string mode = "algebra";
  std::string enclosing = "general";
  int order = 1;
  std::vector<std::string> exprs;
  std::string box;
  std::string s = "0";
  std::string p = "2";
  std::string q = "2";
  std::string e;
  int k = 1;
  int grid = 0;
  std::string variant = "seminorm";
  std::string part = "norm";
  std::string combination = "lq";
  std::string manifold = "s1-stereo";
  std::string atlas, atlas_b;
  std::string norm_a = "chart", norm_b = "connection";
  std::string op = "d";
  std::string field;
  std::string bound_norm = "connection-sum";
  bool pretty = false;
  std::string output;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

inline std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

/// "s,p" with exact rationals; p may be "inf".
inline Exponent parse_exponent(const std::string& text, const std::string& flag) {
  auto parts = split(text, ',');
  if (parts.size() != 2) throw InvalidArgument(flag + " expects \"s,p\", got \"" + text + "\"");
  Rational s = parse_rational(trim(parts[0]));
  std::string p = trim(parts[1]);
  if (p == "inf" || p == "infinity") return Exponent::infinite(s);
  return Exponent::finite(s, parse_rational(p));
}

inline DomainClass parse_domain(const std::string& d) {
  if (d == "full") return DomainClass::FullSpace;
  if (d == "lipschitz") return DomainClass::BoundedLipschitz;
  if (d == "open") return DomainClass::GeneralOpen;
  if (d == "compact-support") return DomainClass::CompactSupportInOpen;
  if (d == "manifold") return DomainClass::CompactManifold;
  throw InvalidArgument("unknown domain '" + d + "' (full, lipschitz, open, compact-support, manifold)");
}

inline PointwiseMode parse_mode(const std::string& m) {
  if (m == "algebra") return PointwiseMode::Algebra;
  if (m == "linfty") return PointwiseMode::LInfinity;
  if (m == "composition") return PointwiseMode::Composition;
  throw InvalidArgument("unknown pointwise mode '" + m + "' (algebra, linfty, composition)");
}

inline EnclosingDomain parse_enclosing(const std::string& m) {
  if (m == "general") return EnclosingDomain::General;
  if (m == "lipschitz") return EnclosingDomain::Lipschitz;
  if (m == "full") return EnclosingDomain::FullSpace;
  throw InvalidArgument("unknown enclosing domain '" + m + "' (general, lipschitz, full)");
}

inline double parse_real(const std::string& text, const std::string& flag) {
  if (text.empty()) throw InvalidArgument(flag + " is required");
  return to_double(parse_rational(trim(text)));
}

/// "lo,hi" (a cube in dimension n) or "lo1,hi1,...,lon,hin".
inline BoxDomain parse_box(const std::string& text, int n) {
  auto parts = split(text, ',');
  std::vector<double> v;
  for (const auto& s : parts) v.push_back(parse_real(s, "--box"));
  if (v.size() == 2) return BoxDomain::cube(n, v[0], v[1]);
  if (v.size() != static_cast<std::size_t>(2 * n))
    throw InvalidArgument("--box needs 2 or 2n numbers, got " + std::to_string(v.size()));
  BoxDomain b;
  for (int i = 0; i < n; ++i) {
    b.lo.push_back(v[2 * i]);
    b.hi.push_back(v[2 * i + 1]);
  }
  return b;
}

inline int box_dimension(const std::string& text, int fallback) {
  auto parts = split(text, ',');
  return parts.size() > 2 && parts.size() % 2 == 0 ? static_cast<int>(parts.size() / 2) : fallback;
}

inline Manifold load_manifold(const Options& o, const std::string& atlas_path, const std::string& pou_id) {
  Atlas atlas = atlas_path.empty() ? builtin_atlas(o.manifold) : load_atlas(atlas_path);
  PartitionOfUnity pou = default_partition(atlas, pou_id);
  MetricField metric = builtin_metric(atlas);
  return Manifold{std::move(atlas), std::move(pou), std::move(metric)};
}

inline NormChoice parse_norm_choice(const std::string& kind, const Manifold& M, Combination comb) {
  NormChoice c;
  c.manifold = &M;
  c.combination = comb;
  c.label = kind;
  if (kind == "chart")
    c.kind = NormChoice::Kind::Chart;
  else if (kind == "connection")
    c.kind = NormChoice::Kind::Connection;
  else if (kind == "lq-charts")
    c.kind = NormChoice::Kind::LqCharts;
  else if (kind == "lq-intrinsic")
    c.kind = NormChoice::Kind::LqIntrinsic;
  else
    throw InvalidArgument("unknown norm '" + kind + "' (chart, connection, lq-charts, lq-intrinsic)");
  return c;
}

inline Combination parse_combination(const std::string& s) {
  if (s == "lq") return Combination::LqSum;
  if (s == "sum") return Combination::Sum;
  throw InvalidArgument("unknown combination '" + s + "' (lq, sum)");
}

inline BoundNorm parse_bound_norm(const std::string& s) {
  if (s == "connection-sum") return BoundNorm::ConnectionSum;
  if (s == "connection") return BoundNorm::Connection;
  if (s == "chart") return BoundNorm::Chart;
  throw InvalidArgument("unknown bound norm '" + s + "' (connection-sum, connection, chart)");
}

inline const std::string& single_expr(const Options& o) {
  if (o.exprs.empty()) throw InvalidArgument("--expr is required");
  if (o.exprs.size() > 1) throw InvalidArgument("this command takes exactly one --expr");
  return o.exprs.front();
}

inline Json manifold_config(const Options& o, const Manifold& M, int grid) {
  Json c{{"manifold", M.atlas.manifold()}, {"grid", grid}};
  c["atlas"] = o.atlas.empty() ? Json("builtin") : Json(o.atlas);
  return c;
}

/// Verdict trace as one line per condition, grouped by theorem in search order.
inline Json pretty_trace(const Verdict& v) {
  Json lines = Json::array();
  for (const auto& a : v.attempts)
    for (const auto& c : a.conditions)
      lines.push_back(a.theorem + ": " + c.text + "  [" + to_string(c.lhs) + " " + to_string(c.relation) + " " +
                      to_string(c.rhs) + "] " + (c.satisfied ? "holds" : "fails"));
  return lines;
}

struct Outcome {
  Json doc;
  int code = kOk;
};

inline Outcome verdict_outcome(const std::string& cmd, Json config, const Verdict& v, bool pretty) {
  Json result = to_json(v);
  if (pretty) result["trace"] = pretty_trace(v);
  return {document(cmd, std::move(config), std::move(result)), v.admissible() ? kOk : kNotGuaranteed};
}

// --- command handlers ---------------------------------------------------

inline Outcome run_check(const std::string& which, const Options& o) {
  const DomainClass dom = parse_domain(o.domain);
  Json config{{"n", o.n}, {"domain", to_string(dom)}};
  auto spec = [&](const std::string& text, const std::string& flag) {
    if (text.empty()) throw InvalidArgument(flag + " is required");
    Exponent e = parse_exponent(text, flag);
    config[flag.substr(2)] = to_json(e);
    return SpaceSpec{e, o.n, dom};
  };
  if (which == "embed") {
    SpaceSpec f = spec(o.from, "--from"), t = spec(o.to, "--to");
    return verdict_outcome("check embed", config, check_embedding(f, t), o.pretty);
  }
  if (which == "multiply") {
    SpaceSpec a = spec(o.a, "--a"), b = spec(o.b, "--b"), t = spec(o.target, "--target");
    return verdict_outcome("check multiply", config, check_multiplication(a, b, t), o.pretty);
  }
  if (which == "pointwise") {
    SpaceSpec a = spec(o.a, "--a");
    PointwiseMode m = parse_mode(o.mode);
    config["mode"] = to_string(m);
    return verdict_outcome("check pointwise", config, check_pointwise(a, m), o.pretty);
  }
  if (which == "derivative") {
    SpaceSpec a = spec(o.a, "--a");
    config["order"] = o.order;
    return verdict_outcome("check derivative", config, check_derivative(a, o.order), o.pretty);
  }
  SpaceSpec a = spec(o.a, "--a");
  EnclosingDomain enc = parse_enclosing(o.enclosing);
  config["enclosing"] = to_string(enc);
  return verdict_outcome("check extend", config, check_extension(a, enc), o.pretty);
}

inline Outcome run_norm_euclid(const Options& o) {
  if (o.box.empty()) throw InvalidArgument("--box is required");
  const int n = box_dimension(o.box, o.n);
  const Expr u = parse_expr(single_expr(o), n);
  const BoxDomain box = parse_box(o.box, n);
  const double s = parse_real(o.s, "--s"), p = parse_real(o.p, "--p");
  const int N = o.grid > 0 ? o.grid : default_resolution(n);
  NormVariant v;
  if (o.variant == "seminorm")
    v = NormVariant::Seminorm;
  else if (o.variant == "full")
    v = NormVariant::FullNorm;
  else
    throw InvalidArgument("unknown variant '" + o.variant + "' (seminorm, full)");
  if (o.part != "norm" && o.part != "seminorm")
    throw InvalidArgument("unknown part '" + o.part + "' (norm, seminorm)");
  Json config{{"expr", to_string(u)}, {"n", n},    {"box", to_json(box)},    {"s", o.s},
              {"p", o.p},             {"grid", N}, {"variant", o.variant}, {"part", o.part}};
  NormReport r = sobolev_norm(u, box, s, p, N, v);
  if (o.part == "seminorm") {
    if (s == std::floor(s)) throw InvalidArgument("--part seminorm needs a fractional s");
    NormReport top = r;
    top.terms.clear();
    top.value = top.error_estimate = 0.0;
    for (const auto& t : r.terms)
      if (t.kind == "seminorm") top.add(t);
    r = top;
  }
  return {document("norm euclid", config, to_json(r))};
}

inline Outcome run_norm_manifold(const Options& o) {
  Manifold M = load_manifold(o, o.atlas, "default");
  const Expr u = parse_expr(single_expr(o), M.atlas.ambient_dim());
  const double q = parse_real(o.q, "--q");
  const int N = o.grid > 0 ? o.grid : default_resolution(M.atlas.dim());
  Json config = manifold_config(o, M, N);
  config["expr"] = to_string(u);
  config["q"] = o.q;
  if (o.e.empty()) return {document("norm manifold", config, to_json(manifold_lq_norm(M, u, q, N)))};
  config["e"] = o.e;
  return {document("norm manifold", config, to_json(chart_sobolev_norm(M, u, parse_real(o.e, "--e"), q, N)))};
}

inline Outcome run_norm_connection(const Options& o) {
  Manifold M = load_manifold(o, o.atlas, "default");
  const Expr u = parse_expr(single_expr(o), M.atlas.ambient_dim());
  const double q = parse_real(o.q, "--q");
  const int N = o.grid > 0 ? o.grid : default_resolution(M.atlas.dim());
  Json config = manifold_config(o, M, N);
  config["expr"] = to_string(u);
  config["k"] = o.k;
  config["q"] = o.q;
  config["combination"] = o.combination;
  return {document("norm connection", config,
                   to_json(connection_sobolev_norm(M, u, o.k, q, N, parse_combination(o.combination))))};
}

inline Outcome run_compare(const Options& o) {
  Manifold A = load_manifold(o, o.atlas, "a");
  std::optional<Manifold> B;
  if (!o.atlas_b.empty()) B = load_manifold(o, o.atlas_b, "b");
  const Manifold& MB = B ? *B : A;
  if (o.exprs.empty()) throw InvalidArgument("compare needs at least one --expr");
  std::vector<Expr> family;
  for (const auto& s : o.exprs) family.push_back(parse_expr(s, A.atlas.ambient_dim()));
  const Combination comb = parse_combination(o.combination);
  NormChoice na = parse_norm_choice(o.norm_a, A, comb), nb = parse_norm_choice(o.norm_b, MB, comb);
  const double e = o.e.empty() ? 1.0 : parse_real(o.e, "--e");
  const double q = parse_real(o.q, "--q");
  const int N = o.grid > 0 ? o.grid : default_resolution(A.atlas.dim());
  Json config = manifold_config(o, A, N);
  config["atlas_b"] = o.atlas_b.empty() ? Json(nullptr) : Json(o.atlas_b);
  config["norm_a"] = o.norm_a;
  config["norm_b"] = o.norm_b;
  config["e"] = e;
  config["q"] = o.q;
  config["combination"] = o.combination;
  config["family"] = Json::array();
  for (const auto& f : family) config["family"].push_back(to_string(f));
  return {document("compare", config, to_json(compare_norms(family, na, nb, e, q, N)))};
}

inline TensorField op_input(const Options& o, const Manifold& M, OperatorId id) {
  if (id != OperatorId::Div) return manifold_function(M, parse_expr(single_expr(o), M.atlas.ambient_dim()));
  if (o.field.empty()) throw InvalidArgument("div needs --field with chart components separated by ';'");
  std::vector<Expr> comps;
  for (const auto& s : split(o.field, ';')) comps.push_back(parse_expr(trim(s), M.atlas.dim()));
  if (static_cast<int>(comps.size()) != M.atlas.dim())
    throw ValenceError("--field needs " + std::to_string(M.atlas.dim()) + " components");
  return tensor_field(M.atlas.dim(), {Slot::Contra}, std::vector<std::vector<Expr>>(M.atlas.size(), comps));
}

inline Outcome run_op_apply(const Options& o) {
  Manifold M = load_manifold(o, o.atlas, "default");
  const OperatorId id = parse_operator_id(o.op);
  const int N = o.grid > 0 ? o.grid : default_resolution(M.atlas.dim());
  TensorField u = op_input(o, M, id);
  TensorField Pu = apply_operator(make_operator(id, M.metric), u);
  Json config = manifold_config(o, M, N);
  config["op"] = to_string(id);
  if (id == OperatorId::Div)
    config["field"] = o.field;
  else
    config["expr"] = single_expr(o);
  Json result;
  result["valence"] = Json::array();
  for (Slot s : Pu.slots) result["valence"].push_back(s == Slot::Co ? "co" : "contra");
  result["charts"] = Json::array();
  for (std::size_t a = 0; a < M.atlas.size(); ++a) {
    Json comps = Json::array();
    for (const auto& c : Pu.components[a]) comps.push_back(to_string(c));
    result["charts"].push_back(Json{{"chart", M.atlas.chart(a).name}, {"components", comps}});
  }
  result["overlap_discrepancy"] = overlap_discrepancy(M.atlas, Pu);
  if (Pu.rank() == 0) result["integral"] = to_json(manifold_integral(M, Pu, N));
  return {document("op apply", config, result)};
}

inline Outcome run_op_bound(const Options& o) {
  Manifold M = load_manifold(o, o.atlas, "default");
  const OperatorId id = parse_operator_id(o.op);
  if (o.from.empty() || o.to.empty()) throw InvalidArgument("--from and --to are required");
  Exponent from = parse_exponent(o.from, "--from"), to = parse_exponent(o.to, "--to");
  const int N = o.grid > 0 ? o.grid : (M.atlas.dim() == 1 ? 128 : default_resolution(M.atlas.dim()));
  const BoundNorm norm = parse_bound_norm(o.bound_norm);
  LocalOperator op = make_operator(id, M.metric);
  Json config = manifold_config(o, M, N);
  config["op"] = to_string(id);
  config["from"] = to_json(from);
  config["to"] = to_json(to);
  config["norm"] = to_string(norm);
  BoundReport r;
  if (id == OperatorId::Div) {
    TensorField X = op_input(o, M, id);
    config["field"] = o.field;
    r = empirical_bound(op, M, from, to, std::vector<TensorField>{X}, {o.field}, N, norm);
  } else {
    if (o.exprs.empty()) throw InvalidArgument("op bound needs at least one --expr");
    std::vector<Expr> family;
    for (const auto& s : o.exprs) family.push_back(parse_expr(s, M.atlas.ambient_dim()));
    config["family"] = Json::array();
    for (const auto& f : family) config["family"].push_back(to_string(f));
    r = empirical_bound(op, M, from, to, family, N, norm);
  }
  return {document("op bound", config, to_json(r))};
}

inline Outcome run_atlas_show(const Options& o) {
  Atlas atlas = o.atlas.empty() ? builtin_atlas(o.manifold) : load_atlas(o.atlas);
  PartitionOfUnity pou = default_partition(atlas);
  Json config{{"manifold", atlas.manifold()}};
  config["atlas"] = o.atlas.empty() ? Json("builtin") : Json(o.atlas);
  Json result = atlas_to_json(atlas);
  result["partition_of_unity"] = Json::array();
  for (std::size_t a = 0; a < pou.size(); ++a)
    result["partition_of_unity"].push_back(
        Json{{"chart", atlas.chart(a).name}, {"seed", to_string(pou.seeds[a])}, {"psi", to_string(pou.psi[a])}});
  return {document("atlas show", config, result)};
}

inline Json error_doc(const std::string& type, const std::string& message, int code,
                      std::optional<std::size_t> position = std::nullopt) {
  Json err{{"type", type}, {"message", message}};
  if (position) err["position"] = *position;
  return Json{{"schema", "v1"}, {"error", err}, {"exit_code", code}};
}

inline void emit(const Json& doc, const Options& o, std::ostream& out) {
  const std::string text = o.pretty ? doc.dump(2) : doc.dump();
  if (o.output.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw InvalidArgument("cannot write '" + o.output + "'");
  f << text << "\n";
}

}  // namespace detail

/// Runs one command; args excludes the program name.
inline int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sobolev-Slobodeckij exponent checks and numerical norms", "sobolev"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* c) {
    c->add_flag("--pretty", o.pretty, "indent JSON; add a readable trace to verdicts");
    c->add_option("--output", o.output, "write the JSON document to this file");
  };
  auto manifold_opts = [&](CLI::App* c) {
    c->add_option("--manifold", o.manifold, "s1-stereo, s2-stereo, torus1 or torus2");
    c->add_option("--atlas", o.atlas, "atlas config JSON file");
    c->add_option("--grid", o.grid, "cells per axis on each chart");
    common(c);
  };

  CLI::App* check = app.add_subcommand("check", "exact admissibility checks");
  check->require_subcommand(1);
  for (const char* name : {"embed", "multiply", "pointwise", "derivative", "extend"}) {
    CLI::App* c = check->add_subcommand(name);
    c->add_option("--n", o.n, "dimension")->check(CLI::PositiveNumber);
    c->add_option("--domain", o.domain, "full, lipschitz, open, compact-support or manifold");
    std::string sn = name;
    if (sn == "embed") {
      c->add_option("--from", o.from, "source s,p")->required();
      c->add_option("--to", o.to, "target s,p")->required();
    } else if (sn == "multiply") {
      c->add_option("--a", o.a, "first factor s,p")->required();
      c->add_option("--b", o.b, "second factor s,p")->required();
      c->add_option("--target", o.target, "product space s,p")->required();
    } else {
      c->add_option("--a", o.a, "space s,p")->required();
      if (sn == "pointwise") c->add_option("--mode", o.mode, "algebra, linfty or composition");
      if (sn == "derivative") c->add_option("--order", o.order, "|alpha|");
      if (sn == "extend") c->add_option("--enclosing", o.enclosing, "general, lipschitz or full");
    }
    common(c);
  }

  CLI::App* norm = app.add_subcommand("norm", "numerical norms");
  norm->require_subcommand(1);
  CLI::App* euclid = norm->add_subcommand("euclid", "W^{s,p} norm on a box");
  euclid->add_option("--expr", o.exprs, "function of x1..xn")->required();
  euclid->add_option("--box", o.box, "lo,hi or lo1,hi1,...")->required();
  euclid->add_option("--n", o.n, "dimension when --box is a cube");
  euclid->add_option("--s", o.s, "smoothness");
  euclid->add_option("--p", o.p, "integrability");
  euclid->add_option("--grid", o.grid, "cells per axis");
  euclid->add_option("--variant", o.variant, "seminorm or full");
  euclid->add_option("--part", o.part, "norm, or seminorm for the Gagliardo terms only");
  common(euclid);
  CLI::App* nman = norm->add_subcommand("manifold", "L^q norms, or the chart W^{e,q} norm with --e");
  nman->add_option("--expr", o.exprs, "ambient function")->required();
  nman->add_option("--q", o.q, "integrability");
  nman->add_option("--e", o.e, "smoothness (chart norm)");
  manifold_opts(nman);
  CLI::App* ncon = norm->add_subcommand("connection", "norm from covariant derivatives");
  ncon->add_option("--expr", o.exprs, "ambient function")->required();
  ncon->add_option("--k", o.k, "order")->check(CLI::NonNegativeNumber);
  ncon->add_option("--q", o.q, "integrability");
  ncon->add_option("--combination", o.combination, "lq or sum");
  manifold_opts(ncon);

  CLI::App* cmp = app.add_subcommand("compare", "ratio brackets between two manifold norms");
  cmp->add_option("--expr", o.exprs, "family member (repeatable)")->required();
  cmp->add_option("--a", o.norm_a, "chart, connection, lq-charts or lq-intrinsic");
  cmp->add_option("--b", o.norm_b, "chart, connection, lq-charts or lq-intrinsic");
  cmp->add_option("--atlas-b", o.atlas_b, "atlas config for norm b");
  cmp->add_option("--e", o.e, "smoothness");
  cmp->add_option("--q", o.q, "integrability");
  cmp->add_option("--combination", o.combination, "lq or sum (connection norm)");
  manifold_opts(cmp);

  CLI::App* opc = app.add_subcommand("op", "differential operators");
  opc->require_subcommand(1);
  CLI::App* apply = opc->add_subcommand("apply", "local representation of op u");
  CLI::App* bound = opc->add_subcommand("bound", "empirical operator norm");
  for (CLI::App* c : {apply, bound}) {
    c->add_option("--op", o.op, "d, grad, div or laplace")->required();
    c->add_option("--expr", o.exprs, "ambient function (repeatable for bound)");
    c->add_option("--field", o.field, "div input: chart components separated by ';'");
    manifold_opts(c);
  }
  bound->add_option("--from", o.from, "source e,q")->required();
  bound->add_option("--to", o.to, "target e,q")->required();
  bound->add_option("--norm", o.bound_norm, "connection-sum, connection or chart");

  CLI::App* atl = app.add_subcommand("atlas", "atlas inspection");
  atl->require_subcommand(1);
  CLI::App* show = atl->add_subcommand("show", "print an atlas as JSON");
  show->add_option("--manifold", o.manifold, "built-in manifold");
  show->add_option("--atlas", o.atlas, "atlas config JSON file");
  common(show);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    out << detail::error_doc("usage", e.what(), kUsage).dump() << "\n";
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    detail::Outcome res;
    if (check->parsed()) {
      for (CLI::App* c : check->get_subcommands()) res = detail::run_check(c->get_name(), o);
    } else if (euclid->parsed()) {
      res = detail::run_norm_euclid(o);
    } else if (nman->parsed()) {
      res = detail::run_norm_manifold(o);
    } else if (ncon->parsed()) {
      res = detail::run_norm_connection(o);
    } else if (cmp->parsed()) {
      res = detail::run_compare(o);
    } else if (apply->parsed()) {
      res = detail::run_op_apply(o);
    } else if (bound->parsed()) {
      res = detail::run_op_bound(o);
    } else {
      res = detail::run_atlas_show(o);
    }
    detail::emit(res.doc, o, out);
    return res.code;
  } catch (const ParseError& e) {
    out << detail::error_doc("parse", e.what(), kUsage, e.position()).dump() << "\n";
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    out << detail::error_doc("domain", e.what(), kDomain).dump() << "\n";
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const nlohmann::json::exception& e) {
    out << detail::error_doc("config", e.what(), kUsage).dump() << "\n";
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    out << detail::error_doc("invalid", e.what(), kUsage).dump() << "\n";
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace sobolev::cli
