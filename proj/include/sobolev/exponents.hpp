#pragma once

// Exact admissibility checks for embedding, multiplication, pointwise,
// differentiation and extension-by-zero statements about
// Sobolev-Slobodeckij spaces W^{s,p}.
//
// Every check returns a Verdict whose trace lists each hypothesis as an
// exact rational inequality. NotGuaranteed means that none of the encoded
// sufficient conditions applies; it never means the statement is false.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sobolev/errors.hpp"
#include "sobolev/rational.hpp"

namespace sobolev {

enum class DomainClass {
  FullSpace,             // R^n
  BoundedLipschitz,      // bounded open set with Lipschitz boundary
  GeneralOpen,           // arbitrary nonempty open set
  CompactSupportInOpen,  // W_K(Omega): support in a fixed compact K
  CompactManifold,
};

inline const char* to_string(DomainClass d) {
  switch (d) {
    case DomainClass::FullSpace: return "FullSpace";
    case DomainClass::BoundedLipschitz: return "BoundedLipschitz";
    case DomainClass::GeneralOpen: return "GeneralOpen";
    case DomainClass::CompactSupportInOpen: return "CompactSupportInOpen";
    case DomainClass::CompactManifold: return "CompactManifold";
  }
  return "?";
}

/// Smoothness s (any rational) and integrability p in (1, inf).
/// p = inf can be represented for classification, but every checker
/// rejects it with InfiniteExponentError.
struct Exponent {
  Rational s;
  Rational p{2};
  bool p_infinite = false;

  static Exponent finite(Rational s, Rational p) {
    if (p <= 1) throw InvalidArgument("integrability p must satisfy p > 1, got " + to_string(p));
    return Exponent{std::move(s), std::move(p), false};
  }
  static Exponent infinite(Rational s) { return Exponent{std::move(s), Rational(0), true}; }

  /// k = floor(s)
  Rational integer_part() const { return floor(s); }
  /// theta = s - floor(s), in [0, 1)
  Rational theta() const { return fractional_part(s); }
  /// s - 1/p is an integer (the fractional part of s equals 1/p).
  bool exceptional() const {
    if (p_infinite) return is_integer(s);
    return is_integer(s - Rational(1) / p);
  }

  friend bool operator==(const Exponent&, const Exponent&) = default;
};

struct SpaceSpec {
  Exponent exponent;
  int n = 1;
  DomainClass domain = DomainClass::FullSpace;
};

enum class Relation {
  Ge,
  Gt,
  Le,
  Lt,
  Eq,
  Ne,
  InNaturals0,           // lhs in {0, 1, 2, ...}; rhs unused
  NotNonintegerBelow,    // lhs is an integer or lhs >= rhs
  NotPositiveInteger,    // lhs not in {1, 2, 3, ...}; rhs unused
};

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
    case Relation::Le: return "<=";
    case Relation::Lt: return "<";
    case Relation::Eq: return "=";
    case Relation::Ne: return "!=";
    case Relation::InNaturals0: return "in N0";
    case Relation::NotNonintegerBelow: return "integer or >=";
    case Relation::NotPositiveInteger: return "not in Z+";
  }
  return "?";
}

inline bool evaluate(Relation r, const Rational& lhs, const Rational& rhs) {
  switch (r) {
    case Relation::Ge: return lhs >= rhs;
    case Relation::Gt: return lhs > rhs;
    case Relation::Le: return lhs <= rhs;
    case Relation::Lt: return lhs < rhs;
    case Relation::Eq: return lhs == rhs;
    case Relation::Ne: return lhs != rhs;
    case Relation::InNaturals0: return is_integer(lhs) && lhs >= 0;
    case Relation::NotNonintegerBelow: return is_integer(lhs) || lhs >= rhs;
    case Relation::NotPositiveInteger: return !(is_integer(lhs) && lhs >= 1);
  }
  return false;
}

struct Condition {
  std::string theorem;
  std::string text;
  Rational lhs;
  Relation relation = Relation::Ge;
  Rational rhs;
  bool satisfied = false;
};

/// One theorem whose full hypothesis list was evaluated.
struct Attempt {
  std::string theorem;
  std::vector<Condition> conditions;
  bool holds() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const Condition& c) { return c.satisfied; });
  }
  const Condition* first_failure() const {
    for (const auto& c : conditions)
      if (!c.satisfied) return &c;
    return nullptr;
  }
};

enum class VerdictResult { Admissible, NotGuaranteed };

inline const char* to_string(VerdictResult r) {
  return r == VerdictResult::Admissible ? "Admissible" : "NotGuaranteed";
}

struct Verdict {
  VerdictResult result = VerdictResult::NotGuaranteed;
  /// Theorem that established admissibility; empty when NotGuaranteed.
  std::string theorem_tag;
  /// Admissible: the winning theorem's full hypothesis list.
  /// NotGuaranteed: the first failing hypothesis of every theorem tried.
  std::vector<Condition> conditions;
  /// Every theorem tried, in search order, with complete traces.
  std::vector<Attempt> attempts;
  /// Target exponent, when the statement produces one (differentiation).
  std::optional<Exponent> target;
  std::string note;

  bool admissible() const { return result == VerdictResult::Admissible; }
};

namespace detail {

class AttemptBuilder {
 public:
  explicit AttemptBuilder(std::string theorem) { attempt_.theorem = std::move(theorem); }

  AttemptBuilder& require(std::string text, Rational lhs, Relation rel, Rational rhs = Rational(0)) {
    Condition c;
    c.theorem = attempt_.theorem;
    c.text = std::move(text);
    c.satisfied = evaluate(rel, lhs, rhs);
    c.lhs = std::move(lhs);
    c.relation = rel;
    c.rhs = std::move(rhs);
    attempt_.conditions.push_back(std::move(c));
    return *this;
  }

  /// A yes/no hypothesis (domain class membership) recorded as 1 = 1 or 0 = 1.
  AttemptBuilder& require_flag(std::string text, bool holds) {
    return require(std::move(text), Rational(holds ? 1 : 0), Relation::Eq, Rational(1));
  }

  Attempt build() && { return std::move(attempt_); }

 private:
  Attempt attempt_;
};

inline Verdict decide(std::vector<Attempt> attempts) {
  Verdict v;
  for (const auto& a : attempts) {
    if (a.holds()) {
      v.result = VerdictResult::Admissible;
      v.theorem_tag = a.theorem;
      v.conditions = a.conditions;
      break;
    }
  }
  if (!v.admissible()) {
    for (const auto& a : attempts)
      if (const Condition* f = a.first_failure()) v.conditions.push_back(*f);
  }
  v.attempts = std::move(attempts);
  return v;
}

inline void validate(const SpaceSpec& sp, const char* role) {
  if (sp.n < 1) throw InvalidArgument(std::string(role) + ": dimension n must be >= 1");
  if (sp.exponent.p_infinite)
    throw InfiniteExponentError(std::string(role) + ": p = infinity is outside the scope of the checks");
  if (sp.exponent.p <= 1)
    throw InvalidArgument(std::string(role) + ": p out of range, need p > 1, got " +
                          to_string(sp.exponent.p));
}

inline void same_setting(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.n != b.n)
    throw InvalidArgument("dimension mismatch: " + std::to_string(a.n) + " vs " + std::to_string(b.n));
  if (a.domain != b.domain)
    throw InvalidArgument(std::string("domain class mismatch: ") + to_string(a.domain) + " vs " +
                          to_string(b.domain));
}

inline bool open_subset_of_rn(DomainClass d) {
  return d == DomainClass::FullSpace || d == DomainClass::BoundedLipschitz ||
         d == DomainClass::GeneralOpen || d == DomainClass::CompactSupportInOpen;
}

inline Rational inv(const Rational& p) { return Rational(1) / p; }

// s - n/p >= t - n/q, shared by several embedding statements.
inline void sobolev_index(AttemptBuilder& b, int n, const Exponent& from, const Exponent& to) {
  b.require("s - n/p >= t - n/q", from.s - Rational(n) / from.p, Relation::Ge,
            to.s - Rational(n) / to.p);
}

}  // namespace detail

/// W^{s,p} -> W^{t,q} on the domain class shared by `from` and `to`.
inline Verdict check_embedding(const SpaceSpec& from, const SpaceSpec& to) {
  using detail::AttemptBuilder;
  detail::validate(from, "from");
  detail::validate(to, "to");
  detail::same_setting(from, to);
  const int n = from.n;
  const Exponent& a = from.exponent;
  const Exponent& b = to.exponent;
  std::vector<Attempt> attempts;

  switch (from.domain) {
    case DomainClass::FullSpace: {
      AttemptBuilder t("Embedding Theorem I");
      t.require("p <= q", a.p, Relation::Le, b.p).require("t <= s", b.s, Relation::Le, a.s);
      detail::sobolev_index(t, n, a, b);
      attempts.push_back(std::move(t).build());
      break;
    }
    case DomainClass::BoundedLipschitz: {
      AttemptBuilder t("Embedding Theorem III");
      t.require("0 <= t", Rational(0), Relation::Le, b.s).require("t <= s", b.s, Relation::Le, a.s);
      detail::sobolev_index(t, n, a, b);
      attempts.push_back(std::move(t).build());
      break;
    }
    case DomainClass::CompactSupportInOpen: {
      AttemptBuilder t("Embedding Theorem IV (2)");
      t.require("p <= q", a.p, Relation::Le, b.p)
          .require("0 <= t", Rational(0), Relation::Le, b.s)
          .require("t <= s", b.s, Relation::Le, a.s);
      detail::sobolev_index(t, n, a, b);
      attempts.push_back(std::move(t).build());
      break;
    }
    case DomainClass::GeneralOpen: {
      AttemptBuilder i3("Embedding Theorem IV (3)");
      i3.require("s in N0", a.s, Relation::InNaturals0)
          .require("t in N0", b.s, Relation::InNaturals0)
          .require("t <= s", b.s, Relation::Le, a.s)
          .require("p = q", a.p, Relation::Eq, b.p);
      attempts.push_back(std::move(i3).build());

      AttemptBuilder i4("Embedding Theorem IV (4)");
      i4.require("0 <= t", Rational(0), Relation::Le, b.s)
          .require("t <= s", b.s, Relation::Le, a.s)
          .require("s < 1", a.s, Relation::Lt, Rational(1))
          .require("p = q", a.p, Relation::Eq, b.p);
      attempts.push_back(std::move(i4).build());

      AttemptBuilder i5("Embedding Theorem IV (5)");
      i5.require("0 <= t", Rational(0), Relation::Le, b.s)
          .require("t <= s", b.s, Relation::Le, a.s)
          .require("floor(s) = floor(t)", floor(a.s), Relation::Eq, floor(b.s))
          .require("p = q", a.p, Relation::Eq, b.p);
      attempts.push_back(std::move(i5).build());

      AttemptBuilder i6("Embedding Theorem IV (6)");
      i6.require("0 <= t", Rational(0), Relation::Le, b.s)
          .require("t <= s", b.s, Relation::Le, a.s)
          .require("t in N0", b.s, Relation::InNaturals0)
          .require("p = q", a.p, Relation::Eq, b.p);
      attempts.push_back(std::move(i6).build());
      break;
    }
    case DomainClass::CompactManifold: {
      // Transfer of the R^n embedding through a super nice atlas; valid when
      // neither order is a noninteger below -1.
      AttemptBuilder t("Manifold Embedding Theorem (1)");
      t.require("s is not a noninteger < -1", a.s, Relation::NotNonintegerBelow, Rational(-1))
          .require("t is not a noninteger < -1", b.s, Relation::NotNonintegerBelow, Rational(-1))
          .require("p <= q", a.p, Relation::Le, b.p)
          .require("t <= s", b.s, Relation::Le, a.s);
      detail::sobolev_index(t, n, a, b);
      attempts.push_back(std::move(t).build());
      break;
    }
  }
  return detail::decide(std::move(attempts));
}

/// W^{s1,p1} x W^{s2,p2} -> W^{s,p} under pointwise multiplication.
///
/// Search order: Banach algebra, Thm 4.1, Thm 4.6 (both strictness variants),
/// Thm 4.3, Thm 4.5. On bounded Lipschitz domains each whole-space theorem is
/// transferred only when every space involved satisfies
/// W^{e,q}(Omega) = W^{e,q}(closure), i.e. 1/q - e is not a positive integer.
inline Verdict check_multiplication(const SpaceSpec& a, const SpaceSpec& b, const SpaceSpec& target) {
  using detail::AttemptBuilder;
  using detail::inv;
  detail::validate(a, "a");
  detail::validate(b, "b");
  detail::validate(target, "target");
  detail::same_setting(a, b);
  detail::same_setting(a, target);

  const Rational n(a.n);
  const Rational& s1 = a.exponent.s;
  const Rational& p1 = a.exponent.p;
  const Rational& s2 = b.exponent.s;
  const Rational& p2 = b.exponent.p;
  const Rational& s = target.exponent.s;
  const Rational& p = target.exponent.p;
  const DomainClass dom = a.domain;
  const bool lipschitz = dom == DomainClass::BoundedLipschitz;
  const bool supported = dom == DomainClass::FullSpace || lipschitz;

  auto domain_gate = [&](AttemptBuilder& t) {
    t.require_flag("domain is R^n or a bounded Lipschitz domain", supported);
  };
  auto transfer = [&](AttemptBuilder& t) {
    if (!lipschitz) return;
    t.require("W^{s1,p1}(Omega) = W^{s1,p1}(closure): 1/p1 - s1 not in Z+", inv(p1) - s1,
              Relation::NotPositiveInteger);
    t.require("W^{s2,p2}(Omega) = W^{s2,p2}(closure): 1/p2 - s2 not in Z+", inv(p2) - s2,
              Relation::NotPositiveInteger);
    t.require("W^{s,p}(Omega) = W^{s,p}(closure): 1/p - s not in Z+", inv(p) - s,
              Relation::NotPositiveInteger);
  };
  auto cond_i = [&](AttemptBuilder& t) {
    t.require("(i) s1 >= s", s1, Relation::Ge, s).require("(i) s2 >= s", s2, Relation::Ge, s);
  };
  auto cond_iii = [&](AttemptBuilder& t, Relation rel) {
    t.require("(iii) s1 - s " + std::string(to_string(rel)) + " n(1/p1 - 1/p)", s1 - s, rel,
              n * (inv(p1) - inv(p)));
    t.require("(iii) s2 - s " + std::string(to_string(rel)) + " n(1/p2 - 1/p)", s2 - s, rel,
              n * (inv(p2) - inv(p)));
  };
  const Rational iv_rhs = n * (inv(p1) + inv(p2) - inv(p));
  const Rational v_rhs = n * (inv(p1) + inv(p2) - Rational(1));
  auto cond_iv = [&](AttemptBuilder& t, Relation rel, bool nonnegative_tail) {
    t.require("(iv) s1 + s2 - s " + std::string(to_string(rel)) + " n(1/p1 + 1/p2 - 1/p)",
              s1 + s2 - s, rel, iv_rhs);
    if (nonnegative_tail)
      t.require("(iv) n(1/p1 + 1/p2 - 1/p) >= 0", iv_rhs, Relation::Ge, Rational(0));
  };

  std::vector<Attempt> attempts;
  {
    AttemptBuilder t("Thm 3.3");
    domain_gate(t);
    t.require("s1 = s", s1, Relation::Eq, s)
        .require("s2 = s", s2, Relation::Eq, s)
        .require("p1 = p", p1, Relation::Eq, p)
        .require("p2 = p", p2, Relation::Eq, p)
        .require("s*p > n", s * p, Relation::Gt, n);
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Thm 4.1");
    domain_gate(t);
    t.require("p1 <= p", p1, Relation::Le, p).require("p2 <= p", p2, Relation::Le, p);
    cond_i(t);
    t.require("(ii) s >= 0", s, Relation::Ge, Rational(0));
    cond_iii(t, Relation::Ge);
    cond_iv(t, Relation::Gt, false);
    transfer(t);
    attempts.push_back(std::move(t).build());
  }
  for (int variant = 0; variant < 2; ++variant) {
    // variant 0 as stated; variant 1 with the strictness of (iii) and (iv)
    // interchanged.
    AttemptBuilder t(variant == 0 ? "Thm 4.6" : "Thm 4.6 (interchanged strictness)");
    domain_gate(t);
    cond_i(t);
    t.require("(i) s >= 0", s, Relation::Ge, Rational(0));
    t.require("(ii) s in N0", s, Relation::InNaturals0);
    cond_iii(t, variant == 0 ? Relation::Ge : Relation::Gt);
    cond_iv(t, variant == 0 ? Relation::Gt : Relation::Ge, true);
    transfer(t);
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Thm 4.3");
    domain_gate(t);
    t.require("p1 <= p", p1, Relation::Le, p).require("p2 <= p", p2, Relation::Le, p);
    cond_i(t);
    t.require("(ii) min(s1, s2) < 0", std::min(s1, s2), Relation::Lt, Rational(0));
    cond_iii(t, Relation::Ge);
    cond_iv(t, Relation::Gt, false);
    t.require("(v) s1 + s2 >= n(1/p1 + 1/p2 - 1)", s1 + s2, Relation::Ge, v_rhs);
    t.require("(v) n(1/p1 + 1/p2 - 1) >= 0", v_rhs, Relation::Ge, Rational(0));
    transfer(t);
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Thm 4.5");
    domain_gate(t);
    cond_i(t);
    t.require("(ii) min(s1, s2) >= 0", std::min(s1, s2), Relation::Ge, Rational(0));
    t.require("(ii) s < 0", s, Relation::Lt, Rational(0));
    cond_iii(t, Relation::Ge);
    cond_iv(t, Relation::Gt, true);
    t.require("(v) s1 + s2 > n(1/p1 + 1/p2 - 1)", s1 + s2, Relation::Gt, v_rhs);
    transfer(t);
    attempts.push_back(std::move(t).build());
  }
  return detail::decide(std::move(attempts));
}

enum class PointwiseMode { Algebra, LInfinity, Composition };

inline const char* to_string(PointwiseMode m) {
  switch (m) {
    case PointwiseMode::Algebra: return "algebra";
    case PointwiseMode::LInfinity: return "linfty";
    case PointwiseMode::Composition: return "composition";
  }
  return "?";
}

/// Banach algebra / L^inf embedding (sp > n on R^n or a bounded Lipschitz
/// domain), or composition u -> F(u) on R^n (s >= 1 and sp > n).
inline Verdict check_pointwise(const SpaceSpec& spec, PointwiseMode mode) {
  using detail::AttemptBuilder;
  detail::validate(spec, "space");
  const Rational& s = spec.exponent.s;
  const Rational& p = spec.exponent.p;
  std::vector<Attempt> attempts;
  if (mode == PointwiseMode::Composition) {
    AttemptBuilder t("Composition corollary");
    t.require("s >= 1", s, Relation::Ge, Rational(1))
        .require_flag("domain is R^n", spec.domain == DomainClass::FullSpace)
        .require("s*p > n", s * p, Relation::Gt, Rational(spec.n));
    attempts.push_back(std::move(t).build());
  } else {
    AttemptBuilder t(mode == PointwiseMode::Algebra ? "Thm 3.3 (Banach algebra)"
                                                    : "Thm 3.3 (L-infinity embedding)");
    t.require_flag("domain is R^n or a bounded Lipschitz domain",
                   spec.domain == DomainClass::FullSpace ||
                       spec.domain == DomainClass::BoundedLipschitz)
        .require("s*p > n", s * p, Relation::Gt, Rational(spec.n));
    attempts.push_back(std::move(t).build());
  }
  return detail::decide(std::move(attempts));
}

/// d^alpha : W^{s,p} -> W^{s-|alpha|,p} for |alpha| = order.
inline Verdict check_derivative(const SpaceSpec& spec, int order) {
  using detail::AttemptBuilder;
  detail::validate(spec, "space");
  if (order < 1) throw InvalidArgument("derivative order must be >= 1");
  const Rational& s = spec.exponent.s;
  const Rational& p = spec.exponent.p;
  const Rational a(order);
  const bool open = detail::open_subset_of_rn(spec.domain);
  std::vector<Attempt> attempts;
  {
    AttemptBuilder t("Differentiation (1)");
    t.require_flag("domain is R^n", spec.domain == DomainClass::FullSpace);
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Differentiation (2)");
    t.require_flag("domain is an open subset of R^n", open).require("s < 0", s, Relation::Lt, Rational(0));
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Differentiation (3)");
    t.require_flag("domain is an open subset of R^n", open)
        .require("s >= 0", s, Relation::Ge, Rational(0))
        .require("|alpha| <= s", a, Relation::Le, s);
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Differentiation (4)");
    t.require_flag("domain is bounded Lipschitz", spec.domain == DomainClass::BoundedLipschitz)
        .require("s >= 0", s, Relation::Ge, Rational(0))
        .require("|alpha| > s", a, Relation::Gt, s)
        .require("fractional_part(s) != 1/p", fractional_part(s), Relation::Ne, Rational(1) / p);
    attempts.push_back(std::move(t).build());
  }
  Verdict v = detail::decide(std::move(attempts));
  v.target = Exponent{s - a, p, false};
  return v;
}

/// Shape of the open set into which a compactly supported function is
/// extended by zero.
enum class EnclosingDomain { General, Lipschitz, FullSpace };

inline const char* to_string(EnclosingDomain e) {
  switch (e) {
    case EnclosingDomain::General: return "general";
    case EnclosingDomain::Lipschitz: return "lipschitz";
    case EnclosingDomain::FullSpace: return "full";
  }
  return "?";
}

/// ext^0 from W^{s,p}_K(Omega') into W^{s,p}(Omega) with two-sided norm
/// comparability.
inline Verdict check_extension(const SpaceSpec& spec, EnclosingDomain enclosing = EnclosingDomain::General) {
  using detail::AttemptBuilder;
  detail::validate(spec, "space");
  if (spec.domain != DomainClass::CompactSupportInOpen)
    throw InvalidArgument(std::string("extension by zero needs domain class CompactSupportInOpen, got ") +
                          to_string(spec.domain));
  const Rational& s = spec.exponent.s;
  std::vector<Attempt> attempts;
  {
    AttemptBuilder t("Extension by Zero");
    t.require("s >= 0", s, Relation::Ge, Rational(0));
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Extension by Zero, negative order");
    t.require("s < 0", s, Relation::Lt, Rational(0))
        .require("s in (-inf,-1] cap Z or -1 < s", s, Relation::NotNonintegerBelow, Rational(-1));
    attempts.push_back(std::move(t).build());
  }
  {
    AttemptBuilder t("Extension by Zero, negative order, regular enclosing domain");
    t.require("s < 0", s, Relation::Lt, Rational(0))
        .require_flag("enclosing domain is Lipschitz or R^n", enclosing != EnclosingDomain::General);
    attempts.push_back(std::move(t).build());
  }
  Verdict v = detail::decide(std::move(attempts));
  if (v.admissible()) v.note = "two-sided norm comparability: ||ext0 u|| ~ ||u||";
  return v;
}

}  // namespace sobolev
