#include <gtest/gtest.h>

#include <random>

#include "sobolev/exponents.hpp"

namespace sobolev {
namespace {

Rational R(const char* text) { return parse_rational(text); }

SpaceSpec space(const char* s, const char* p, int n, DomainClass d) {
  return SpaceSpec{Exponent::finite(R(s), R(p)), n, d};
}

TEST(Rational, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(R("3/2"), Rational(3, 2));
  EXPECT_EQ(R("-1/2"), Rational(-1, 2));
  EXPECT_EQ(R("1.25"), Rational(5, 4));
  EXPECT_EQ(R("-0.1"), Rational(-1, 10));
  EXPECT_EQ(R("2.5e-1"), Rational(1, 4));
  EXPECT_EQ(R("7"), Rational(7));
  EXPECT_THROW(R("1/0"), ParseError);
  EXPECT_THROW(R("abc"), ParseError);
  EXPECT_THROW(R("1/2x"), ParseError);
}

TEST(Rational, FloorAndFractionalPart) {
  EXPECT_EQ(floor(R("3/2")), Rational(1));
  EXPECT_EQ(floor(R("-3/2")), Rational(-2));
  EXPECT_EQ(fractional_part(R("-3/2")), Rational(1, 2));
  EXPECT_EQ(floor(R("-2")), Rational(-2));
}

TEST(Exponent, InvariantsAndExceptionalPredicate) {
  EXPECT_THROW(Exponent::finite(R("1"), R("1")), InvalidArgument);
  Exponent e = Exponent::finite(R("3/2"), R("2"));
  EXPECT_EQ(e.integer_part(), Rational(1));
  EXPECT_EQ(e.theta(), Rational(1, 2));
  EXPECT_TRUE(e.exceptional());  // 3/2 - 1/2 = 1
  EXPECT_FALSE(Exponent::finite(R("1"), R("2")).exceptional());
}

TEST(Embedding, WholeSpaceExample) {
  Verdict v = check_embedding(space("2", "2", 2, DomainClass::FullSpace),
                              space("1", "4", 2, DomainClass::FullSpace));
  ASSERT_TRUE(v.admissible());
  EXPECT_EQ(v.theorem_tag, "Embedding Theorem I");
  // s - n/p = 1, t - n/q = 1/2
  const Condition& idx = v.conditions.back();
  EXPECT_EQ(idx.lhs, Rational(1));
  EXPECT_EQ(idx.rhs, Rational(1, 2));
}

TEST(Embedding, GeneralOpenRejectsChangeOfIntegrability) {
  Verdict v = check_embedding(space("2", "2", 2, DomainClass::GeneralOpen),
                              space("1", "4", 2, DomainClass::GeneralOpen));
  EXPECT_FALSE(v.admissible());
  EXPECT_EQ(v.attempts.size(), 4u);
  EXPECT_EQ(v.conditions.size(), 4u);  // one failure per item tried
}

TEST(Embedding, IdentityHoldsForEveryDomainClass) {
  for (DomainClass d : {DomainClass::FullSpace, DomainClass::BoundedLipschitz, DomainClass::GeneralOpen,
                        DomainClass::CompactSupportInOpen, DomainClass::CompactManifold}) {
    Verdict v = check_embedding(space("1/2", "2", 1, d), space("1/2", "2", 1, d));
    EXPECT_TRUE(v.admissible()) << to_string(d);
  }
}

TEST(Embedding, LipschitzAllowsDecreasingIntegrability) {
  // p > q is fine on bounded Lipschitz domains, not on R^n.
  EXPECT_TRUE(check_embedding(space("1", "4", 2, DomainClass::BoundedLipschitz),
                              space("1", "2", 2, DomainClass::BoundedLipschitz))
                  .admissible());
  EXPECT_FALSE(check_embedding(space("1", "4", 2, DomainClass::FullSpace),
                               space("1", "2", 2, DomainClass::FullSpace))
                   .admissible());
}

TEST(Embedding, Errors) {
  EXPECT_THROW(check_embedding(space("1", "2", 2, DomainClass::FullSpace),
                               space("1", "2", 3, DomainClass::FullSpace)),
               InvalidArgument);
  SpaceSpec inf{Exponent::infinite(R("1")), 2, DomainClass::FullSpace};
  EXPECT_THROW(check_embedding(inf, space("1", "2", 2, DomainClass::FullSpace)), InfiniteExponentError);
  SpaceSpec bad{Exponent{R("1"), R("1/2"), false}, 2, DomainClass::FullSpace};
  EXPECT_THROW(check_embedding(bad, space("1", "2", 2, DomainClass::FullSpace)), InvalidArgument);
}

TEST(Embedding, ManifoldRejectsNonintegerBelowMinusOne) {
  Verdict v = check_embedding(space("-3/2", "2", 2, DomainClass::CompactManifold),
                              space("-2", "2", 2, DomainClass::CompactManifold));
  EXPECT_FALSE(v.admissible());
  EXPECT_EQ(v.conditions.front().text, "s is not a noninteger < -1");
}

TEST(Multiplication, Examples) {
  Verdict a = check_multiplication(space("1", "2", 3, DomainClass::FullSpace),
                                   space("1", "2", 3, DomainClass::FullSpace),
                                   space("0", "2", 3, DomainClass::FullSpace));
  ASSERT_TRUE(a.admissible());
  EXPECT_EQ(a.theorem_tag, "Thm 4.1");

  Verdict b = check_multiplication(space("1/2", "2", 3, DomainClass::FullSpace),
                                   space("1/2", "2", 3, DomainClass::FullSpace),
                                   space("1/2", "2", 3, DomainClass::FullSpace));
  EXPECT_FALSE(b.admissible());

  Verdict c = check_multiplication(space("1", "2", 1, DomainClass::FullSpace),
                                   space("1", "2", 1, DomainClass::FullSpace),
                                   space("-1/2", "2", 1, DomainClass::FullSpace));
  ASSERT_TRUE(c.admissible());
  EXPECT_EQ(c.theorem_tag, "Thm 4.5");
  const Condition& v = c.conditions.back();
  EXPECT_EQ(v.text, "(v) s1 + s2 > n(1/p1 + 1/p2 - 1)");
  EXPECT_EQ(v.lhs, Rational(2));
  EXPECT_EQ(v.rhs, Rational(0));
}

TEST(Multiplication, AlgebraShortcutComesFirst) {
  Verdict v = check_multiplication(space("2", "2", 3, DomainClass::FullSpace),
                                   space("2", "2", 3, DomainClass::FullSpace),
                                   space("2", "2", 3, DomainClass::FullSpace));
  ASSERT_TRUE(v.admissible());
  EXPECT_EQ(v.theorem_tag, "Thm 3.3");
}

TEST(Multiplication, Theorem46WhenFactorIntegrabilityExceedsTarget) {
  // p1 = 4 > p = 2 rules out 4.1; 4.6 has no such restriction.
  Verdict v = check_multiplication(space("2", "4", 2, DomainClass::FullSpace),
                                   space("2", "2", 2, DomainClass::FullSpace),
                                   space("1", "2", 2, DomainClass::FullSpace));
  ASSERT_TRUE(v.admissible());
  EXPECT_EQ(v.theorem_tag, "Thm 4.6");
}

TEST(Multiplication, Theorem46InterchangedStrictness) {
  // n=2, (1/2,2) x (1/2,2) -> (0,2): (iv) s1 + s2 - s = 1 = n(1/p1 + 1/p2 - 1/p)
  // fails strictly but holds as >=, while (iii) 1/2 > 0 holds strictly.
  Verdict v = check_multiplication(space("1/2", "2", 2, DomainClass::FullSpace),
                                   space("1/2", "2", 2, DomainClass::FullSpace),
                                   space("0", "2", 2, DomainClass::FullSpace));
  ASSERT_TRUE(v.admissible());
  EXPECT_EQ(v.theorem_tag, "Thm 4.6 (interchanged strictness)");
}

TEST(Multiplication, NegativeExponentsTheorem43) {
  // n=1: (1,2) x (-1/4,2) -> (-1/4,2)
  Verdict v = check_multiplication(space("1", "2", 1, DomainClass::FullSpace),
                                   space("-1/4", "2", 1, DomainClass::FullSpace),
                                   space("-1/4", "2", 1, DomainClass::FullSpace));
  ASSERT_TRUE(v.admissible());
  EXPECT_EQ(v.theorem_tag, "Thm 4.3");
}

TEST(Multiplication, LipschitzTransferConditionIsRecorded) {
  Verdict ok = check_multiplication(space("1", "2", 3, DomainClass::BoundedLipschitz),
                                    space("1", "2", 3, DomainClass::BoundedLipschitz),
                                    space("0", "2", 3, DomainClass::BoundedLipschitz));
  ASSERT_TRUE(ok.admissible());
  int transfer = 0;
  for (const auto& c : ok.conditions)
    if (c.text.find("closure") != std::string::npos) ++transfer;
  EXPECT_EQ(transfer, 3);

  // target (-1/2, 2): 1/p - s = 1 is a positive integer, so the transfer fails.
  Verdict bad = check_multiplication(space("1", "2", 1, DomainClass::BoundedLipschitz),
                                     space("1", "2", 1, DomainClass::BoundedLipschitz),
                                     space("-1/2", "2", 1, DomainClass::BoundedLipschitz));
  EXPECT_FALSE(bad.admissible());
}

TEST(Multiplication, GeneralOpenNotCovered) {
  Verdict v = check_multiplication(space("1", "2", 3, DomainClass::GeneralOpen),
                                   space("1", "2", 3, DomainClass::GeneralOpen),
                                   space("0", "2", 3, DomainClass::GeneralOpen));
  EXPECT_FALSE(v.admissible());
  EXPECT_THROW(check_multiplication(space("1", "2", 3, DomainClass::FullSpace),
                                    space("1", "2", 2, DomainClass::FullSpace),
                                    space("0", "2", 3, DomainClass::FullSpace)),
               InvalidArgument);
}

TEST(Pointwise, Examples) {
  EXPECT_TRUE(check_pointwise(space("2", "2", 3, DomainClass::FullSpace), PointwiseMode::Algebra).admissible());
  EXPECT_FALSE(check_pointwise(space("1", "2", 4, DomainClass::FullSpace), PointwiseMode::LInfinity).admissible());
  EXPECT_TRUE(
      check_pointwise(space("3/2", "2", 2, DomainClass::FullSpace), PointwiseMode::Composition).admissible());
  EXPECT_FALSE(
      check_pointwise(space("1/2", "8", 2, DomainClass::FullSpace), PointwiseMode::Composition).admissible());
  EXPECT_FALSE(check_pointwise(space("2", "2", 3, DomainClass::GeneralOpen), PointwiseMode::Algebra).admissible());
}

TEST(Derivative, Examples) {
  Verdict a = check_derivative(space("1/2", "2", 1, DomainClass::FullSpace), 1);
  ASSERT_TRUE(a.admissible());
  EXPECT_EQ(a.theorem_tag, "Differentiation (1)");
  ASSERT_TRUE(a.target.has_value());
  EXPECT_EQ(a.target->s, Rational(-1, 2));
  EXPECT_EQ(a.target->p, Rational(2));

  Verdict b = check_derivative(space("3/2", "2", 1, DomainClass::BoundedLipschitz), 2);
  EXPECT_FALSE(b.admissible());
  EXPECT_EQ(b.attempts.back().first_failure()->text, "fractional_part(s) != 1/p");

  Verdict c = check_derivative(space("2", "2", 2, DomainClass::GeneralOpen), 1);
  ASSERT_TRUE(c.admissible());
  EXPECT_EQ(c.theorem_tag, "Differentiation (3)");

  EXPECT_THROW(check_derivative(space("1", "2", 1, DomainClass::FullSpace), 0), InvalidArgument);
}

TEST(Extension, Examples) {
  auto cs = DomainClass::CompactSupportInOpen;
  Verdict a = check_extension(space("1", "2", 2, cs));
  EXPECT_TRUE(a.admissible());
  EXPECT_FALSE(a.note.empty());
  EXPECT_TRUE(check_extension(space("-1/2", "2", 2, cs)).admissible());
  EXPECT_TRUE(check_extension(space("-2", "2", 2, cs)).admissible());
  EXPECT_FALSE(check_extension(space("-3/2", "2", 2, cs)).admissible());
  EXPECT_TRUE(check_extension(space("-3/2", "2", 2, cs), EnclosingDomain::Lipschitz).admissible());
  EXPECT_THROW(check_extension(space("1", "2", 2, DomainClass::FullSpace)), InvalidArgument);
}

TEST(Exactness, BoundaryEqualityAcceptedForNonStrictRejectedForStrict) {
  // Embedding Theorem I at s - n/p = t - n/q exactly: n=3, (1,2) -> (0,6):
  // 1 - 3/2 = -1/2 = 0 - 3/6.
  Verdict e = check_embedding(space("1", "2", 3, DomainClass::FullSpace),
                              space("0", "6", 3, DomainClass::FullSpace));
  EXPECT_TRUE(e.admissible());
  EXPECT_EQ(e.conditions.back().lhs, e.conditions.back().rhs);

  // Banach algebra needs sp > n strictly: n=2, s=1, p=2 lands on sp = n.
  EXPECT_FALSE(check_pointwise(space("1", "2", 2, DomainClass::FullSpace), PointwiseMode::Algebra).admissible());

  // Thm 4.5 (v) strict: n=1, (1/2,2) x (0,2): s1 + s2 = 1/2 vs n(1/2+1/2-1) = 0 holds;
  // (1/4, 4/3) x (0, 4/3) -> (-1/4, 2): s1+s2 = 1/4 and n(3/4+3/4-1) = 1/2 fails.
  Verdict strict = check_multiplication(space("1/2", "4/3", 1, DomainClass::FullSpace),
                                        space("0", "4/3", 1, DomainClass::FullSpace),
                                        space("-1/4", "2", 1, DomainClass::FullSpace));
  EXPECT_FALSE(strict.admissible());
}

// Property: re-evaluating every trace entry reproduces its flag; Admissible
// traces are all-satisfied; identical inputs give identical traces.
TEST(Properties, CertificateSoundnessAndDeterminism) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> sn(-6, 8), sd(1, 4), pn(5, 16), pd(1, 4), nn(1, 4);
  auto rand_exp = [&] {
    Rational p(pn(rng), pd(rng));
    if (p <= 1) p = Rational(3, 2);
    return Exponent::finite(Rational(sn(rng), sd(rng)), p);
  };
  for (int trial = 0; trial < 300; ++trial) {
    int n = nn(rng);
    DomainClass d = static_cast<DomainClass>(trial % 5);
    SpaceSpec a{rand_exp(), n, d}, b{rand_exp(), n, d}, c{rand_exp(), n, d};
    Verdict v1 = check_multiplication(a, b, c);
    Verdict v2 = check_multiplication(a, b, c);
    ASSERT_EQ(v1.theorem_tag, v2.theorem_tag);
    ASSERT_EQ(v1.conditions.size(), v2.conditions.size());
    for (const auto& att : v1.attempts)
      for (const auto& cond : att.conditions)
        ASSERT_EQ(evaluate(cond.relation, cond.lhs, cond.rhs), cond.satisfied);
    if (v1.admissible())
      for (const auto& cond : v1.conditions) ASSERT_TRUE(cond.satisfied);
    else
      for (const auto& cond : v1.conditions) ASSERT_FALSE(cond.satisfied);

    Verdict e = check_embedding(a, b);
    if (e.admissible())
      for (const auto& cond : e.conditions) ASSERT_TRUE(cond.satisfied);
  }
}

// Property: Embedding Theorem I stays admissible when the target smoothness
// decreases (t' <= t, t' >= 0).
TEST(Properties, EmbeddingMonotoneInTargetSmoothness) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> sn(0, 12), pn(3, 12), nn(1, 4);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = nn(rng);
    Exponent from = Exponent::finite(Rational(sn(rng), 2), Rational(pn(rng), 2));
    Exponent to = Exponent::finite(Rational(sn(rng), 2), Rational(pn(rng), 2));
    SpaceSpec a{from, n, DomainClass::FullSpace}, b{to, n, DomainClass::FullSpace};
    if (!check_embedding(a, b).admissible()) continue;
    ++checked;
    for (Rational t = to.s; t >= 0; t -= Rational(1, 3)) {
      SpaceSpec lower{Exponent::finite(t, to.p), n, DomainClass::FullSpace};
      ASSERT_TRUE(check_embedding(a, lower).admissible());
    }
  }
  EXPECT_GT(checked, 20);
}

}  // namespace
}  // namespace sobolev
