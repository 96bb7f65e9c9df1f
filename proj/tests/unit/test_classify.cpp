#include "nform/classify.hpp"

#include "nform/algebra.hpp"
#include "samples.hpp"

#include <gtest/gtest.h>

using namespace nform;
using namespace nform::testing;

TEST(Classify, CanonicalClasses) {
  EXPECT_EQ(classify_linear(diag(0, 1)).tag, ClassTag::S3);
  EXPECT_EQ(classify_linear(diag(1, 2)).tag, ClassTag::S4SameSign);
  EXPECT_EQ(classify_linear(diag(-1, -5)).tag, ClassTag::S4SameSign);
  EXPECT_EQ(classify_linear(diag(0, 0)).tag, ClassTag::Zero);
  EXPECT_EQ(s2_class(3).tag, ClassTag::S2);
  EXPECT_EQ(classify_linear({{{Rational(1), Rational(-2)}, {Rational(2), Rational(1)}}}).tag, ClassTag::S1);
  EXPECT_EQ(n2_class().tag, ClassTag::N2);
  EXPECT_EQ(classify_linear({{{Rational(3), Rational(1)}, {Rational(0), Rational(3)}}}).tag, ClassTag::N1);
}

TEST(Classify, OppositeSignParameters) {
  // lambda = 3, mu = -2: q/p = 3/2, c = 1
  LinearClass cls = classify_linear(diag(3, -2));
  EXPECT_EQ(cls.tag, ClassTag::S4OppositeSign);
  EXPECT_EQ(cls.p, 2);
  EXPECT_EQ(cls.q, 3);
  EXPECT_EQ(cls.c, Rational(1));
  LinearClass half = classify_linear(diag(make_rational(1, 2), make_rational(-1, 2)));
  EXPECT_EQ(half.p, 1);
  EXPECT_EQ(half.q, 1);
  EXPECT_EQ(half.c, make_rational(1, 2));
  EXPECT_FALSE(half.irrational_ratio);
}

TEST(Classify, NonCanonicalIsRejected) {
  EXPECT_THROW(classify_linear(diag(1, 0)), CanonicalFormRequired);
  EXPECT_THROW(classify_linear({{{Rational(1), Rational(1)}, {Rational(1), Rational(1)}}}), CanonicalFormRequired);
}

TEST(Classify, JordanizeBringsToCanonical) {
  Rng rng(41);
  int done = 0;
  while (done < 30) {
    // Random conjugate of a canonical matrix.
    Mat2 p{};
    for (auto& row : p)
      for (auto& v : row) v = random_rational(rng, 5);
    Rational det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    if (is_zero(det)) continue;
    Mat2 pinv{{{p[1][1] / det, -p[0][1] / det}, {-p[1][0] / det, p[0][0] / det}}};
    Mat2 canon = done % 3 == 0 ? diag(0, random_rational(rng, 5, true))
                 : done % 3 == 1 ? diag(2, -3)
                                 : Mat2{{{Rational(0), Rational(1)}, {Rational(0), Rational(0)}}};
    Mat2 a{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) a[i][j] += p[i][k] * canon[k][l] * pinv[l][j];
    auto jz = jordanize(a);
    ASSERT_TRUE(jz.has_value());
    LinearClass cls = classify_linear(jz->canonical);
    LinearClass want = classify_linear(canon);
    EXPECT_EQ(cls.tag, want.tag);
    JetSeries w(2);
    w.set_part(0, linear_field(a));
    w.add_to_part(HomVF::monomial({2, 0, 1}));
    JetSeries moved = apply_linear_change(w, jz->p, jz->p_inverse);
    EXPECT_EQ(linear_matrix(moved.part(0)), jz->canonical);
    // Moving back recovers the original jet.
    EXPECT_EQ(apply_linear_change(moved, jz->p_inverse, jz->p), w);
    ++done;
  }
}

TEST(Classify, ComplexPairWithoutRationalFormIsNotJordanized) {
  EXPECT_FALSE(jordanize({{{Rational(0), Rational(-2)}, {Rational(1), Rational(0)}}}).has_value());
}

TEST(GeneratorBasis, ComposeDecomposeRoundTrip) {
  Rng rng(42);
  for (const auto& cls : {s3_class(), s4_class(1, 2), s4_class(2, 3), s2_class(1)}) {
    GeneratorBasis b(cls);
    for (int i = 0; i < 10; ++i) {
      Coeffs c = sample_levels(rng, b, 4, 1, 1);
      JetSeries w = b.compose(c, 4 * b.step());
      EXPECT_EQ(b.decompose_jet(w), c);
    }
    HomVF outside = HomVF::monomial({0, 2, 0});
    EXPECT_THROW(b.decompose(outside), DecompositionError);
  }
}

TEST(GeneratorBasis, LinearPartIsZetaY0) {
  EXPECT_EQ(linear_field(diag(0, 2)), Rational(2) * GeneratorBasis(s3_class(2)).y(0));
  GeneratorBasis s4(s4_class(2, 3, make_rational(1, 3)));
  EXPECT_EQ(linear_field(s4.linear_class().matrix), s4.zeta() * s4.y(0));
  EXPECT_EQ(s4.zeta(), Rational(4));
  GeneratorBasis s2(s2_class(5));
  EXPECT_EQ(linear_field(s2.linear_class().matrix), s2.zeta() * s2.y(0));
}

TEST(GeneratorBasis, GradesOfOppositeSignNode) {
  for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
    GeneratorBasis b(s4_class(p, q));
    for (int g = 1; g <= 12; ++g) {
      auto labels = b.labels_at_grade(g);
      if (g % (p + q) == 0) {
        EXPECT_EQ(labels.size(), 2u);
      } else {
        EXPECT_TRUE(labels.empty());
        EXPECT_TRUE(resonant_basis(b.linear_class(), g).empty());
      }
    }
  }
}

TEST(GeneratorBasis, SameSignSingleResonance) {
  GeneratorBasis b(classify_linear(diag(1, 2)));
  EXPECT_EQ(b.kind(), GeneratorBasis::Kind::S4Single);
  EXPECT_EQ(b.step(), 1);
  EXPECT_EQ(b.elements_at_grade(1).front(), HomVF::monomial({2, 0, 1}));
  GeneratorBasis c(classify_linear(diag(3, 1)));
  EXPECT_EQ(c.step(), 2);
  EXPECT_EQ(c.elements_at_grade(2).front(), HomVF::monomial({0, 3, 0}));
  EXPECT_THROW(GeneratorBasis(classify_linear(diag(2, 3))), NotSupported);
}
