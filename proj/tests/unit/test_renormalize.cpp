#include "nform/renormalize.hpp"

#include "nform/algebra.hpp"
#include "samples.hpp"

#include <gtest/gtest.h>

#include <tuple>

using namespace nform;
using namespace nform::testing;

namespace {

using Term = std::tuple<Family, int, Rational>;

Coeffs form(std::initializer_list<Term> terms) {
  Coeffs c;
  for (const auto& [f, k, v] : terms) c[{f, k}] = v;
  return c;
}

constexpr Family X = Family::X;
constexpr Family Y = Family::Y;

Rational q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST(CubicExample, GeneratorsAndFinalForm) {
  Reduction r = prf_reduce(cubic_example(9), Scheme::PrfA);
  GeneratorBasis b(s3_class());
  LevelCoefficients gens = level_generators(b, r.log, 8);
  const Rational alphas[] = {q(-1), q(1), q(-2), q(9, 2), q(-12), q(33), q(-99), q(1209, 4)};
  for (int k = 1; k <= 8; ++k) {
    EXPECT_EQ(gens[k].first, alphas[k - 1]) << "level " << k;
    EXPECT_EQ(gens[k].second, Rational(0)) << "level " << k;
  }
  Coeffs want = form({{Y, 0, q(1)},
                      {Y, 1, q(1)},
                      {X, 2, q(1)},
                      {X, 3, q(-1)},
                      {X, 4, q(1)},
                      {X, 6, q(-6)},
                      {X, 7, q(33)},
                      {X, 8, q(-143)},
                      {X, 9, q(572)}});
  EXPECT_EQ(through_level(r.form.coefficients, 9), want);
  EXPECT_FALSE(prf_membership_failure(r.form.jet).has_value());
}

TEST(CubicExample, SchemeBAgrees) {
  Reduction a = prf_reduce(cubic_example(9), Scheme::PrfA);
  Reduction b = prf_reduce(cubic_example(9), Scheme::PrfB);
  EXPECT_EQ(a.form.coefficients, b.form.coefficients);
  EXPECT_EQ(replay(cubic_example(9), b.log), b.form.jet);
}

TEST(CubicExample, AlreadyLieReduced) {
  // The example is case (b) with mu = 2 and all higher levels zero, so the
  // LRF sweeps have nothing to remove.
  Reduction r = lrf_reduce(cubic_example(7));
  EXPECT_TRUE(r.log.steps.empty());
}

TEST(ClosedForms, MatchAlgorithmPerCase) {
  Rng rng(61);
  GeneratorBasis b(s3_class());
  for (char major : {'a', 'b', 'c'}) {
    for (int i = 0; i < 8; ++i) {
      Coeffs c = sample_case(rng, b, major, 5);
      Reduction r = prf_reduce(compose(b, c, 5));
      auto expect = level_generators(closed_form_generators(major, level_coefficients(c), Scheme::PrfA), 4);
      auto got = level_generators(b, r.log, 4);
      for (int k = 1; k <= 4; ++k) {
        EXPECT_EQ(got[k], expect[k]) << major << " level " << k;
      }
    }
  }
}

TEST(ClosedForms, CaseBGradeFiveOutput) {
  Rng rng(62);
  GeneratorBasis b(s3_class());
  for (int i = 0; i < 8; ++i) {
    Coeffs c = sample_case(rng, b, 'b', 5);
    auto lv = level_coefficients(c);
    Rational a2 = lv[2].first, a3 = lv[3].first, a4 = lv[4].first, a5 = lv[5].first;
    Rational b1 = lv[1].second, b2 = lv[2].second, b3 = lv[3].second, b4 = lv[4].second;
    Rational x5 = a5 - 3 * a4 * b2 / b1 + 4 * a3 * b2 * b2 / (b1 * b1) - a3 * b3 / b1 - 2 * a2 * b2 * b3 / (b1 * b1) +
                  a2 * b4 / b1;
    Reduction r = prf_reduce(compose(b, c, 5));
    EXPECT_EQ(GeneratorBasis::coefficient(r.form.coefficients, {X, 5}), x5);
    EXPECT_EQ(GeneratorBasis::coefficient(r.form.coefficients, {Y, 5}), Rational(0));
  }
}

TEST(ClosedForms, CaseCOutput) {
  Rng rng(63);
  GeneratorBasis b(s3_class());
  for (int i = 0; i < 8; ++i) {
    Coeffs c = sample_case(rng, b, 'c', 5);
    Reduction r = prf_reduce(compose(b, c, 5));
    Coeffs want = form({{Y, 0, q(1)}, {X, 1, c.at({X, 1})}, {Y, 1, c.at({Y, 1})}});
    if (c.count({X, 2})) want[{X, 2}] = c.at({X, 2});
    EXPECT_EQ(through_level(r.form.coefficients, 5), want);
  }
}

TEST(ClosedForms, RejectWrongCase) {
  LevelCoefficients lv{{1, {q(1), q(1)}}, {2, {q(2), q(3)}}};
  EXPECT_THROW(closed_form_generators('a', lv, Scheme::PrfA), CaseMismatch);
  EXPECT_THROW(closed_form_generators('b', lv, Scheme::PrfA), CaseMismatch);
  EXPECT_NO_THROW(closed_form_generators('c', lv, Scheme::PrfA));
  EXPECT_THROW(closed_form_generators('b', lv, Scheme::Lrf), CaseMismatch);
  EXPECT_THROW(closed_form_generators('d', lv, Scheme::PrfA), CaseMismatch);
}

TEST(Lrf, CaseBGeneratorsAndOutput) {
  Rng rng(64);
  GeneratorBasis b(s3_class());
  for (int i = 0; i < 8; ++i) {
    Coeffs c = sample_case(rng, b, 'b', 5);
    auto lv = level_coefficients(c);
    Reduction r = lrf_reduce(compose(b, c, 5));
    EXPECT_EQ(staged_generators(b, r.log), staged_generators(closed_form_generators('b', lv, Scheme::Lrf)));
    Rational a2 = lv[2].first, a3 = lv[3].first, a4 = lv[4].first, b1 = lv[1].second, b2 = lv[2].second;
    Coeffs want = form({{Y, 0, q(1)}, {Y, 1, b1}, {X, 2, a2}, {Y, 2, b2 - a3 * b1 / a2}, {X, 4, a4 - a3 * a3 / a2}});
    EXPECT_EQ(through_level(r.form.coefficients, 4), through_level(want, 4));
    auto fail = prf_membership_failure(r.form.jet);
    ASSERT_TRUE(fail.has_value());
    EXPECT_EQ(fail->grade, 2);
  }
}

TEST(Lrf, FallsBackOutsideCaseB) {
  Rng rng(65);
  GeneratorBasis b(s3_class());
  Coeffs c = sample_case(rng, b, 'a', 4);
  Reduction r = lrf_reduce(compose(b, c, 4));
  ASSERT_FALSE(r.form.notes.empty());
  EXPECT_NE(r.form.notes.back().find("PRF computed instead"), std::string::npos);
  EXPECT_EQ(r.form.coefficients, prf_reduce(compose(b, c, 4)).form.coefficients);
}

TEST(Lrf, RejectsNonNormalForm) {
  JetSeries w(3);
  w.set_part(0, linear_field(diag(0, 1)));
  w.add_to_part(HomVF::monomial({0, 2, 0}));
  EXPECT_THROW(lrf_reduce(w), std::invalid_argument);
}

TEST(Shapes, RandomSamplesPerSubcase) {
  Rng rng(66);
  GeneratorBasis b(s3_class());
  struct Levels {
    int mu, nu;
    const char* name;
  };
  const Levels cases[] = {{1, 2, "a"},  {1, 3, "a"},  {2, 1, "b"},  {3, 1, "b"},  {1, 1, "c"},
                          {2, 3, "da"}, {2, 0, "da"}, {3, 2, "db"}, {0, 2, "db"}, {2, 2, "dc"}};
  for (const auto& lv : cases) {
    for (int i = 0; i < 3; ++i) {
      const int levels = 7;
      Coeffs c = sample_levels(rng, b, levels, lv.mu, lv.nu, 9);
      for (Scheme s : {Scheme::PrfA, Scheme::PrfB}) {
        Reduction r = prf_reduce(compose(b, c, levels), s);
        ASSERT_TRUE(r.form.case_tag.is(lv.name)) << to_string(r.form.case_tag) << " want " << lv.name;
        EXPECT_TRUE(subset(support(r.form.coefficients), predicted_support(r.form.case_tag, s, levels)))
            << lv.name << " mu " << lv.mu << " nu " << lv.nu;
        EXPECT_FALSE(prf_membership_failure(r.form.jet).has_value());
      }
    }
  }
}

TEST(Shapes, LrfCountsConstants) {
  Rng rng(67);
  GeneratorBasis b(s3_class());
  for (auto [mu, nu] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}}) {
    for (int i = 0; i < 4; ++i) {
      const int levels = 2 * mu + 1;
      Coeffs c = sample_levels(rng, b, levels, mu, nu, 9);
      Reduction r = lrf_reduce(compose(b, c, levels));
      auto sup = support(r.form.coefficients);
      EXPECT_TRUE(subset(sup, predicted_support(r.form.case_tag, Scheme::Lrf, levels)));
      EXPECT_EQ(static_cast<int>(sup.size()) - 1, mu - nu + 3);
      EXPECT_EQ(GeneratorBasis::coefficient(r.form.coefficients, {X, mu}), c.at({X, mu}));
      EXPECT_EQ(GeneratorBasis::coefficient(r.form.coefficients, {Y, nu}), c.at({Y, nu}));
    }
  }
}

TEST(Shapes, MinNormStillGivesPrf) {
  Rng rng(68);
  GeneratorBasis b(s3_class());
  for (char major : {'a', 'b', 'c'}) {
    Coeffs c = sample_case(rng, b, major, 5, 9);
    Reduction r = prf_reduce(compose(b, c, 5), Scheme::PrfA, {FreeChoice::MinNorm, false});
    EXPECT_FALSE(prf_membership_failure(r.form.jet).has_value());
    EXPECT_TRUE(subset(support(r.form.coefficients), predicted_support(r.form.case_tag, Scheme::PrfA, 5)));
    EXPECT_EQ(replay(compose(b, c, 5), r.log), r.form.jet);
  }
}

TEST(CaseDispatch, LinearAndTags) {
  GeneratorBasis b(s3_class());
  JetSeries lin = compose(b, form({{Y, 0, q(1)}}), 3);
  Reduction r = prf_reduce(lin);
  EXPECT_TRUE(r.form.case_tag.linear);
  EXPECT_TRUE(r.log.steps.empty());
  CaseTag t = case_dispatch(compose(b, form({{Y, 0, q(1)}, {X, 3, q(2)}, {Y, 2, q(1)}}), 4), b);
  EXPECT_TRUE(t.is("db"));
  EXPECT_EQ(t.mu, 3);
  EXPECT_EQ(t.nu, 2);
  EXPECT_EQ(to_string(t), "db");
}

TEST(Schemes, WrongReducerIsRejected) {
  GeneratorBasis b(s3_class());
  JetSeries w = compose(b, form({{Y, 0, q(1)}, {X, 1, q(1)}}), 3);
  EXPECT_THROW(s2_reduce(w), CaseMismatch);
  EXPECT_THROW(n2_reduce(w), CaseMismatch);
}

TEST(OppositeSignNode, GeneratorsOnLevelGrid) {
  Rng rng(69);
  for (auto [p, qq] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
    GeneratorBasis b(s4_class(p, qq));
    for (int i = 0; i < 3; ++i) {
      Coeffs c = sample_case(rng, b, 'a', 4, 9);
      Reduction r = prf_reduce(compose(b, c, 4));
      for (const auto& g : r.log.steps) EXPECT_EQ(g.grade % (p + qq), 0);
      // Same recursions as the saddle-line case, read per level.
      auto expect = level_generators(closed_form_generators('a', level_coefficients(c), Scheme::PrfA), 3);
      auto got = level_generators(b, r.log, 3);
      for (int k = 1; k <= 3; ++k) EXPECT_EQ(got[k], expect[k]) << p << "," << qq << " level " << k;
      EXPECT_TRUE(subset(support(r.form.coefficients), predicted_support(r.form.case_tag, Scheme::PrfA, 4)));
    }
  }
}

TEST(Rotation, ShapesAndLrf) {
  Rng rng(70);
  GeneratorBasis b(s2_class());
  for (auto [mu, nu] : {std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 1}}) {
    Coeffs c = sample_levels(rng, b, 5, mu, nu, 9);
    Reduction r = s2_reduce(compose(b, c, 5));
    EXPECT_TRUE(subset(support(r.form.coefficients), predicted_support(r.form.case_tag, Scheme::PrfA, 5)));
    EXPECT_FALSE(prf_membership_failure(r.form.jet).has_value());
  }
  Coeffs c = sample_levels(rng, b, 5, 2, 1, 9);
  Reduction l = s2_reduce(compose(b, c, 5), Scheme::Lrf);
  EXPECT_TRUE(subset(support(l.form.coefficients), predicted_support(l.form.case_tag, Scheme::Lrf, 5)));
  EXPECT_EQ(GeneratorBasis::coefficient(l.form.coefficients, {X, 2}), c.at({X, 2}));
  EXPECT_EQ(GeneratorBasis::coefficient(l.form.coefficients, {Y, 1}), c.at({Y, 1}));
}

TEST(Nilpotent, SupportPattern) {
  Rng rng(71);
  for (int mu = 1; mu <= 2; ++mu) {
    JetSeries w(mu + 4);
    w.set_part(0, linear_field(n2_class().matrix));
    for (int k = mu; k <= mu + 4; ++k) {
      w.add_to_part(HomVF::monomial({k + 1, 0, 1}, random_rational(rng, 9, true)));
      Rational bk = random_rational(rng, 9, true);
      w.add_to_part(HomVF::monomial({k + 1, 0, 0}, bk));
      w.add_to_part(HomVF::monomial({k, 1, 1}, bk));
    }
    Reduction r = n2_reduce(w);
    for (int k = 1; k < mu; ++k) EXPECT_TRUE(r.form.jet.part(k).is_zero());
    EXPECT_EQ(r.form.jet.part(mu), w.part(mu));
    EXPECT_EQ(r.form.jet.part(mu + 1).size(), 1u);
    EXPECT_FALSE(prf_membership_failure(r.form.jet).has_value());
    EXPECT_EQ(replay(w, r.log), r.form.jet);
  }
}
