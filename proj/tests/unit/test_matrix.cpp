#include "nform/matrix.hpp"

#include "samples.hpp"

#include <gtest/gtest.h>

using namespace nform;
using namespace nform::testing;

namespace {

QMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double density = 0.6) {
  std::bernoulli_distribution keep(density);
  QMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (keep(rng)) m(i, j) = random_rational(rng, 9);
  return m;
}

// Rank-deficient by construction: product of r x k and k x c factors.
QMatrix low_rank(Rng& rng, std::size_t r, std::size_t c, std::size_t k) {
  return random_matrix(rng, r, k, 1.0) * random_matrix(rng, k, c, 1.0);
}

}  // namespace

TEST(Matrix, SmallByHand) {
  QMatrix m(2, 3);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(0, 2) = 3;
  m(1, 0) = 2;
  m(1, 1) = 4;
  m(1, 2) = 7;
  EXPECT_EQ(rank(m), 2u);
  auto ker = kernel(m);
  ASSERT_EQ(ker.size(), 1u);
  EXPECT_EQ(ker[0], (std::vector<Rational>{-2, 1, 0}));
  auto e = echelon_form(m);
  EXPECT_EQ(e.pivots, (std::vector<std::size_t>{0, 2}));
}

TEST(Matrix, RankNullity) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6, k = 1 + rng() % 4;
    QMatrix m = i % 2 ? random_matrix(rng, r, c) : low_rank(rng, r, c, k);
    auto ker = kernel(m);
    EXPECT_EQ(rank(m) + ker.size(), c);
    for (const auto& v : ker) {
      auto image = m.apply(v);
      for (const auto& x : image) EXPECT_TRUE(is_zero(x));
    }
    EXPECT_EQ(rank(m), rank(m.transpose()));
  }
}

TEST(Matrix, SolveContract) {
  Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    QMatrix m = low_rank(rng, r, c, 1 + rng() % 3);
    std::vector<Rational> x(c);
    for (auto& v : x) v = random_rational(rng, 9);
    auto b = m.apply(x);
    auto sol = solve(m, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(m.apply(*sol), b);
    // Free coordinates are zero.
    auto piv = echelon_form(m).pivots;
    for (std::size_t j = 0; j < c; ++j)
      if (std::find(piv.begin(), piv.end(), j) == piv.end()) EXPECT_TRUE(is_zero((*sol)[j]));
  }
}

TEST(Matrix, InconsistentSystem) {
  QMatrix m(2, 1);
  m(0, 0) = 1;
  m(1, 0) = 1;
  EXPECT_FALSE(solve(m, {Rational(1), Rational(2)}).has_value());
}

TEST(Matrix, Inverse) {
  Rng rng(23);
  int done = 0;
  while (done < 40) {
    std::size_t n = 1 + rng() % 5;
    QMatrix m = random_matrix(rng, n, n, 0.8);
    if (rank(m) != n) {
      EXPECT_THROW(inverse(m), std::domain_error);
      continue;
    }
    EXPECT_EQ(m * inverse(m), QMatrix::identity(n));
    ++done;
  }
}
