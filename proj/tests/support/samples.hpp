#pragma once

// Random inputs shared by the unit, property and acceptance tests.

#include "nform/classify.hpp"
#include "nform/renormalize.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <random>
#include <string>

namespace nform::testing {

using Rng = std::mt19937;
using Coeffs = std::map<GenLabel, Rational>;
using Family = GeneratorBasis::Family;

inline Rational random_rational(Rng& rng, int bound = 20, bool nonzero = false) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  for (;;) {
    Rational r = make_rational(num(rng), den(rng));
    if (!nonzero || !is_zero(r)) return r;
  }
}

inline HomVF random_field(Rng& rng, int grade, int bound = 5, double density = 0.5) {
  std::bernoulli_distribution keep(density);
  HomVF f(grade);
  for (const auto& m : HomVF::monomial_basis(grade))
    if (keep(rng)) f.add_term(m, random_rational(rng, bound));
  return f;
}

inline JetSeries random_jet(Rng& rng, const HomVF& linear, int order, int bound = 5, double density = 0.5) {
  JetSeries w(order);
  w.set_part(0, linear);
  for (int k = 1; k <= order; ++k) w.set_part(k, random_field(rng, k, bound, density));
  return w;
}

inline Mat2 diag(const Rational& a, const Rational& b) { return {{{a, Rational(0)}, {Rational(0), b}}}; }

inline LinearClass s3_class(const Rational& mu = 1) { return classify_linear(diag(0, mu)); }
// lambda = c q, mu = -c p
inline LinearClass s4_class(long p, long q, const Rational& c = 1) {
  return classify_linear(diag(c * Rational(q), -c * Rational(p)));
}
inline LinearClass s2_class(const Rational& omega = 1) {
  return classify_linear({{{Rational(0), Rational(-omega)}, {omega, Rational(0)}}});
}
inline LinearClass n2_class() { return classify_linear({{{Rational(0), Rational(1)}, {Rational(0), Rational(0)}}}); }

// Normal-form coefficients with a_k = 0 below level mu, a_mu != 0, b_k = 0
// below level nu, b_nu != 0; higher levels are random and may vanish. A level
// of 0 switches the family off.
inline Coeffs sample_levels(Rng& rng, const GeneratorBasis& basis, int levels, int mu, int nu, int bound = 20) {
  Coeffs c;
  c[{Family::Y, 0}] = basis.zeta();
  for (int k = 1; k <= levels; ++k) {
    Rational a = mu == 0 || k < mu ? Rational(0) : random_rational(rng, bound, k == mu);
    Rational b = nu == 0 || k < nu ? Rational(0) : random_rational(rng, bound, k == nu);
    if (!is_zero(a)) c[{Family::X, k}] = a;
    if (!is_zero(b)) c[{Family::Y, k}] = b;
  }
  return c;
}

// Leading levels for the named case: a = (1, 0), b = (0, 1), c = (1, 1).
inline Coeffs sample_case(Rng& rng, const GeneratorBasis& basis, char major, int levels, int bound = 20) {
  switch (major) {
    case 'a': {
      Coeffs c = sample_levels(rng, basis, levels, 1, 2, bound);
      return c;
    }
    case 'b': return sample_levels(rng, basis, levels, 2, 1, bound);
    case 'c': return sample_levels(rng, basis, levels, 1, 1, bound);
    default: throw std::invalid_argument("sample_case: a, b or c");
  }
}

inline JetSeries compose(const GeneratorBasis& basis, const Coeffs& c, int levels) {
  return basis.compose(c, levels * basis.step());
}

// Nonzero labels of a decomposed form.
inline std::set<GenLabel> support(const Coeffs& c) {
  std::set<GenLabel> out;
  for (const auto& [l, v] : c)
    if (!is_zero(v)) out.insert(l);
  return out;
}

inline bool subset(const std::set<GenLabel>& a, const std::set<GenLabel>& b) {
  for (const auto& l : a)
    if (!b.count(l)) return false;
  return true;
}

// Generator coefficients summed per level over a log: level -> (alpha, beta).
// Steps above max_level are ignored.
LevelCoefficients level_generators(const GeneratorBasis& basis, const TransformLog& log, int max_level);
LevelCoefficients level_generators(const std::vector<ClosedFormStep>& steps, int max_level);

// Keys (stage, level) for sweeps that may visit a level twice.
std::map<std::pair<StageKind, int>, std::pair<Rational, Rational>> staged_generators(const GeneratorBasis& basis,
                                                                                    const TransformLog& log);
std::map<std::pair<StageKind, int>, std::pair<Rational, Rational>> staged_generators(
    const std::vector<ClosedFormStep>& steps);

// Drops labels above a level and zero coefficients.
Coeffs through_level(const Coeffs& c, int level);

// dx = x^3, dy = y + x y + x^2 y at the given order.
JetSeries cubic_example(int order = 9);

// Dimension of span(a + b) equals dim span(a) and dim span(b).
bool same_span(const std::vector<HomVF>& a, const std::vector<HomVF>& b, int grade);
bool contained_in(const std::vector<HomVF>& a, const std::vector<HomVF>& b, int grade);

}  // namespace nform::testing
