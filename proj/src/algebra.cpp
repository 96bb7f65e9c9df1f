#include "nform/algebra.hpp"

#include <stdexcept>

namespace nform {

namespace {

// (f . grad) g, accumulated into out.
void directional(const HomVF& f, const HomVF& g, const Rational& sign, HomVF& out) {
  for (const auto& [fm, fc] : f.terms()) {
    for (const auto& [gm, gc] : g.terms()) {
      // f^i d_i (x^p y^q) e_j
      int power = fm.comp == 0 ? gm.ex : gm.ey;
      if (power == 0) continue;
      VecMonomial m{fm.ex + gm.ex, fm.ey + gm.ey, gm.comp};
      if (fm.comp == 0)
        m.ex -= 1;
      else
        m.ey -= 1;
      Rational c = fc * gc;
      c *= power;
      c *= sign;
      out.add_term(m, c);
    }
  }
}

}  // namespace

HomVF bracket(const HomVF& f, const HomVF& g) {
  HomVF out(f.grade() + g.grade());
  if (f.is_zero() || g.is_zero()) return out;
  directional(f, g, Rational(1), out);
  directional(g, f, Rational(-1), out);
  return out;
}

Integer bargmann_norm(const VecMonomial& m) { return factorial(m.ex) * factorial(m.ey); }

Rational bargmann_inner(const HomVF& f, const HomVF& g) {
  Rational out(0);
  if (f.is_zero() || g.is_zero() || f.grade() != g.grade()) return out;
  const HomVF& small = f.size() <= g.size() ? f : g;
  const HomVF& large = f.size() <= g.size() ? g : f;
  for (const auto& [m, c] : small.terms()) {
    auto it = large.terms().find(m);
    if (it == large.terms().end()) continue;
    out += c * it->second * Rational(bargmann_norm(m));
  }
  return out;
}

HomVF ad_iter(const HomVF& h, const HomVF& w, int s) {
  if (s < 0) throw std::invalid_argument("ad_iter needs s >= 0");
  HomVF out = w;
  for (int i = 0; i < s; ++i) out = bracket(h, out);
  if (out.is_zero()) return HomVF(w.grade() + s * h.grade());
  return out;
}

JetSeries bch_conjugate(const JetSeries& w, const HomVF& h) {
  if (h.grade() < 1) throw std::invalid_argument("generator grade must be at least 1");
  JetSeries out = w;
  if (h.is_zero()) return out;
  const int k = h.grade();
  const int n = w.order();
  for (int j = 0; j + k <= n; ++j) {
    HomVF term = w.part(j);
    for (int s = 1; j + s * k <= n && !term.is_zero(); ++s) {
      term = bracket(h, term);
      term *= Rational(1, s);
      out.add_to_part(term);
    }
  }
  return out;
}

}  // namespace nform
