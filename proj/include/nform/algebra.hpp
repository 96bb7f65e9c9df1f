#pragma once

#include "nform/hom_vf.hpp"

namespace nform {

// {f, g} = (f . grad) g - (g . grad) f
HomVF bracket(const HomVF& f, const HomVF& g);

// Bargmann scalar product: distinct monomials are orthogonal and
// <x^a y^b e_i, x^a y^b e_i> = a! b!. Different grades give 0.
Rational bargmann_inner(const HomVF& f, const HomVF& g);
Integer bargmann_norm(const VecMonomial& m);

// s-fold iterated bracket {h, {h, ... {h, w}}}.
HomVF ad_iter(const HomVF& h, const HomVF& w, int s);

// Lie transform of w by the time-one flow generated by h:
//   W'_m = sum_{s >= 0} (1/s!) ad_h^s W_{m - s k},  k = h.grade() >= 1,
// truncated at w.order(). Parts of grade < k are left untouched.
JetSeries bch_conjugate(const JetSeries& w, const HomVF& h);

}  // namespace nform
