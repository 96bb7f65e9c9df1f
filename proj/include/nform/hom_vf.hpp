#pragma once

#include "nform/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nform {

// x^ex y^ey e_comp, comp 0 for the x-component and 1 for the y-component.
struct VecMonomial {
  int ex = 0;
  int ey = 0;
  int comp = 0;

  int grade() const { return ex + ey - 1; }

  // Within one grade this orders the x-component first, then by increasing
  // power of y; monomial_basis() relies on it.
  friend bool operator<(const VecMonomial& a, const VecMonomial& b) {
    if (a.ex + a.ey != b.ex + b.ey) return a.ex + a.ey < b.ex + b.ey;
    if (a.comp != b.comp) return a.comp < b.comp;
    return a.ey < b.ey;
  }
  friend bool operator==(const VecMonomial& a, const VecMonomial& b) {
    return a.ex == b.ex && a.ey == b.ey && a.comp == b.comp;
  }
};

std::string to_string(const VecMonomial& m);

// Homogeneous polynomial vector field of a fixed grade k: both components are
// homogeneous of degree k + 1. Zero coefficients are never stored.
class HomVF {
 public:
  using TermMap = std::map<VecMonomial, Rational>;

  HomVF() = default;
  explicit HomVF(int grade);
  HomVF(int grade, std::initializer_list<std::pair<VecMonomial, Rational>> terms);

  static HomVF monomial(const VecMonomial& m, const Rational& c = 1);
  // All vector monomials of the given grade, in canonical order.
  static std::vector<VecMonomial> monomial_basis(int grade);
  static int basis_size(int grade) { return 2 * (grade + 2); }

  int grade() const { return grade_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coeff(const VecMonomial& m) const;
  void add_term(const VecMonomial& m, const Rational& c);

  HomVF& operator+=(const HomVF& other);
  HomVF& operator-=(const HomVF& other);
  HomVF& operator*=(const Rational& c);

  friend HomVF operator+(HomVF a, const HomVF& b) { return a += b; }
  friend HomVF operator-(HomVF a, const HomVF& b) { return a -= b; }
  friend HomVF operator*(const Rational& c, HomVF a) { return a *= c; }
  friend HomVF operator*(HomVF a, const Rational& c) { return a *= c; }
  HomVF operator-() const;

  friend bool operator==(const HomVF& a, const HomVF& b);
  friend bool operator!=(const HomVF& a, const HomVF& b) { return !(a == b); }

  // Coordinates in monomial_basis(grade()).
  std::vector<Rational> coords() const;
  static HomVF from_coords(int grade, const std::vector<Rational>& c);

  // Evaluate both components at a point, for any field-like number type.
  template <class Real>
  std::pair<Real, Real> evaluate(const Real& x, const Real& y) const {
    Real out[2] = {Real(0), Real(0)};
    for (const auto& [m, c] : terms_) {
      Real term = Real(c.get_num().get_str()) / Real(c.get_den().get_str());
      for (int i = 0; i < m.ex; ++i) term *= x;
      for (int i = 0; i < m.ey; ++i) term *= y;
      out[m.comp] += term;
    }
    return {out[0], out[1]};
  }

 private:
  int grade_ = 0;
  TermMap terms_;
};

std::string to_string(const HomVF& f);

// Truncated graded vector field W_0 + W_1 + ... + W_N.
class JetSeries {
 public:
  JetSeries() = default;
  explicit JetSeries(int order);

  int order() const { return static_cast<int>(parts_.size()) - 1; }
  const HomVF& part(int k) const;
  void set_part(int k, const HomVF& f);
  void add_to_part(const HomVF& f);
  const std::vector<HomVF>& parts() const { return parts_; }

  bool is_linear() const;
  JetSeries truncated(int order) const;

  friend bool operator==(const JetSeries& a, const JetSeries& b) { return a.parts_ == b.parts_; }
  friend bool operator!=(const JetSeries& a, const JetSeries& b) { return !(a == b); }

 private:
  std::vector<HomVF> parts_;
};

}  // namespace nform
