#include "nform/hom_vf.hpp"

#include <algorithm>
#include <stdexcept>

namespace nform {

std::string to_string(const VecMonomial& m) {
  std::string s;
  auto power = [&](const char* var, int e) {
    if (e == 0) return;
    if (!s.empty()) s += '*';
    s += var;
    if (e > 1) s += "^" + std::to_string(e);
  };
  power("x", m.ex);
  power("y", m.ey);
  if (s.empty()) s = "1";
  return s + (m.comp == 0 ? " d/dx" : " d/dy");
}

HomVF::HomVF(int grade) : grade_(grade) {
  if (grade < -1) throw std::invalid_argument("grade must be >= -1");
}

HomVF::HomVF(int grade, std::initializer_list<std::pair<VecMonomial, Rational>> terms) : HomVF(grade) {
  for (const auto& [m, c] : terms) add_term(m, c);
}

HomVF HomVF::monomial(const VecMonomial& m, const Rational& c) {
  HomVF f(m.grade());
  f.add_term(m, c);
  return f;
}

std::vector<VecMonomial> HomVF::monomial_basis(int grade) {
  std::vector<VecMonomial> out;
  out.reserve(basis_size(grade));
  for (int comp = 0; comp < 2; ++comp)
    for (int ey = 0; ey <= grade + 1; ++ey) out.push_back({grade + 1 - ey, ey, comp});
  return out;
}

Rational HomVF::coeff(const VecMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void HomVF::add_term(const VecMonomial& m, const Rational& c) {
  if (m.grade() != grade_ || m.ex < 0 || m.ey < 0 || (m.comp != 0 && m.comp != 1))
    throw std::invalid_argument("monomial " + to_string(m) + " does not belong to grade " + std::to_string(grade_));
  if (nform::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (nform::is_zero(it->second)) terms_.erase(it);
  }
}

HomVF& HomVF::operator+=(const HomVF& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) grade_ = other.grade_;
  if (other.grade_ != grade_) throw std::invalid_argument("adding fields of different grades");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

HomVF& HomVF::operator-=(const HomVF& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) grade_ = other.grade_;
  if (other.grade_ != grade_) throw std::invalid_argument("subtracting fields of different grades");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

HomVF& HomVF::operator*=(const Rational& c) {
  if (nform::is_zero(c)) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

HomVF HomVF::operator-() const {
  HomVF out(*this);
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

bool operator==(const HomVF& a, const HomVF& b) {
  // The zero field compares equal across grades.
  if (a.terms_.empty() || b.terms_.empty()) return a.terms_.empty() && b.terms_.empty();
  return a.grade_ == b.grade_ && a.terms_ == b.terms_;
}

std::vector<Rational> HomVF::coords() const {
  auto basis = monomial_basis(grade_);
  std::vector<Rational> out;
  out.reserve(basis.size());
  for (const auto& m : basis) out.push_back(coeff(m));
  return out;
}

HomVF HomVF::from_coords(int grade, const std::vector<Rational>& c) {
  auto basis = monomial_basis(grade);
  if (c.size() != basis.size()) throw std::invalid_argument("coordinate vector has wrong length");
  HomVF f(grade);
  for (std::size_t i = 0; i < basis.size(); ++i) f.add_term(basis[i], c[i]);
  return f;
}

std::string to_string(const HomVF& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : f.terms()) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(c) + ") " + to_string(m);
  }
  return s;
}

JetSeries::JetSeries(int order) {
  if (order < 0) throw std::invalid_argument("jet order must be non-negative");
  parts_.reserve(order + 1);
  for (int k = 0; k <= order; ++k) parts_.emplace_back(k);
}

const HomVF& JetSeries::part(int k) const {
  if (k < 0 || k > order()) throw std::out_of_range("grade " + std::to_string(k) + " outside jet");
  return parts_[k];
}

void JetSeries::set_part(int k, const HomVF& f) {
  if (k < 0 || k > order()) throw std::out_of_range("grade outside jet");
  if (f.is_zero()) {
    parts_[k] = HomVF(k);
    return;
  }
  if (f.grade() != k) throw std::invalid_argument("field grade does not match jet slot");
  parts_[k] = f;
}

void JetSeries::add_to_part(const HomVF& f) {
  if (f.is_zero()) return;
  if (f.grade() < 0 || f.grade() > order()) throw std::out_of_range("grade outside jet");
  parts_[f.grade()] += f;
}

bool JetSeries::is_linear() const {
  for (int k = 1; k <= order(); ++k)
    if (!parts_[k].is_zero()) return false;
  return true;
}

JetSeries JetSeries::truncated(int order) const {
  JetSeries out(order);
  for (int k = 0; k <= std::min(order, this->order()); ++k) out.parts_[k] = parts_[k];
  return out;
}

}  // namespace nform
