#include "nform/coordmap.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace nform {

Real to_real(const Rational& r) { return Real(r.get_num().get_str()) / Real(r.get_den().get_str()); }

namespace {

Real ipow(const Real& x, int k) {
  Real out(1);
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

Real positive_pow(const Real& base, const Real& e, const char* what) {
  if (base <= 0) throw OutsideDomain(std::string(what) + ": base of fractional power is not positive");
  return boost::multiprecision::pow(base, e);
}

}  // namespace

std::pair<Real, Real> FlowMap::eval(const Real& x, const Real& y) const {
  const int k = grade;
  const Real a = to_real(alpha), b = to_real(beta);
  const Real xk = ipow(x, k);
  const Real sign = direction == Direction::Forward ? Real(1) : Real(-1);
  if (is_zero(alpha)) {
    // dx/ds = 0, dy/ds = beta x^k y
    return {x, y * boost::multiprecision::exp(sign * b * xk)};
  }
  // Forward: u = 1 - alpha k x^k, xbar = x u^{-1/k}, ybar = y u^{-beta/(k alpha)}.
  // Inverse: the same with alpha, beta negated.
  const Real u = 1 - sign * a * k * xk;
  const Real xbar = x * positive_pow(u, Real(-1) / k, "flow map");
  const Real ybar = is_zero(beta) ? y : y * positive_pow(u, -b / (a * k), "flow map");
  return {xbar, ybar};
}

FlowMap FlowMap::inverse() const {
  FlowMap m = *this;
  m.direction = direction == Direction::Forward ? Direction::Inverse : Direction::Forward;
  return m;
}

std::array<Real, 4> FlowMap::jacobian(const Real& x, const Real& y) const {
  if (direction != Direction::Forward) throw std::logic_error("jacobian is provided for forward maps only");
  const int k = grade;
  const Real a = to_real(alpha), b = to_real(beta);
  const Real xk = ipow(x, k);
  const Real xk1 = k >= 1 ? ipow(x, k - 1) : Real(0);
  if (is_zero(alpha)) {
    Real e = boost::multiprecision::exp(b * xk);
    return {Real(1), Real(0), y * e * b * k * xk1, e};
  }
  const Real u = 1 - a * k * xk;
  const Real dx = positive_pow(u, Real(-1) / k - 1, "flow map");
  const Real ey = -b / (a * k);
  const Real dyx = y * b * k * xk1 * positive_pow(u, ey - 1, "flow map");
  const Real dyy = positive_pow(u, ey, "flow map");
  return {dx, Real(0), dyx, dyy};
}

Real DenominatorChain::eval(int k, const Real& x) const {
  if (k < 0 || k > steps()) throw std::out_of_range("denominator index beyond chain length");
  Real b(1);
  for (int j = 1; j <= k; ++j) {
    Real sign = j % 2 == 0 ? Real(1) : Real(-1);
    Real base = ipow(b, j) - sign * to_real(gammas[j - 1]) * ipow(x, j);
    b = j == 1 ? base : positive_pow(base, Real(1) / j, "denominator");
    if (j == 1 && b <= 0) throw OutsideDomain("denominator: B_1 is not positive");
  }
  return b;
}

Rational DenominatorChain::alpha(int k) const {
  Rational g = gammas.at(k - 1) / Rational(k);
  return k % 2 == 0 ? g : Rational(-g);
}

DenominatorChain compose_chain(const std::vector<Rational>& alphas) {
  DenominatorChain c;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    Rational g = Rational(k) * alphas[i];
    c.gammas.push_back(k % 2 == 0 ? g : Rational(-g));
  }
  return c;
}

Real compose_steps(const std::vector<Rational>& alphas, int steps, const Real& x) {
  Real cur = x;
  for (int k = 1; k <= steps; ++k) {
    FlowMap m{k, alphas.at(k - 1), Rational(0), FlowMap::Direction::Forward};
    cur = m.eval(cur, Real(0)).first;
  }
  return cur;
}

std::vector<std::pair<std::string, std::string>> cubic_example_bounds() {
  return {{"-1", "inf"},           {"-0.333333", "1."},      {"-0.270929", "1."},
          {"-0.244594", "0.668534"}, {"-0.228796", "0.668534"}, {"-0.21915", "0.561419"},
          {"-0.21224", "0.561419"}};
}

bool is_cubic_example_chain(const DenominatorChain& chain) {
  static const long num[] = {-1, 1, -2, 9, -12, 33, -99};
  static const long den[] = {1, 1, 1, 2, 1, 1, 1};
  if (chain.steps() < 1) return false;
  for (int k = 1; k <= std::min(chain.steps(), 7); ++k)
    if (chain.alpha(k) != make_rational(num[k - 1], den[k - 1])) return false;
  return true;
}

namespace {

// Every intermediate map of the first `steps` is inside its domain at x.
bool inside(const DenominatorChain& chain, int steps, const Real& x) {
  Real cur = x;
  for (int k = 1; k <= steps; ++k) {
    Real u = 1 - to_real(chain.alpha(k)) * k * ipow(cur, k);
    if (u <= 0) return false;
    cur = cur * boost::multiprecision::pow(u, Real(-1) / k);
  }
  return true;
}

// Nearest domain violation from 0 in direction dir, or nullopt if none below
// the scan limit.
std::optional<Real> nearest_violation(const DenominatorChain& chain, int steps, int dir) {
  const Real factor("1.01");
  Real prev(0);
  Real t("1e-4");
  const Real limit("1e12");
  while (t <= limit) {
    if (!inside(chain, steps, dir * t)) {
      Real lo = prev, hi = t;
      for (int i = 0; i < 200; ++i) {
        Real mid = (lo + hi) / 2;
        if (inside(chain, steps, dir * mid))
          lo = mid;
        else
          hi = mid;
      }
      return dir * (lo + hi) / 2;
    }
    prev = t;
    t *= factor;
  }
  return std::nullopt;
}

}  // namespace

AnalyticityReport analyticity_report(const DenominatorChain& chain, int steps) {
  AnalyticityReport report;
  report.method =
      "sequential domain tracking: x is admissible at step k when every intermediate map j <= k has "
      "1 - j alpha_j x_{j-1}^j > 0; outward geometric scan from 0 (ratio 1.01, 1e-4 to 1e12), then 200 "
      "bisection steps at " +
      std::to_string(kWorkingDigits) + " digits; no violation before 1e12 is reported as infinite";
  const bool known = is_cubic_example_chain(chain);
  auto refs = cubic_example_bounds();
  if (chain.steps() == 0 || steps == 0) {
    report.steps.push_back(StepInterval{});
    return report;
  }
  for (int k = 1; k <= std::min(steps, chain.steps()); ++k) {
    StepInterval s;
    s.step = k;
    s.lower = nearest_violation(chain, k, -1);
    s.upper = nearest_violation(chain, k, 1);
    if (k == 1) {
      s.exact = true;
      const Rational a = chain.alpha(1);
      if (a > 0) s.exact_upper = Rational(Rational(1) / a);
      if (a < 0) s.exact_lower = Rational(Rational(1) / a);
    }
    if (known && k <= static_cast<int>(refs.size())) {
      s.reference_lower = refs[k - 1].first;
      s.reference_upper = refs[k - 1].second;
    }
    report.steps.push_back(std::move(s));
  }
  return report;
}

std::string format_bound(const std::optional<Real>& v, bool upper) {
  if (!v) return upper ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(6) << v->convert_to<long double>();
  return os.str();
}

}  // namespace nform
