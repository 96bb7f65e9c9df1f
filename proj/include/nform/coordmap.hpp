#pragma once

#include "nform/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nform {

// Working precision in decimal digits. Fixed at compile time: the MPFR
// wrapper keeps its runtime default precision in a process-wide static.
inline constexpr unsigned kWorkingDigits = 50;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<kWorkingDigits>>;

struct OutsideDomain : std::domain_error {
  using std::domain_error::domain_error;
};

Real to_real(const Rational& r);

// Time-one flow of alpha x^{k+1} d_x + beta x^k y d_y.
struct FlowMap {
  enum class Direction { Forward, Inverse };

  int grade = 1;
  Rational alpha;
  Rational beta;
  Direction direction = Direction::Forward;

  std::pair<Real, Real> eval(const Real& x, const Real& y) const;
  FlowMap inverse() const;
  // Row-major Jacobian d(xbar, ybar)/d(x, y) of the forward map.
  std::array<Real, 4> jacobian(const Real& x, const Real& y) const;
};

// B_k(x) = [B_{k-1}(x)^k - (-1)^k gamma_k x^k]^{1/k}, B_0 = 1. After k steps
// of a y-trivial chain the x coordinate is x / B_k(x).
struct DenominatorChain {
  std::vector<Rational> gammas;

  int steps() const { return static_cast<int>(gammas.size()); }
  Real eval(int k, const Real& x) const;
  // Generator coefficient alpha_k recovered from gamma_k.
  Rational alpha(int k) const;
};

DenominatorChain compose_chain(const std::vector<Rational>& alphas);

// x after applying the first `steps` grade-k maps x -> x (1 - k alpha_k x^k)^{-1/k}
// one after another.
Real compose_steps(const std::vector<Rational>& alphas, int steps, const Real& x);

struct StepInterval {
  int step = 0;
  std::optional<Real> lower;  // nullopt means -infinity
  std::optional<Real> upper;  // nullopt means +infinity
  // Step 1 only: its constraint 1 - alpha_1 x > 0 is linear, so the bound is rational.
  bool exact = false;
  std::optional<Rational> exact_lower;
  std::optional<Rational> exact_upper;
  std::optional<std::string> reference_lower;
  std::optional<std::string> reference_upper;
};

struct AnalyticityReport {
  std::string method;
  std::vector<StepInterval> steps;
};

// Published bounds for the chain of the cubic example dx = x^3, dy = (1 + x + x^2) y,
// whose generators are alpha = (-1, 1, -2, 9/2, -12, 33, -99).
std::vector<std::pair<std::string, std::string>> cubic_example_bounds();
bool is_cubic_example_chain(const DenominatorChain& chain);

AnalyticityReport analyticity_report(const DenominatorChain& chain, int steps);

// Six significant digits, "inf" / "-inf" for missing bounds.
std::string format_bound(const std::optional<Real>& v, bool upper);

}  // namespace nform
