#pragma once

#include "nform/classify.hpp"
#include "nform/homology.hpp"
#include "nform/normalform.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nform {

struct CaseMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Scheme { PrfA, PrfB, Lrf };
std::string to_string(Scheme s);

// Case taxonomy from the leading level-1 coefficients a_1 (X) and b_1 (Y).
// mu / nu: first level with a nonzero X / Y coefficient.
struct CaseTag {
  bool linear = false;  // no nonlinear normal-form terms at all
  char major = 'd';     // 'a', 'b', 'c', 'd'
  std::string sub;      // "da", "db", "dc" or empty
  std::optional<int> mu;
  std::optional<int> nu;

  bool is(const std::string& name) const { return !linear && (sub.empty() ? std::string(1, major) : sub) == name; }
};
std::string to_string(const CaseTag& c);

CaseTag case_dispatch(const JetSeries& nf, const GeneratorBasis& basis);

struct ReducedForm {
  Scheme scheme = Scheme::PrfA;
  std::map<GenLabel, Rational> coefficients;  // empty when no distinguished basis exists
  CaseTag case_tag;
  int truncation = 0;
  std::optional<GeneratorBasis> basis;
  JetSeries jet;
  std::vector<std::string> notes;
};

struct Reduction {
  ReducedForm form;
  TransformLog log;
};

struct ReduceOptions {
  FreeChoice free_choice = FreeChoice::Zero;
  bool keep_snapshots = false;
};

// Distinguished generator basis for a class, if it has one.
std::optional<GeneratorBasis> basis_for(const LinearClass& cls);

// Decomposition and case tag of a jet in the basis of its linear class.
ReducedForm describe_form(const JetSeries& w, Scheme scheme);

Reduction prf_reduce(const JetSeries& nf, Scheme scheme = Scheme::PrfA, const ReduceOptions& opts = {});
Reduction lrf_reduce(const JetSeries& nf, const ReduceOptions& opts = {});
Reduction s2_reduce(const JetSeries& nf, Scheme scheme = Scheme::PrfA, const ReduceOptions& opts = {});
Reduction n2_reduce(const JetSeries& nf, const ReduceOptions& opts = {});

// First (grade, stage) at which part W_k fails to be orthogonal to ran(M_s),
// s < k; nullopt if w is a PRF through its order.
struct MembershipFailure {
  int grade;
  int stage;
};
std::optional<MembershipFailure> prf_membership_failure(const JetSeries& w);

// Labels allowed by the shape theorems for the detected case. For LRF the
// set is the LRF shape; "unbounded" families are listed up to max_level.
std::set<GenLabel> predicted_support(const CaseTag& c, Scheme scheme, int max_level);

// Closed-form generator coefficients at levels 1..4 (LRF: X sweep then Y
// sweep), evaluated exactly from the normal-form coefficients a_k, b_k.
struct ClosedFormStep {
  int level;
  Rational alpha;
  Rational beta;
  StageKind stage;
};
using LevelCoefficients = std::map<int, std::pair<Rational, Rational>>;  // level -> (a_k, b_k)

std::vector<ClosedFormStep> closed_form_generators(char major, const LevelCoefficients& coeffs, Scheme scheme);

// (a_k, b_k) per level from a decomposed normal form.
LevelCoefficients level_coefficients(const std::map<GenLabel, Rational>& coeffs);

}  // namespace nform
