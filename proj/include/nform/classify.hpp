#pragma once

#include "nform/hom_vf.hpp"
#include "nform/homology.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nform {

using Mat2 = std::array<std::array<Rational, 2>, 2>;

struct CanonicalFormRequired : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotSupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ClassTag { S1, S2, S3, S4SameSign, S4OppositeSign, N1, N2, Zero };

std::string to_string(ClassTag t);

struct LinearClass {
  ClassTag tag = ClassTag::Zero;
  Mat2 matrix{};
  // Real eigenvalues, or real/imaginary parts for a complex pair.
  std::vector<Rational> eigenvalues;
  bool complex_pair = false;
  Rational re, im;
  // Always false here: with rational entries the eigenvalue ratio is rational.
  bool irrational_ratio = false;
  // S3: A = diag(0, mu). S4 same sign: A = diag(lambda, mu).
  Rational lambda, mu;
  // S4 opposite sign: lambda = c q, mu = -c p, gcd(p, q) = 1.
  long p = 0, q = 0;
  Rational c;
  // S2: A = [[0, -omega], [omega, 0]].
  Rational omega;

  bool semisimple() const {
    return tag == ClassTag::S1 || tag == ClassTag::S2 || tag == ClassTag::S3 || tag == ClassTag::S4SameSign ||
           tag == ClassTag::S4OppositeSign;
  }
};

Mat2 linear_matrix(const HomVF& linear_part);
HomVF linear_field(const Mat2& a);

LinearClass classify_linear(const Mat2& a);

// For diagonalizable matrices with rational eigenvalues: P with P^{-1} A P in
// canonical form (zero eigenvalue first for S3). The jet transforms as
// W'(xi) = P^{-1} W(P xi).
struct Jordanization {
  Mat2 p;
  Mat2 p_inverse;
  Mat2 canonical;
};
std::optional<Jordanization> jordanize(const Mat2& a);
JetSeries apply_linear_change(const JetSeries& w, const Mat2& p, const Mat2& p_inverse);

// Basis of the resonant vector fields at a grade (kernel of the adjoint
// homological operator).
std::vector<HomVF> resonant_basis(const LinearClass& cls, int grade);

// Distinguished generators of the normal-form algebra. For S3, S4 (opposite
// sign) and S2 there are two families indexed by a level k >= 0 and placed at
// grade k * step: an "X" family (x^{k+1} d_x, the radial Psi_k for S2) and an
// abelian "Y" family (x^k y d_y, the rotation Phi_k for S2). A same-sign S4
// resonance contributes a single "V" field.
class GeneratorBasis {
 public:
  enum class Kind { S3, S4Opposite, S2, S4Single };
  enum class Family { X, Y };

  struct Label {
    Family family;
    int level;
    friend bool operator<(const Label& a, const Label& b) {
      if (a.level != b.level) return a.level < b.level;
      return a.family < b.family;
    }
    friend bool operator==(const Label& a, const Label& b) { return a.family == b.family && a.level == b.level; }
  };

  explicit GeneratorBasis(const LinearClass& cls);

  Kind kind() const { return kind_; }
  const LinearClass& linear_class() const { return cls_; }
  int step() const { return step_; }
  Rational zeta() const { return zeta_; }
  // 1 for S3/S4, 2 for S2 (the brackets carry a factor 2).
  int structure_scale() const { return kind_ == Kind::S2 ? 2 : 1; }
  int grade_of(int level) const { return level * step_; }
  std::string name(const Label& l) const;

  bool has(const Label& l) const;
  HomVF field(const Label& l) const;
  HomVF x(int level) const { return field({Family::X, level}); }
  HomVF y(int level) const { return field({Family::Y, level}); }

  // Elements living at a grade, Y family first.
  std::vector<Label> labels_at_grade(int grade) const;
  std::vector<HomVF> elements_at_grade(int grade) const;

  std::map<Label, Rational> decompose(const HomVF& f) const;
  // Grades 1..N of the jet; throws DecompositionError if some part is not in
  // the algebra.
  std::map<Label, Rational> decompose_jet(const JetSeries& w) const;
  // Coefficient on a label, zero if absent.
  static Rational coefficient(const std::map<Label, Rational>& coeffs, const Label& l);
  JetSeries compose(const std::map<Label, Rational>& coeffs, int order) const;

  // Inner product in which the X/Y elements are orthogonal. Equals Bargmann
  // except for S4 with p != q.
  Metric metric(int max_grade) const;

 private:
  LinearClass cls_;
  Kind kind_;
  int step_ = 1;
  Rational zeta_;
  VecMonomial single_;  // S4Single resonant monomial
};

using GenLabel = GeneratorBasis::Label;

GeneratorBasis generator_basis(const LinearClass& cls);

}  // namespace nform
