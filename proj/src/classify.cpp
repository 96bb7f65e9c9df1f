#include "nform/classify.hpp"

#include "nform/algebra.hpp"

#include <numeric>

namespace nform {

std::string to_string(ClassTag t) {
  switch (t) {
    case ClassTag::S1: return "S1";
    case ClassTag::S2: return "S2";
    case ClassTag::S3: return "S3";
    case ClassTag::S4SameSign: return "S4_same_sign";
    case ClassTag::S4OppositeSign: return "S4_opposite_sign";
    case ClassTag::N1: return "N1";
    case ClassTag::N2: return "N2";
    case ClassTag::Zero: return "ZERO";
  }
  return "?";
}

Mat2 linear_matrix(const HomVF& linear_part) {
  if (!linear_part.is_zero() && linear_part.grade() != 0) throw std::invalid_argument("linear part must have grade 0");
  Mat2 a{};
  for (int i = 0; i < 2; ++i) {
    a[i][0] = linear_part.coeff({1, 0, i});
    a[i][1] = linear_part.coeff({0, 1, i});
  }
  return a;
}

HomVF linear_field(const Mat2& a) {
  HomVF f(0);
  for (int i = 0; i < 2; ++i) {
    f.add_term({1, 0, i}, a[i][0]);
    f.add_term({0, 1, i}, a[i][1]);
  }
  return f;
}

LinearClass classify_linear(const Mat2& a) {
  LinearClass cls;
  cls.matrix = a;
  const Rational &a11 = a[0][0], &a12 = a[0][1], &a21 = a[1][0], &a22 = a[1][1];
  if (is_zero(a11) && is_zero(a12) && is_zero(a21) && is_zero(a22)) {
    cls.tag = ClassTag::Zero;
    cls.eigenvalues = {Rational(0), Rational(0)};
    return cls;
  }
  if (is_zero(a12) && is_zero(a21)) {
    cls.eigenvalues = {a11, a22};
    if (is_zero(a11)) {
      cls.tag = ClassTag::S3;
      cls.mu = a22;
      return cls;
    }
    if (is_zero(a22))
      throw CanonicalFormRequired("zero eigenvalue must come first: use diag(0, mu)");
    cls.lambda = a11;
    cls.mu = a22;
    if (sgn(a11) == sgn(a22)) {
      cls.tag = ClassTag::S4SameSign;
      return cls;
    }
    // lambda = c q, mu = -c p with q/p = -lambda/mu in lowest terms.
    Rational ratio = -a11 / a22;
    cls.tag = ClassTag::S4OppositeSign;
    cls.q = ratio.get_num().get_si();
    cls.p = ratio.get_den().get_si();
    cls.c = a11 / Rational(cls.q);
    return cls;
  }
  if (a11 == a22 && a12 == -a21) {
    cls.complex_pair = true;
    cls.re = a11;
    cls.im = a21;
    if (is_zero(a11)) {
      cls.tag = ClassTag::S2;
      cls.omega = a21;
    } else {
      cls.tag = ClassTag::S1;
    }
    return cls;
  }
  if (a11 == a22 && a12 == 1 && is_zero(a21)) {
    cls.eigenvalues = {a11, a11};
    cls.tag = is_zero(a11) ? ClassTag::N2 : ClassTag::N1;
    cls.mu = a11;
    return cls;
  }
  throw CanonicalFormRequired("linear part is not in canonical (diagonal, rotation or Jordan) form");
}

namespace {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

std::optional<Mat2> mat_inverse(const Mat2& a) {
  Rational det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (is_zero(det)) return std::nullopt;
  Mat2 inv{};
  inv[0][0] = a[1][1] / det;
  inv[0][1] = -a[0][1] / det;
  inv[1][0] = -a[1][0] / det;
  inv[1][1] = a[0][0] / det;
  return inv;
}

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  Integer n = r.get_num(), d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  return make_rational(Integer(sqrt(n)), Integer(sqrt(d)));
}

std::array<Rational, 2> eigenvector(const Mat2& a, const Rational& lambda) {
  Rational r0 = a[0][0] - lambda, r1 = a[0][1];
  if (!is_zero(r0) || !is_zero(r1)) return {r1, -r0};
  return {a[1][1] - lambda, -a[1][0]};
}

// Polynomial in x, y as exponent pair -> coefficient.
using Poly = std::map<std::pair<int, int>, Rational>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Rational& slot = out[{ea.first + eb.first, ea.second + eb.second}];
      slot += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

std::optional<Jordanization> jordanize(const Mat2& a) {
  Rational tr = a[0][0] + a[1][1];
  Rational det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  auto root = rational_sqrt(tr * tr - 4 * det);
  if (!root) return std::nullopt;
  Rational l1 = (tr + *root) / 2, l2 = (tr - *root) / 2;
  Jordanization j{};
  if (is_zero(*root)) {
    bool scalar = is_zero(a[0][1]) && is_zero(a[1][0]) && a[0][0] == a[1][1];
    if (scalar) {
      j.p = {{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}};
    } else {
      // (A - l) w = v with w a basis vector not in the kernel.
      std::array<Rational, 2> w{Rational(1), Rational(0)};
      if (is_zero(a[0][0] - l1) && is_zero(a[1][0])) w = {Rational(0), Rational(1)};
      std::array<Rational, 2> v{(a[0][0] - l1) * w[0] + a[0][1] * w[1], a[1][0] * w[0] + (a[1][1] - l1) * w[1]};
      j.p = {{{v[0], w[0]}, {v[1], w[1]}}};
    }
  } else {
    // l1 > l2 here; a zero eigenvalue goes first.
    if (is_zero(l2)) std::swap(l1, l2);
    auto v1 = eigenvector(a, l1), v2 = eigenvector(a, l2);
    j.p = {{{v1[0], v2[0]}, {v1[1], v2[1]}}};
  }
  auto inv = mat_inverse(j.p);
  if (!inv) return std::nullopt;
  j.p_inverse = *inv;
  j.canonical = mat_mul(mat_mul(j.p_inverse, a), j.p);
  return j;
}

JetSeries apply_linear_change(const JetSeries& w, const Mat2& p, const Mat2& p_inverse) {
  // x -> p00 x + p01 y, y -> p10 x + p11 y
  Poly sx{{{1, 0}, p[0][0]}, {{0, 1}, p[0][1]}};
  Poly sy{{{1, 0}, p[1][0]}, {{0, 1}, p[1][1]}};
  for (auto* s : {&sx, &sy})
    for (auto it = s->begin(); it != s->end();) it = is_zero(it->second) ? s->erase(it) : std::next(it);
  JetSeries out(w.order());
  for (int k = 0; k <= w.order(); ++k) {
    Poly comp[2];
    for (const auto& [m, c] : w.part(k).terms()) {
      Poly term{{{0, 0}, c}};
      for (int i = 0; i < m.ex; ++i) term = poly_mul(term, sx);
      for (int i = 0; i < m.ey; ++i) term = poly_mul(term, sy);
      for (const auto& [e, v] : term) comp[m.comp][e] += v;
    }
    HomVF f(k);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (const auto& [e, v] : comp[j]) f.add_term({e.first, e.second, i}, p_inverse[i][j] * v);
    out.set_part(k, f);
  }
  return out;
}

std::vector<HomVF> resonant_basis(const LinearClass& cls, int grade) {
  std::vector<HomVF> out;
  switch (cls.tag) {
    case ClassTag::S3:
    case ClassTag::S4SameSign:
    case ClassTag::S4OppositeSign: {
      const Rational& l1 = cls.tag == ClassTag::S3 ? Rational(0) : cls.lambda;
      const Rational& l2 = cls.mu;
      const Rational eig[2] = {l1, l2};
      for (const auto& m : HomVF::monomial_basis(grade))
        if (Rational(m.ex) * l1 + Rational(m.ey) * l2 == eig[m.comp]) out.push_back(HomVF::monomial(m));
      break;
    }
    case ClassTag::S2: {
      if (grade % 2 != 0) break;
      GeneratorBasis b(cls);
      out.push_back(b.x(grade / 2));
      out.push_back(b.y(grade / 2));
      break;
    }
    case ClassTag::N2:
      // x^{k+1} d_y and x^k (x d_x + y d_y)
      out.push_back(HomVF::monomial({grade + 1, 0, 1}));
      out.push_back(HomVF(grade, {{{grade + 1, 0, 0}, Rational(1)}, {{grade, 1, 1}, Rational(1)}}));
      break;
    case ClassTag::S1:
    case ClassTag::N1:
    case ClassTag::Zero:
      break;
  }
  return out;
}

namespace {

HomVF power_times(int a, int b, int k, const VecMonomial& base, const Rational& c) {
  return HomVF::monomial({base.ex + a * k, base.ey + b * k, base.comp}, c);
}

// (x^2 + y^2)^k as an exponent map
Poly r_power(int k) {
  Poly r2{{{2, 0}, Rational(1)}, {{0, 2}, Rational(1)}};
  Poly out{{{0, 0}, Rational(1)}};
  for (int i = 0; i < k; ++i) out = poly_mul(out, r2);
  return out;
}

}  // namespace

GeneratorBasis::GeneratorBasis(const LinearClass& cls) : cls_(cls) {
  switch (cls.tag) {
    case ClassTag::S3:
      kind_ = Kind::S3;
      step_ = 1;
      zeta_ = cls.mu;
      break;
    case ClassTag::S4OppositeSign:
      kind_ = Kind::S4Opposite;
      step_ = static_cast<int>(cls.p + cls.q);
      zeta_ = 2 * cls.c * Rational(cls.p * cls.q);
      break;
    case ClassTag::S2:
      kind_ = Kind::S2;
      step_ = 2;
      zeta_ = cls.omega;
      break;
    case ClassTag::S4SameSign: {
      kind_ = Kind::S4Single;
      Rational r1 = cls.lambda / cls.mu, r2 = cls.mu / cls.lambda;
      if (r1.get_den() == 1 && r1 >= 2) {
        int m = static_cast<int>(r1.get_num().get_si());
        single_ = {0, m, 0};
        step_ = m - 1;
      } else if (r2.get_den() == 1 && r2 >= 2) {
        int m = static_cast<int>(r2.get_num().get_si());
        single_ = {m, 0, 1};
        step_ = m - 1;
      } else {
        throw NotSupported("same-sign linear part without resonances has a linear normal form");
      }
      zeta_ = 0;
      break;
    }
    default:
      throw NotSupported("no generator basis for class " + to_string(cls.tag));
  }
}

std::string GeneratorBasis::name(const Label& l) const {
  std::string idx = "_" + std::to_string(l.level);
  switch (kind_) {
    case Kind::S2: return (l.family == Family::X ? "Psi" : "Phi") + idx;
    case Kind::S4Single: return "V" + idx;
    default: return (l.family == Family::X ? "X" : "Y") + idx;
  }
}

bool GeneratorBasis::has(const Label& l) const {
  if (l.level < 0) return false;
  if (kind_ == Kind::S4Single) return l.family == Family::Y && l.level == 1;
  return true;
}

HomVF GeneratorBasis::field(const Label& l) const {
  if (!has(l)) throw std::out_of_range("no generator " + name(l));
  const int k = l.level;
  switch (kind_) {
    case Kind::S3:
      return l.family == Family::X ? HomVF::monomial({k + 1, 0, 0}) : HomVF::monomial({k, 1, 1});
    case Kind::S4Opposite: {
      const int p = static_cast<int>(cls_.p), q = static_cast<int>(cls_.q);
      Rational s = Rational(1) / Rational(2 * p * q);
      HomVF phi = power_times(p, q, k, {1, 0, 0}, Rational(q) * s);
      HomVF psi = power_times(p, q, k, {0, 1, 1}, Rational(p) * s);
      return l.family == Family::X ? phi + psi : phi - psi;
    }
    case Kind::S2: {
      HomVF f(2 * k);
      for (const auto& [e, c] : r_power(k)) {
        if (l.family == Family::X) {
          f.add_term({e.first + 1, e.second, 0}, c);
          f.add_term({e.first, e.second + 1, 1}, c);
        } else {
          f.add_term({e.first, e.second + 1, 0}, -c);
          f.add_term({e.first + 1, e.second, 1}, c);
        }
      }
      return f;
    }
    case Kind::S4Single:
      return HomVF::monomial(single_);
  }
  return HomVF(0);
}

std::vector<GenLabel> GeneratorBasis::labels_at_grade(int grade) const {
  std::vector<Label> out;
  if (grade < 0 || step_ <= 0 || grade % step_ != 0) return out;
  int level = grade / step_;
  for (Family f : {Family::Y, Family::X})
    if (has({f, level})) out.push_back({f, level});
  return out;
}

std::vector<HomVF> GeneratorBasis::elements_at_grade(int grade) const {
  std::vector<HomVF> out;
  for (const auto& l : labels_at_grade(grade)) out.push_back(field(l));
  return out;
}

std::map<GenLabel, Rational> GeneratorBasis::decompose(const HomVF& f) const {
  std::map<Label, Rational> out;
  if (f.is_zero()) return out;
  auto labels = labels_at_grade(f.grade());
  auto coords = coordinates_in(elements_at_grade(f.grade()), f, f.grade());
  if (!coords) throw DecompositionError("field of grade " + std::to_string(f.grade()) + " is not in the normal-form algebra");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!is_zero((*coords)[i])) out[labels[i]] = (*coords)[i];
  return out;
}

std::map<GenLabel, Rational> GeneratorBasis::decompose_jet(const JetSeries& w) const {
  std::map<Label, Rational> out;
  for (int k = kind_ == Kind::S4Single ? 1 : 0; k <= w.order(); ++k)
    for (const auto& [l, c] : decompose(w.part(k))) out[l] = c;
  return out;
}

Rational GeneratorBasis::coefficient(const std::map<Label, Rational>& coeffs, const Label& l) {
  auto it = coeffs.find(l);
  return it == coeffs.end() ? Rational(0) : it->second;
}

JetSeries GeneratorBasis::compose(const std::map<Label, Rational>& coeffs, int order) const {
  JetSeries w(order);
  for (const auto& [l, c] : coeffs) {
    if (grade_of(l.level) > order) continue;
    w.add_to_part(c * field(l));
  }
  return w;
}

Metric GeneratorBasis::metric(int max_grade) const {
  Metric m;
  if (kind_ != Kind::S4Opposite || cls_.p == cls_.q) return m;
  const int p = static_cast<int>(cls_.p), q = static_cast<int>(cls_.q);
  for (int k = 0; k * step_ <= max_grade; ++k) {
    Metric::Block b;
    b.monomials = {{1 + p * k, q * k, 0}, {p * k, 1 + q * k, 1}};
    b.basis = {x(k), y(k)};
    b.weights = {bargmann_inner(b.basis[0], b.basis[0]), bargmann_inner(b.basis[1], b.basis[1])};
    m.add_block(std::move(b));
  }
  return m;
}

GeneratorBasis generator_basis(const LinearClass& cls) { return GeneratorBasis(cls); }

}  // namespace nform
