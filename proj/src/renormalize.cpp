#include "nform/renormalize.hpp"

#include "nform/algebra.hpp"

#include <algorithm>

namespace nform {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::PrfA: return "prf-a";
    case Scheme::PrfB: return "prf-b";
    case Scheme::Lrf: return "lrf";
  }
  return "?";
}

std::string to_string(const CaseTag& c) {
  if (c.linear) return "linear";
  if (c.major == '-') return "n/a";
  return c.sub.empty() ? std::string(1, c.major) : c.sub;
}

std::optional<GeneratorBasis> basis_for(const LinearClass& cls) {
  switch (cls.tag) {
    case ClassTag::S3:
    case ClassTag::S4OppositeSign:
    case ClassTag::S2:
      return GeneratorBasis(cls);
    case ClassTag::S4SameSign:
      try {
        return GeneratorBasis(cls);
      } catch (const NotSupported&) {
        return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

namespace {

bool two_families(const GeneratorBasis& b) { return b.kind() != GeneratorBasis::Kind::S4Single; }

LinearClass class_of(const JetSeries& w) {
  LinearClass cls = classify_linear(linear_matrix(w.part(0)));
  if (cls.tag == ClassTag::Zero) throw NotSupported("zero linear part: normal form theory does not apply");
  return cls;
}

// Runs the staged reduction on a private copy of the jet. The chain builder
// references jet_, so an Engine is neither copied nor moved.
class Engine {
 public:
  Engine(const JetSeries& w, std::optional<GeneratorBasis> basis, const ReduceOptions& opts)
      : jet_(w),
        basis_(std::move(basis)),
        opts_(opts),
        chain_(jet_, basis_ ? basis_->metric(w.order()) : Metric::bargmann(), provider(basis_)) {
    log_.keep_snapshots = opts.keep_snapshots;
  }
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  void run_a() {
    for (int m = 1; m <= jet_.order(); ++m) {
      chain_.set_stable_through(m - 1);
      normalize_grade(m, m - 1);
    }
  }

  void run_b() {
    const int n = jet_.order();
    chain_.set_stable_through(0);
    for (int m = 1; m <= n; ++m) normalize_grade(m, 0);
    for (int s = 1; s < n; ++s) {
      chain_.set_stable_through(s);
      for (int m = s + 1; m <= n; ++m) normalize_grade(m, s);
    }
  }

  const JetSeries& jet() const { return jet_; }
  TransformLog& log() { return log_; }
  const Metric& metric() const { return chain_.metric(); }

 private:
  static ChainBuilder::BasisProvider provider(const std::optional<GeneratorBasis>& b) {
    if (!b) return {};
    GeneratorBasis copy = *b;
    return [copy](int grade) { return copy.elements_at_grade(grade); };
  }

  // Solves sum_s M_s h^(s) = P W_m jointly over stages 0..max_stage and
  // applies the generators in stage order.
  void normalize_grade(int m, int max_stage) {
    if (jet_.part(m).is_zero()) return;
    std::vector<GradedOperator> ops;
    std::vector<int> stages;
    for (int s = 0; s <= std::min(max_stage, m - 1); ++s) {
      if (s > 0 && jet_.part(s).is_zero()) continue;
      GradedOperator op = chain_.restricted(s, m - s);
      if (op.domain_basis.empty()) continue;
      ops.push_back(std::move(op));
      stages.push_back(s);
    }
    if (ops.empty()) return;
    JointSolution sol = solve_joint(ops, jet_.part(m), opts_.free_choice, chain_.metric());
    for (std::size_t i = 0; i < ops.size(); ++i) {
      jet_ = log_.apply(jet_, sol.fields[i], StageKind::Prf, stages[i]);
    }
    const HomVF& rest = jet_.part(m);
    for (const auto& op : ops)
      for (std::size_t j = 0; j < op.matrix.cols(); ++j) {
        std::vector<Rational> e(op.matrix.cols(), Rational(0));
        e[j] = 1;
        if (!is_zero(chain_.metric().inner(rest, op.apply(e))))
          throw InvariantViolation("grade " + std::to_string(m) + " not orthogonal to the joint range after solve");
      }
  }

  JetSeries jet_;
  std::optional<GeneratorBasis> basis_;
  ReduceOptions opts_;
  ChainBuilder chain_;
  TransformLog log_;
};

ReducedForm make_form(const JetSeries& w, Scheme scheme, const std::optional<GeneratorBasis>& basis) {
  ReducedForm f;
  f.scheme = scheme;
  f.truncation = w.order();
  f.basis = basis;
  f.jet = w;
  f.case_tag.major = '-';
  if (basis) {
    try {
      f.coefficients = basis->decompose_jet(w);
      if (two_families(*basis)) f.case_tag = case_dispatch(w, *basis);
    } catch (const DecompositionError& e) {
      f.notes.push_back(std::string("not in the normal-form algebra: ") + e.what());
    }
  } else {
    for (int k = 1; k <= w.order(); ++k)
      if (!w.part(k).is_zero()) {
        f.case_tag.mu = k;
        break;
      }
  }
  if (w.is_linear()) {
    f.case_tag.linear = true;
    f.notes.push_back("linear normal form");
  }
  return f;
}

Rational level_coefficient(const GeneratorBasis& b, const HomVF& f, const GenLabel& l) {
  try {
    return GeneratorBasis::coefficient(b.decompose(f), l);
  } catch (const DecompositionError&) {
    throw InvariantViolation("generator sweep left the normal-form algebra at grade " + std::to_string(f.grade()));
  }
}

}  // namespace

CaseTag case_dispatch(const JetSeries& nf, const GeneratorBasis& basis) {
  if (!two_families(basis)) throw NotSupported("case taxonomy needs the X/Y generator families");
  auto coeffs = basis.decompose_jet(nf);
  const int levels = nf.order() / basis.step();
  CaseTag tag;
  for (int k = 1; k <= levels; ++k) {
    if (!tag.mu && !is_zero(GeneratorBasis::coefficient(coeffs, {GeneratorBasis::Family::X, k}))) tag.mu = k;
    if (!tag.nu && !is_zero(GeneratorBasis::coefficient(coeffs, {GeneratorBasis::Family::Y, k}))) tag.nu = k;
  }
  if (!tag.mu && !tag.nu) {
    tag.linear = true;
    return tag;
  }
  const bool a1 = tag.mu == 1, b1 = tag.nu == 1;
  if (a1 && !b1) {
    tag.major = 'a';
  } else if (!a1 && b1) {
    tag.major = 'b';
  } else if (a1 && b1) {
    tag.major = 'c';
  } else {
    tag.major = 'd';
    if (tag.mu && (!tag.nu || *tag.mu < *tag.nu))
      tag.sub = "da";
    else if (tag.nu && (!tag.mu || *tag.mu > *tag.nu))
      tag.sub = "db";
    else
      tag.sub = "dc";
  }
  return tag;
}

ReducedForm describe_form(const JetSeries& w, Scheme scheme) {
  return make_form(w, scheme, basis_for(class_of(w)));
}

Reduction prf_reduce(const JetSeries& nf, Scheme scheme, const ReduceOptions& opts) {
  if (scheme == Scheme::Lrf) return lrf_reduce(nf, opts);
  LinearClass cls = class_of(nf);
  std::optional<GeneratorBasis> basis = basis_for(cls);
  Engine engine(nf, basis, opts);
  if (scheme == Scheme::PrfA)
    engine.run_a();
  else
    engine.run_b();
  return {make_form(engine.jet(), scheme, basis), std::move(engine.log())};
}

Reduction lrf_reduce(const JetSeries& nf, const ReduceOptions& opts) {
  LinearClass cls = class_of(nf);
  std::optional<GeneratorBasis> basis = basis_for(cls);
  auto fallback = [&](const std::string& why) {
    Reduction r = prf_reduce(nf, Scheme::PrfA, opts);
    r.form.notes.push_back(why + "; PRF computed instead");
    return r;
  };
  if (!basis || !two_families(*basis)) return fallback("LRF needs the X/Y generator families");
  CaseTag tag;
  try {
    tag = case_dispatch(nf, *basis);
  } catch (const DecompositionError&) {
    throw std::invalid_argument("LRF input must be a normal form");
  }
  if (!(tag.is("b") || tag.is("db")) || !tag.mu) return fallback("LRF applies to cases (b) and (db) with some X term");

  using F = GeneratorBasis::Family;
  const int mu = *tag.mu;
  const int levels = nf.order() / basis->step();
  TransformLog log;
  log.keep_snapshots = opts.keep_snapshots;
  JetSeries w = nf;
  auto sweep = [&](F family, StageKind kind) {
    for (int k = 1; mu + k <= levels; ++k) {
      if (family == F::X && k == mu) continue;
      const HomVF gen = basis->field({family, k});
      const int target = basis->grade_of(mu + k);
      Rational c = level_coefficient(*basis, w.part(target), {family, mu + k});
      if (is_zero(c)) continue;
      Rational coef = level_coefficient(*basis, bracket(gen, w.part(basis->grade_of(mu))), {family, mu + k});
      if (is_zero(coef)) throw InvariantViolation("LRF sweep hit a zero leading bracket");
      w = log.apply(w, (-c / coef) * gen, kind, k);
    }
  };
  sweep(F::X, StageKind::LrfX);
  sweep(F::Y, StageKind::LrfY);
  Reduction r{make_form(w, Scheme::Lrf, basis), std::move(log)};
  return r;
}

Reduction s2_reduce(const JetSeries& nf, Scheme scheme, const ReduceOptions& opts) {
  if (class_of(nf).tag != ClassTag::S2) throw CaseMismatch("s2_reduce needs a rotation linear part");
  return scheme == Scheme::Lrf ? lrf_reduce(nf, opts) : prf_reduce(nf, scheme, opts);
}

Reduction n2_reduce(const JetSeries& nf, const ReduceOptions& opts) {
  if (class_of(nf).tag != ClassTag::N2) throw CaseMismatch("n2_reduce needs a nilpotent linear part");
  return prf_reduce(nf, Scheme::PrfA, opts);
}

std::optional<MembershipFailure> prf_membership_failure(const JetSeries& w) {
  LinearClass cls = class_of(w);
  std::optional<GeneratorBasis> basis = basis_for(cls);
  ChainBuilder::BasisProvider h1;
  if (basis) h1 = [b = *basis](int grade) { return b.elements_at_grade(grade); };
  ChainBuilder chain(w, basis ? basis->metric(w.order()) : Metric::bargmann(), h1);
  chain.set_stable_through(w.order());
  for (int k = 1; k <= w.order(); ++k) {
    if (w.part(k).is_zero()) continue;
    for (int s = 0; s < k; ++s) {
      if (s > 0 && w.part(s).is_zero()) continue;
      GradedOperator op = chain.restricted(s, k - s);
      for (std::size_t j = 0; j < op.matrix.cols(); ++j) {
        std::vector<Rational> e(op.matrix.cols(), Rational(0));
        e[j] = 1;
        if (!is_zero(chain.metric().inner(w.part(k), op.apply(e)))) return MembershipFailure{k, s};
      }
    }
  }
  return std::nullopt;
}

std::set<GenLabel> predicted_support(const CaseTag& c, Scheme scheme, int max_level) {
  using F = GeneratorBasis::Family;
  std::set<GenLabel> out{{F::Y, 0}};
  if (c.linear) return out;
  auto x = [&](int k) {
    if (k <= max_level) out.insert({F::X, k});
  };
  auto y = [&](int k) {
    if (k <= max_level) out.insert({F::Y, k});
  };
  if (scheme == Scheme::Lrf && (c.is("b") || c.is("db")) && c.mu && c.nu) {
    x(*c.mu);
    x(2 * *c.mu);
    for (int k = *c.nu; k <= *c.mu; ++k) y(k);
    return out;
  }
  const int mu = c.mu.value_or(max_level + 1);
  const int nu = c.nu.value_or(max_level + 1);
  if (c.is("a")) {
    x(1);
    x(2);
  } else if (c.is("b")) {
    y(1);
    for (int k = 2; k <= max_level; ++k) x(k);
  } else if (c.is("c")) {
    x(1);
    y(1);
    x(2);
  } else if (c.is("da")) {
    x(mu);
    x(2 * mu);
  } else if (c.is("db")) {
    y(nu);
    for (int k = mu; k <= max_level; ++k) x(k);
  } else if (c.is("dc")) {
    x(mu);
    y(mu);
    x(2 * mu);
  }
  return out;
}

LevelCoefficients level_coefficients(const std::map<GenLabel, Rational>& coeffs) {
  LevelCoefficients out;
  for (const auto& [l, c] : coeffs) {
    auto& slot = out[l.level];
    (l.family == GeneratorBasis::Family::X ? slot.first : slot.second) = c;
  }
  return out;
}

std::vector<ClosedFormStep> closed_form_generators(char major, const LevelCoefficients& coeffs, Scheme scheme) {
  auto get = [&](int k, bool x_family) {
    auto it = coeffs.find(k);
    if (it == coeffs.end()) return Rational(0);
    return x_family ? it->second.first : it->second.second;
  };
  const Rational a1 = get(1, true), a2 = get(2, true), a3 = get(3, true), a4 = get(4, true), a5 = get(5, true);
  const Rational b1 = get(1, false), b2 = get(2, false), b3 = get(3, false), b4 = get(4, false), b5 = get(5, false);
  std::vector<ClosedFormStep> out;
  const StageKind prf = StageKind::Prf;

  if (scheme == Scheme::Lrf) {
    if (major != 'b' || is_zero(b1) || is_zero(a2) || !is_zero(a1))
      throw CaseMismatch("LRF closed forms need case (b) with a_2 != 0");
    Rational a2p2 = a2 * a2, a2p3 = a2p2 * a2, a2p4 = a2p3 * a2, a2p5 = a2p4 * a2;
    out.push_back({1, -a3 / a2, 0, StageKind::LrfX});
    out.push_back({3, (2 * a3 * a3 * a3 - 3 * a2 * a3 * a4 + a2p2 * a5) / a2p3, 0, StageKind::LrfX});
    out.push_back({1, 0, (a3 * a3 * b1 - 2 * a2 * a3 * b2 + a2p2 * b3) / a2p3, StageKind::LrfY});
    out.push_back({2, 0,
                   (a3 * a3 * a3 * b1 - 3 * a2 * a3 * a4 * b1 + a2p2 * a5 * b1 + 3 * a2 * a3 * a3 * b2 -
                    3 * a2p2 * a3 * b3 + a2p3 * b4) /
                       (2 * a2p4),
                   StageKind::LrfY});
    out.push_back({3, 0,
                   -(2 * a3 * a3 * a3 * a3 * b1 - 5 * a2 * a3 * a3 * a4 * b1 + 2 * a2p2 * a3 * a5 * b1 +
                     2 * a2 * a3 * a3 * a3 * b2 + 4 * a2p2 * a3 * a4 * b2 - 2 * a2p3 * a5 * b2 -
                     7 * a2p2 * a3 * a3 * b3 + a2p3 * a4 * b3 + 4 * a2p3 * a3 * b4 - a2p4 * b5) /
                       (3 * a2p5),
                   StageKind::LrfY});
    return out;
  }

  auto x_alphas = [&]() {
    return std::vector<Rational>{Rational(0), a3 / a1, a4 / (2 * a1),
                                 (a3 * a3 - a2 * a4 + 2 * a1 * a5) / (6 * a1 * a1)};
  };
  switch (major) {
    case 'a': {
      if (is_zero(a1) || !is_zero(b1)) throw CaseMismatch("case (a) needs a_1 != 0 and b_1 = 0");
      auto al = x_alphas();
      Rational p2 = a1 * a1, p3 = p2 * a1, p4 = p3 * a1;
      std::vector<Rational> be{
          b2 / a1,
          (a1 * b3 - a2 * b2) / (2 * p2),
          (a2 * a2 * b2 - a1 * a3 * b2 - a1 * a2 * b3 + p2 * b4) / (3 * p3),
          -(a2 * a2 * a2 * b2 + p2 * a4 * b2 - a1 * a2 * a2 * b3 - p2 * a3 * b3 + p2 * a2 * b4 - p3 * b5) / (4 * p4)};
      for (int k = 0; k < 4; ++k) out.push_back({k + 1, al[k], be[k], prf});
      return out;
    }
    case 'b': {
      if (is_zero(b1) || !is_zero(a1)) throw CaseMismatch("case (b) needs a_1 = 0 and b_1 != 0");
      Rational p2 = b1 * b1, p3 = p2 * b1, p4 = p3 * b1;
      std::vector<Rational> al{
          -b2 / b1,
          (b2 * b2 - b1 * b3) / p2,
          -(2 * b2 * b2 * b2 - 3 * b1 * b2 * b3 + p2 * b4) / p3,
          (9 * b2 * b2 * b2 * b2 - 18 * b1 * b2 * b2 * b3 + 3 * p2 * b3 * b3 + 8 * p2 * b2 * b4 - 2 * p3 * b5) /
              (2 * p4)};
      for (int k = 0; k < 4; ++k) out.push_back({k + 1, al[k], 0, prf});
      return out;
    }
    case 'c': {
      if (is_zero(a1) || is_zero(b1)) throw CaseMismatch("case (c) needs a_1 != 0 and b_1 != 0");
      auto al = x_alphas();
      Rational p2 = a1 * a1, p3 = p2 * a1, p4 = p3 * a1;
      std::vector<Rational> be{
          b2 / a1,
          (a3 * b1 - a2 * b2 + a1 * b3) / (2 * p2),
          -(2 * a2 * a3 * b1 - a1 * a4 * b1 - 2 * a2 * a2 * b2 + 2 * a1 * a3 * b2 + 2 * a1 * a2 * b3 - 2 * p2 * b4) /
              (6 * p3),
          (3 * a2 * a2 * a3 * b1 - a1 * a3 * a3 * b1 - 2 * a1 * a2 * a4 * b1 + p2 * a5 * b1 - 3 * a2 * a2 * a2 * b2 -
           3 * p2 * a4 * b2 + 3 * a1 * a2 * a2 * b3 + 3 * p2 * a3 * b3 - 3 * p2 * a2 * b4 + 3 * p3 * b5) /
              (12 * p4)};
      for (int k = 0; k < 4; ++k) out.push_back({k + 1, al[k], be[k], prf});
      return out;
    }
    default:
      throw CaseMismatch(std::string("no closed forms for case ") + major);
  }
}

}  // namespace nform
