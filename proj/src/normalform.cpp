#include "nform/normalform.hpp"

#include "nform/algebra.hpp"
#include "nform/classify.hpp"

namespace nform {

std::string Generator::stage_label() const {
  switch (stage) {
    case StageKind::Dulac: return "dulac";
    case StageKind::Prf: return "prf-" + std::to_string(stage_index);
    case StageKind::LrfX: return "lrf-x";
    case StageKind::LrfY: return "lrf-y";
  }
  return "?";
}

JetSeries TransformLog::apply(const JetSeries& w, const HomVF& h, StageKind stage, int stage_index) {
  if (h.is_zero()) return w;
  JetSeries out = bch_conjugate(w, h);
  Generator g;
  g.grade = h.grade();
  g.field = h;
  g.stage = stage;
  g.stage_index = stage_index;
  g.step_index = static_cast<int>(steps.size());
  steps.push_back(std::move(g));
  if (keep_snapshots) snapshots.push_back(out);
  return out;
}

void TransformLog::append(const TransformLog& other) {
  for (auto g : other.steps) {
    g.step_index = static_cast<int>(steps.size());
    steps.push_back(std::move(g));
  }
  if (keep_snapshots) snapshots.insert(snapshots.end(), other.snapshots.begin(), other.snapshots.end());
}

JetSeries replay(const JetSeries& input, const TransformLog& log) {
  JetSeries w = input;
  for (const auto& g : log.steps) w = bch_conjugate(w, g.field);
  return w;
}

NormalizeResult dulac_normalize(const JetSeries& w, const NormalizeOptions& opts) {
  if (w.part(0).is_zero()) throw NotSupported("zero linear part: normal form theory does not apply");
  NormalizeResult out{w, {}};
  out.log.keep_snapshots = opts.keep_snapshots;
  const HomVF& linear = w.part(0);
  for (int k = 1; k <= w.order(); ++k) {
    GradedOperator op = operator_matrix(linear, monomial_fields(k), k);
    HomologicalSolution sol = solve_homological(op, out.jet.part(k), opts.free_choice);
    // W_k + {h, W_0} = W_k - L_0 h, so h solves L_0 h = P W_k.
    out.jet = out.log.apply(out.jet, sol.field, StageKind::Dulac, 0);
  }
  return out;
}

}  // namespace nform
