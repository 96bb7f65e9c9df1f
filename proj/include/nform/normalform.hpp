#pragma once

#include "nform/hom_vf.hpp"
#include "nform/homology.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nform {

// Raised when an internal consistency check fails; indicates a bug.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

enum class StageKind { Dulac, Prf, LrfX, LrfY };

struct Generator {
  int grade = 1;
  HomVF field;
  StageKind stage = StageKind::Dulac;
  int stage_index = 0;  // s for PRF stages
  int step_index = 0;   // position in the log

  std::string stage_label() const;
};

struct TransformLog {
  std::vector<Generator> steps;
  // Jet after each step; filled only when snapshots are requested.
  std::vector<JetSeries> snapshots;
  bool keep_snapshots = false;

  // Applies h to w, appends it to the log and returns the new jet. Zero
  // generators are not recorded.
  JetSeries apply(const JetSeries& w, const HomVF& h, StageKind stage, int stage_index);
  void append(const TransformLog& other);
};

// Re-applies every logged generator to the jet, in order.
JetSeries replay(const JetSeries& input, const TransformLog& log);

struct NormalizeOptions {
  FreeChoice free_choice = FreeChoice::Zero;
  bool keep_snapshots = false;
};

struct NormalizeResult {
  JetSeries jet;
  TransformLog log;
};

// Removes the range of L_0 = {W_0, .} grade by grade.
NormalizeResult dulac_normalize(const JetSeries& w, const NormalizeOptions& opts = {});

}  // namespace nform
