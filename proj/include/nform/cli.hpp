#pragma once

#include "nform/classify.hpp"
#include "nform/coordmap.hpp"
#include "nform/normalform.hpp"
#include "nform/renormalize.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nform {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& message);
  int line;
  int column;
};

// Two lines "dx = <poly>" and "dy = <poly>" (either order; '#' starts a
// comment). Terms must have degree 1..max_grade+1.
JetSeries parse_system(const std::string& text, int max_grade);
std::string print_system(const JetSeries& w);
// One component as a polynomial string, "0" if empty.
std::string print_component(const JetSeries& w, int comp);

enum class PipelineScheme { Nf, PrfA, PrfB, Lrf };
std::string to_string(PipelineScheme s);
std::optional<PipelineScheme> parse_scheme(const std::string& s);

struct RunConfig {
  int order = 9;
  PipelineScheme scheme = PipelineScheme::PrfA;
  bool json = false;
  bool emit_log = false;
  bool emit_analyticity = false;
  FreeChoice free_choice = FreeChoice::Zero;
};

struct ReductionReport {
  RunConfig config;
  JetSeries input;
  std::optional<Jordanization> change;
  JetSeries canonical;  // input in canonical linear coordinates
  LinearClass cls;
  JetSeries normal_form;
  std::map<GenLabel, Rational> nf_coefficients;
  ReducedForm reduced;
  TransformLog log;  // normalization steps followed by reduction steps
  std::optional<AnalyticityReport> analyticity;
  std::vector<std::string> notes;
};

ReductionReport run_pipeline(const JetSeries& system, const RunConfig& cfg);

nlohmann::ordered_json report_json(const ReductionReport& r);
std::string report_text(const ReductionReport& r);

// Rebuilds the canonical input and the transform log from a JSON report,
// replays the log and checks that it reproduces the reduced terms and
// coefficients exactly.
struct ReplayResult {
  bool terms_match = false;
  bool coefficients_match = false;
  JetSeries replayed;
};
ReplayResult replay_report(const nlohmann::ordered_json& report);

nlohmann::ordered_json jet_json(const JetSeries& w);
JetSeries jet_from_json(const nlohmann::ordered_json& j, int order);

// Process exit codes.
enum ExitCode { kOk = 0, kParseError = 2, kUnsupported = 3, kInternal = 4 };

// Parses, runs and renders one system. Errors are rendered as a message
// (or a JSON error object) and mapped to an exit code.
struct RunOutcome {
  int exit_code = kOk;
  std::string output;
  nlohmann::ordered_json json;
};
RunOutcome run_text(const std::string& text, const RunConfig& cfg);

}  // namespace nform
