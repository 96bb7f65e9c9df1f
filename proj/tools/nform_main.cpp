#include "nform/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

int run_batch(const fs::path& dir, const nform::RunConfig& cfg) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::future<nform::RunOutcome>> jobs;
  for (const auto& f : files)
    jobs.push_back(std::async(std::launch::async, [f, cfg] {
      std::ifstream in(f);
      return nform::run_text(slurp(in), cfg);
    }));
  int worst = nform::kOk;
  nlohmann::ordered_json all = {{"schema", 1}, {"batch", nlohmann::ordered_json::array()}};
  for (std::size_t i = 0; i < files.size(); ++i) {
    nform::RunOutcome r = jobs[i].get();
    worst = std::max(worst, r.exit_code);
    if (cfg.json)
      all["batch"].push_back({{"file", files[i].filename().string()}, {"exit_code", r.exit_code}, {"report", r.json}});
    else
      std::cout << "== " << files[i].filename().string() << " ==\n" << r.output << "\n";
  }
  if (cfg.json) std::cout << all.dump(2) << "\n";
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal forms and renormalized forms of planar polynomial vector fields"};
  nform::RunConfig cfg;
  std::string input, scheme = "prf-a", free = "zero", batch;
  app.add_option("input", input, "system file (two lines 'dx = ...', 'dy = ...'); standard input if omitted");
  app.add_option("--order", cfg.order, "truncation grade N")->check(CLI::Range(1, 64));
  app.add_option("--scheme", scheme, "nf, prf-a, prf-b or lrf")->check(CLI::IsMember({"nf", "prf-a", "prf-b", "lrf"}));
  app.add_flag("--json", cfg.json, "emit the JSON report");
  app.add_flag("--log", cfg.emit_log, "list every generator in the text report");
  app.add_flag("--analyticity", cfg.emit_analyticity, "report analyticity intervals of the coordinate changes");
  app.add_option("--free", free, "free generator components: zero or min-norm")->check(CLI::IsMember({"zero", "min-norm"}));
  app.add_option("--batch", batch, "process every file of a directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : nform::kParseError;
  }
  cfg.scheme = *nform::parse_scheme(scheme);
  cfg.free_choice = free == "zero" ? nform::FreeChoice::Zero : nform::FreeChoice::MinNorm;

  if (!batch.empty()) {
    if (!fs::is_directory(batch)) {
      std::cerr << "not a directory: " << batch << "\n";
      return nform::kParseError;
    }
    return run_batch(batch, cfg);
  }
  std::string text;
  if (input.empty() || input == "-") {
    text = slurp(std::cin);
  } else {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "cannot read " << input << "\n";
      return nform::kParseError;
    }
    text = slurp(in);
  }
  nform::RunOutcome r = nform::run_text(text, cfg);
  (r.exit_code == nform::kOk ? std::cout : std::cerr) << r.output;
  if (cfg.json && r.exit_code != nform::kOk) std::cout << r.json.dump(2) << "\n";
  return r.exit_code;
}
