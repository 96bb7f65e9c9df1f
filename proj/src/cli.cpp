#include "nform/cli.hpp"

#include <cctype>
#include <sstream>
#include <string_view>

namespace nform {

using json = nlohmann::ordered_json;

ParseError::ParseError(int line_, int column_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + message),
      line(line_),
      column(column_) {}

namespace {

using Poly = std::map<std::pair<int, int>, Rational>;

void prune(Poly& p) {
  for (auto it = p.begin(); it != p.end();) it = is_zero(it->second) ? p.erase(it) : std::next(it);
}

Poly constant(const Rational& c) {
  Poly p;
  if (!is_zero(c)) p[{0, 0}] = c;
  return p;
}

Poly add(Poly a, const Poly& b, int sign) {
  for (const auto& [e, c] : b) a[e] += sign > 0 ? c : Rational(-c);
  prune(a);
  return a;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
  prune(out);
  return out;
}

bool is_constant(const Poly& p) { return p.empty() || (p.size() == 1 && p.begin()->first == std::make_pair(0, 0)); }

class LineParser {
 public:
  LineParser(std::string text, int line) : s_(std::move(text)), line_(line) {}

  // "dx = ..." or "dy = ..."; returns the component and the polynomial.
  std::pair<int, Poly> parse() {
    skip();
    int comp = -1;
    if (s_.compare(i_, 2, "dx") == 0)
      comp = 0;
    else if (s_.compare(i_, 2, "dy") == 0)
      comp = 1;
    else
      fail("expected 'dx' or 'dy'");
    i_ += 2;
    if (s_.compare(i_, 3, "/dt") == 0) i_ += 3;
    skip();
    if (peek() != '=') fail("expected '='");
    ++i_;
    rhs_start_ = i_;
    skip();
    if (at_end()) fail("empty right-hand side");
    Poly p = expr();
    skip();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return {comp, p};
  }

  int rhs_column() const { return static_cast<int>(rhs_start_) + 1; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(i_, msg); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& msg) const {
    throw ParseError(line_, static_cast<int>(pos) + 1, msg);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool at_end() const { return i_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[i_]; }

  bool starts_primary() const {
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  Poly expr() {
    skip();
    Poly out;
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1 : 1;
      ++i_;
    }
    out = add(out, term(), sign);
    for (;;) {
      skip();
      if (peek() != '+' && peek() != '-') break;
      sign = peek() == '-' ? -1 : 1;
      ++i_;
      out = add(out, term(), sign);
    }
    return out;
  }

  Poly term() {
    Poly out = factor();
    for (;;) {
      skip();
      if (peek() == '*') {
        ++i_;
        out = mul(out, factor());
      } else if (peek() == '/') {
        ++i_;
        skip();
        std::size_t pos = i_;
        Poly d = factor();
        if (!is_constant(d)) fail_at(pos, "division by a variable is not a polynomial");
        if (d.empty()) fail_at(pos, "division by zero");
        Rational inv = 1 / d.begin()->second;
        out = mul(out, constant(inv));
      } else if (starts_primary()) {
        out = mul(out, factor());
      } else {
        break;
      }
    }
    return out;
  }

  Poly factor() {
    skip();
    if (peek() == '-' || peek() == '+') {
      int sign = peek() == '-' ? -1 : 1;
      ++i_;
      Poly f = factor();
      return sign > 0 ? f : mul(f, constant(-1));
    }
    Poly base = primary();
    skip();
    if (peek() == '^') {
      ++i_;
      skip();
      std::size_t pos = i_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("exponent must be a non-negative integer");
      long e = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        e = e * 10 + (peek() - '0');
        if (e > 64) fail_at(pos, "exponent too large");
        ++i_;
      }
      Poly out = constant(1);
      for (long k = 0; k < e; ++k) out = mul(out, base);
      return out;
    }
    return base;
  }

  Poly primary() {
    skip();
    char c = peek();
    if (c == '(') {
      ++i_;
      Poly inner = expr();
      skip();
      if (peek() != ')') fail("expected ')'");
      ++i_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++i_;
      std::string id = s_.substr(start, i_ - start);
      Poly out = constant(1);
      for (char v : id) {
        if (v == 'x')
          out = mul(out, Poly{{{1, 0}, Rational(1)}});
        else if (v == 'y')
          out = mul(out, Poly{{{0, 1}, Rational(1)}});
        else
          fail_at(start, "unknown identifier '" + id + "'");
      }
      return out;
    }
    if (at_end()) fail("unexpected end of line");
    fail(std::string("unexpected '") + c + "'");
  }

  Rational number() {
    std::size_t start = i_;
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += s_[i_++];
    Integer den = 1;
    if (peek() == '.') {
      ++i_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        digits += s_[i_++];
        den *= 10;
      }
    }
    if (digits.empty()) fail_at(start, "malformed number");
    if (std::isalpha(static_cast<unsigned char>(peek())) && (peek() == 'e' || peek() == 'E'))
      fail("exponent notation is not supported; write the value as a fraction");
    return make_rational(Integer(digits), den);
  }

  std::string s_;
  int line_;
  std::size_t i_ = 0;
  std::size_t rhs_start_ = 0;
};

std::string normalize_line(std::string line) {
  // U+2212 MINUS SIGN
  const std::string minus = "\xE2\x88\x92";
  for (std::size_t p = line.find(minus); p != std::string::npos; p = line.find(minus, p)) line.replace(p, 3, "-");
  auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string monomial_text(int ex, int ey) {
  std::string out;
  auto var = [&](const char* v, int e) {
    if (e == 0) return;
    if (!out.empty()) out += "*";
    out += v;
    if (e > 1) out += "^" + std::to_string(e);
  };
  var("x", ex);
  var("y", ey);
  return out;
}

std::string rational_text(const Rational& r) { return to_string(r); }

json matrix_json(const Mat2& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(json::array({rational_text(row[0]), rational_text(row[1])}));
  return out;
}

json field_terms(const HomVF& f) {
  json out = json::array();
  for (const auto& [m, c] : f.terms())
    out.push_back(json{{"comp", m.comp == 0 ? "x" : "y"}, {"ex", m.ex}, {"ey", m.ey}, {"coeff", rational_text(c)}});
  return out;
}

json coefficients_json(const std::map<GenLabel, Rational>& coeffs, const std::optional<GeneratorBasis>& basis) {
  json out = json::object();
  if (!basis) return out;
  for (const auto& [l, c] : coeffs) out[basis->name(l)] = rational_text(c);
  return out;
}

std::string combination_text(const std::map<GenLabel, Rational>& coeffs, const GeneratorBasis& basis) {
  std::string out;
  for (const auto& [l, c] : coeffs) {
    Rational a = abs(c);
    std::string mag = a == 1 ? "" : rational_text(a) + " ";
    if (out.empty())
      out = (sgn(c) < 0 ? "-" : "") + mag + basis.name(l);
    else
      out += (sgn(c) < 0 ? " - " : " + ") + mag + basis.name(l);
  }
  return out.empty() ? "0" : out;
}

std::string free_text(FreeChoice f) { return f == FreeChoice::Zero ? "zero" : "min-norm"; }

std::string class_name(const LinearClass& cls) { return to_string(cls.tag); }

// alpha/beta of a generator that lies in the two-family algebra at its own level.
std::optional<std::pair<Rational, Rational>> generator_coefficients(const Generator& g,
                                                                    const std::optional<GeneratorBasis>& basis) {
  if (!basis || basis->kind() == GeneratorBasis::Kind::S4Single) return std::nullopt;
  if (g.grade % basis->step() != 0) return std::nullopt;
  try {
    auto d = basis->decompose(g.field);
    int level = g.grade / basis->step();
    return std::make_pair(GeneratorBasis::coefficient(d, {GeneratorBasis::Family::X, level}),
                          GeneratorBasis::coefficient(d, {GeneratorBasis::Family::Y, level}));
  } catch (const DecompositionError&) {
    return std::nullopt;
  }
}

}  // namespace

JetSeries parse_system(const std::string& text, int max_grade) {
  if (max_grade < 1) throw std::invalid_argument("order must be at least 1");
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::optional<Poly> comps[2];
  int columns[2] = {1, 1};
  int lines[2] = {0, 0};
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = normalize_line(raw);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    LineParser p(line, lineno);
    auto [comp, poly] = p.parse();
    if (comps[comp]) throw ParseError(lineno, 1, std::string("duplicate equation for d") + (comp == 0 ? "x" : "y"));
    comps[comp] = std::move(poly);
    columns[comp] = p.rhs_column();
    lines[comp] = lineno;
  }
  for (int c = 0; c < 2; ++c)
    if (!comps[c]) throw ParseError(lineno + 1, 1, std::string("missing equation for d") + (c == 0 ? "x" : "y"));
  JetSeries w(max_grade);
  for (int c = 0; c < 2; ++c)
    for (const auto& [e, v] : *comps[c]) {
      const int degree = e.first + e.second;
      if (degree == 0)
        throw ParseError(lines[c], columns[c], "constant term: the origin must be a singular point");
      if (degree - 1 > max_grade)
        throw ParseError(lines[c], columns[c],
                         "term of degree " + std::to_string(degree) + " exceeds the truncation order " +
                             std::to_string(max_grade));
      w.add_to_part(HomVF::monomial({e.first, e.second, c}, v));
    }
  return w;
}

std::string print_component(const JetSeries& w, int comp) {
  std::string out;
  for (int k = 0; k <= w.order(); ++k) {
    // Within a degree: decreasing power of x.
    std::vector<std::pair<VecMonomial, Rational>> terms;
    for (const auto& [m, c] : w.part(k).terms())
      if (m.comp == comp) terms.emplace_back(m, c);
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first.ex > b.first.ex; });
    for (const auto& [m, c] : terms) {
      Rational a = abs(c);
      std::string mono = monomial_text(m.ex, m.ey);
      std::string body = a == 1 ? mono : rational_text(a) + "*" + mono;
      if (out.empty())
        out = (sgn(c) < 0 ? "-" : "") + body;
      else
        out += (sgn(c) < 0 ? " - " : " + ") + body;
    }
  }
  return out.empty() ? "0" : out;
}

std::string print_system(const JetSeries& w) {
  return "dx = " + print_component(w, 0) + "\ndy = " + print_component(w, 1) + "\n";
}

std::string to_string(PipelineScheme s) {
  switch (s) {
    case PipelineScheme::Nf: return "nf";
    case PipelineScheme::PrfA: return "prf-a";
    case PipelineScheme::PrfB: return "prf-b";
    case PipelineScheme::Lrf: return "lrf";
  }
  return "?";
}

std::optional<PipelineScheme> parse_scheme(const std::string& s) {
  if (s == "nf") return PipelineScheme::Nf;
  if (s == "prf-a") return PipelineScheme::PrfA;
  if (s == "prf-b") return PipelineScheme::PrfB;
  if (s == "lrf") return PipelineScheme::Lrf;
  return std::nullopt;
}

ReductionReport run_pipeline(const JetSeries& system, const RunConfig& cfg) {
  if (cfg.order < 1) throw std::invalid_argument("order must be at least 1");
  ReductionReport r;
  r.config = cfg;
  r.input = system;
  r.canonical = system;
  Mat2 a = linear_matrix(system.part(0));
  try {
    r.cls = classify_linear(a);
  } catch (const CanonicalFormRequired& e) {
    auto j = jordanize(a);
    if (!j) throw NotSupported(std::string(e.what()) + "; no rational change of coordinates brings it to canonical form");
    r.change = *j;
    r.canonical = apply_linear_change(system, j->p, j->p_inverse);
    r.cls = classify_linear(linear_matrix(r.canonical.part(0)));
    r.notes.push_back("linear part brought to canonical form by (x, y) -> P (x, y); results refer to the new coordinates");
  }
  if (r.cls.tag == ClassTag::Zero) throw NotSupported("zero linear part: normal form theory does not apply");

  NormalizeResult nf = dulac_normalize(r.canonical, {cfg.free_choice, false});
  r.normal_form = nf.jet;
  r.log = nf.log;
  std::optional<GeneratorBasis> basis = basis_for(r.cls);
  if (basis) {
    try {
      r.nf_coefficients = basis->decompose_jet(nf.jet);
    } catch (const DecompositionError& e) {
      throw InvariantViolation(std::string("normal form outside the resonant algebra: ") + e.what());
    }
  }
  ReduceOptions ro{cfg.free_choice, false};
  switch (cfg.scheme) {
    case PipelineScheme::Nf:
      r.reduced = describe_form(nf.jet, Scheme::PrfA);
      break;
    case PipelineScheme::PrfA:
    case PipelineScheme::PrfB: {
      Scheme s = cfg.scheme == PipelineScheme::PrfA ? Scheme::PrfA : Scheme::PrfB;
      Reduction red = r.cls.tag == ClassTag::S2 ? s2_reduce(nf.jet, s, ro) : prf_reduce(nf.jet, s, ro);
      r.reduced = red.form;
      r.log.append(red.log);
      break;
    }
    case PipelineScheme::Lrf: {
      Reduction red = lrf_reduce(nf.jet, ro);
      r.reduced = red.form;
      r.log.append(red.log);
      break;
    }
  }
  r.notes.push_back("free generator components: " + free_text(cfg.free_choice));
  for (const auto& n : r.reduced.notes) r.notes.push_back(n);

  if (cfg.emit_analyticity) {
    std::vector<Rational> alphas;
    bool usable = basis && basis->kind() == GeneratorBasis::Kind::S3;
    for (const auto& g : r.log.steps) {
      if (!usable) break;
      if (g.stage == StageKind::Dulac) continue;
      auto ab = generator_coefficients(g, basis);
      if (!ab || !is_zero(ab->second) || g.grade != static_cast<int>(alphas.size()) + 1 ||
          g.field != ab->first * basis->x(g.grade)) {
        usable = false;
        break;
      }
      alphas.push_back(ab->first);
    }
    if (usable) {
      r.analyticity = analyticity_report(compose_chain(alphas), static_cast<int>(alphas.size()));
    } else {
      r.notes.push_back(
          "analyticity report needs one pure X_k generator per grade k = 1, 2, ... (class S3); not available here");
    }
  }
  return r;
}

json jet_json(const JetSeries& w) {
  json out = json::array();
  for (int k = 0; k <= w.order(); ++k)
    for (auto& t : field_terms(w.part(k))) out.push_back(t);
  return out;
}

JetSeries jet_from_json(const json& j, int order) {
  JetSeries w(order);
  for (const auto& t : j) {
    int comp = t.at("comp").get<std::string>() == "x" ? 0 : 1;
    w.add_to_part(HomVF::monomial({t.at("ex").get<int>(), t.at("ey").get<int>(), comp},
                                  parse_rational(t.at("coeff").get<std::string>())));
  }
  return w;
}

json report_json(const ReductionReport& r) {
  json j;
  j["schema"] = 1;
  j["order"] = r.config.order;
  j["scheme"] = to_string(r.config.scheme);
  j["free"] = free_text(r.config.free_choice);
  j["input"] = json{{"dx", print_component(r.input, 0)}, {"dy", print_component(r.input, 1)}};
  j["class"] = json{{"tag", class_name(r.cls)}, {"matrix", matrix_json(r.cls.matrix)}};
  if (r.change)
    j["canonical_change"] = json{{"P", matrix_json(r.change->p)}, {"P_inverse", matrix_json(r.change->p_inverse)}};
  else
    j["canonical_change"] = nullptr;
  j["canonical_input"] = jet_json(r.canonical);
  const auto& basis = r.reduced.basis;
  json c;
  c["tag"] = to_string(r.reduced.case_tag);
  c["mu"] = r.reduced.case_tag.mu ? json(*r.reduced.case_tag.mu) : json(nullptr);
  c["nu"] = r.reduced.case_tag.nu ? json(*r.reduced.case_tag.nu) : json(nullptr);
  j["case"] = c;
  if (basis)
    j["basis"] = basis->kind() == GeneratorBasis::Kind::S2 ? "Psi/Phi" : (basis->kind() == GeneratorBasis::Kind::S4Single ? "V" : "X/Y");
  else
    j["basis"] = nullptr;
  j["nf_coefficients"] = coefficients_json(r.nf_coefficients, basis);
  j["normal_form"] = jet_json(r.normal_form);
  j["reduced_coefficients"] = coefficients_json(r.reduced.coefficients, basis);
  j["reduced_form"] = jet_json(r.reduced.jet);
  json log = json::array();
  for (const auto& g : r.log.steps) {
    json s;
    s["step"] = g.step_index;
    s["grade"] = g.grade;
    s["stage"] = g.stage_label();
    auto ab = generator_coefficients(g, basis);
    s["alpha"] = ab ? json(rational_text(ab->first)) : json(nullptr);
    s["beta"] = ab ? json(rational_text(ab->second)) : json(nullptr);
    s["field"] = field_terms(g.field);
    log.push_back(s);
  }
  j["transform_log"] = log;
  if (r.analyticity) {
    json a;
    a["method"] = r.analyticity->method;
    json steps = json::array();
    for (const auto& s : r.analyticity->steps) {
      json e;
      e["step"] = s.step;
      e["lower"] = format_bound(s.lower, false);
      e["upper"] = format_bound(s.upper, true);
      if (s.exact) {
        e["exact_lower"] = s.exact_lower ? rational_text(*s.exact_lower) : "-inf";
        e["exact_upper"] = s.exact_upper ? rational_text(*s.exact_upper) : "inf";
      }
      e["reference_lower"] = s.reference_lower ? json(*s.reference_lower) : json(nullptr);
      e["reference_upper"] = s.reference_upper ? json(*s.reference_upper) : json(nullptr);
      steps.push_back(e);
    }
    a["steps"] = steps;
    j["analyticity"] = a;
  } else {
    j["analyticity"] = nullptr;
  }
  j["notes"] = r.notes;
  return j;
}

std::string report_text(const ReductionReport& r) {
  std::ostringstream os;
  os << "system:     dx = " << print_component(r.input, 0) << "\n";
  os << "            dy = " << print_component(r.input, 1) << "\n";
  const Mat2& m = r.cls.matrix;
  os << "class:      " << class_name(r.cls) << "  A = [[" << m[0][0] << ", " << m[0][1] << "], [" << m[1][0] << ", "
     << m[1][1] << "]]\n";
  if (r.change) os << "canonical:  dx = " << print_component(r.canonical, 0) << "\n            dy = " << print_component(r.canonical, 1) << "\n";
  os << "scheme:     " << to_string(r.config.scheme) << ", order " << r.config.order << "\n";
  const auto& tag = r.reduced.case_tag;
  os << "case:       " << to_string(tag);
  if (tag.mu) os << "  mu = " << *tag.mu;
  if (tag.nu) os << "  nu = " << *tag.nu;
  os << "\n";
  const auto& basis = r.reduced.basis;
  if (basis) {
    os << "normal form:   " << combination_text(r.nf_coefficients, *basis) << "\n";
    os << "reduced form:  " << combination_text(r.reduced.coefficients, *basis) << "\n";
  } else {
    os << "normal form:   dx = " << print_component(r.normal_form, 0) << "\n";
    os << "               dy = " << print_component(r.normal_form, 1) << "\n";
  }
  os << "reduced terms: dx = " << print_component(r.reduced.jet, 0) << "\n";
  os << "               dy = " << print_component(r.reduced.jet, 1) << "\n";
  if (r.config.emit_log) {
    os << "transform log (" << r.log.steps.size() << " steps):\n";
    for (const auto& g : r.log.steps) {
      os << "  " << g.step_index << "  grade " << g.grade << "  " << g.stage_label();
      if (auto ab = generator_coefficients(g, basis))
        os << "  alpha = " << ab->first << "  beta = " << ab->second;
      os << "  h = " << to_string(g.field) << "\n";
    }
  }
  if (r.analyticity) {
    os << "analyticity (" << r.analyticity->method << "):\n";
    for (const auto& s : r.analyticity->steps) {
      os << "  step " << s.step << ": (" << format_bound(s.lower, false) << ", " << format_bound(s.upper, true) << ")";
      if (s.reference_lower) os << "   reference (" << *s.reference_lower << ", " << *s.reference_upper << ")";
      os << "\n";
    }
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

ReplayResult replay_report(const json& report) {
  ReplayResult out;
  const int order = report.at("order").get<int>();
  JetSeries input = jet_from_json(report.at("canonical_input"), order);
  TransformLog log;
  for (const auto& s : report.at("transform_log")) {
    Generator g;
    g.grade = s.at("grade").get<int>();
    JetSeries tmp = jet_from_json(s.at("field"), g.grade);
    g.field = tmp.part(g.grade);
    log.steps.push_back(g);
  }
  out.replayed = replay(input, log);
  out.terms_match = jet_json(out.replayed) == report.at("reduced_form");
  ReducedForm f = describe_form(out.replayed, Scheme::PrfA);
  out.coefficients_match = coefficients_json(f.coefficients, f.basis) == report.at("reduced_coefficients");
  return out;
}

RunOutcome run_text(const std::string& text, const RunConfig& cfg) {
  RunOutcome out;
  auto error = [&](int code, const std::string& kind, const std::string& msg, std::optional<std::pair<int, int>> pos) {
    out.exit_code = code;
    json e{{"kind", kind}, {"message", msg}};
    if (pos) {
      e["line"] = pos->first;
      e["column"] = pos->second;
    }
    out.json = json{{"schema", 1}, {"error", e}};
    out.output = (cfg.json ? out.json.dump(2) : kind + " error: " + msg) + "\n";
  };
  try {
    JetSeries w = parse_system(text, cfg.order);
    ReductionReport r = run_pipeline(w, cfg);
    out.json = report_json(r);
    out.output = cfg.json ? out.json.dump(2) + "\n" : report_text(r);
  } catch (const ParseError& e) {
    error(kParseError, "parse", e.what(), std::make_pair(e.line, e.column));
  } catch (const NotSupported& e) {
    error(kUnsupported, "unsupported", e.what(), std::nullopt);
  } catch (const CanonicalFormRequired& e) {
    error(kUnsupported, "unsupported", e.what(), std::nullopt);
  } catch (const CaseMismatch& e) {
    error(kUnsupported, "unsupported", e.what(), std::nullopt);
  } catch (const std::exception& e) {
    error(kInternal, "internal", e.what(), std::nullopt);
  }
  return out;
}

}  // namespace nform
