#include "selfaccel/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "selfaccel/errors.hpp"

namespace selfaccel {

double TruncationWindow::operator()(double x) const {
  if (kind == Kind::Hard) return std::fabs(x - center) <= width ? 1.0 : 0.0;
  const double u = (x - center) / width;
  return std::exp(-0.5 * u * u);
}

std::string_view to_string(TruncationWindow::Kind kind) {
  return kind == TruncationWindow::Kind::Hard ? "hard" : "gaussian";
}

bool AdjudicateSpec::operator==(const AdjudicateSpec& o) const {
  const auto& l = ladder;
  const auto& r = o.ladder;
  return dark_soliton_mu == o.dark_soliton_mu && nonlinear_shift == o.nonlinear_shift && l.x_min == r.x_min &&
         l.x_max == r.x_max && l.n0 == r.n0 && l.t == r.t && l.dt_probe0 == r.dt_probe0 && l.levels == r.levels &&
         l.order == r.order;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ValidationError, msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& v, int line) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) parse_fail(line, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& v, int line) {
  int out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) parse_fail(line, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  parse_fail(line, "expected true or false, got '" + v + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(bool v) { return v ? "true" : "false"; }

std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
  if (out.empty()) parse_fail(line, "empty value list");
  return out;
}

struct Key {
  std::string name;
  std::function<void(ScenarioSpec&, const std::string&, int)> set;
  /// Empty optional: key omitted from serialized output.
  std::function<std::optional<std::string>(const ScenarioSpec&)> get;
};

struct Section {
  std::string name;
  /// Creates the optional payload when the header is seen.
  std::function<void(ScenarioSpec&)> open;
  std::function<bool(const ScenarioSpec&)> present;
  std::vector<Key> keys;
};

#define SA_NUM(expr) \
  [](ScenarioSpec& s, const std::string& v, int l) { expr = to_double(v, l); }, [](const ScenarioSpec& s) -> std::optional<std::string> { return fmt(expr); }
#define SA_INT(expr) \
  [](ScenarioSpec& s, const std::string& v, int l) { expr = to_int(v, l); }, [](const ScenarioSpec& s) -> std::optional<std::string> { return std::to_string(expr); }
#define SA_BOOL(expr) \
  [](ScenarioSpec& s, const std::string& v, int l) { expr = to_bool(v, l); }, [](const ScenarioSpec& s) -> std::optional<std::string> { return fmt(expr); }
#define SA_STR(expr) \
  [](ScenarioSpec& s, const std::string& v, int) { expr = v; }, [](const ScenarioSpec& s) -> std::optional<std::string> { return expr; }

const std::vector<Section>& sections() {
  static const std::vector<Section> table = [] {
    auto always = [](const ScenarioSpec&) { return true; };
    auto nothing = [](ScenarioSpec&) {};
    std::vector<Section> t;
    t.push_back({"scenario", nothing, always, {{"name", SA_STR(s.name)}, {"kind", SA_STR(s.kind)}}});
    t.push_back({"family",
                 nothing,
                 [](const ScenarioSpec& s) { return s.kind == "propagate"; },
                 {{"kind", SA_STR(s.family.kind)},
                  {"a", SA_NUM(s.family.a)},
                  {"mu", [](ScenarioSpec& s, const std::string& v, int l) { s.family.mu = to_double(v, l); },
                   [](const ScenarioSpec& s) -> std::optional<std::string> {
                     if (!s.family.mu) return std::nullopt;
                     return fmt(*s.family.mu);
                   }},
                  {"omega", SA_NUM(s.family.omega)},
                  {"v0", SA_NUM(s.family.v0)},
                  {"sigma", SA_NUM(s.family.sigma)},
                  {"n", SA_INT(s.family.n)},
                  {"branch_sign", SA_INT(s.family.branch_sign)}}});
    t.push_back({"grid",
                 nothing,
                 [](const ScenarioSpec& s) { return s.kind == "propagate"; },
                 {{"x_min", SA_NUM(s.grid.x_min)}, {"x_max", SA_NUM(s.grid.x_max)}, {"n", SA_INT(s.grid.n)}}});
    t.push_back({"propagator",
                 nothing,
                 [](const ScenarioSpec& s) { return s.kind == "propagate"; },
                 {{"scheme",
                   [](ScenarioSpec& s, const std::string& v, int l) {
                     try {
                       s.propagator.scheme = scheme_from_string(v);
                     } catch (const Error&) {
                       parse_fail(l, "unknown scheme '" + v + "'");
                     }
                   },
                   [](const ScenarioSpec& s) -> std::optional<std::string> {
                     return std::string(to_string(s.propagator.scheme));
                   }},
                  {"dt", SA_NUM(s.propagator.dt)},
                  {"t_end", SA_NUM(s.propagator.t_end)},
                  {"record_stride", SA_INT(s.propagator.record_stride)},
                  {"field_stride", SA_INT(s.propagator.field_stride)}}});
    t.push_back({"absorber",
                 [](ScenarioSpec& s) { s.propagator.absorber.emplace(); },
                 [](const ScenarioSpec& s) { return s.propagator.absorber.has_value(); },
                 {{"width", SA_NUM(s.propagator.absorber->layer_width)},
                  {"strength", SA_NUM(s.propagator.absorber->strength)}}});
    t.push_back({"truncation",
                 [](ScenarioSpec& s) { s.truncation.emplace(); },
                 [](const ScenarioSpec& s) { return s.truncation.has_value(); },
                 {{"kind",
                   [](ScenarioSpec& s, const std::string& v, int l) {
                     if (v == "hard") {
                       s.truncation->kind = TruncationWindow::Kind::Hard;
                     } else if (v == "gaussian") {
                       s.truncation->kind = TruncationWindow::Kind::Gaussian;
                     } else {
                       parse_fail(l, "truncation kind must be hard or gaussian");
                     }
                   },
                   [](const ScenarioSpec& s) -> std::optional<std::string> {
                     return std::string(to_string(s.truncation->kind));
                   }},
                  {"center", SA_NUM(s.truncation->center)},
                  {"width", SA_NUM(s.truncation->width)}}});
    t.push_back({"nonlinear",
                 [](ScenarioSpec& s) { s.nonlinear.emplace(); },
                 [](const ScenarioSpec& s) { return s.nonlinear.has_value(); },
                 {{"sigma", SA_NUM(s.nonlinear->sigma)}, {"p", SA_NUM(s.nonlinear->p)}}});
    t.push_back({"diagnostics",
                 nothing,
                 [](const ScenarioSpec& s) { return s.kind == "propagate"; },
                 {{"track", SA_STR(s.diagnostics.track)},
                  {"track_radius", SA_NUM(s.diagnostics.track_radius)},
                  {"reference_q", SA_NUM(s.diagnostics.reference_q)},
                  {"window_half_width", SA_NUM(s.diagnostics.window_half_width)},
                  {"flatness_target",
                   [](ScenarioSpec& s, const std::string& v, int l) { s.diagnostics.flatness_target = to_double(v, l); },
                   [](const ScenarioSpec& s) -> std::optional<std::string> {
                     if (!s.diagnostics.flatness_target) return std::nullopt;
                     return fmt(*s.diagnostics.flatness_target);
                   }},
                  {"compare_analytic", SA_BOOL(s.diagnostics.compare_analytic)},
                  {"align_phase", SA_BOOL(s.diagnostics.align_phase)},
                  {"fit_t_min", SA_NUM(s.diagnostics.fit_t_min)},
                  {"fit_t_max",
                   [](ScenarioSpec& s, const std::string& v, int l) { s.diagnostics.fit_t_max = to_double(v, l); },
                   [](const ScenarioSpec& s) -> std::optional<std::string> {
                     if (!s.diagnostics.fit_t_max) return std::nullopt;
                     return fmt(*s.diagnostics.fit_t_max);
                   }}}});
    t.push_back({"sweep",
                 [](ScenarioSpec& s) { s.sweep.emplace(); },
                 [](const ScenarioSpec& s) { return s.sweep.has_value(); },
                 {{"parameter", SA_STR(s.sweep->parameter)},
                  {"values", [](ScenarioSpec& s, const std::string& v, int l) { s.sweep->values = to_list(v, l); },
                   [](const ScenarioSpec& s) -> std::optional<std::string> {
                     std::string out;
                     for (std::size_t i = 0; i < s.sweep->values.size(); ++i) {
                       if (i) out += ", ";
                       out += fmt(s.sweep->values[i]);
                     }
                     return out;
                   }}}});
    t.push_back({"adjudicate",
                 [](ScenarioSpec& s) { s.adjudicate.emplace(); },
                 [](const ScenarioSpec& s) { return s.adjudicate.has_value(); },
                 {{"dark_soliton_mu", SA_BOOL(s.adjudicate->dark_soliton_mu)},
                  {"nonlinear_shift", SA_BOOL(s.adjudicate->nonlinear_shift)},
                  {"x_min", SA_NUM(s.adjudicate->ladder.x_min)},
                  {"x_max", SA_NUM(s.adjudicate->ladder.x_max)},
                  {"n0", SA_INT(s.adjudicate->ladder.n0)},
                  {"t", SA_NUM(s.adjudicate->ladder.t)},
                  {"dt_probe0", SA_NUM(s.adjudicate->ladder.dt_probe0)},
                  {"levels", SA_INT(s.adjudicate->ladder.levels)},
                  {"order", SA_INT(s.adjudicate->ladder.order)}}});
    t.push_back({"synthesize",
                 [](ScenarioSpec& s) { s.synthesize.emplace(); },
                 [](const ScenarioSpec& s) { return s.synthesize.has_value(); },
                 {{"table", SA_STR(s.synthesize->table)},
                  {"a", SA_NUM(s.synthesize->a)},
                  {"mu", SA_NUM(s.synthesize->mu)},
                  {"sign_at_right", SA_INT(s.synthesize->sign_at_right)}}});
    t.push_back({"output",
                 nothing,
                 [](const ScenarioSpec& s) { return !s.output_dir.empty(); },
                 {{"directory", SA_STR(s.output_dir)}}});
    return t;
  }();
  return table;
}

#undef SA_NUM
#undef SA_INT
#undef SA_BOOL
#undef SA_STR

}  // namespace

ScenarioSpec parse_config(std::string_view text) {
  ScenarioSpec spec;
  const Section* current = nullptr;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(line_no, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      current = nullptr;
      for (const auto& s : sections()) {
        if (s.name == name) current = &s;
      }
      if (!current) parse_fail(line_no, "unknown section [" + name + "]");
      if (!seen_sections.insert(name).second) parse_fail(line_no, "duplicate section [" + name + "]");
      current->open(spec);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected 'key = value'");
    if (!current) parse_fail(line_no, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Key* match = nullptr;
    for (const auto& k : current->keys) {
      if (k.name == key) match = &k;
    }
    if (!match) parse_fail(line_no, "unknown key '" + key + "' in [" + current->name + "]");
    if (!seen_keys.insert(current->name + "." + key).second) parse_fail(line_no, "duplicate key '" + key + "'");
    if (value.empty()) parse_fail(line_no, "empty value for '" + key + "'");
    match->set(spec, value, line_no);
  }
  if (spec.kind == "propagate" && !seen_sections.count("family")) {
    parse_fail(line_no, "missing [family] section");
  }
  if (spec.kind == "synthesize" && !seen_sections.count("synthesize")) {
    parse_fail(line_no, "missing [synthesize] section");
  }
  if (spec.kind == "adjudicate" && !spec.adjudicate) spec.adjudicate.emplace();
  validate(spec);
  return spec;
}

ScenarioSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioSpec& spec) {
  std::string out;
  for (const auto& s : sections()) {
    if (!s.present(spec)) continue;
    if (!out.empty()) out += "\n";
    out += "[" + s.name + "]\n";
    for (const auto& k : s.keys) {
      if (auto v = k.get(spec)) out += k.name + " = " + *v + "\n";
    }
  }
  return out;
}

SolutionFamily build_family(const FamilySpec& f) {
  const auto tag = family_tag_from_string(f.kind);
  auto need_mu = [&] {
    if (!f.mu) invalid("family '" + f.kind + "' needs mu");
    return *f.mu;
  };
  auto no_mu = [&] {
    if (f.mu) invalid("mu is determined by family '" + f.kind + "' and must not be set");
  };
  switch (tag) {
    case FamilyTag::AiryFree:
      return SolutionFamily::airy_free(f.a, need_mu());
    case FamilyTag::ConstIntensityInvHarm:
      return SolutionFamily::const_intensity_inv_harm(f.v0, f.a, need_mu());
    case FamilyTag::ConstIntensityPowerLaw:
      no_mu();
      return SolutionFamily::const_intensity_power_law(f.v0, f.n, f.a, f.branch_sign);
    case FamilyTag::GaussianLocalized:
      no_mu();
      return SolutionFamily::gaussian_localized(f.omega, f.a);
    case FamilyTag::DarkSoliton:
      no_mu();
      return SolutionFamily::dark_soliton(f.sigma, f.a);
    case FamilyTag::Synthesized:
      break;
  }
  invalid("family 'synthesized' is built by the synthesize scenario, not from [family]");
}

void validate(const ScenarioSpec& s) {
  if (s.name.empty()) invalid("scenario name must not be empty");
  if (s.kind == "propagate") {
    build_family(s.family);
    if (!(s.grid.x_max > s.grid.x_min)) invalid("grid needs x_max > x_min");
    if (s.grid.n < 16) invalid("grid needs n >= 16");
    const auto& p = s.propagator;
    if (!(p.dt > 0)) invalid("propagator dt must be positive");
    if (!(p.t_end > 0)) invalid("propagator t_end must be positive");
    if (p.record_stride < 1) invalid("record_stride must be >= 1");
    if (p.field_stride < 1) invalid("field_stride must be >= 1");
    if (p.absorber) {
      if (!(p.absorber->layer_width > 0)) invalid("absorber width must be positive");
      if (!(p.absorber->strength >= 0)) invalid("absorber strength must be non-negative");
      if (2 * p.absorber->layer_width >= s.grid.x_max - s.grid.x_min) invalid("absorber layers overlap");
    }
    if (s.truncation && !(s.truncation->width > 0)) invalid("truncation width must be positive");
    if (s.nonlinear) make_nonlinear(s.nonlinear->sigma, s.nonlinear->p);
    static const std::set<std::string> tracks{"peak", "trough", "centroid", "main-lobe", "wavenumber-min", "none"};
    if (!tracks.count(s.diagnostics.track)) invalid("unknown track method '" + s.diagnostics.track + "'");
    if (!(s.diagnostics.track_radius > 0)) invalid("track_radius must be positive");
    if (!(s.diagnostics.window_half_width > 0)) invalid("window_half_width must be positive");
  } else if (s.kind == "adjudicate") {
    if (!s.adjudicate) invalid("adjudicate scenario needs an [adjudicate] section");
    const auto& l = s.adjudicate->ladder;
    if (l.levels < 3) invalid("refinement ladder needs >= 3 levels");
    if (l.order != 2 && l.order != 4) invalid("ladder order must be 2 or 4");
    if (!(l.x_max > l.x_min) || l.n0 < 16 || !(l.dt_probe0 > 0)) invalid("ladder grid is degenerate");
  } else if (s.kind == "synthesize") {
    if (!s.synthesize || s.synthesize->table.empty()) invalid("synthesize scenario needs a table path");
    if (s.synthesize->sign_at_right != 1 && s.synthesize->sign_at_right != -1) invalid("sign_at_right must be +1 or -1");
    make_frame(s.synthesize->a, s.synthesize->mu);
  } else {
    invalid("scenario kind must be propagate, adjudicate or synthesize");
  }
  if (s.sweep) {
    if (s.sweep->values.empty()) invalid("sweep needs at least one value");
    ScenarioSpec probe = s;
    probe.sweep.reset();
    for (double v : s.sweep->values) {
      set_parameter(probe, s.sweep->parameter, v);
      validate(probe);
    }
  }
}

void set_parameter(ScenarioSpec& spec, std::string_view parameter, double value) {
  const std::string p(parameter);
  static const std::map<std::string, std::function<void(ScenarioSpec&, double)>> setters{
      {"family.a", [](ScenarioSpec& s, double v) { s.family.a = v; }},
      {"family.mu", [](ScenarioSpec& s, double v) { s.family.mu = v; }},
      {"family.omega", [](ScenarioSpec& s, double v) { s.family.omega = v; }},
      {"family.v0", [](ScenarioSpec& s, double v) { s.family.v0 = v; }},
      {"family.sigma", [](ScenarioSpec& s, double v) { s.family.sigma = v; }},
      {"family.n", [](ScenarioSpec& s, double v) { s.family.n = static_cast<int>(v); }},
      {"propagator.dt", [](ScenarioSpec& s, double v) { s.propagator.dt = v; }},
      {"grid.n", [](ScenarioSpec& s, double v) { s.grid.n = static_cast<int>(v); }},
      {"truncation.width",
       [](ScenarioSpec& s, double v) {
         if (!s.truncation) s.truncation.emplace();
         s.truncation->width = v;
       }},
      {"truncation.center",
       [](ScenarioSpec& s, double v) {
         if (!s.truncation) s.truncation.emplace();
         s.truncation->center = v;
       }},
      {"nonlinear.p",
       [](ScenarioSpec& s, double v) {
         if (!s.nonlinear) s.nonlinear.emplace();
         s.nonlinear->p = v;
       }},
      {"nonlinear.sigma",
       [](ScenarioSpec& s, double v) {
         if (!s.nonlinear) s.nonlinear.emplace();
         s.nonlinear->sigma = v;
       }},
      {"absorber.strength",
       [](ScenarioSpec& s, double v) {
         if (!s.propagator.absorber) s.propagator.absorber.emplace();
         s.propagator.absorber->strength = v;
       }},
  };
  const auto it = setters.find(p);
  if (it == setters.end()) invalid("unknown sweep parameter '" + p + "'");
  it->second(spec, value);
}

std::vector<ScenarioSpec> expand_sweep(const ScenarioSpec& spec) {
  if (!spec.sweep) return {spec};
  std::vector<ScenarioSpec> out;
  for (double v : spec.sweep->values) {
    ScenarioSpec member = spec;
    member.sweep.reset();
    set_parameter(member, spec.sweep->parameter, v);
    member.name = spec.name + "[" + spec.sweep->parameter + "=" + fmt(v) + "]";
    out.push_back(std::move(member));
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"fig1", "const-intensity", "airy-truncated", "dark-soliton", "nonlinear-equivalence", "adjudicate",
          "synthesize"};
}

ScenarioSpec preset(std::string_view name) {
  ScenarioSpec s;
  s.name = std::string(name);
  s.output_dir = "out/" + s.name;
  if (name == "fig1") {
    s.family = {"gaussian-localized", 1.0, std::nullopt, 1.0};
    s.grid = {-20.0, 25.0, 4096};
    s.propagator = {Scheme::SplitStep, 5e-4, 2.0, 40, 25, std::nullopt};
    s.diagnostics.track = "peak";
    s.diagnostics.window_half_width = 2.0;
    return s;
  }
  if (name == "const-intensity" || name == "nonlinear-equivalence") {
    s.family.kind = "const-intensity-inv-harm";
    s.family.v0 = 1.0;
    s.family.a = 1.0;
    s.family.mu = 0.25;
    s.grid = {-80.0, 80.0, 16384};
    s.propagator = {Scheme::SplitStep, 1e-3, 1.0, 50, 10, Absorber{20.0, 1000.0}};
    s.truncation = TruncationWindow{TruncationWindow::Kind::Gaussian, 0.5, 16.0};
    s.diagnostics.track = "wavenumber-min";
    s.diagnostics.track_radius = 1.0;
    s.diagnostics.reference_q = 0.5;
    s.diagnostics.flatness_target = 1.0;
    if (name == "const-intensity") {
      s.diagnostics.window_half_width = 0.75;
      s.sweep = SweepSpec{"family.mu", {0.25, 1.0}};
    } else {
      s.diagnostics.window_half_width = 2.0;
      s.diagnostics.align_phase = true;
      s.nonlinear = NonlinearTerm{0.1, 2.0};
      s.sweep = SweepSpec{"nonlinear.p", {2.0, 4.0}};
    }
    return s;
  }
  if (name == "airy-truncated") {
    s.family.kind = "airy-free";
    s.family.a = 0.5;
    s.family.mu = 0.0;
    s.grid = {-100.0, 40.0, 8192};
    s.propagator = {Scheme::SplitStep, 1e-3, 3.0, 75, 10, Absorber{10.0, 20.0}};
    s.truncation = TruncationWindow{TruncationWindow::Kind::Gaussian, -5.0, 20.0};
    s.diagnostics.track = "main-lobe";
    s.diagnostics.track_radius = 0.7;
    s.diagnostics.reference_q = -1.0187929716474709;
    s.diagnostics.compare_analytic = false;
    s.sweep = SweepSpec{"truncation.width", {20.0, 10.0, 5.0}};
    return s;
  }
  if (name == "dark-soliton") {
    s.family.kind = "dark-soliton";
    s.family.sigma = 1.0;
    s.family.a = 1.0;
    s.grid = {-40.0, 40.0, 4096};
    s.propagator = {Scheme::SplitStep, 1e-3, 2.0, 50, 10, Absorber{10.0, 50.0}};
    s.truncation = TruncationWindow{TruncationWindow::Kind::Gaussian, 0.0, 10.0};
    s.diagnostics.track = "trough";
    s.diagnostics.track_radius = 2.0;
    s.diagnostics.window_half_width = 3.0;
    s.diagnostics.align_phase = true;
    return s;
  }
  if (name == "adjudicate") {
    s.kind = "adjudicate";
    s.adjudicate.emplace();
    return s;
  }
  if (name == "synthesize") {
    s.kind = "synthesize";
    s.synthesize = SynthesizeSpec{"gaussian_envelope.csv", 1.0, 0.0, +1};
    return s;
  }
  invalid("unknown preset '" + std::string(name) + "'");
}

}  // namespace selfaccel
