#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfaccel/families.hpp"
#include "selfaccel/potential.hpp"
#include "selfaccel/propagator.hpp"
#include "selfaccel/residual.hpp"

namespace selfaccel {

/// Multiplicative aperture applied to the initial field.
struct TruncationWindow {
  enum class Kind { Hard, Gaussian };
  Kind kind = Kind::Gaussian;
  double center = 0.0;
  double width = 1.0;

  /// hard: indicator of [center - width, center + width]; gaussian: exp(-(x - center)^2 / (2 width^2)).
  double operator()(double x) const;
  bool operator==(const TruncationWindow&) const = default;
};

std::string_view to_string(TruncationWindow::Kind kind);

struct FamilySpec {
  /// Kebab-case family name, see family_tag_from_string.
  std::string kind = "gaussian-localized";
  double a = 1.0;
  /// Required for airy-free and const-intensity-inv-harm; derived for the others.
  std::optional<double> mu;
  double omega = 1.0;
  double v0 = 1.0;
  double sigma = 1.0;
  int n = 2;
  int branch_sign = -1;

  bool operator==(const FamilySpec&) const = default;
};

struct GridSpec {
  double x_min = -20.0;
  double x_max = 25.0;
  int n = 4096;

  bool operator==(const GridSpec&) const = default;
};

struct PropagationSpec {
  Scheme scheme = Scheme::SplitStep;
  double dt = 5e-4;
  double t_end = 2.0;
  /// Steps between recorded snapshots.
  int record_stride = 40;
  /// Recorded snapshots between emitted fields_t*.csv files.
  int field_stride = 25;
  std::optional<Absorber> absorber;

  bool operator==(const PropagationSpec&) const = default;
};

struct DiagnosticsSpec {
  /// peak | trough | centroid | main-lobe | wavenumber-min | none
  std::string track = "peak";
  double track_radius = 1.0;
  /// Comoving coordinate of the tracked feature and of the interior window centre.
  double reference_q = 0.0;
  double window_half_width = 1.0;
  std::optional<double> flatness_target;
  bool compare_analytic = true;
  bool align_phase = false;
  double fit_t_min = 0.0;
  std::optional<double> fit_t_max;

  bool operator==(const DiagnosticsSpec&) const = default;
};

struct SweepSpec {
  /// "section.key", e.g. "family.mu" or "truncation.width".
  std::string parameter;
  std::vector<double> values;

  bool operator==(const SweepSpec&) const = default;
};

struct AdjudicateSpec {
  bool dark_soliton_mu = true;
  bool nonlinear_shift = true;
  LadderSpec ladder;

  bool operator==(const AdjudicateSpec& o) const;
};

struct SynthesizeSpec {
  /// CSV with header "q,psi" or "q,psi,v_real"; relative paths resolve against the config directory.
  std::string table;
  double a = 1.0;
  double mu = 0.0;
  int sign_at_right = +1;

  bool operator==(const SynthesizeSpec&) const = default;
};

struct ScenarioSpec {
  std::string name = "scenario";
  /// propagate | adjudicate | synthesize
  std::string kind = "propagate";
  FamilySpec family;
  GridSpec grid;
  PropagationSpec propagator;
  std::optional<TruncationWindow> truncation;
  std::optional<NonlinearTerm> nonlinear;
  std::optional<SweepSpec> sweep;
  DiagnosticsSpec diagnostics;
  std::optional<AdjudicateSpec> adjudicate;
  std::optional<SynthesizeSpec> synthesize;
  std::string output_dir;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Line-oriented `[section]` / `key = value` format; '#' starts a comment.
/// Throws ParseError (with line number) or ValidationError.
ScenarioSpec parse_config(std::string_view text);
ScenarioSpec load_config(const std::string& path);
std::string serialize_config(const ScenarioSpec& spec);

/// Throws ValidationError naming the violated invariant.
void validate(const ScenarioSpec& spec);

SolutionFamily build_family(const FamilySpec& spec);

/// Applies `value` to the parameter path used by [sweep].
void set_parameter(ScenarioSpec& spec, std::string_view parameter, double value);
/// One spec per sweep value (sweep cleared, name suffixed); the spec itself when no sweep.
std::vector<ScenarioSpec> expand_sweep(const ScenarioSpec& spec);

/// Built-in presets: fig1, const-intensity, airy-truncated, dark-soliton,
/// nonlinear-equivalence, adjudicate, synthesize.
std::vector<std::string> preset_names();
ScenarioSpec preset(std::string_view name);

}  // namespace selfaccel
