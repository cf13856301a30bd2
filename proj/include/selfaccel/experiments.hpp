#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfaccel/diagnostics.hpp"
#include "selfaccel/scenario.hpp"

namespace selfaccel {

struct RunOptions {
  /// Overrides spec.output_dir when non-empty.
  std::filesystem::path out_dir;
  /// Directory against which relative table paths resolve.
  std::filesystem::path base_dir = ".";
  std::optional<Scheme> scheme;
  /// Multiplies grid points and divides dt; strides scale so recorded times are unchanged.
  double resolution_scale = 1.0;
  /// Adds wall-clock timings to the manifest (off by default so outputs are byte-stable).
  bool timings = false;
  /// Concurrent sweep members; 0 picks the hardware concurrency.
  int jobs = 0;
  /// Keeps the propagation record in the result (memory heavy).
  bool keep_record = false;
};

struct RunResult {
  std::string name;
  std::filesystem::path out_dir;
  nlohmann::json manifest;
  /// False when any step failed; partial outputs are still on disk.
  bool ok = true;
  std::optional<PropagationRecord> record;
  std::optional<ComplexWaveField> final_field;
  std::vector<RunResult> members;
};

/// Build, propagate, diagnose and emit. Sweeps run their members concurrently, each in its
/// own subdirectory, combined by member index. Deterministic for a fixed spec and options.
RunResult run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

/// Applies resolution scaling and scheme overrides (what run_scenario actually executes).
ScenarioSpec effective_spec(const ScenarioSpec& spec, const RunOptions& options);

/// Initial field: analytic lab-frame sample at t = 0 times the truncation window.
ComplexWaveField initial_field(const ScenarioSpec& spec);

/// Tracked feature positions of a record according to spec.diagnostics.track.
Trajectory track_feature(const PropagationRecord& record, const ScenarioSpec& spec);

/// Closed forms, frame constants and branch metadata for a family name.
nlohmann::json describe_family(const std::string& name);

struct EnvelopeTable {
  std::vector<double> q;
  std::vector<double> psi;
  std::vector<double> v_real;
};

/// Reads "q,psi[,v_real]" CSV. Throws IOFailure / ParseError.
EnvelopeTable read_envelope_table(const std::filesystem::path& path);

}  // namespace selfaccel
