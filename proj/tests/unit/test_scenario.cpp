#include <doctest.h>

#include <filesystem>
#include <string>

#include "selfaccel/errors.hpp"
#include "selfaccel/experiments.hpp"
#include "selfaccel/scenario.hpp"

using namespace selfaccel;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("shipped config files equal the built-in presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto path = std::filesystem::path(SELFACCEL_CONFIG_DIR) / (name + ".cfg");
    REQUIRE(std::filesystem::exists(path));
    CHECK(load_config(path.string()) == preset(name));
  }
}

TEST_CASE("serialization round-trips") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto spec = preset(name);
    const auto text = serialize_config(spec);
    CHECK(parse_config(text) == spec);
    CHECK(serialize_config(parse_config(text)) == text);
  }
}

TEST_CASE("constant-intensity mu below the square-root threshold is rejected") {
  const std::string text =
      "[family]\nkind = const-intensity-inv-harm\nv0 = 1\na = 1\nmu = 0.1\n";
  CHECK(code_of([&] { (void)parse_config(text); }) == ErrorCode::ValidationError);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(code_of([] { (void)parse_config(""); }) == ErrorCode::ParseError);
  try {
    (void)parse_config("[family]\nkind = gaussian-localized\nbogus = 3\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK(code_of([] { (void)parse_config("[family]\nomega = abc\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { (void)parse_config("[nowhere]\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { (void)parse_config("[family]\nkind = gaussian-localized\n[grid]\nn = 8\n"); }) ==
        ErrorCode::ValidationError);
}

TEST_CASE("sweeps expand into named members") {
  const auto spec = preset("airy-truncated");
  const auto members = expand_sweep(spec);
  REQUIRE(members.size() == 3);
  CHECK(members[0].truncation->width == 20.0);
  CHECK(members[2].truncation->width == 5.0);
  CHECK_FALSE(members[1].sweep.has_value());
  CHECK(members[1].name != members[0].name);
  auto s = preset("fig1");
  set_parameter(s, "family.omega", 2.0);
  CHECK(s.family.omega == 2.0);
  CHECK(code_of([&] { set_parameter(s, "family.nope", 1.0); }) == ErrorCode::ValidationError);
}

TEST_CASE("resolution scaling keeps recorded times") {
  const auto spec = preset("fig1");
  RunOptions opts;
  opts.resolution_scale = 2.0;
  const auto scaled = effective_spec(spec, opts);
  CHECK(scaled.grid.n == 2 * spec.grid.n);
  CHECK(scaled.propagator.dt == doctest::Approx(spec.propagator.dt / 2));
  CHECK(scaled.propagator.dt * scaled.propagator.record_stride ==
        doctest::Approx(spec.propagator.dt * spec.propagator.record_stride));
}

TEST_CASE("truncation windows") {
  TruncationWindow hard{TruncationWindow::Kind::Hard, 1.0, 2.0};
  CHECK(hard(-1.0) == 1.0);
  CHECK(hard(3.5) == 0.0);
  TruncationWindow gauss{TruncationWindow::Kind::Gaussian, 1.0, 2.0};
  CHECK(gauss(1.0) == 1.0);
  CHECK(gauss(3.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("describe reports frozen constants and flags") {
  const auto d = describe_family("dark-soliton");
  CHECK(d.dump().find("sigma") != std::string::npos);
  CHECK_THROWS_AS(describe_family("nope"), Error);
}

TEST_CASE("small propagation scenario writes the documented outputs") {
  auto spec = preset("fig1");
  spec.grid = {-10.0, 12.0, 512};
  spec.propagator.dt = 1e-2;
  spec.propagator.t_end = 1.0;
  spec.propagator.record_stride = 10;
  spec.propagator.field_stride = 5;
  const auto dir = std::filesystem::temp_directory_path() / "selfaccel_unit_small_run";
  std::filesystem::remove_all(dir);
  RunOptions opts;
  opts.out_dir = dir;
  const auto r = run_scenario(spec, opts);
  CHECK(r.ok);
  for (const char* f : {"manifest.json", "timeseries.csv", "density.pgm", "density.json", "density.csv"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(r.manifest["status"] == "ok");
  CHECK(r.manifest["fit"]["acc"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
  std::filesystem::remove_all(dir);
}
