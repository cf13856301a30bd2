#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "selfaccel/diagnostics.hpp"
#include "selfaccel/errors.hpp"
#include "selfaccel/families.hpp"
#include "selfaccel/output.hpp"

using namespace selfaccel;
namespace fs = std::filesystem;

namespace {

struct Pgm {
  int width = 0, height = 0, maxval = 0;
  std::vector<int> pixels;
};

Pgm read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  Pgm p;
  in >> magic >> p.width >> p.height >> p.maxval;
  REQUIRE(magic == "P5");
  in.get();
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE(raw.size() == static_cast<std::size_t>(2 * p.width * p.height));
  for (std::size_t i = 0; i < raw.size(); i += 2) p.pixels.push_back(raw[i] * 256 + raw[i + 1]);
  return p;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "selfaccel_unit_output";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("density map of the gaussian family follows the parabola") {
  const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
  Grid1D g(-20.0, 25.0, 1024);
  PropagatorConfig cfg;
  cfg.dt = 2e-3;
  cfg.n_steps = 1000;
  cfg.record_stride = 50;
  const auto rec = propagate(assemble_lab_frame(fam, g, 0.0), comoving_potential(fam), std::nullopt, cfg);
  const auto path = scratch("gauss.pgm");
  emit_density_pgm(rec, path);
  const auto img = read_pgm(path);
  CHECK(img.width == g.size());
  CHECK(img.height == static_cast<int>(rec.times.size()));
  CHECK(img.maxval == 65535);
  int global_max = 0;
  for (int row = 0; row < img.height; ++row) {
    int best = 0;
    for (int c = 1; c < img.width; ++c)
      if (img.pixels[row * img.width + c] > img.pixels[row * img.width + best]) best = c;
    global_max = std::max(global_max, img.pixels[row * img.width + best]);
    // the peak of psi^2 sits at q = -a / omega^2 = -1
    const double t = rec.times[row];
    const double expected = 0.5 * t * t - 1.0;
    CHECK(std::abs(g.x(best) - expected) <= 2.0 * g.dx());
  }
  CHECK(global_max == 65535);
  CHECK(fs::exists(scratch("gauss.json")));
}

TEST_CASE("density map preconditions") {
  Grid1D g(-1.0, 1.0, 32);
  PropagationRecord zero{g, {0.0, 1.0}, {0.0, 0.0}, {}, {}, {}, {ComplexWaveField(g), ComplexWaveField(g)}};
  try {
    emit_density_pgm(zero, scratch("zero.pgm"));
    FAIL("expected NormalizationError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NormalizationError);
  }
  PropagationRecord single{g, {0.0}, {1.0}, {}, {}, {}, {ComplexWaveField(g, std::vector<Complex>(32, 1.0))}};
  try {
    emit_density_pgm(single, scratch("single.pgm"));
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  PropagationRecord ok{g, {0.0, 1.0}, {1.0, 1.0}, {}, {}, {},
                       {ComplexWaveField(g, std::vector<Complex>(32, 1.0)),
                        ComplexWaveField(g, std::vector<Complex>(32, 1.0))}};
  try {
    {
      std::ofstream blocker(scratch("blocker"));
    }
    emit_density_pgm(ok, scratch("blocker") / "x.pgm");
    FAIL("expected IOFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IOFailure);
  }
}

TEST_CASE("field csv layout") {
  Grid1D g(0.0, 1.0, 16);
  ComplexWaveField f(g, std::vector<Complex>(16, Complex(3.0, 4.0)));
  const auto path = scratch("field.csv");
  write_field_csv(f, path);
  std::ifstream in(path);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "x,re,im,density");
  CHECK(first == "0,3,4,25");
}

TEST_CASE("decision records serialize both ladders") {
  DecisionRecord d;
  d.claim = "demo";
  d.candidate_a = 1.0;
  d.candidate_b = 2.0;
  d.ladder_a.levels.push_back({0.1, 0.01, {}});
  d.selected = 1.0;
  d.status = "selected";
  const auto j = to_json(d);
  CHECK(j["claim"] == "demo");
  CHECK(j["selected"] == 1.0);
  CHECK(j["ladder_a"]["levels"].size() == 1);
  CHECK(format_ladder_table(d).find("demo") != std::string::npos);
}
