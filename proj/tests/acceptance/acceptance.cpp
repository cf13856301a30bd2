// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "selfaccel/diagnostics.hpp"
#include "selfaccel/errors.hpp"
#include "selfaccel/experiments.hpp"
#include "selfaccel/families.hpp"
#include "selfaccel/residual.hpp"
#include "selfaccel/scenario.hpp"
#include "selfaccel/synthesis.hpp"

using namespace selfaccel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

/// Runs a criterion, turning unexpected exceptions into a FAIL line.
void criterion(int id, const std::string& title, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(id, pass, title, detail);
  } catch (const std::exception& e) {
    report(id, false, title, std::string("exception: ") + e.what());
  }
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_diff(const ComplexWaveField& a, const ComplexWaveField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

/// Least-squares slope of log(err) against log(dt).
double loglog_slope(const std::vector<double>& dt, const std::vector<double>& err) {
  const double n = static_cast<double>(dt.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dt.size(); ++i) {
    const double x = std::log(dt[i]), y = std::log(err[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::map<std::string, std::vector<double>> read_csv_columns(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t c = 0; c < names.size() && std::getline(ss, cell, ','); ++c)
      cols[names[c]].push_back(std::strtod(cell.c_str(), nullptr));
  }
  return cols;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_bytes(p)); }

/// Relative paths of all regular files below root, sorted.
std::vector<std::string> tree(const fs::path& root) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root).string());
  std::sort(files.begin(), files.end());
  return files;
}

PropagationRecord run_gaussian(double dt, int record_stride, Scheme scheme = Scheme::SplitStep) {
  const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
  const Grid1D grid(-20.0, 20.0, 2560);  // dx = 1/64
  PropagatorConfig cfg;
  cfg.dt = dt;
  cfg.n_steps = static_cast<int>(std::lround(1.0 / dt));
  cfg.scheme = scheme;
  cfg.record_stride = record_stride;
  return propagate(assemble_lab_frame(fam, grid, 0.0), comoving_potential(fam), std::nullopt, cfg);
}

ComplexWaveField packet(const Grid1D& g, double k) {
  ComplexWaveField f(g);
  for (int j = 0; j < g.size(); ++j) f.values[j] = std::polar(std::exp(-0.5 * g.x(j) * g.x(j)), k * g.x(j));
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "selfaccel_acceptance";
  const fs::path config_dir = SELFACCEL_CONFIG_DIR;
  fs::remove_all(work);
  fs::create_directories(work);

  criterion(1, "master-equation residuals", [] {
    const auto t0 = Clock::now();
    const std::vector<std::pair<std::string, SolutionFamily>> families = {
        {"airy", SolutionFamily::airy_free(0.5, 0.0)},
        {"inv-harm mu=a^2/4V0^2", SolutionFamily::const_intensity_inv_harm(1.0, 1.0, 0.25)},
        {"inv-harm mu=1", SolutionFamily::const_intensity_inv_harm(1.0, 1.0, 1.0)},
        {"power-law n=2", SolutionFamily::const_intensity_power_law(1.0, 2, 1.0)},
        {"power-law n=4", SolutionFamily::const_intensity_power_law(1.0, 4, 1.0)},
        {"gaussian", SolutionFamily::gaussian_localized(1.0, 1.0)},
        {"dark soliton", SolutionFamily::dark_soliton(1.0, 1.0)},
    };
    std::vector<double> q(100);
    for (int i = 0; i < 100; ++i) q[i] = -3.0 + 6.0 * i / 99.0;
    double worst = 0.0;
    std::string worst_name;
    bool analytic = true;
    for (const auto& [name, f] : families) {
      const auto g = ode_residual_G(envelope(f), auxiliary_g(f), v_real_profile(f), f.frame(), q);
      const auto vi = ode_residual_VI(auxiliary_g(f), envelope(f), v_imag_profile(f), q);
      analytic = analytic && g.derivative_scheme == "analytic" && vi.derivative_scheme == "analytic";
      for (double r : {g.l_inf, vi.l_inf})
        if (r > worst) worst = r, worst_name = name;
    }
    const double secs = seconds_since(t0);
    return std::pair{worst < 1e-10 && analytic && secs < 1.0,
                     fmt("max L_inf %.2e (%s) over 7 families x 100 samples, %.3f s", worst, worst_name.c_str(), secs)};
  });

  criterion(2, "constant gain at the square-root threshold", [] {
    const double v0 = 1.0, a = 1.0, mu = a * a / (4 * v0 * v0);
    const auto f = SolutionFamily::const_intensity_inv_harm(v0, a, mu);
    auto s = synthesize(EnvelopeProfile::analytic([](double) { return 1.0; }, [](double) { return 0.0; },
                                                  [](double) { return 0.0; }),
                        v_real_profile(f), f.frame());
    double dev_vi = 0.0, dev_g = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double q = -10.0 + 0.01 * i;
      dev_vi = std::max(dev_vi, std::abs(v_imag(f, q) - v0 / std::numbers::sqrt2));
      dev_g = std::max(dev_g, std::abs(s->g().value(q) - std::numbers::sqrt2 * v0 * (q - a / (2 * v0))));
    }
    return std::pair{f.at_constant_gain_threshold() && dev_vi < 1e-10 && dev_g < 1e-10 &&
                         s->g().branch.kind == "smooth-signed",
                     fmt("max |V_I - V0/sqrt2| = %.2e, max |G_syn - sqrt2 V0 (q - a/2V0)| = %.2e on [-10,10]", dev_vi,
                         dev_g)};
  });

  PropagationRecord gaussian_record = run_gaussian(1e-3, 50);

  criterion(3, "exact gaussian propagation", [&] {
    const auto t0 = Clock::now();
    const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
    const auto exact = assemble_lab_frame(fam, gaussian_record.grid, 1.0);
    const double err = max_diff(gaussian_record.fields.back(), exact);
    std::vector<double> dts = {4e-3, 2e-3, 1e-3, 5e-4}, errs;
    for (double dt : dts) {
      const auto r = run_gaussian(dt, static_cast<int>(std::lround(1.0 / dt)));
      errs.push_back(max_diff(r.fields.back(), exact));
    }
    const double order = loglog_slope(dts, errs);
    const double secs = seconds_since(t0);
    return std::pair{err < 1e-4 && std::abs(order - 2.0) <= 0.2 && secs < 60.0,
                     fmt("L_inf(t=1, dt=1e-3) = %.2e; errors %.2e %.2e %.2e %.2e, order %.3f; %.1f s", err, errs[0],
                         errs[1], errs[2], errs[3], order, secs)};
  });

  criterion(4, "self-acceleration without force", [&] {
    const auto fam = SolutionFamily::gaussian_localized(1.0, 1.0);
    const auto pot = comoving_potential(fam);
    Trajectory traj;
    double force = 0.0;
    for (std::size_t i = 0; i < gaussian_record.fields.size(); ++i) {
      const auto& f = gaussian_record.fields[i];
      traj.times.push_back(gaussian_record.times[i]);
      traj.positions.push_back(centroid(f));
      traj.norms.push_back(norm(f));
      for (int j = 0; j < f.grid.size(); ++j)
        force += std::abs(pot.lab_force_gradient(f.grid.x(j), gaussian_record.times[i]) * std::norm(f.values[j]));
    }
    const auto fit = fit_parabola(traj);
    const auto ehr = ehrenfest_residual(gaussian_record, pot);
    double ehr_dev = 0.0;
    for (double r : ehr.residuals) ehr_dev = std::max(ehr_dev, std::abs(r - 1.0));

    // Hermitian controls: free packet and constant force V_R = x.
    const Grid1D g(-40.0, 40.0, 2048);
    PropagatorConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_steps = 1000;
    cfg.record_stride = 50;
    const auto free_pot = uniform_potential(0.0, 0.0);
    const auto lin_pot = static_potential([](double x) { return x; }, [](double) { return 0.0; },
                                          [](double) { return 1.0; }, "linear");
    double control = 0.0;
    for (const auto* p : {&free_pot, &lin_pot}) {
      const auto rec = propagate(packet(g, 1.0), *p, std::nullopt, cfg);
      for (double r : ehrenfest_residual(rec, *p).residuals) control = std::max(control, std::abs(r));
    }
    return std::pair{std::abs(fit.acc - 1.0) <= 0.02 && force == 0.0 && ehr_dev <= 0.05 && control < 1e-4,
                     fmt("centroid acc %.6f, sum |dV_R/dx| |Psi|^2 = %g, max |r - 1| = %.2e over %zu interior times, "
                         "hermitian controls max |r| = %.2e",
                         fit.acc, force, ehr_dev, ehr.residuals.size(), control)};
  });

  // Every preset twice; the first set also feeds criteria 5, 7, 8, 9.
  std::map<std::string, RunResult> runs;
  std::vector<std::string> determinism_notes;
  bool identical = true;
  double preset_seconds = 0.0;
  double adjudicate_seconds = 0.0;
  for (const auto& name : preset_names()) {
    for (int pass = 0; pass < 2; ++pass) {
      RunOptions opts;
      opts.out_dir = work / (pass == 0 ? "a" : "b") / name;
      opts.base_dir = config_dir;
      const auto t0 = Clock::now();
      try {
        auto r = run_scenario(preset(name), opts);
        if (pass == 0) runs.emplace(name, std::move(r));
      } catch (const std::exception& e) {
        identical = false;
        determinism_notes.push_back(name + ": " + e.what());
      }
      const double secs = seconds_since(t0);
      preset_seconds += secs;
      if (name == "adjudicate" && pass == 0) adjudicate_seconds = secs;
    }
  }

  criterion(5, "constant-intensity dynamics", [&] {
    const auto& r = runs.at("const-intensity");
    const auto spec = preset("const-intensity");
    const fs::path member = r.out_dir / r.manifest["members"][0]["directory"].get<std::string>();
    const auto m = read_json(member / "manifest.json");
    if (m["family"]["mu"].get<double>() != 0.25) return std::pair{false, std::string("member 0 is not mu = 0.25")};
    const double dx = m["grid"]["dx"].get<double>();
    const auto ts = read_csv_columns(member / "timeseries.csv");
    const auto& t = ts.at("t");
    double flat = 0.0, track = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] > 1.0 + 1e-12) break;
      flat = std::max(flat, ts.at("flatness")[i]);
      track = std::max(track, std::abs(ts.at("tracked")[i] - ts.at("tracked")[0] - 0.5 * t[i] * t[i]));
    }
    return std::pair{flat < 5e-3 && track <= 2 * dx && t.back() >= 1.0 - 1e-12,
                     fmt("max interior flatness %.2e (window +-%.2f), max |shift - t^2/2| = %.2e vs 2dx = %.2e over "
                         "%zu records",
                         flat, spec.diagnostics.window_half_width, track, 2 * dx, t.size())};
  });

  criterion(6, "pure-gain norm law", [] {
    const Grid1D g(-20.0, 20.0, 1024);
    const auto init = packet(g, 0.0);
    std::string detail;
    bool pass = true;
    for (Scheme s : {Scheme::SplitStep, Scheme::CrankNicolson}) {
      PropagatorConfig cfg;
      cfg.dt = 1e-3;
      cfg.n_steps = 1000;
      cfg.scheme = s;
      cfg.record_stride = 1000;
      const auto rec = propagate(init, uniform_potential(0.0, 0.3), std::nullopt, cfg);
      const double ratio = rec.norms.back() / rec.norms.front();
      const double dev = std::abs(ratio - std::exp(0.6));
      pass = pass && dev < 1e-6;
      detail += fmt("%s N(1)/N(0) - e^0.6 = %.2e; ", std::string(to_string(s)).c_str(), ratio - std::exp(0.6));
    }
    return std::pair{pass, detail.substr(0, detail.size() - 2)};
  });

  criterion(7, "adjudications converge", [&] {
    const auto& r = runs.at("adjudicate");
    const auto decisions = read_json(r.out_dir / "decisions.json");
    const auto dark = adjudicate_dark_soliton_mu();
    const auto shift = adjudicate_nonlinear_shift();
    const bool dark_ok = dark.selected && *dark.selected == 1.0 && dark.ladder_a.converges &&
                         std::abs(dark.ladder_a.observed_order - 2.0) <= 0.5 && dark.ladder_b.final_residual > 1e-2;
    const bool shift_ok = shift.selected && (*shift.selected == 1.0 || *shift.selected == 2.0) &&
                          (shift.ladder_a.converges != shift.ladder_b.converges);
    const bool emitted = decisions.is_array() && decisions.size() == 2 && fs::exists(r.out_dir / "ladders.txt");
    return std::pair{dark_ok && shift_ok && emitted && adjudicate_seconds < 120.0,
                     fmt("dark mu selected %+g (order %.2f, final %.1e; rejected floor %.2e); c_shift selected %g; "
                         "%zu records emitted; %.2f s",
                         dark.selected.value_or(NAN), dark.ladder_a.observed_order, dark.ladder_a.final_residual,
                         dark.ladder_b.final_residual, shift.selected.value_or(NAN),
                         decisions.is_array() ? decisions.size() : 0, adjudicate_seconds)};
  });

  criterion(8, "nonlinear equivalence", [&] {
    const auto& m = runs.at("nonlinear-equivalence").manifest;
    const auto& cmp = m["final_field_comparison"];
    if (cmp.size() != 1) return std::pair{false, std::string("missing p=2 vs p=4 comparison")};
    const double l_inf = cmp[0]["l_inf"].get<double>();
    const auto w = cmp[0]["window"];
    return std::pair{l_inf < 1e-3, fmt("phase-aligned L_inf(p=4 vs p=2, t=1) = %.2e on [%.2f, %.2f], removed phase %.4f",
                                       l_inf, w[0].get<double>(), w[1].get<double>(),
                                       cmp[0]["removed_phase"].get<double>())};
  });

  criterion(9, "truncated airy main lobe", [&] {
    const auto& members = runs.at("airy-truncated").manifest["members"];
    std::vector<double> widths, errs;
    std::string detail;
    for (const auto& mem : members) {
      const double acc = mem["fit"]["acc"].get<double>();
      widths.push_back(mem["value"].get<double>());
      errs.push_back(std::abs(acc - 0.5) / 0.5);
      detail += fmt("W=%g acc %.4f (%.1f%%); ", widths.back(), acc, 100 * errs.back());
    }
    bool monotone = widths.size() == 3;
    for (std::size_t i = 1; i < widths.size(); ++i)
      monotone = monotone && widths[i] < widths[i - 1] && errs[i] > errs[i - 1];
    return std::pair{monotone && !errs.empty() && errs[0] < 0.05, detail + (monotone ? "monotone" : "not monotone")};
  });

  criterion(10, "determinism", [&] {
    std::size_t compared = 0;
    for (const auto& name : preset_names()) {
      const auto a = work / "a" / name, b = work / "b" / name;
      if (!fs::exists(a) || !fs::exists(b)) {
        identical = false;
        determinism_notes.push_back(name + ": missing output");
        continue;
      }
      const auto fa = tree(a), fb = tree(b);
      if (fa != fb) {
        identical = false;
        determinism_notes.push_back(name + ": file lists differ");
        continue;
      }
      for (const auto& f : fa) {
        ++compared;
        if (read_bytes(a / f) != read_bytes(b / f)) {
          identical = false;
          determinism_notes.push_back(name + "/" + f);
        }
      }
    }
    std::string detail = fmt("%zu presets x 2 runs, %zu files compared byte-for-byte, %.1f s total",
                             preset_names().size(), compared, preset_seconds);
    for (const auto& n : determinism_notes) detail += "; differs: " + n;
    return std::pair{identical && compared > 0, detail};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
