#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "selfaccel/errors.hpp"
#include "selfaccel/experiments.hpp"
#include "selfaccel/output.hpp"

namespace fs = std::filesystem;
using namespace selfaccel;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::string out;
  std::string scheme;
  double resolution_scale = 1.0;
  bool timings = false;
  int jobs = 0;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--scheme", o.scheme, "split-step or crank-nicolson")
      ->check(CLI::IsMember({"split-step", "crank-nicolson"}));
  cmd->add_option("--resolution-scale", o.resolution_scale, "Scale grid points up and dt down by this factor");
  cmd->add_flag("--timings", o.timings, "Record wall-clock timings in the manifest");
  cmd->add_option("--jobs", o.jobs, "Concurrent sweep members (0 = hardware concurrency)");
}

RunOptions to_options(const Overrides& o, fs::path base_dir) {
  RunOptions r;
  r.out_dir = o.out;
  r.base_dir = std::move(base_dir);
  if (!o.scheme.empty()) r.scheme = scheme_from_string(o.scheme);
  r.resolution_scale = o.resolution_scale;
  r.timings = o.timings;
  r.jobs = o.jobs;
  return r;
}

void print_summary(const RunResult& r) {
  const auto& m = r.manifest;
  std::cout << r.name << ": " << m.value("status", std::string("?")) << " -> " << r.out_dir.string() << "\n";
  auto show_fit = [](const nlohmann::json& j, const std::string& indent) {
    if (j.contains("fit") && j["fit"].contains("acc")) {
      std::cout << indent << "fit acc = " << format_number(j["fit"]["acc"].get<double>()) << " ("
                << j["fit"]["source"].get<std::string>() << ")\n";
    }
    if (j.contains("flatness_max") && !j["flatness_max"].is_null()) {
      std::cout << indent << "max flatness deviation = " << format_number(j["flatness_max"].get<double>()) << "\n";
    }
  };
  show_fit(m, "  ");
  if (m.contains("members")) {
    for (const auto& e : m["members"]) {
      std::cout << "  " << e["name"].get<std::string>() << ": " << e["status"].get<std::string>() << "\n";
      show_fit(e, "    ");
    }
  }
  if (m.contains("final_field_comparison")) {
    for (const auto& c : m["final_field_comparison"]) {
      std::cout << "  member " << c["member"].get<int>() << " vs 0: phase-aligned l_inf = "
                << format_number(c["l_inf"].get<double>()) << "\n";
    }
  }
}

int execute(const ScenarioSpec& spec, const RunOptions& options) {
  const auto r = run_scenario(spec, options);
  print_summary(r);
  if (spec.kind == "adjudicate") {
    std::ifstream t(r.out_dir / "ladders.txt");
    std::cout << t.rdbuf();
  }
  return r.ok ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accelerating waves under complex comoving potentials: closed forms, propagation and diagnostics"};
  app.require_subcommand(1);

  Overrides ov;
  std::vector<std::string> configs;
  bool sweep = false;
  auto* run = app.add_subcommand("run", "Run scenario config file(s)");
  run->add_option("config", configs, "Config file(s)")->required()->check(CLI::ExistingFile);
  run->add_flag("--sweep", sweep, "Run several configs concurrently, each in its own subdirectory");
  add_overrides(run, ov);

  std::string preset_name;
  bool list = false, print_config = false;
  auto* pre = app.add_subcommand("preset", "Run a built-in preset");
  pre->add_option("name", preset_name, "Preset name");
  pre->add_flag("--list", list, "List preset names");
  pre->add_flag("--print-config", print_config, "Print the preset as a config file instead of running it");
  add_overrides(pre, ov);

  auto* adj = app.add_subcommand("adjudicate", "Run the PDE-residual adjudications and print the ladders");
  add_overrides(adj, ov);

  std::string table;
  double syn_a = 1.0, syn_mu = 0.0;
  int syn_sign = 1;
  auto* syn = app.add_subcommand("synthesize", "Synthesize (G, V_I) from an envelope table q,psi[,v_real]");
  syn->add_option("table", table, "Envelope CSV")->required()->check(CLI::ExistingFile);
  syn->add_option("--a", syn_a, "Frame acceleration");
  syn->add_option("--mu", syn_mu, "Frame constant");
  syn->add_option("--sign", syn_sign, "Sign of G right of the last flip point (+1 or -1)");
  add_overrides(syn, ov);

  std::string family;
  auto* desc = app.add_subcommand("describe", "Print closed forms and branch metadata of a family as JSON");
  desc->add_option("family", family, "Family name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) {
      if (configs.size() > 1 && !sweep) {
        std::cerr << "several configs need --sweep\n";
        return kExitValidation;
      }
      std::vector<ScenarioSpec> specs;
      for (const auto& c : configs) specs.push_back(load_config(c));
      if (configs.size() == 1) return execute(specs[0], to_options(ov, fs::path(configs[0]).parent_path()));
      // Independent runs fan out, each writing to <out>/<name>.
      const fs::path root = ov.out.empty() ? fs::path("out") : fs::path(ov.out);
      std::vector<int> codes(specs.size(), 0);
      std::vector<std::string> messages(specs.size());
      {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < specs.size(); ++i) {
          pool.emplace_back([&, i] {
            try {
              auto opts = to_options(ov, fs::path(configs[i]).parent_path());
              opts.out_dir = root / specs[i].name;
              opts.jobs = 1;
              const auto r = run_scenario(specs[i], opts);
              codes[i] = r.ok ? 0 : kExitRuntime;
              messages[i] = specs[i].name + ": " + r.manifest.value("status", std::string("?"));
            } catch (const std::exception& e) {
              codes[i] = kExitRuntime;
              messages[i] = specs[i].name + ": " + e.what();
            }
          });
        }
      }
      int worst = 0;
      for (std::size_t i = 0; i < specs.size(); ++i) {
        std::cout << messages[i] << "\n";
        worst = std::max(worst, codes[i]);
      }
      return worst;
    }
    if (*pre) {
      if (list) {
        for (const auto& n : preset_names()) std::cout << n << "\n";
        return 0;
      }
      if (preset_name.empty()) {
        std::cerr << "preset name required (see --list)\n";
        return kExitValidation;
      }
      const auto spec = preset(preset_name);
      if (print_config) {
        std::cout << serialize_config(spec);
        return 0;
      }
      return execute(spec, to_options(ov, SELFACCEL_CONFIG_DIR));
    }
    if (*adj) return execute(preset("adjudicate"), to_options(ov, "."));
    if (*syn) {
      ScenarioSpec spec;
      spec.name = "synthesize";
      spec.kind = "synthesize";
      spec.synthesize = SynthesizeSpec{fs::absolute(table).string(), syn_a, syn_mu, syn_sign};
      spec.output_dir = "out/synthesize";
      return execute(spec, to_options(ov, "."));
    }
    if (*desc) {
      std::cout << describe_family(family).dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ParseError:
      case ErrorCode::ValidationError:
        return kExitValidation;
      default:
        return kExitRuntime;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
