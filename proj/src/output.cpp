#include "selfaccel/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "selfaccel/errors.hpp"

namespace selfaccel {
namespace fs = std::filesystem;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IOFailure, "cannot create '" + path.parent_path().string() + "': " + ec.message());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot open '" + path.string() + "' for writing");
  return out;
}

void check(const std::ofstream& out, const fs::path& path) {
  if (!out) throw Error(ErrorCode::IOFailure, "write to '" + path.string() + "' failed");
}

}  // namespace

void write_field_csv(const ComplexWaveField& field, const fs::path& path) {
  auto out = open_out(path);
  out << "x,re,im,density\n";
  for (int j = 0; j < field.grid.size(); ++j) {
    const auto v = field.values[j];
    out << format_number(field.grid.x(j)) << ',' << format_number(v.real()) << ',' << format_number(v.imag()) << ','
        << format_number(std::norm(v)) << '\n';
  }
  check(out, path);
}

void write_table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                     const fs::path& path) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  check(out, path);
}

void emit_density_pgm(const PropagationRecord& record, const fs::path& path) {
  const auto& fields = record.fields;
  if (fields.size() < 2) throw Error(ErrorCode::InvalidArgument, "density map needs >= 2 snapshots");
  const int width = fields.front().grid.size();
  double peak = 0.0;
  for (const auto& f : fields) {
    for (const auto& v : f.values) peak = std::max(peak, std::norm(v));
  }
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw Error(ErrorCode::NormalizationError, "density map has max |Psi|^2 = " + format_number(peak));
  }
  auto out = open_out(path, true);
  out << "P5\n" << width << ' ' << fields.size() << "\n65535\n";
  std::vector<unsigned char> row(2 * static_cast<std::size_t>(width));
  for (const auto& f : fields) {
    for (int j = 0; j < width; ++j) {
      const auto level = static_cast<unsigned>(std::lround(65535.0 * std::norm(f.values[j]) / peak));
      row[2 * j] = static_cast<unsigned char>(level >> 8);
      row[2 * j + 1] = static_cast<unsigned char>(level & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  check(out, path);

  const auto& g = fields.front().grid;
  nlohmann::json side;
  side["format"] = "P5 16-bit big-endian";
  side["columns"] = width;
  side["rows"] = fields.size();
  side["x_min"] = g.x_min();
  side["x_max"] = g.x_max();
  side["dx"] = g.dx();
  side["t_first"] = record.times.front();
  side["t_last"] = record.times[fields.size() - 1];
  side["row_times"] = std::vector<double>(record.times.begin(), record.times.begin() + fields.size());
  side["normalization"] = peak;
  side["value"] = "round(65535 * |Psi|^2 / normalization)";
  auto sidecar = path;
  sidecar.replace_extension(".json");
  write_json(side, sidecar);
}

void write_density_csv(const PropagationRecord& record, const fs::path& path, int max_columns) {
  if (record.fields.empty()) return;
  const int n = record.fields.front().grid.size();
  const int stride = std::max(1, (n + max_columns - 1) / max_columns);
  auto out = open_out(path);
  out << "# t x density (blocks separated by blank lines, column stride " << stride << ")\n";
  for (std::size_t i = 0; i < record.fields.size(); ++i) {
    const auto& f = record.fields[i];
    for (int j = 0; j < n; j += stride) {
      out << format_number(record.times[i]) << ' ' << format_number(f.grid.x(j)) << ' '
          << format_number(std::norm(f.values[j])) << '\n';
    }
    out << '\n';
  }
  check(out, path);
}

void write_json(const nlohmann::json& value, const fs::path& path) {
  auto out = open_out(path);
  out << value.dump(2) << '\n';
  check(out, path);
}

nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["l_inf"] = r.l_inf;
  j["l2"] = r.l2;
  j["sample_count"] = r.sample_count;
  j["skipped"] = r.skipped;
  j["grid_step"] = r.grid_step;
  j["derivative_scheme"] = r.derivative_scheme;
  if (r.derivative_scheme != "analytic") {
    j["fd_order"] = r.fd_order;
    j["fd_step"] = r.fd_step;
  }
  j["convergence_order"] = r.convergence_order ? nlohmann::json(*r.convergence_order) : nlohmann::json();
  return j;
}

nlohmann::json to_json(const ResidualLadder& ladder) {
  nlohmann::json j;
  j["levels"] = nlohmann::json::array();
  for (const auto& lv : ladder.levels) {
    j["levels"].push_back({{"dx", lv.dx}, {"dt_probe", lv.dt_probe}, {"report", to_json(lv.report)}});
  }
  j["observed_order"] = ladder.observed_order;
  j["final_residual"] = ladder.final_residual;
  j["converges"] = ladder.converges;
  return j;
}

nlohmann::json to_json(const DecisionRecord& r) {
  nlohmann::json j;
  j["claim"] = r.claim;
  j["candidate_a"] = r.candidate_a;
  j["candidate_b"] = r.candidate_b;
  j["status"] = r.status;
  j["selected"] = r.selected ? nlohmann::json(*r.selected) : nlohmann::json();
  j["ladder_a"] = to_json(r.ladder_a);
  j["ladder_b"] = to_json(r.ladder_b);
  return j;
}

nlohmann::json to_json(const BranchRule& b) {
  return {{"kind", b.kind}, {"sign_at_right", b.sign_at_right}, {"flip_points", b.flip_points}};
}

std::string format_ladder_table(const DecisionRecord& r) {
  std::string out = r.claim + ": " + r.status;
  if (r.selected) out += " (selected " + format_number(*r.selected) + ")";
  out += "\n";
  char line[160];
  std::snprintf(line, sizeof line, "  %-10s %-5s %-12s %-12s %-12s\n", "candidate", "level", "dx", "dt_probe",
                "l_inf");
  out += line;
  auto rows = [&](double c, const ResidualLadder& ladder) {
    for (std::size_t i = 0; i < ladder.levels.size(); ++i) {
      const auto& lv = ladder.levels[i];
      std::snprintf(line, sizeof line, "  %-10.6g %-5zu %-12.4e %-12.4e %-12.4e\n", c, i, lv.dx, lv.dt_probe,
                    lv.report.l_inf);
      out += line;
    }
    std::snprintf(line, sizeof line, "  %-10.6g order %.3f, final %.3e, converges %s\n", c, ladder.observed_order,
                  ladder.final_residual, ladder.converges ? "yes" : "no");
    out += line;
  };
  rows(r.candidate_a, r.ladder_a);
  rows(r.candidate_b, r.ladder_b);
  return out;
}

}  // namespace selfaccel
