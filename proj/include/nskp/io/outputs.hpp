#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nskp/io/config.hpp"

namespace nskp::io {

using Json = nlohmann::ordered_json;

/// RFC 4180 style table: CRLF line ends, fields quoted only when needed,
/// doubles at 17 significant digits so a rerun reproduces the bytes.
class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) : columns_(header.size()) {
    line(header);
    rows_ = 0;  // the header is not a row
  }

  Csv& row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(detail::format_double(v));
    return line(cells);
  }

  Csv& row(const std::vector<std::string>& cells) { return line(cells); }

  const std::string& str() const noexcept { return text_; }
  std::size_t rows() const noexcept { return rows_; }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  Csv& line(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw ContractViolation("csv row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + quote(cells[i]);
    text_ += "\r\n";
    ++rows_;
    return *this;
  }

  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

inline std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256: digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct OutputFile {
  std::string name;
  std::string kind;  // data | summary | config | checkpoint
  std::string content;
};

/// Files a report turns into, held in memory until emit_outputs writes them.
struct OutputBundle {
  std::vector<OutputFile> files;

  void add(std::string name, std::string kind, std::string content) {
    for (const auto& f : files) {
      if (f.name == name) throw ContractViolation("duplicate output file " + name);
    }
    files.push_back({std::move(name), std::move(kind), std::move(content)});
  }
  void add_csv(std::string name, const Csv& csv) { add(std::move(name), "data", csv.str()); }
  void add_json(std::string name, const Json& j) { add(std::move(name), "summary", j.dump(2) + "\n"); }
  void merge(OutputBundle other) {
    for (auto& f : other.files) add(std::move(f.name), std::move(f.kind), std::move(f.content));
  }

  const OutputFile* find(const std::string& name) const {
    for (const auto& f : files) {
      if (f.name == name) return &f;
    }
    return nullptr;
  }
};

struct ManifestEntry {
  std::string path;
  std::string kind;
  std::size_t bytes = 0;
  std::string sha256;
};

struct Manifest {
  std::vector<ManifestEntry> files;

  std::size_t data_files() const {
    return static_cast<std::size_t>(std::count_if(files.begin(), files.end(), [](const auto& f) { return f.kind == "data"; }));
  }

  Json to_json() const {
    Json list = Json::array();
    for (const auto& f : files) list.push_back({{"path", f.path}, {"kind", f.kind}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    return {{"data_files", data_files()}, {"files", list}};
  }
};

inline constexpr const char* kManifestName = "manifest.json";

namespace detail {

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string() + ": read failed");
  return s;
}

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

/// Write every file of the bundle into `dir` (which must exist) followed by a
/// manifest of their sizes and SHA-256 hashes.
inline Manifest emit_outputs(const OutputBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError(dir.string() + ": output directory does not exist");
  Manifest m;
  for (const auto& f : bundle.files) {
    if (f.name == kManifestName) throw ContractViolation("bundle may not contain " + std::string(kManifestName));
    detail::write_file(dir / f.name, f.content);
    m.files.push_back({f.name, f.kind, f.content.size(), sha256_hex(f.content)});
  }
  detail::write_file(dir / kManifestName, m.to_json().dump(2) + "\n");
  return m;
}

/// Names of files whose contents no longer match the manifest in `dir`.
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  Json j;
  try {
    j = Json::parse(detail::read_file(dir / kManifestName));
  } catch (const Json::exception& e) {
    throw IoError((dir / kManifestName).string() + ": " + e.what());
  }
  std::vector<std::string> bad;
  for (const auto& f : j.at("files")) {
    const std::string name = f.at("path").get<std::string>();
    std::error_code ec;
    if (!std::filesystem::exists(dir / name, ec) || sha256_hex(detail::read_file(dir / name)) != f.at("sha256").get<std::string>()) {
      bad.push_back(name);
    }
  }
  return bad;
}

// Report -> bundle conversions.

inline OutputBundle bundle_config(const RunConfig& c) {
  OutputBundle b;
  b.add("config.txt", "config", emit_config(c));
  return b;
}

/// decay.csv (t, sup_norm), plot ready, plus decay.json.
inline OutputBundle bundle_decay(const DecayFit& f) {
  OutputBundle b;
  Csv csv({"t", "sup_norm"});
  for (std::size_t i = 0; i < f.times.size(); ++i) csv.row(std::vector<double>{f.times[i], f.sup_norms[i]});
  b.add_csv("decay.csv", csv);
  b.add_json("decay.json", Json{{"equation", to_string(f.equation)},
                                {"samples", f.times.size()},
                                {"fitted_exponent", f.fitted_exponent},
                                {"r_squared", f.r_squared},
                                {"fit_window", {f.fit_window.first, f.fit_window.second}},
                                {"fit_points", f.fit_points},
                                {"wrap_around_time", f.wrap_around_time}});
  return b;
}

inline std::string sweep_file_name(double lambda) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "sweep_lambda_%.6g.csv", lambda);
  return buf;
}

/// Per-lambda time series, the (lambda, ||rho - 1||) slope data and a summary.
/// A report without entries produces no files.
inline OutputBundle bundle_sweep(const SweepReport& r) {
  OutputBundle b;
  if (r.entries.empty()) return b;
  Csv slope({"lambda", "fluct_l2"});
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    if (e.ok) slope.row(std::vector<double>{e.lambda, e.fluct_l2});
    if (!e.series.empty()) {
      Csv csv({"t", "fluct_l2", "grad_mom_norm", "sol_err", "energy", "dissipation"});
      for (const auto& s : e.series) csv.row(std::vector<double>{s.t, s.fluct_l2, s.grad_mom_norm, s.sol_err, s.energy, s.dissipation});
      b.add_csv(sweep_file_name(e.lambda), csv);
    }
    Json per = Json::array();
    for (double w : e.efield_per_function) per.push_back(detail::finite_or_null(w));
    entries.push_back({{"lambda", e.lambda},
                       {"ok", e.ok},
                       {"diagnostic", e.diagnostic},
                       {"fluct_l2", detail::finite_or_null(e.fluct_l2)},
                       {"grad_mom", detail::finite_or_null(e.grad_mom)},
                       {"sol_mom_err", detail::finite_or_null(e.sol_mom_err)},
                       {"efield_witness", detail::finite_or_null(e.efield_witness)},
                       {"efield_per_function", per},
                       {"energy_margin", detail::finite_or_null(e.energy_margin)},
                       {"initial_energy", detail::finite_or_null(e.initial_energy)},
                       {"median_error", detail::finite_or_null(e.median_error)},
                       {"max_mass_error", detail::finite_or_null(e.max_mass_error)},
                       {"max_momentum_drift", detail::finite_or_null(e.max_momentum_drift)}});
  }
  b.add_csv("lambda_slope.csv", slope);
  b.add_json("sweep.json", Json{{"s0", r.s0},
                                {"p", r.p},
                                {"q", r.q},
                                {"fluct_slope", detail::finite_or_null(r.fluct_slope)},
                                {"fluct_slope_r2", detail::finite_or_null(r.fluct_slope_r2)},
                                {"ns_max_divergence", r.ns_max_divergence},
                                {"all_ok", r.all_ok()},
                                {"entries", entries}});
  return b;
}

inline OutputBundle bundle_simulation(const RunResult& r, bool with_checkpoint) {
  OutputBundle b;
  Csv csv({"t", "total", "kinetic", "internal", "capillary", "electric", "dissipation_accum", "dissipation_rate",
           "bd_kinetic", "mass_error", "momentum_mean_x", "momentum_mean_y", "momentum_mean_z"});
  for (const auto& rec : r.records) {
    const auto& e = rec.energy;
    csv.row(std::vector<double>{rec.time, e.total, e.kinetic, e.internal, e.capillary, e.electric, e.dissipation_accum,
                                rec.dissipation_rate, e.bd_kinetic, rec.mass_error, rec.momentum_mean[0],
                                rec.momentum_mean[1], rec.momentum_mean[2]});
  }
  b.add_csv("simulate.csv", csv);
  const Grid& g = r.final_state.grid();
  b.add_json("simulate.json", Json{{"grid", {{"dim", g.dim()}, {"n", g.n()}, {"box_length", g.length()}}},
                                   {"params", params_to_json(r.final_state.params)},
                                   {"steps", r.steps},
                                   {"final_time", r.final_state.time},
                                   {"initial_energy", r.initial_energy},
                                   {"worst_energy_excess", r.worst_energy_excess},
                                   {"max_mass_error", r.max_mass_error},
                                   {"max_momentum_drift", r.max_momentum_drift}});
  if (with_checkpoint) b.add("final_state.ckpt", "checkpoint", encode_checkpoint(r.final_state));
  return b;
}

/// ns_ref.csv (t, kinetic energy, divergence, and the relative error against
/// `exact` when one is given) plus ns_ref.json.
inline OutputBundle bundle_ns(const NsTrajectory& traj, double nu,
                              const std::function<SpectralField(double)>& exact = {}) {
  OutputBundle b;
  std::vector<std::string> cols{"t", "kinetic_energy", "divergence_l2"};
  if (exact) cols.push_back("rel_error");
  Csv csv(cols);
  double worst = 0.0;
  const auto& v = traj.velocity;
  for (std::size_t i = 0; i < v.times.size(); ++i) {
    const auto& u = v.fields[i];
    std::vector<double> row{v.times[i], 0.5 * inner_product(u, u), l2_norm(divergence(u))};
    if (exact) {
      const SpectralField ref = exact(v.times[i]);
      const double rel = l2_norm(u - ref) / std::max(l2_norm(ref), 1e-300);
      worst = std::max(worst, rel);
      row.push_back(rel);
    }
    csv.row(row);
  }
  b.add_csv("ns_ref.csv", csv);
  Json j{{"viscosity", nu},
         {"samples", v.times.size()},
         {"max_divergence", traj.max_divergence},
         {"max_mean_drift", traj.max_mean_drift}};
  if (exact) j["max_rel_error"] = worst;
  b.add_json("ns_ref.json", j);
  return b;
}

}  // namespace nskp::io
