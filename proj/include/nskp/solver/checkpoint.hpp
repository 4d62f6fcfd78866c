#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "nskp/solver/state.hpp"

namespace nskp {

// Layout: 8-byte magic, u32 version, u64 header length, JSON header, then the
// raw little-endian complex coefficients of rho and of each momentum component.
// Coefficients are what the stepper carries, so a reload continues bit for bit.
inline constexpr char kCheckpointMagic[8] = {'N', 'S', 'K', 'P', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline nlohmann::json params_to_json(const PhysParams& p) {
  return {{"lambda", p.lambda}, {"gamma", p.gamma}, {"mu", p.mu}, {"kappa", p.kappa}, {"rho_floor", p.rho_floor}};
}

inline PhysParams params_from_json(const nlohmann::json& j) {
  PhysParams p;
  p.lambda = j.at("lambda").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.mu = j.at("mu").get<double>();
  p.kappa = j.at("kappa").get<double>();
  p.rho_floor = j.at("rho_floor").get<double>();
  return p;
}

namespace detail {

inline void append_coeffs(std::string& out, const SpectralField& f) {
  for (int c = 0; c < f.components(); ++c) {
    auto s = f.coeffs(c);
    out.append(reinterpret_cast<const char*>(s.data()), s.size_bytes());
  }
}

template <class T>
void append_raw(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace detail

/// Serialize a state to the checkpoint byte layout.
inline std::string encode_checkpoint(const FluidState& s) {
  static_assert(std::endian::native == std::endian::little, "checkpoint layout assumes little-endian");
  const Grid& g = s.grid();
  nlohmann::json header = {
      {"format", "nskp-checkpoint"},
      {"dim", g.dim()},
      {"n", g.n()},
      {"box_length", g.length()},
      {"time", s.time},
      {"params", params_to_json(s.params)},
      {"fields", {"rho", "m"}},
      {"payload", "complex128 half-spectrum coefficients, component-major"},
  };
  const std::string text = header.dump();
  std::string out(kCheckpointMagic, sizeof kCheckpointMagic);
  detail::append_raw(out, kCheckpointVersion);
  detail::append_raw(out, static_cast<std::uint64_t>(text.size()));
  out += text;
  detail::append_coeffs(out, s.rho);
  detail::append_coeffs(out, s.m);
  return out;
}

/// Inverse of encode_checkpoint; `label` names the source in errors.
inline FluidState decode_checkpoint(std::string_view bytes, const std::string& label) {
  std::size_t pos = 0;
  auto take = [&](void* dst, std::size_t len, const char* what) {
    if (bytes.size() - pos < len) throw IoError(label + ": truncated checkpoint " + what);
    std::memcpy(dst, bytes.data() + pos, len);
    pos += len;
  };
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  if (bytes.size() < sizeof magic + sizeof version + sizeof len) throw IoError(label + ": not an nskp checkpoint");
  take(magic, sizeof magic, "magic");
  take(&version, sizeof version, "version");
  take(&len, sizeof len, "header length");
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) throw IoError(label + ": not an nskp checkpoint");
  if (version != kCheckpointVersion) throw IoError(label + ": unsupported checkpoint version " + std::to_string(version));
  if (len > (1u << 20)) throw IoError(label + ": implausible header length");
  std::string text(len, '\0');
  take(text.data(), len, "header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
    const Grid g(header.at("dim").get<int>(), header.at("n").get<int>(), header.at("box_length").get<double>());
    const PhysParams p = params_from_json(header.at("params"));
    SpectralField rho = SpectralField::scalar(g);
    SpectralField m = SpectralField::vector(g);
    for (SpectralField* f : {&rho, &m}) {
      for (int c = 0; c < f->components(); ++c) {
        auto s = f->mutable_coeffs(c);
        take(s.data(), s.size_bytes(), "payload");
      }
    }
    if (pos != bytes.size()) throw IoError(label + ": trailing bytes after checkpoint payload");
    return make_state(std::move(rho), std::move(m), p, header.at("time").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(label + ": bad checkpoint header: " + e.what());
  }
}

inline void write_checkpoint(const std::string& path, const FluidState& s) {
  const std::string bytes = encode_checkpoint(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

inline FluidState read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open checkpoint");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path + ": read failed");
  return decode_checkpoint(bytes, path);
}

}  // namespace nskp
