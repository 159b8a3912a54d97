#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "puretone/eos.hpp"
#include "puretone/evolve.hpp"
#include "puretone/linwave.hpp"

namespace puretone {

inline constexpr const char* kVersion = "0.1.0";

// Profile documents: {"ell", "pbar", "eos":{"gamma","k_ref"}, "kind":"pwc"|"smooth",
// "levels":[{"sigma"|"A", "L"}] | "pieces":[{"x":[…], "sigma":[…]}]}.
QuietState parse_profile(const nlohmann::json& doc);
QuietState load_profile(const std::filesystem::path& path);
// Named profiles: "constant" (σ=1, ℓ=1) and "two-level" (σ=[1,2], L=[0.5,0.5]).
QuietState builtin_profile(const std::string& name);
// Accepts a path or "builtin:<name>".
QuietState resolve_profile(const std::string& spec);
nlohmann::json profile_to_json(const QuietState& state);
// SHA-256 of the canonical profile document, hex encoded.
std::string profile_hash(const QuietState& state);

std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

// Columns x, p_0..p_{nt-1}, u_0..u_{nt-1}; values reconstructed on the time grid.
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<TrajectoryNode>& trajectory, int nt);

// Long format rows (x, t, p, u).
void write_tile_csv(const std::filesystem::path& path, const TileField& tile);
// Little-endian: magic "PTTILE01", uint32 chi, uint32 reserved, uint64 nx, uint64 nt,
// double T, double period_x, then x[nx], t[nt], p[nx*nt], u[nx*nt] row-major.
void write_tile_binary(const std::filesystem::path& path, const TileField& tile);
TileField read_tile_binary(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::string profile_hash;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  nlohmann::json timings = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::array();

  nlohmann::json to_json() const;
};

}  // namespace puretone
