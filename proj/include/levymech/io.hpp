#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "levymech/doob.hpp"
#include "levymech/grid.hpp"
#include "levymech/levy_core.hpp"
#include "levymech/sampler.hpp"

namespace levymech::io {

using nlohmann::json;

/// GridFunction CSV: header `x,re,im`, one row per grid point, 17 significant
/// digits.
void write_grid_function_csv(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_grid_function_csv(const std::filesystem::path& path);

/// JSON alternative: {x_min, x_max, n, values: [[re, im], ...]}.
json grid_function_to_json(const GridFunction& f);
GridFunction grid_function_from_json(const json& j);

/// Ground-state sidecar: {energy, gauge_momentum, improper}.
void write_ground_state(const std::filesystem::path& csv,
                        const std::filesystem::path& meta, const GroundState& g);
GroundState read_ground_state(const std::filesystem::path& csv,
                              const std::filesystem::path& meta);

/// Path ensemble CSV: header `path_id,t,x`.
void write_paths_csv(const std::filesystem::path& path, const PathEnsemble& pe);

/// Measure table: CSV with header `y,density`.
LevyMeasure read_measure_table(const std::filesystem::path& path, double singularity_order);

/// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex. Deterministic
/// fingerprint for the manifests, not a cryptographic hash.
std::string file_digest(const std::filesystem::path& path);

/// Run manifest: every command writes exactly one into its output directory.
class Manifest {
 public:
  Manifest(std::string command, std::map<std::string, std::string> flags,
           std::uint64_t seed);

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_stat(const std::string& key, const json& value);

  /// Finalizes wall time and writes `manifest.json` into `dir`.
  void write(const std::filesystem::path& dir);

 private:
  json j_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace levymech::io
