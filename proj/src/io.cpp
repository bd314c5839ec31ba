#include "levymech/io.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "levymech/defaults.hpp"

namespace levymech::io {

namespace {

std::FILE* open_or_throw(const std::filesystem::path& path, const char* mode) {
  std::FILE* f = std::fopen(path.c_str(), mode);
  if (!f) throw GridError("cannot open " + path.string());
  return f;
}

}  // namespace

void write_grid_function_csv(const std::filesystem::path& path, const GridFunction& f) {
  std::FILE* out = open_or_throw(path, "w");
  std::fputs("x,re,im\n", out);
  const double h = f.h();
  for (Index i = 0; i < f.size(); ++i) {
    std::fprintf(out, "%.17g,%.17g,%.17g\n", f.grid.x_min + h * static_cast<double>(i),
                 f.values[i].real(), f.values[i].imag());
  }
  std::fclose(out);
}

GridFunction read_grid_function_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GridError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,re,im", 0) != 0)
    throw GridError(path.string() + ": expected header x,re,im");
  std::vector<double> xs, re, im;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, r, i;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &r, &i) != 3)
      throw GridError(path.string() + ": bad row '" + line + "'");
    xs.push_back(x);
    re.push_back(r);
    im.push_back(i);
  }
  const Index n = static_cast<Index>(xs.size());
  if (n < 8) throw GridError(path.string() + ": too few rows");
  const double h = xs[1] - xs[0];
  for (Index i = 1; i < n; ++i)
    if (std::abs(xs[i] - xs[0] - h * i) > 1e-9 * std::max(1.0, std::abs(xs[i])))
      throw GridError(path.string() + ": grid not uniform");
  const Grid g = Grid::make(xs[0], xs[0] + h * static_cast<double>(n), n);
  ArrayXcd v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(re[i], im[i]);
  return GridFunction(g, std::move(v));
}

json grid_function_to_json(const GridFunction& f) {
  json values = json::array();
  for (Index i = 0; i < f.size(); ++i)
    values.push_back({f.values[i].real(), f.values[i].imag()});
  return json{{"x_min", f.grid.x_min},
              {"x_max", f.grid.x_max},
              {"n", f.grid.n},
              {"values", std::move(values)}};
}

GridFunction grid_function_from_json(const json& j) {
  const Grid g = Grid::make(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                            j.at("n").get<Index>());
  const auto& values = j.at("values");
  if (static_cast<Index>(values.size()) != g.n)
    throw GridError("json grid function: value count mismatch");
  ArrayXcd v(g.n);
  for (Index i = 0; i < g.n; ++i)
    v[i] = Complex(values[i][0].get<double>(), values[i][1].get<double>());
  return GridFunction(g, std::move(v));
}

void write_ground_state(const std::filesystem::path& csv,
                        const std::filesystem::path& meta, const GroundState& g) {
  write_grid_function_csv(csv, g.phi);
  std::ofstream out(meta);
  if (!out) throw GridError("cannot open " + meta.string());
  out << json{{"energy", g.energy},
              {"gauge_momentum", g.gauge_momentum},
              {"improper", g.improper}}
             .dump(2)
      << "\n";
}

GroundState read_ground_state(const std::filesystem::path& csv,
                              const std::filesystem::path& meta) {
  std::ifstream in(meta);
  if (!in) throw GridError("cannot open " + meta.string());
  json j;
  in >> j;
  return GroundState::make(read_grid_function_csv(csv), j.at("energy").get<double>(),
                           j.value("improper", false), j.value("gauge_momentum", 0.0));
}

void write_paths_csv(const std::filesystem::path& path, const PathEnsemble& pe) {
  std::FILE* out = open_or_throw(path, "w");
  std::fputs("path_id,t,x\n", out);
  for (Eigen::Index p = 0; p < pe.paths.rows(); ++p)
    for (size_t j = 0; j < pe.times.size(); ++j)
      std::fprintf(out, "%lld,%.17g,%.17g\n", static_cast<long long>(p), pe.times[j],
                   pe.paths(p, static_cast<Eigen::Index>(j)));
  std::fclose(out);
}

LevyMeasure read_measure_table(const std::filesystem::path& path, double singularity_order) {
  std::ifstream in(path);
  if (!in) throw GridError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("y,density", 0) != 0)
    throw GridError(path.string() + ": expected header y,density");
  std::vector<double> ys, ds;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double y, d;
    if (std::sscanf(line.c_str(), "%lg,%lg", &y, &d) != 2)
      throw GridError(path.string() + ": bad row '" + line + "'");
    ys.push_back(y);
    ds.push_back(d);
  }
  return measure_from_table(ys, ds, singularity_order);
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GridError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, h);
  return std::string(hex);
}

Manifest::Manifest(std::string command, std::map<std::string, std::string> flags,
                   std::uint64_t seed)
    : start_(std::chrono::steady_clock::now()) {
  j_["command"] = std::move(command);
  j_["flags"] = json::object();
  for (const auto& [k, v] : flags) j_["flags"][k] = v;
  j_["seed"] = seed;
  j_["version"] = "levymech 0.1.0";
  j_["inputs"] = json::object();
  j_["outputs"] = json::object();
  j_["stats"] = json::object();
  const Defaults& d = defaults();
  j_["defaults"] = {{"quad_abs_tol", d.quad_abs_tol},
                    {"quad_rel_tol", d.quad_rel_tol},
                    {"taylor_band_grid_mult", d.taylor_band_grid_mult},
                    {"positivity_floor", d.positivity_floor},
                    {"boundary_pad_tol", d.boundary_pad_tol},
                    {"potential_clip", d.potential_clip},
                    {"evolve_dt", d.evolve_dt},
                    {"sampler_eps_scale", d.sampler_eps_scale},
                    {"ks_threshold", d.ks_threshold}};
}

void Manifest::add_input(const std::filesystem::path& path) {
  j_["inputs"][path.filename().string()] = file_digest(path);
}

void Manifest::add_output(const std::filesystem::path& path) {
  j_["outputs"][path.filename().string()] = file_digest(path);
}

void Manifest::set_stat(const std::string& key, const json& value) { j_["stats"][key] = value; }

void Manifest::write(const std::filesystem::path& dir) {
  const auto elapsed = std::chrono::steady_clock::now() - start_;
  j_["wall_time_s"] =
      std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
  std::ofstream out(dir / "manifest.json");
  if (!out) throw GridError("cannot open " + (dir / "manifest.json").string());
  out << j_.dump(2) << "\n";
}

}  // namespace levymech::io
