#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "levymech/doob.hpp"
#include "levymech/grid.hpp"
#include "levymech/levy_core.hpp"

namespace levymech {

/// Per-path RNG substream: mt19937_64 (standard-pinned output) seeded through
/// splitmix64, with hand-rolled transforms so draws are reproducible across
/// platforms and library versions.
class PathRng {
 public:
  PathRng(std::uint64_t master_seed, std::uint64_t path_index);

  double uniform();               // [0, 1)
  double normal();                // Box-Muller, two uniforms per call
  double exponential();           // mean 1
  long poisson(double mean);      // inversion; requires mean < 700
  double cauchy(double scale);    // scale * tan(pi (u - 1/2))

 private:
  std::mt19937_64 gen_;
};

/// Signed jump sampler from l restricted to |y| > eps: closed-form inversion
/// for exact power-law measures, tabulated inverse CDF otherwise. Shared and
/// immutable across paths.
class JumpSampler {
 public:
  JumpSampler(const LevyMeasure& m, double eps, const quad::Options& q = {});

  double rate() const { return rate_; }  // Lambda(eps) = l(|y| > eps)
  double draw(PathRng& rng) const;       // signed jump, |y| > eps

 private:
  double eps_ = 0.0;
  double rate_ = 0.0;
  bool power_law_ = false;
  double alpha_ = 0.0;
  // Tabulated inverse CDF of the one-sided normalized restriction.
  std::vector<double> log_y_;
  std::vector<double> cdf_;
  double table_mass_ = 1.0;  // CDF mass covered by the table; the rest is the
                             // algebraic tail
  double tail_from_ = 0.0;
  double tail_alpha_ = 0.0;
};

struct ThinningBound {
  std::function<double(double)> bound;  // M(x) >= phi(x+y)/phi(x), M >= 1
};

enum class LevyScheme { Auto, Exact, General };

struct SamplerConfig {
  int n_paths = 1000;
  double t_final = 1.0;
  std::vector<double> record_times;  // strictly increasing, in (0, t_final]
  std::uint64_t seed = 20121001;
  double eps = 1e-3;                // small-jump cutoff
  double dt_max = 1e-2;             // cap on the per-step interval
  double proposals_per_step = 1.0;  // bound on expected proposals per step
  LevyScheme scheme = LevyScheme::Auto;
};

struct SchemeInfo {
  std::string kind;
  double eps = 0.0;
  double sigma2_eps = 0.0;
  double jump_rate = 0.0;
  long proposals = 0;
  long accepted = 0;
  long bound_violations = 0;
};

struct PathEnsemble {
  std::vector<double> times;
  Eigen::MatrixXd paths;  // n_paths x n_times
  std::uint64_t seed = 0;
  SchemeInfo scheme;
};

/// Initial-condition sampler; either a fixed point or inverse-transform
/// sampling of a grid density (truncated to the grid domain).
class StartSampler {
 public:
  static StartSampler fixed(double x0);
  static StartSampler from_density(const GridFunction& rho);

  double sample(PathRng& rng) const;

 private:
  bool fixed_ = true;
  double x0_ = 0.0;
  Grid grid_;
  std::vector<double> cdf_;  // cumulative bin masses, normalized
};

/// Symmetric Lévy paths from a triplet. Exact transition sampling when the
/// law admits it (Cauchy); otherwise compound Poisson above eps plus a
/// Gaussian with the small-jump variance below.
PathEnsemble sample_levy_path(const GeneratingTriplet& t, const StartSampler& start,
                              const SamplerConfig& cfg);

/// Doob-transformed Lévy-type paths: proposals from l at state-dependent rate
/// M(x) Lambda(eps), thinned with acceptance phi(x+y)/(phi(x) M(x)); small
/// jumps replaced by the Gaussian of variance sigma^2(eps) dt (their
/// compensator drift vanishes for symmetric l). Bound violations are counted
/// and flag the run invalid.
PathEnsemble sample_levy_type_path(const LevyTypeKernel& k, const ThinningBound& bound,
                                   const StartSampler& start, const SamplerConfig& cfg);

/// Kolmogorov–Smirnov distance between the final-time empirical law and the
/// grid density rho (with its tail-model mass beyond the grid).
double empirical_invariant_distance(const PathEnsemble& pe, const GridFunction& rho);

/// Two-sample KS statistic between {X_t + X_{t+lag}} conditioned on the sign
/// of X_t - X_{t+lag}; small iff the pair is exchangeable. Uses the latest
/// recorded pair separated by `lag`.
double reversibility_statistic(const PathEnsemble& pe, double lag);

struct CharFunctionEstimate {
  Complex mean;
  double standard_error = 0.0;  // per component
};

/// Mean of e^{i u (X_{t+lag} - X_t)} over paths, using the earliest recorded
/// pair separated by `lag`.
CharFunctionEstimate empirical_char_function(const PathEnsemble& pe, double u, double lag);

}  // namespace levymech
