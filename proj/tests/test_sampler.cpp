#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levymech/cauchy_examples.hpp"
#include "levymech/quadrature.hpp"
#include "levymech/sampler.hpp"

using namespace levymech;

TEST_CASE("path rng substreams are deterministic and decorrelated") {
  PathRng a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(ua != c.uniform());
  }
}

TEST_CASE("jump sampler reproduces the restricted cauchy law") {
  const auto m = cauchy_measure();
  const double eps = 1e-2;
  JumpSampler js(m, eps);
  CHECK(js.rate() == doctest::Approx(2.0 / (M_PI * eps)).epsilon(1e-8));

  PathRng rng(1, 0);
  const int N = 200000;
  int beyond_10eps = 0;
  int positive = 0;
  for (int i = 0; i < N; ++i) {
    const double y = js.draw(rng);
    CHECK(std::abs(y) >= eps);
    if (std::abs(y) > 10.0 * eps) ++beyond_10eps;
    if (y > 0.0) ++positive;
  }
  // P(|Y| > 10 eps | |Y| > eps) = 1/10 for the exact power law.
  CHECK(std::abs(beyond_10eps / double(N) - 0.1) < 3.0 * std::sqrt(0.09 / N));
  CHECK(std::abs(positive / double(N) - 0.5) < 3.0 * std::sqrt(0.25 / N));
}

TEST_CASE("exact cauchy paths match the transition law") {
  SamplerConfig cfg;
  cfg.n_paths = 100000;
  cfg.t_final = 3.0;
  cfg.record_times = {1.0, 2.0, 3.0};
  cfg.seed = 7;
  const auto t = GeneratingTriplet::cauchy();
  const auto pe = sample_levy_path(t, StartSampler::fixed(0.0), cfg);
  CHECK(pe.scheme.kind == "cauchy-exact");

  // Median of increments is 0 by symmetry.
  auto col0 = pe.paths.col(0);
  std::vector<double> xs(col0.data(), col0.data() + col0.size());
  std::nth_element(xs.begin(), xs.begin() + xs.size() / 2, xs.end());
  CHECK(std::abs(xs[xs.size() / 2]) < 0.05);

  // E[cos(u X_lag)] = e^{lag eta(u)} within 3 standard errors.
  for (const auto& [u, lag] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.0, 2.0},
                                                                     {2.0, 1.0}}) {
    const auto est = empirical_char_function(pe, u, lag);
    const Complex target = transition_char_function(t, u, lag);
    CHECK(std::abs(est.mean - target) < 3.0 * est.standard_error);
  }
  const auto at0 = empirical_char_function(pe, 0.0, 1.0);
  CHECK(at0.mean == Complex(1.0, 0.0));
}

TEST_CASE("general scheme: gaussian triplet increment variance") {
  SamplerConfig cfg;
  cfg.n_paths = 20000;
  cfg.t_final = 1.0;
  cfg.record_times = {1.0};
  cfg.seed = 3;
  cfg.scheme = LevyScheme::General;
  const auto pe = sample_levy_path(GeneratingTriplet::gaussian(1.0), StartSampler::fixed(0.0),
                                   cfg);
  const auto col = pe.paths.col(0);
  const double mean = col.mean();
  const double var = (col.array() - mean).square().sum() / (col.size() - 1);
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / (cfg.n_paths - 1)));
}

TEST_CASE("general cauchy scheme matches the exact characteristic function") {
  SamplerConfig cfg;
  cfg.n_paths = 40000;
  cfg.t_final = 2.0;
  cfg.record_times = {1.0, 2.0};
  cfg.seed = 11;
  cfg.scheme = LevyScheme::General;
  cfg.eps = 1e-3;
  const auto t = GeneratingTriplet::cauchy();
  const auto pe = sample_levy_path(t, StartSampler::fixed(0.0), cfg);
  CHECK(pe.scheme.kind == "compound-poisson");
  const auto est = empirical_char_function(pe, 1.0, 1.0);
  CHECK(std::abs(est.mean - transition_char_function(t, 1.0, 1.0)) <
        3.0 * est.standard_error + 5e-3);
}

TEST_CASE("unit kernel reproduces the base path bit for bit") {
  const auto t = GeneratingTriplet::cauchy();
  SamplerConfig cfg;
  cfg.n_paths = 64;
  cfg.t_final = 1.0;
  cfg.record_times = {0.5, 1.0};
  cfg.seed = 99;
  cfg.scheme = LevyScheme::General;
  cfg.eps = 1e-2;

  LevyTypeKernel unit;
  unit.phi = [](double) { return 1.0; };
  unit.base = t;
  ThinningBound bound{[](double) { return 1.0; }};

  const auto base = sample_levy_path(t, StartSampler::fixed(0.2), cfg);
  const auto doob = sample_levy_type_path(unit, bound, StartSampler::fixed(0.2), cfg);
  CHECK(doob.scheme.bound_violations == 0);
  CHECK(doob.scheme.proposals == doob.scheme.accepted);
  CHECK((base.paths - doob.paths).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("student3 bound accepts every proposal at the mode") {
  const auto ex = student3(1.0);
  // M(0) = 1: phi is maximal at 0, so every proposal from x = 0 is accepted
  // with probability phi(y)/phi(0) <= 1 and the bound is tight.
  CHECK(ex.thinning_bound(0.0) == 1.0);
  const auto k = ex.kernel();
  PathRng rng(5, 1);
  JumpSampler js(*k.base.levy, 1e-2);
  for (int i = 0; i < 1000; ++i) {
    const double y = js.draw(rng);
    const double ratio = k.phi(y) / (k.phi(0.0) * ex.thinning_bound(0.0));
    CHECK(ratio <= 1.0);
    CHECK(ratio >= 0.0);
  }
}

TEST_CASE("scheme drift matches the band compensator quadrature") {
  // The accepted-jump drift on eps < |y| <= 1 at frozen x equals
  // int y lambda(x; dy) over the band; the simulation must reproduce it.
  const auto ex = student3(1.0);
  const auto k = ex.kernel();
  const double eps = 1e-2;
  const double x = 1.0;
  JumpSampler js(*k.base.levy, eps);
  const double mx = ex.thinning_bound(x);

  const double q_band =
      quad::integrate([&](double y) { return y * k.lambda_density(x, y); }, eps, 1.0).value +
      quad::integrate([&](double y) { return y * k.lambda_density(x, y); }, -1.0, -eps).value;

  PathRng rng(17, 0);
  const long K = 4000000;
  double acc_sum = 0.0, acc_sq = 0.0;
  for (long i = 0; i < K; ++i) {
    const double y = js.draw(rng);
    const double ratio = k.phi(x + y) / (k.phi(x) * mx);
    double contrib = 0.0;
    if (ratio >= 1.0 || rng.uniform() < ratio) {
      if (std::abs(y) <= 1.0) contrib = y;
    }
    acc_sum += contrib;
    acc_sq += contrib * contrib;
  }
  // Proposals arrive at rate mx * Lambda; per unit time the accepted band sum
  // estimates q_band.
  const double per_prop = acc_sum / K;
  const double drift_rate = per_prop * mx * js.rate();
  const double se_prop = std::sqrt((acc_sq / K - per_prop * per_prop) / K);
  const double se_rate = se_prop * mx * js.rate();
  CHECK(std::abs(drift_rate - q_band) < 3.0 * se_rate);
  // And it is nonzero: the asymmetry of phi around x shows up in the scheme.
  CHECK(std::abs(q_band) > 10.0 * se_rate);
}

TEST_CASE("invariant distance calibration and negative control") {
  const auto ex1 = student3(1.0);
  const Grid g = ex1.preset_grid;
  const GridFunction rho1 = sample_real(g, ex1.rho);
  const GridFunction rho2 = sample_real(g, student3(2.0).rho);

  // Direct i.i.d. draws from rho1.
  PathEnsemble pe;
  pe.times = {1.0};
  pe.paths.resize(50000, 1);
  const StartSampler start = StartSampler::from_density(rho1);
  for (int p = 0; p < pe.paths.rows(); ++p) {
    PathRng rng(123, p);
    pe.paths(p, 0) = start.sample(rng);
  }
  CHECK(empirical_invariant_distance(pe, rho1) < 0.05);
  CHECK(empirical_invariant_distance(pe, rho2) > 0.05);
}

TEST_CASE("short stationary run stays close to the invariant law") {
  const auto ex = student3(1.0);
  const Grid g = ex.preset_grid;
  const GridFunction rho = sample_real(g, ex.rho);

  SamplerConfig cfg;
  cfg.n_paths = 4000;
  cfg.t_final = 0.5;
  cfg.record_times = {0.25, 0.5};
  cfg.seed = 2024;
  cfg.eps = 1e-2;
  const auto pe = sample_levy_type_path(ex.kernel(), ThinningBound{ex.thinning_bound},
                                        StartSampler::from_density(rho), cfg);
  CHECK(pe.scheme.bound_violations == 0);
  CHECK(empirical_invariant_distance(pe, rho) < 0.05);

  // Reversibility of the stationary pair at lag 0.25.
  CHECK(reversibility_statistic(pe, 0.25) < 0.08);
}

TEST_CASE("drifted paths break the reversibility projection") {
  SamplerConfig cfg;
  cfg.n_paths = 20000;
  cfg.t_final = 2.0;
  cfg.record_times = {1.0, 2.0};
  cfg.seed = 31;
  const auto t = GeneratingTriplet::cauchy();
  auto pe = sample_levy_path(t, StartSampler::fixed(0.0), cfg);
  const double sym_stat = reversibility_statistic(pe, 1.0);
  // Improper control: add a strong constant drift.
  for (int p = 0; p < pe.paths.rows(); ++p)
    for (size_t j = 0; j < pe.times.size(); ++j) pe.paths(p, j) += 5.0 * pe.times[j];
  const double drift_stat = reversibility_statistic(pe, 1.0);
  CHECK(std::isfinite(drift_stat));
  CHECK(drift_stat > sym_stat);
}

TEST_CASE("same seed gives bit-identical ensembles under threading") {
  const auto ex = student3(1.0);
  const GridFunction rho = sample_real(ex.preset_grid, ex.rho);
  SamplerConfig cfg;
  cfg.n_paths = 2000;
  cfg.t_final = 0.2;
  cfg.record_times = {0.2};
  cfg.seed = 555;
  cfg.eps = 1e-2;
  const auto a = sample_levy_type_path(ex.kernel(), ThinningBound{ex.thinning_bound},
                                       StartSampler::from_density(rho), cfg);
  const auto b = sample_levy_type_path(ex.kernel(), ThinningBound{ex.thinning_bound},
                                       StartSampler::from_density(rho), cfg);
  CHECK((a.paths - b.paths).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.scheme.proposals == b.scheme.proposals);
}
