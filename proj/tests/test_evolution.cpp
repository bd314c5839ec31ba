#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levymech/cauchy_examples.hpp"
#include "levymech/doob.hpp"
#include "levymech/evolution.hpp"
#include "levymech/spectral_ops.hpp"

using namespace levymech;

TEST_CASE("free evolution is spectrally exact per mode") {
  const Grid g = Grid::symmetric(20.0, 1024);
  const GridFunction psi0 = sample(g, [](double x) {
    return std::exp(-x * x / 4.0) * std::exp(Complex(0.0, 3.0 * x));
  });
  const GridFunction V = sample_real(g, [](double) { return 0.0; });
  const SpectralSymbol sym([](double u) { return -std::abs(u); }, "cauchy-closed");

  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 1.0;
  cfg.record_every = 50;
  const auto run = evolve(psi0, V, sym, cfg);

  // One-shot spectral propagation to t = 1.
  const SpectralEngine engine(g);
  ArrayXcd spec = engine.forward(psi0.values);
  const ArrayXd& eta = sym.table_for(g);
  for (Index k = 0; k < g.n; ++k) spec[k] *= std::polar(1.0, eta[k] * 1.0);
  const ArrayXcd expect = engine.inverse(spec);

  const auto& last = run.snapshots.back();
  CHECK(last.time == doctest::Approx(1.0));
  CHECK((last.psi.values - expect).abs().maxCoeff() < 1e-12);
  CHECK(run.max_norm_drift < 1e-12);
}

TEST_CASE("zero steps is the identity") {
  const Grid g = Grid::symmetric(10.0, 256);
  const GridFunction psi0 = sample(g, [](double x) { return std::exp(-x * x); });
  const GridFunction V = sample_real(g, [](double) { return 0.0; });
  const SpectralSymbol sym([](double u) { return -u * u / 2.0; });
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.0;
  const auto run = evolve(psi0, V, sym, cfg);
  CHECK(run.snapshots.size() == 1);
  CHECK(stationarity_residual(psi0, 1.23, run) == 0.0);
}

TEST_CASE("student3 stationary state keeps its phase") {
  const auto ex = student3(1.0);
  const Grid g = Grid::symmetric(160.0, 16384);
  const GroundState gs = ex.ground_state(g);
  const auto t = ex.triplet();
  const GridFunction V = potential_from_ground_state(gs, t);
  const auto sym = make_symbol(t);

  EvolutionConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_final = 1.0;
  cfg.record_every = 100;
  const auto run = evolve(gs.phi, V, sym, cfg);
  CHECK(run.max_norm_drift < 1e-10);
  CHECK(stationarity_residual(gs.phi, ex.energy, run) < 1e-3);

  // Phase mismatch demo: wrong energy E+1 at t = pi gives residual 2 ||psi||.
  EvolutionConfig cfg_pi = cfg;
  cfg_pi.t_final = M_PI;
  cfg_pi.record_every = 1 << 20;  // only the final snapshot matters
  const auto run_pi = evolve(gs.phi, V, sym, cfg_pi);
  const double resid = stationarity_residual(gs.phi, ex.energy + 1.0, run_pi);
  CHECK(std::abs(resid - 2.0 * gs.phi.l2_norm()) < 1e-2);
}

TEST_CASE("strang splitting is second order in dt") {
  const auto ex = student3(1.0);
  const Grid g = Grid::symmetric(40.0, 4096);
  const GroundState gs = ex.ground_state(g);
  const auto t = ex.triplet();
  const GridFunction V = potential_from_ground_state(gs, t);
  const auto sym = make_symbol(t);

  auto residual_at = [&](double dt) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_final = 2.0;
    cfg.record_every = 1 << 20;
    const auto run = evolve(gs.phi, V, sym, cfg);
    return stationarity_residual(gs.phi, ex.energy, run);
  };
  const double r1 = residual_at(0.5);
  const double r2 = residual_at(0.25);
  CHECK(r2 < r1);
  const double ratio = r1 / r2;
  CHECK(ratio > 2.0);  // ~4 for clean second order, floor-limited below that
  CHECK(ratio < 8.0);
}

TEST_CASE("boundary monitor warns on poorly padded states") {
  const Grid g = Grid::symmetric(5.0, 256);
  // Heavy-tailed state truncated far too early.
  const GridFunction psi0 = sample(g, [](double x) { return 0.5 / (1.0 + std::abs(x)); });
  const GridFunction V = sample_real(g, [](double) { return 0.0; });
  const SpectralSymbol sym([](double u) { return -std::abs(u); });
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.05;
  const auto run = evolve(psi0, V, sym, cfg);
  CHECK(!run.warnings.empty());
}

TEST_CASE("non-finite states abort with the step index") {
  const Grid g = Grid::symmetric(5.0, 64);
  GridFunction psi0 = sample(g, [](double x) { return std::exp(-x * x); });
  psi0.values[3] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  const GridFunction V = sample_real(g, [](double) { return 0.0; });
  const SpectralSymbol sym([](double u) { return -u * u / 2.0; });
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.1;
  CHECK_THROWS_AS(evolve(psi0, V, sym, cfg), EvolveError);
}

TEST_CASE("potential clipping is counted") {
  const Grid g = Grid::symmetric(5.0, 128);
  const GridFunction psi0 = sample(g, [](double x) { return std::exp(-x * x); });
  const GridFunction V = sample_real(g, [](double x) { return x > 4.0 ? 1e9 : 0.0; });
  const SpectralSymbol sym([](double u) { return -u * u / 2.0; });
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.05;
  const auto run = evolve(psi0, V, sym, cfg);
  CHECK(run.clipped_potential_points > 0);
}
