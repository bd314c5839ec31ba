#include "levymech/evolution.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace levymech {

EvolutionResult evolve(const GridFunction& psi0, const GridFunction& V,
                       const SpectralSymbol& sym, const EvolutionConfig& cfg) {
  if (!(psi0.grid == V.grid)) throw GridError("evolve: psi0 and V on different grids");
  if (!V.is_real(1e-9)) throw GridError("evolve: potential must be real");
  if (!(cfg.dt > 0.0) || !(cfg.t_final >= 0.0) || cfg.record_every < 1)
    throw GridError("evolve: bad configuration");
  if (cfg.dt > cfg.t_final && cfg.t_final > 0.0)
    throw GridError("evolve: dt exceeds t_final");

  const Grid& grid = psi0.grid;
  const Index n = grid.n;
  const long steps = cfg.t_final > 0.0
                         ? std::max<long>(1, std::llround(cfg.t_final / cfg.dt))
                         : 0;
  const double dt = steps > 0 ? cfg.t_final / static_cast<double>(steps) : cfg.dt;

  EvolutionResult out;
  out.dt_effective = dt;
  out.steps = steps;

  // Clip |V| so tail-fit noise cannot wrap the phase factor.
  ArrayXd v = V.values.real();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(v[i]) > cfg.potential_clip) {
      v[i] = std::copysign(cfg.potential_clip, v[i]);
      ++out.clipped_potential_points;
    }
  }

  ArrayXcd half_v(n), kinetic(n);
  {
    const ArrayXd& eta = sym.table_for(grid);
    for (Index i = 0; i < n; ++i) {
      half_v[i] = std::polar(1.0, -0.5 * v[i] * dt);
      kinetic[i] = std::polar(1.0, eta[i] * dt);  // e^{-i (-L0) dt} = e^{+i eta dt}
    }
  }

  Eigen::FFT<double> fft;
  Eigen::VectorXcd pos = psi0.values.matrix();
  Eigen::VectorXcd spec(n);

  const double norm0 = psi0.l2_norm();
  const Index pad = std::max<Index>(1, n / 10);

  const auto record = [&](double time, long step) {
    GridFunction snap(grid, pos.array());
    if (!snap.values.allFinite())
      throw EvolveError("non-finite wave function at t = " + std::to_string(time), step);
    const double norm = snap.l2_norm();
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(norm - norm0));
    double edge = 0.0;
    for (Index i = 0; i < pad; ++i)
      edge = std::max({edge, std::abs(snap.values[i]), std::abs(snap.values[n - 1 - i])});
    if (edge > cfg.boundary_pad_tol)
      out.warnings.push_back("boundary magnitude " + std::to_string(edge) + " at t = " +
                             std::to_string(time));
    out.snapshots.push_back({time, std::move(snap), norm});
  };

  record(0.0, 0);
  for (long s = 1; s <= steps; ++s) {
    pos.array() *= half_v;
    fft.fwd(spec, pos);
    spec.array() *= kinetic;
    fft.inv(pos, spec);
    pos.array() *= half_v;
    if (s % cfg.record_every == 0 || s == steps) record(dt * static_cast<double>(s), s);
  }
  return out;
}

double stationarity_residual(const GridFunction& psi0, double energy,
                             const EvolutionResult& run) {
  double worst = 0.0;
  for (const auto& snap : run.snapshots) {
    const Complex phase = std::polar(1.0, -energy * snap.time);
    const double dev = GridFunction(psi0.grid, snap.psi.values - phase * psi0.values).l2_norm();
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace levymech
