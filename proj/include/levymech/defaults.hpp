#pragma once

#include <cstdint>

namespace levymech {

/// Central numeric defaults. Every CLI run prints these into its manifest so
/// results stay reproducible from the manifest alone.
struct Defaults {
  double quad_abs_tol = 1e-9;        // absolute tolerance per 1-D quadrature
  double quad_rel_tol = 1e-9;        // relative tolerance per 1-D quadrature
  int quad_max_depth = 60;           // adaptive bisection depth
  double taylor_band_grid_mult = 8;  // Taylor-compensation band = mult * grid spacing
  double positivity_floor = 1e-12;   // reject ground states with min/max below this
  double boundary_pad_tol = 1e-8;    // |psi| allowed in the outer 10% of the grid
  double potential_clip = 1e6;       // |V| clamp guarding tail-fit noise
  double evolve_dt = 2e-3;           // default time step for the propagator
  double sampler_eps_scale = 1e-3;   // small-jump cutoff = scale * a for preset kernels
  double ks_threshold = 0.05;        // property-test bar for the MC suites
  std::uint64_t seed = 20121001;     // master seed for anything stochastic
};

inline const Defaults& defaults() {
  static const Defaults d{};
  return d;
}

}  // namespace levymech
