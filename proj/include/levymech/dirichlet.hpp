#pragma once

#include "levymech/doob.hpp"
#include "levymech/grid.hpp"
#include "levymech/levy_core.hpp"
#include "levymech/spectral_ops.hpp"

namespace levymech {

/// Beurling–Deny data of a symmetric form. Conventions: the jump density
/// absorbs the form's 1/2 and the diffusion density its a/2, so that the
/// decomposition reproduces the form value with no extra factors:
///   E(f,g) = int f' g' diffusion dx + int f g killing dx
///            + iint (f(x)-f(z))(g(x)-g(z)) jump(x,z) dz dx.
struct BeurlingDenyComponents {
  std::function<double(double)> diffusion_density;
  std::function<double(double)> killing_density;
  std::function<double(double, double)> jump_density;  // (x, z), x != z
};

struct FormOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double far_panel_width = 2.0;
  /// Compact-support guard: edge samples above this (relative) reject input.
  double support_tol = 1e-10;
};

/// Lévy Dirichlet form in the positive convention:
///   E0(f,g) = (a/2) int f' g' dx + 1/2 iint delta_y f delta_y g l(dy) dx.
/// f, g real with compact support inside the grid; the outer-x integral runs
/// over all of R (the beyond-grid slab contributes f g weighted by tail
/// masses and is added in closed form).
double form_levy(const GridFunction& f, const GridFunction& g, const GeneratingTriplet& t,
                 const FormOptions& opt = {});

/// Doob-transformed form: E(f,g) = 1/2 iint delta_y f delta_y g
/// phi(x+y) phi(x) l(dy) dx (plus the diffusion part (a/2) int f'g' phi^2 when
/// a > 0).
double form_doob(const GridFunction& f, const GridFunction& g, const GroundState& gs,
                 const GeneratingTriplet& t, const FormOptions& opt = {});

/// Beurling–Deny components of the transformed form: pure-jump case carries
/// jump density phi(x) phi(z) l(z-x)/2 and zero diffusion/killing; a Gaussian
/// component adds the diffusion density (a/2) phi^2(x). Killing is always 0.
BeurlingDenyComponents beurling_deny_extract(const GroundState& gs,
                                             const GeneratingTriplet& t);

/// |int [L f] phi^2 dx| for compactly supported f; vanishes for the invariant
/// measure. The beyond-grid slab is added through the tail model.
double invariance_residual(const GridFunction& f, const GroundState& gs,
                           const GeneratingTriplet& t, const FormOptions& opt = {});

}  // namespace levymech
