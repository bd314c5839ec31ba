#pragma once

#include <optional>

#include "levymech/grid.hpp"
#include "levymech/levy_core.hpp"

namespace levymech {

/// FFT helper bound to one grid. Forward/inverse pair is unitary up to
/// rounding (inverse carries the 1/n).
class SpectralEngine {
 public:
  explicit SpectralEngine(const Grid& g);

  ArrayXcd forward(const ArrayXcd& v) const;
  ArrayXcd inverse(const ArrayXcd& v) const;

  const Grid& grid() const { return grid_; }
  const ArrayXd& frequencies() const { return freq_; }

  /// Spectral m-th derivative; odd orders zero the Nyquist mode.
  ArrayXcd derivative(const ArrayXcd& v, int order) const;
  ArrayXd derivative_real(const ArrayXd& v, int order) const;

 private:
  Grid grid_;
  ArrayXd freq_;
};

struct SpectralDiagnostics {
  double boundary_magnitude = 0.0;  // max edge |f| relative to max |f|
  bool boundary_warning = false;
};

/// L0 f through the symbol: inverse transform of f^(u) eta(u). With
/// eta(u) = -u^2/2 this approximates f''/2.
GridFunction apply_generator_spectral(const GridFunction& f, const SpectralSymbol& sym,
                                      SpectralDiagnostics* diag = nullptr,
                                      double boundary_tol = 1e-8);

struct GeneratorOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  /// Taylor-compensation half-width; 0 picks max(8h, ...) automatically.
  double taylor_band = 0.0;
  /// Pre-panelling width for the jump integral inside the grid span; bounds
  /// the narrowest feature the quadrature is guaranteed to resolve.
  double far_panel_width = 2.0;
  TailModel tail = TailModel::Auto;
};

struct QuadratureDiagnostics {
  ArrayXd residual;                  // per-point quadrature error estimate
  std::vector<Index> flagged;       // points whose residual exceeded tolerance
  double worst_residual = 0.0;
};

/// L0 f by direct singularity-split quadrature of
///   (a/2) f''(x) + int_{y != 0} [f(x+y) - f(x) - y f'(x) 1_{|y|<=1}] l(dy),
/// cubic interpolation off-grid, tail model beyond the domain, spectral
/// derivatives for the compensated core. Real-valued input.
GridFunction apply_generator_quadrature(const GridFunction& f, const GeneratingTriplet& t,
                                        const GeneratorOptions& opt = {},
                                        QuadratureDiagnostics* diag = nullptr);

/// || L0(phi f) - f L0 phi - phi L0 f - int delta_y phi delta_y f l(dy) ||_2
/// divided by || L0(phi f) ||_2; all four terms by independent quadrature.
/// Degenerate zero numerator/denominator returns 0.
double product_rule_residual(const GridFunction& phi, const GridFunction& f,
                             const GeneratingTriplet& t, const GeneratorOptions& opt = {});

/// int delta_y phi delta_y f l(dy) per grid point (the Appendix correction
/// term); exposed for the Dirichlet forms.
GridFunction jump_carre_du_champ(const GridFunction& phi, const GridFunction& f,
                                 const GeneratingTriplet& t, const GeneratorOptions& opt = {});

}  // namespace levymech
