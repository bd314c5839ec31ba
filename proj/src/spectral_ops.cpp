#include "levymech/spectral_ops.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>

#include "levymech/parallel.hpp"

namespace levymech {

SpectralEngine::SpectralEngine(const Grid& g) : grid_(g), freq_(fft_frequencies(g)) {}

ArrayXcd SpectralEngine::forward(const ArrayXcd& v) const {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = v.matrix();
  Eigen::VectorXcd out;
  fft.fwd(out, in);
  return out.array();
}

ArrayXcd SpectralEngine::inverse(const ArrayXcd& v) const {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in = v.matrix();
  Eigen::VectorXcd out;
  fft.inv(out, in);
  return out.array();
}

ArrayXcd SpectralEngine::derivative(const ArrayXcd& v, int order) const {
  ArrayXcd spec = forward(v);
  const Index n = grid_.n;
  for (Index k = 0; k < n; ++k) {
    const Complex iu(0.0, freq_[k]);
    spec[k] *= std::pow(iu, order);
  }
  if (order % 2 == 1) spec[n / 2] = 0.0;  // unpaired Nyquist mode
  return inverse(spec);
}

ArrayXd SpectralEngine::derivative_real(const ArrayXd& v, int order) const {
  return derivative(v.cast<Complex>(), order).real();
}

GridFunction apply_generator_spectral(const GridFunction& f, const SpectralSymbol& sym,
                                      SpectralDiagnostics* diag, double boundary_tol) {
  const SpectralEngine engine(f.grid);
  if (diag) {
    const double scale = f.values.abs().maxCoeff();
    const double edge = std::max(std::abs(f.values[0]), std::abs(f.values[f.size() - 1]));
    diag->boundary_magnitude = scale > 0.0 ? edge / scale : 0.0;
    diag->boundary_warning = diag->boundary_magnitude > boundary_tol;
  }
  const ArrayXd& eta = sym.table_for(f.grid);
  ArrayXcd spec = engine.forward(f.values);
  spec *= eta.cast<Complex>();
  return GridFunction(f.grid, engine.inverse(spec));
}

namespace {

struct SmallMoments {
  double eps = 0.0;
  double s2 = 0.0, s4 = 0.0, s6 = 0.0;
};

SmallMoments compute_moments(const LevyMeasure& m, double eps, const quad::Options& q) {
  SmallMoments sm;
  sm.eps = eps;
  sm.s2 = small_moment(m, 2, eps, q);
  sm.s4 = small_moment(m, 4, eps, q);
  sm.s6 = small_moment(m, 6, eps, q);
  return sm;
}

double pick_taylor_band(const Grid& g, const GeneratorOptions& opt) {
  if (opt.taylor_band > 0.0) return opt.taylor_band;
  return std::clamp(8.0 * g.spacing(), 1e-6, 1.0);
}

quad::Options quad_options(const GeneratorOptions& opt) {
  quad::Options q;
  q.abs_tol = opt.abs_tol;
  q.rel_tol = opt.rel_tol;
  return q;
}

/// Per-point jump integral with even-Taylor compensation inside |y| <= eps:
///   result = c2 s2 + c4 s4 + c6 s6 + int_{|y|>eps} band(y) l(dy)
/// where band(y) already contains the measure density. Returns the combined
/// quadrature error estimate through *err.
class JumpIntegrator {
 public:
  JumpIntegrator(const LevyMeasure& m, SmallMoments sm, quad::Options q, double grid_span,
                 double panel_width)
      : measure_(m),
        sm_(sm),
        q_(q),
        far_start_(std::max(1.0, 2.0 * grid_span)),
        panel_(std::max(0.25, panel_width)) {}

  /// integrand: y -> value excluding the measure density (density applied
  /// here). The band [1, far_start_] is pre-panelled at bounded width so that
  /// off-centre features (a translated bump seen through f(x+y)) always land
  /// on quadrature nodes; a lone adaptive panel would not notice them. Beyond
  /// far_start_ every argument is outside the grid and the integrand is a
  /// smooth tail, handled by the 1/y substitution.
  double integrate_tails(const std::function<double(double)>& integrand, double* err) const {
    const auto g = [&](double y) { return integrand(y) * measure_.density(y); };
    double total = 0.0, e = 0.0;
    const long n_panels =
        std::max<long>(1, static_cast<long>(std::ceil((far_start_ - 1.0) / panel_)));
    quad::Options panel_q = q_;
    panel_q.abs_tol = std::max(q_.abs_tol / (2.0 * n_panels), 1e-300);
    for (const double sign : {1.0, -1.0}) {
      const auto side = [&](double y) { return g(sign * y); };
      if (sm_.eps < 1.0) {
        auto piece = quad::integrate(side, sm_.eps, 1.0, q_);
        total += piece.value;
        e += piece.error_estimate;
      }
      double lo = std::max(1.0, sm_.eps);
      for (long i = 0; i < n_panels && lo < far_start_; ++i) {
        const double hi = (i + 1 == n_panels) ? far_start_ : std::min(far_start_, 1.0 + (i + 1) * panel_);
        if (hi <= lo) continue;
        auto piece = quad::integrate(side, lo, hi, panel_q);
        total += piece.value;
        e += piece.error_estimate;
        lo = hi;
      }
      auto far = quad::integrate_to_infinity(side, lo, q_);
      total += far.value;
      e += far.error_estimate;
    }
    if (err) *err += e;
    return total;
  }

  double taylor(double c2, double c4, double c6) const {
    return c2 * sm_.s2 + c4 * sm_.s4 + c6 * sm_.s6;
  }

  double eps() const { return sm_.eps; }

 private:
  const LevyMeasure& measure_;
  SmallMoments sm_;
  quad::Options q_;
  double far_start_;
  double panel_;
};

struct DerivativeSet {
  ArrayXd d1, d2, d3, d4, d5, d6;
};

DerivativeSet spectral_derivatives(const SpectralEngine& engine, const ArrayXd& v, int up_to) {
  DerivativeSet d;
  d.d1 = engine.derivative_real(v, 1);
  d.d2 = engine.derivative_real(v, 2);
  if (up_to >= 3) d.d3 = engine.derivative_real(v, 3);
  if (up_to >= 4) d.d4 = engine.derivative_real(v, 4);
  if (up_to >= 5) d.d5 = engine.derivative_real(v, 5);
  if (up_to >= 6) d.d6 = engine.derivative_real(v, 6);
  return d;
}

ArrayXd generator_quadrature_real(const Grid& grid, const ArrayXd& v,
                                  const GridInterpolant& F, const GeneratingTriplet& t,
                                  const GeneratorOptions& opt, QuadratureDiagnostics* diag) {
  const Index n = grid.n;
  const SpectralEngine engine(grid);
  const DerivativeSet d = spectral_derivatives(engine, v, 6);

  ArrayXd out = ArrayXd::Zero(n);
  if (t.a > 0.0) out += 0.5 * t.a * d.d2;

  if (diag) {
    diag->residual = ArrayXd::Zero(n);
    diag->flagged.clear();
    diag->worst_residual = 0.0;
  }
  if (!t.levy) return out;

  const LevyMeasure& m = *t.levy;
  const quad::Options q = quad_options(opt);
  const double eps = pick_taylor_band(grid, opt);
  const JumpIntegrator jumps(m, compute_moments(m, eps, q), q, grid.length(), opt.far_panel_width);

  ArrayXd residual = ArrayXd::Zero(n);
  const ArrayXd xs = grid.points();
  parallel_for(n, [&](std::ptrdiff_t i) {
    const double x = xs[i];
    const double fi = v[i];
    const double f1 = d.d1[i];
    double err = 0.0;
    double value = jumps.taylor(0.5 * d.d2[i], d.d4[i] / 24.0, d.d6[i] / 720.0);
    // Band integrand: delta^2 inside |y| <= 1, plain difference beyond. The
    // compensator y f'(x) integrates to zero over symmetric bands but is kept
    // pointwise so the adaptive rule sees the smooth compensated shape.
    value += jumps.integrate_tails(
        [&](double y) {
          const double diff = F(x + y) - fi;
          return (std::abs(y) <= 1.0) ? diff - y * f1 : diff;
        },
        &err);
    out[i] += value;
    residual[i] = err;
  });

  if (diag) {
    diag->residual = residual;
    diag->worst_residual = residual.maxCoeff();
    const double tol = std::max(opt.abs_tol * 100.0, 1e-12);
    for (Index i = 0; i < n; ++i)
      if (residual[i] > tol) diag->flagged.push_back(i);
  }
  return out;
}

}  // namespace

GridFunction apply_generator_quadrature(const GridFunction& f, const GeneratingTriplet& t,
                                        const GeneratorOptions& opt,
                                        QuadratureDiagnostics* diag) {
  if (f.is_real()) {
    const ArrayXd v = f.values.real();
    const GridInterpolant F = GridInterpolant::make(GridFunction(f.grid, v.cast<Complex>()),
                                                    opt.tail);
    ArrayXd out = generator_quadrature_real(f.grid, v, F, t, opt, diag);
    return GridFunction(f.grid, out.cast<Complex>());
  }
  // Complex data: apply to the real and imaginary parts separately.
  const ArrayXd re = f.values.real();
  const ArrayXd im = f.values.imag();
  const GridInterpolant Fre =
      GridInterpolant::make(GridFunction(f.grid, re.cast<Complex>()), opt.tail);
  const GridInterpolant Fim =
      GridInterpolant::make(GridFunction(f.grid, im.cast<Complex>()), opt.tail);
  const ArrayXd out_re = generator_quadrature_real(f.grid, re, Fre, t, opt, diag);
  const ArrayXd out_im = generator_quadrature_real(f.grid, im, Fim, t, opt, nullptr);
  ArrayXcd out(f.size());
  out.real() = out_re;
  out.imag() = out_im;
  return GridFunction(f.grid, out);
}

GridFunction jump_carre_du_champ(const GridFunction& phi, const GridFunction& f,
                                 const GeneratingTriplet& t, const GeneratorOptions& opt) {
  if (!(phi.grid == f.grid)) throw GridError("carre du champ requires matching grids");
  if (!phi.is_real(1e-9) || !f.is_real(1e-9))
    throw GridError("carre du champ expects real data");
  const Grid& grid = phi.grid;
  const Index n = grid.n;
  ArrayXd out = ArrayXd::Zero(n);
  if (!t.levy) return GridFunction(grid, out.cast<Complex>());

  const ArrayXd pv = phi.values.real();
  const ArrayXd fv = f.values.real();
  const GridInterpolant P = GridInterpolant::make(phi, opt.tail);
  const GridInterpolant F = GridInterpolant::make(f, opt.tail);
  const SpectralEngine engine(grid);
  const DerivativeSet dp = spectral_derivatives(engine, pv, 5);
  const DerivativeSet df = spectral_derivatives(engine, fv, 5);

  const quad::Options q = quad_options(opt);
  const double eps = pick_taylor_band(grid, opt);
  const JumpIntegrator jumps(*t.levy, compute_moments(*t.levy, eps, q), q, grid.length(), opt.far_panel_width);

  const ArrayXd xs = grid.points();
  parallel_for(n, [&](std::ptrdiff_t i) {
    const double x = xs[i];
    const double pi_ = pv[i], fi = fv[i];
    // Even Taylor coefficients of delta_y(phi) delta_y(f):
    const double c2 = dp.d1[i] * df.d1[i];
    const double c4 = dp.d2[i] * df.d2[i] / 4.0 + (dp.d1[i] * df.d3[i] + dp.d3[i] * df.d1[i]) / 6.0;
    const double c6 = dp.d3[i] * df.d3[i] / 36.0 +
                      (dp.d1[i] * df.d5[i] + dp.d5[i] * df.d1[i]) / 120.0 +
                      (dp.d2[i] * df.d4[i] + dp.d4[i] * df.d2[i]) / 48.0;
    double value = jumps.taylor(c2, c4, c6);
    value += jumps.integrate_tails(
        [&](double y) { return (P(x + y) - pi_) * (F(x + y) - fi); }, nullptr);
    out[i] = value;
  });
  return GridFunction(grid, out.cast<Complex>());
}

double product_rule_residual(const GridFunction& phi, const GridFunction& f,
                             const GeneratingTriplet& t, const GeneratorOptions& opt) {
  if (!(phi.grid == f.grid)) throw GridError("product rule requires matching grids");
  GridFunction pf(phi.grid, phi.values * f.values);

  const GridFunction l0_pf = apply_generator_quadrature(pf, t, opt);
  const GridFunction l0_p = apply_generator_quadrature(phi, t, opt);
  const GridFunction l0_f = apply_generator_quadrature(f, t, opt);
  GridFunction correction = jump_carre_du_champ(phi, f, t, opt);
  if (t.a > 0.0) {
    // Diffusion part of the product rule: a * phi' f'.
    const SpectralEngine engine(phi.grid);
    const ArrayXd p1 = engine.derivative_real(phi.values.real(), 1);
    const ArrayXd f1 = engine.derivative_real(f.values.real(), 1);
    correction.values += (t.a * p1 * f1).cast<Complex>();
  }

  const ArrayXcd resid = l0_pf.values - f.values * l0_p.values - phi.values * l0_f.values -
                         correction.values;
  const double num = GridFunction(phi.grid, resid).l2_norm();
  const double den = l0_pf.l2_norm();
  if (den < 1e-300) return 0.0;
  return num / den;
}

}  // namespace levymech
