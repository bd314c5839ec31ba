#include "levymech/grid.hpp"

#include <cmath>

namespace levymech {

namespace {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid Grid::make(double x_min, double x_max, Index n) {
  if (!(x_min < x_max)) throw GridError("grid requires x_min < x_max");
  if (n < 8 || !is_power_of_two(n))
    throw GridError("grid size must be a power of two and at least 8");
  return Grid{x_min, x_max, n};
}

ArrayXd Grid::points() const {
  ArrayXd x(n);
  const double h = spacing();
  for (Index i = 0; i < n; ++i) x[i] = x_min + h * static_cast<double>(i);
  return x;
}

GridFunction::GridFunction(Grid g, ArrayXcd v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n) throw GridError("value count does not match grid");
}

bool GridFunction::is_real(double tol) const {
  const double scale = values.abs().maxCoeff();
  if (scale == 0.0) return true;
  return values.imag().abs().maxCoeff() <= tol * scale;
}

double GridFunction::l2_norm() const { return std::sqrt(h() * values.abs2().sum()); }

Complex GridFunction::integral() const { return h() * values.sum(); }

Complex inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid)) throw GridError("inner product requires matching grids");
  return f.h() * (f.values.conjugate() * g.values).sum();
}

GridFunction sample(const Grid& g, const std::function<Complex(double)>& f) {
  ArrayXcd v(g.n);
  const double h = g.spacing();
  for (Index i = 0; i < g.n; ++i) {
    const double x = g.x_min + h * static_cast<double>(i);
    const Complex z = f(x);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw GridError("non-finite sample at index " + std::to_string(i) + " (x = " +
                      std::to_string(x) + ")");
    v[i] = z;
  }
  return GridFunction(g, std::move(v));
}

GridFunction sample_real(const Grid& g, const std::function<double(double)>& f) {
  return sample(g, [&f](double x) { return Complex(f(x), 0.0); });
}

double TailFit::eval_left(double x) const {
  switch (kind) {
    case TailModel::Zero: return 0.0;
    case TailModel::Constant: return coeff_left;
    default: break;
  }
  const double ax = std::abs(x);
  return ax > 0.0 ? coeff_left * std::pow(ax, -exponent_left) : coeff_left;
}

double TailFit::eval_right(double x) const {
  switch (kind) {
    case TailModel::Zero: return 0.0;
    case TailModel::Constant: return coeff_right;
    default: break;
  }
  const double ax = std::abs(x);
  return ax > 0.0 ? coeff_right * std::pow(ax, -exponent_right) : coeff_right;
}

namespace {

// Least-squares fit of log|f| = log c - p log|x| over the outer fitting window
// of one side. Returns false when the samples are unusable (zeros, sign
// changes, |x| too close to 0).
bool fit_side(const ArrayXd& xs, const ArrayXd& vals, double& coeff, double& exponent) {
  const Index m = xs.size();
  if (m < 4) return false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index i = 0; i < m; ++i) {
    if (!(vals[i] > 0.0) || std::abs(xs[i]) < 1e-6) return false;
    const double lx = std::log(std::abs(xs[i]));
    const double ly = std::log(vals[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) return false;
  const double slope = (m * sxy - sx * sy) / denom;
  const double icept = (sy - slope * sx) / m;
  exponent = -slope;
  coeff = std::exp(icept);
  return std::isfinite(exponent) && std::isfinite(coeff);
}

}  // namespace

GridInterpolant GridInterpolant::make(const GridFunction& f, TailModel model) {
  if (!f.is_real(1e-9))
    throw GridError("interpolant requires real-valued data");
  GridInterpolant out;
  out.grid_ = f.grid;
  out.values_ = f.values.real();

  const Index n = out.values_.size();
  const double scale = out.values_.abs().maxCoeff();
  TailFit fit;
  const double edge_mag = std::max(std::abs(out.values_[0]), std::abs(out.values_[n - 1]));

  TailModel chosen = model;
  if (model == TailModel::Auto)
    chosen = (scale == 0.0 || edge_mag < 1e-13 * scale) ? TailModel::Zero : TailModel::Algebraic;

  switch (chosen) {
    case TailModel::Zero:
      fit.kind = TailModel::Zero;
      break;
    case TailModel::Constant:
      fit.kind = TailModel::Constant;
      fit.coeff_left = out.values_[0];
      fit.coeff_right = out.values_[n - 1];
      break;
    default: {
      // Outer 10% of samples per side, capped to 64 points.
      const Index w = std::min<Index>(std::max<Index>(4, n / 10), 64);
      ArrayXd xl(w), vl(w), xr(w), vr(w);
      for (Index i = 0; i < w; ++i) {
        xl[i] = out.grid_.point(i);
        vl[i] = out.values_[i];
        xr[i] = out.grid_.point(n - w + i);
        vr[i] = out.values_[n - w + i];
      }
      fit.kind = TailModel::Algebraic;
      const bool okl = fit_side(xl, vl, fit.coeff_left, fit.exponent_left);
      const bool okr = fit_side(xr, vr, fit.coeff_right, fit.exponent_right);
      if (!okl || !okr) {
        if (model == TailModel::Algebraic)
          throw GridError("algebraic tail fit failed (non-positive or vanishing edge data)");
        fit = TailFit{};  // Auto fallback: zero extension
      }
      break;
    }
  }
  out.tail_ = fit;
  return out;
}

double GridInterpolant::operator()(double x) const {
  const double h = grid_.spacing();
  const Index n = values_.size();
  if (x < grid_.x_min) return tail_.eval_left(x);
  const double last = grid_.point(n - 1);
  if (x > last) return tail_.eval_right(x);

  const double s = (x - grid_.x_min) / h;
  Index i = static_cast<Index>(std::floor(s));
  // 4-point stencil centred on [i, i+1]; clamp near the edges.
  Index i0 = std::clamp<Index>(i - 1, 0, n - 4);
  const double t = (x - grid_.point(i0)) / h;  // in [1, 2] away from edges
  const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  const double w0 = -t1 * t2 * t3 / 6.0;
  const double w1 = t0 * t2 * t3 / 2.0;
  const double w2 = -t0 * t1 * t3 / 2.0;
  const double w3 = t0 * t1 * t2 / 6.0;
  return w0 * values_[i0] + w1 * values_[i0 + 1] + w2 * values_[i0 + 2] + w3 * values_[i0 + 3];
}

namespace {

// \int_edge^infty (c x^{-p})^k dx for k = 1, 2; infinite when too flat.
double algebraic_tail_mass(double c, double p, double edge, int power) {
  const double q = p * power;
  if (!(q > 1.0)) return std::numeric_limits<double>::infinity();
  return std::pow(std::abs(c), power) * std::pow(edge, 1.0 - q) / (q - 1.0);
}

}  // namespace

double GridInterpolant::integral_with_tails() const {
  const double h = grid_.spacing();
  double total = h * values_.sum();
  if (tail_.kind == TailModel::Algebraic) {
    total += algebraic_tail_mass(tail_.coeff_left, tail_.exponent_left,
                                 std::abs(grid_.x_min), 1);
    total += algebraic_tail_mass(tail_.coeff_right, tail_.exponent_right,
                                 std::abs(grid_.point(values_.size() - 1)), 1);
  }
  return total;
}

double GridInterpolant::square_integral_with_tails() const {
  const double h = grid_.spacing();
  double total = h * values_.square().sum();
  if (tail_.kind == TailModel::Algebraic) {
    total += algebraic_tail_mass(tail_.coeff_left, tail_.exponent_left,
                                 std::abs(grid_.x_min), 2);
    total += algebraic_tail_mass(tail_.coeff_right, tail_.exponent_right,
                                 std::abs(grid_.point(values_.size() - 1)), 2);
  }
  return total;
}

}  // namespace levymech
