#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace levymech {

using Complex = std::complex<double>;
using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using Eigen::Index;

/// Uniform periodic-convention grid: x_i = x_min + i h, h = (x_max - x_min)/n,
/// the right endpoint excluded. n must be a power of two (transform-friendly).
struct Grid {
  double x_min = -1.0;
  double x_max = 1.0;
  Index n = 8;

  static Grid make(double x_min, double x_max, Index n);
  /// Symmetric grid about 0 on [-x_max, x_max).
  static Grid symmetric(double x_max, Index n) { return make(-x_max, x_max, n); }

  double spacing() const { return (x_max - x_min) / static_cast<double>(n); }
  double length() const { return x_max - x_min; }
  double point(Index i) const { return x_min + spacing() * static_cast<double>(i); }
  ArrayXd points() const;
  bool contains(double x) const { return x >= x_min && x < x_max; }

  bool operator==(const Grid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n == o.n;
  }
};

/// Complex samples on a Grid; the universal carrier for wave functions,
/// ground states, potentials and densities.
struct GridFunction {
  Grid grid;
  ArrayXcd values;

  GridFunction() = default;
  GridFunction(Grid g, ArrayXcd v);

  Index size() const { return values.size(); }
  double h() const { return grid.spacing(); }

  bool is_real(double tol = 1e-12) const;
  ArrayXd real_part() const { return values.real(); }

  /// sqrt(h * sum |v|^2): the L2(dx) norm of the piecewise sampling.
  double l2_norm() const;
  /// h * sum v (rectangle rule; spectrally accurate for decaying samples).
  Complex integral() const;
};

/// h * sum conj(f) g.
Complex inner_product(const GridFunction& f, const GridFunction& g);

GridFunction sample(const Grid& g, const std::function<Complex(double)>& f);
GridFunction sample_real(const Grid& g, const std::function<double(double)>& f);

/// Extension models for evaluating a grid function outside its domain.
enum class TailModel {
  Auto,       // algebraic fit when edge samples are significant, else zero
  Zero,       // compactly supported data
  Algebraic,  // c |x|^{-p}, fitted per side on the outer decade
  Constant,   // freeze the edge value (improper states such as phi == 1)
};

struct TailFit {
  TailModel kind = TailModel::Zero;
  // c |x|^{-p} per side; meaningful for Algebraic (and Constant with p = 0).
  double coeff_left = 0.0, exponent_left = 0.0;
  double coeff_right = 0.0, exponent_right = 0.0;

  double eval_left(double x) const;   // x <= fitted domain edge
  double eval_right(double x) const;  // x >= fitted domain edge
};

/// Cubic (4-point Lagrange) interpolation inside the grid, tail model outside.
/// Real-valued: intended for phi, rho, V and test functions.
class GridInterpolant {
 public:
  GridInterpolant() = default;
  static GridInterpolant make(const GridFunction& f, TailModel model = TailModel::Auto);

  double operator()(double x) const;
  const TailFit& tail() const { return tail_; }
  const Grid& grid() const { return grid_; }

  /// Tail-corrected integral of the interpolated data over all of R
  /// (grid rectangle sum plus the analytic tail-model mass).
  double integral_with_tails() const;
  /// Same for the square of the data (normalization checks).
  double square_integral_with_tails() const;

 private:
  Grid grid_;
  ArrayXd values_;
  TailFit tail_;
};

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levymech
