#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "levymech/grid.hpp"
#include "levymech/quadrature.hpp"

namespace levymech {

/// Far-field model density ~ coeff * |y|^{-1-exponent} for |y| >= valid_from.
/// Drives tail-mass closed forms, the oscillatory symbol tail and closed-form
/// jump sampling.
struct AlgebraicTail {
  double coeff = 0.0;
  double exponent = 0.0;
  double valid_from = std::numeric_limits<double>::infinity();

  bool available() const {
    return std::isfinite(valid_from) && coeff > 0.0 && exponent > 0.0;
  }
};

/// Symmetric Lévy measure given through its density on y != 0. The density
/// callable must be total on R \ {0}; loaders extend tabulated data by their
/// declared singularity and fitted tail before constructing this.
struct LevyMeasure {
  std::function<double(double)> density;
  double singularity_order = 2.0;  // density ~ |y|^{-order} as y -> 0
  double tail_cutoff_hint = 1e4;   // truncation scale when no tail model exists
  AlgebraicTail tail;
  bool exact_power_law = false;  // density equals the tail model globally
  std::string name = "custom";
};

/// sigma_p(eps) = int_{0<|y|<=eps} |y|^p l(dy), p even.
double small_moment(const LevyMeasure& m, int power, double eps,
                    const quad::Options& opt = {});

/// int_{0<|y|<=eps} y^2 l(dy); nondecreasing in eps.
double small_jump_variance(const LevyMeasure& m, double eps,
                           const quad::Options& opt = {});

/// int_{|y|>s} l(dy); closed form beyond the tail model's validity.
double tail_mass(const LevyMeasure& m, double s, const quad::Options& opt = {});
/// One-sided version int_s^inf l(dy) (= tail_mass/2 by symmetry).
double tail_mass_one_sided(const LevyMeasure& m, double s,
                           const quad::Options& opt = {});

/// Built-in measures. "cauchy" carries density 1/(pi y^2).
LevyMeasure cauchy_measure();
LevyMeasure measure_from_name(const std::string& name);
std::vector<std::string> measure_names();

/// Tabulated measure from (y, density) rows; symmetric extension, declared
/// singularity order below the first sample, fitted algebraic tail beyond the
/// last.
LevyMeasure measure_from_table(const std::vector<double>& y,
                               const std::vector<double>& density,
                               double singularity_order);

/// Generating triplet (a, l, drift) of a symmetric Lévy process; drift stays 0.
struct GeneratingTriplet {
  double a = 0.0;
  std::optional<LevyMeasure> levy;
  double drift = 0.0;

  bool has_jumps() const { return levy.has_value(); }

  static GeneratingTriplet gaussian(double a) { return GeneratingTriplet{a, {}, 0.0}; }
  static GeneratingTriplet pure_jump(LevyMeasure m) {
    return GeneratingTriplet{0.0, std::move(m), 0.0};
  }
  static GeneratingTriplet cauchy() { return pure_jump(cauchy_measure()); }
};

struct ValidationIssue {
  std::string check;
  std::string detail;
};

struct TripletValidation {
  bool gaussian_ok = true;
  bool drift_ok = true;
  bool finite_ok = true;
  bool symmetric_ok = true;
  bool positive_ok = true;
  bool integrable_ok = true;
  double square_one_integral = 0.0;  // int (|y|^2 ∧ 1) l(dy)
  std::vector<ValidationIssue> issues;

  bool passed() const {
    return gaussian_ok && drift_ok && finite_ok && symmetric_ok && positive_ok &&
           integrable_ok;
  }
  std::string summary() const;
};

TripletValidation validate_triplet(const GeneratingTriplet& t,
                                   const quad::Options& opt = {});

/// eta(u) of the Lévy–Khintchine representation for a symmetric triplet:
///   eta(u) = -a u^2 / 2 + int_{y != 0} (cos(u y) - 1) l(dy)
/// evaluated by singularity-split quadrature with Taylor compensation near 0
/// and tail-model compensation beyond the truncation point.
double log_characteristic(const GeneratingTriplet& t, double u,
                          const quad::Options& opt = {});

/// exp(time * eta(u)); time must be nonnegative.
Complex transition_char_function(const GeneratingTriplet& t, double u, double time,
                                 const quad::Options& opt = {});

/// Real, even spectral symbol u -> eta(u) with a per-grid multiplier cache so
/// repeated pseudo-differential applications do not re-run the quadrature.
class SpectralSymbol {
 public:
  SpectralSymbol() = default;
  explicit SpectralSymbol(std::function<double(double)> eval, std::string name = "");

  double operator()(double u) const;
  const std::string& name() const { return name_; }

  /// eta evaluated at the angular frequencies of `g`, cached per grid.
  const ArrayXd& table_for(const Grid& g) const;

 private:
  std::function<double(double)> eval_;
  std::string name_;
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<Index, double>, ArrayXd> tables;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

SpectralSymbol make_symbol(const GeneratingTriplet& t, const quad::Options& opt = {});

/// Angular FFT frequencies of a grid in fftfreq layout (0, 1, ..., -1) * 2pi/L.
ArrayXd fft_frequencies(const Grid& g);

}  // namespace levymech
