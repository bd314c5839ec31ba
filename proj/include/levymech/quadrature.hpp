#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace levymech::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;

  Result& operator+=(const Result& o) {
    value += o.value;
    error_estimate += o.error_estimate;
    evaluations += o.evaluations;
    converged = converged && o.converged;
    return *this;
  }
};

/// Thrown on hard non-convergence; carries the residual estimate so callers
/// can report it.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

struct Options {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  int max_depth = 60;
  bool throw_on_failure = false;
};

/// Globally adaptive Gauss(7)/Kronrod(15) on [a, b]. Endpoints are never
/// evaluated, so integrable endpoint singularities are tolerated.
Result integrate(const Integrand& f, double a, double b, const Options& opt = {});

/// Integral of f over (0, b] where f may have an integrable singularity at 0.
/// Dyadic panels [b/2^{k+1}, b/2^k] are accumulated until their contribution
/// falls below tolerance.
Result integrate_to_zero(const Integrand& f, double b, const Options& opt = {});

/// Integral of f over [a, inf) via the substitution t = 1/y. Requires f to
/// decay at least like y^{-2} for the transformed integrand to stay bounded;
/// slower algebraic decay still converges through the dyadic singular rule.
Result integrate_to_infinity(const Integrand& f, double a, const Options& opt = {});

/// Integral of f(y) * cos(u y) over [a, b], split into near-period panels so
/// the adaptive rule never sees more than ~one oscillation at a time.
Result integrate_oscillatory(const Integrand& f, double u, double a, double b,
                             const Options& opt = {});

/// \int_Z^infty cos(t) t^{-1-alpha} dt for Z > 0, alpha > 0: per-period panels
/// out to max(Z, Z_far) and an integration-by-parts asymptotic series beyond.
double cosine_power_tail(double Z, double alpha, const Options& opt = {});

}  // namespace levymech::quad
