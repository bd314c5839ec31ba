#include "levymech/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "levymech/parallel.hpp"

namespace levymech {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

PathRng::PathRng(std::uint64_t master_seed, std::uint64_t path_index)
    : gen_(splitmix64(master_seed ^ splitmix64(path_index + 0x51ed2701))) {}

double PathRng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double PathRng::normal() {
  // Box-Muller without caching the second deviate: a fixed two-draw cost
  // keeps the stream layout independent of call history.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double PathRng::exponential() {
  double u = uniform();
  while (u >= 1.0) u = uniform();
  return -std::log1p(-u);
}

long PathRng::poisson(double mean) {
  if (!(mean >= 0.0) || mean >= 700.0)
    throw std::invalid_argument("poisson mean out of range: " + std::to_string(mean));
  if (mean == 0.0) return 0;
  const double limit = std::exp(-mean);
  long k = 0;
  double p = 1.0;
  do {
    p *= uniform();
    if (p <= limit) break;
    ++k;
  } while (k < 100000);
  return k;
}

double PathRng::cauchy(double scale) {
  double u = uniform();
  while (u == 0.5) u = uniform();  // avoid the pole exactly
  return scale * std::tan(M_PI * (u - 0.5));
}

JumpSampler::JumpSampler(const LevyMeasure& m, double eps, const quad::Options& q)
    : eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("jump sampler requires eps > 0");
  rate_ = tail_mass(m, eps, q);
  if (!(rate_ > 0.0)) throw std::invalid_argument("measure has no mass beyond eps");

  if (m.exact_power_law && m.tail.available()) {
    power_law_ = true;
    alpha_ = m.tail.exponent;
    return;
  }

  // One-sided table on [eps, Y_far], log-spaced, with the algebraic tail
  // carrying the remaining mass.
  const double y_far =
      m.tail.available() ? std::max(m.tail.valid_from, 100.0 * eps) : m.tail_cutoff_hint;
  const int bins = 2048;
  log_y_.resize(bins + 1);
  cdf_.resize(bins + 1);
  const double l0 = std::log(eps), l1 = std::log(y_far);
  log_y_[0] = l0;
  cdf_[0] = 0.0;
  double acc = 0.0;
  for (int i = 1; i <= bins; ++i) {
    log_y_[i] = l0 + (l1 - l0) * i / bins;
    acc += quad::integrate(m.density, std::exp(log_y_[i - 1]), std::exp(log_y_[i]), q).value;
    cdf_[i] = acc;
  }
  const double one_sided = 0.5 * rate_;
  table_mass_ = acc / one_sided;
  for (auto& c : cdf_) c /= one_sided;
  if (m.tail.available()) {
    tail_from_ = y_far;
    tail_alpha_ = m.tail.exponent;
  } else {
    // No model: renormalize the table to carry all mass (truncation at the
    // cutoff hint, consistent with the measure's declared support).
    for (auto& c : cdf_) c /= table_mass_;
    table_mass_ = 1.0;
  }
}

double JumpSampler::draw(PathRng& rng) const {
  const double u_sign = rng.uniform();
  const double sign = u_sign < 0.5 ? -1.0 : 1.0;
  double u = rng.uniform();
  if (u >= 1.0) u = 0.5;
  double mag;
  if (power_law_) {
    // P(|Y| > s | |Y| > eps) = (eps/s)^alpha.
    mag = eps_ * std::pow(1.0 - u, -1.0 / alpha_);
  } else if (u >= table_mass_) {
    // Algebraic tail: conditional survival ((tail_from)/s)^alpha.
    const double w = (1.0 - u) / std::max(1e-300, 1.0 - table_mass_);
    mag = tail_from_ * std::pow(w, -1.0 / tail_alpha_);
  } else {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const size_t hi = std::min<size_t>(std::distance(cdf_.begin(), it), cdf_.size() - 1);
    const size_t lo = hi > 0 ? hi - 1 : 0;
    const double span = cdf_[hi] - cdf_[lo];
    const double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
    mag = std::exp(log_y_[lo] + t * (log_y_[hi] - log_y_[lo]));
  }
  return sign * mag;
}

StartSampler StartSampler::fixed(double x0) {
  StartSampler s;
  s.fixed_ = true;
  s.x0_ = x0;
  return s;
}

StartSampler StartSampler::from_density(const GridFunction& rho) {
  if (!rho.is_real(1e-9)) throw GridError("start density must be real");
  StartSampler s;
  s.fixed_ = false;
  s.grid_ = rho.grid;
  const ArrayXd v = rho.values.real();
  if (v.minCoeff() < 0.0) throw GridError("start density must be nonnegative");
  s.cdf_.resize(rho.grid.n + 1);
  s.cdf_[0] = 0.0;
  for (Index i = 0; i < rho.grid.n; ++i) s.cdf_[i + 1] = s.cdf_[i] + v[i];
  const double total = s.cdf_.back();
  if (!(total > 0.0)) throw GridError("start density has no mass on the grid");
  for (auto& c : s.cdf_) c /= total;
  return s;
}

double StartSampler::sample(PathRng& rng) const {
  if (fixed_) return x0_;
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const size_t hi = std::clamp<size_t>(std::distance(cdf_.begin(), it), 1, cdf_.size() - 1);
  const size_t lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  const double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.5;
  return grid_.point(static_cast<Index>(lo)) + t * grid_.spacing();
}

namespace {

std::vector<double> resolve_record_times(const SamplerConfig& cfg) {
  std::vector<double> times = cfg.record_times;
  if (times.empty()) times = {cfg.t_final};
  for (size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || times[i] > cfg.t_final + 1e-12)
      throw std::invalid_argument("record times must lie in (0, t_final]");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw std::invalid_argument("record times must be strictly increasing");
  }
  return times;
}

struct StepWorkspace {
  const JumpSampler* jumps = nullptr;
  double sigma_eps = 0.0;  // sqrt(sigma^2(eps))
  double dt_max = 1e-2;
  double proposals_per_step = 1.0;
  // Thinning data; null phi means the base Lévy process (accept everything).
  const std::function<double(double)>* phi = nullptr;
  const std::function<double(double)>* bound = nullptr;
  std::atomic<long>* proposals = nullptr;
  std::atomic<long>* accepted = nullptr;
  std::atomic<long>* violations = nullptr;
};

/// Advances one path from t to t_to. Draw order per step: Poisson count,
/// then per proposal (sign uniform, magnitude uniform, acceptance uniform
/// only when the ratio is < 1), then one Gaussian. With phi == 1 and M == 1
/// the acceptance draw never happens and the stream matches the base scheme
/// exactly.
double advance(PathRng& rng, const StepWorkspace& w, double x, double t, double t_to) {
  long n_prop = 0, n_acc = 0, n_viol = 0;
  while (t < t_to - 1e-15) {
    double rate = w.jumps ? w.jumps->rate() : 0.0;
    double mx = 1.0;
    if (w.bound) {
      mx = (*w.bound)(x);
      if (!(mx >= 1.0)) {
        ++n_viol;  // a valid bound dominates ratio 1 at y -> 0
        mx = std::max(mx, 1.0);
      }
      rate *= mx;
    }
    const double dt = rate > 0.0
                          ? std::min({w.dt_max, w.proposals_per_step / rate, t_to - t})
                          : std::min(w.dt_max, t_to - t);
    const long k = rate > 0.0 ? rng.poisson(rate * dt) : 0;
    for (long j = 0; j < k; ++j) {
      const double y = w.jumps->draw(rng);
      ++n_prop;
      if (w.phi) {
        // The proposal rate stays frozen over the step, but the acceptance
        // ratio must be valid at the current state (an accepted jump earlier
        // in the same step may have moved it).
        const double mx_now = j == 0 ? mx : std::max(1.0, (*w.bound)(x));
        const double ratio = (*w.phi)(x + y) / ((*w.phi)(x)*mx_now);
        if (ratio > 1.0 + 1e-9) ++n_viol;
        if (ratio < 1.0 && rng.uniform() >= ratio) continue;
      }
      x += y;
      ++n_acc;
    }
    x += w.sigma_eps * std::sqrt(dt) * rng.normal();
    t += dt;
  }
  if (w.proposals) w.proposals->fetch_add(n_prop, std::memory_order_relaxed);
  if (w.accepted) w.accepted->fetch_add(n_acc, std::memory_order_relaxed);
  if (w.violations) w.violations->fetch_add(n_viol, std::memory_order_relaxed);
  return x;
}

PathEnsemble run_scheme(const StartSampler& start, const SamplerConfig& cfg,
                        const StepWorkspace& w, const std::string& kind) {
  PathEnsemble pe;
  pe.times = resolve_record_times(cfg);
  pe.seed = cfg.seed;
  pe.paths.resize(cfg.n_paths, pe.times.size());
  const auto& times = pe.times;
  parallel_for(cfg.n_paths, [&](std::ptrdiff_t p) {
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
    double x = start.sample(rng);
    double t = 0.0;
    for (size_t j = 0; j < times.size(); ++j) {
      x = advance(rng, w, x, t, times[j]);
      t = times[j];
      pe.paths(p, j) = x;
    }
  });
  pe.scheme.kind = kind;
  pe.scheme.eps = cfg.eps;
  pe.scheme.sigma2_eps = w.sigma_eps * w.sigma_eps;
  pe.scheme.jump_rate = w.jumps ? w.jumps->rate() : 0.0;
  return pe;
}

bool is_exact_cauchy(const GeneratingTriplet& t) {
  return t.a == 0.0 && t.levy && t.levy->name == "cauchy";
}

}  // namespace

PathEnsemble sample_levy_path(const GeneratingTriplet& t, const StartSampler& start,
                              const SamplerConfig& cfg) {
  const auto v = validate_triplet(t);
  if (!v.passed()) throw std::invalid_argument("invalid triplet: " + v.summary());

  const bool exact = cfg.scheme == LevyScheme::Exact ||
                     (cfg.scheme == LevyScheme::Auto && is_exact_cauchy(t));
  if (exact) {
    if (!is_exact_cauchy(t))
      throw std::invalid_argument("exact transition sampling only known for cauchy");
    PathEnsemble pe;
    pe.times = resolve_record_times(cfg);
    pe.seed = cfg.seed;
    pe.paths.resize(cfg.n_paths, pe.times.size());
    parallel_for(cfg.n_paths, [&](std::ptrdiff_t p) {
      PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
      double x = start.sample(rng);
      double prev = 0.0;
      for (size_t j = 0; j < pe.times.size(); ++j) {
        x += rng.cauchy(pe.times[j] - prev);
        prev = pe.times[j];
        pe.paths(p, j) = x;
      }
    });
    pe.scheme.kind = "cauchy-exact";
    return pe;
  }

  StepWorkspace w;
  std::optional<JumpSampler> jumps;
  double sigma2 = t.a;
  if (t.levy) {
    jumps.emplace(*t.levy, cfg.eps);
    w.jumps = &*jumps;
    sigma2 += small_jump_variance(*t.levy, cfg.eps);
  }
  w.sigma_eps = std::sqrt(sigma2);
  w.dt_max = cfg.dt_max;
  w.proposals_per_step = cfg.proposals_per_step;
  std::atomic<long> prop{0}, acc{0};
  w.proposals = &prop;
  w.accepted = &acc;
  PathEnsemble pe = run_scheme(start, cfg, w, "compound-poisson");
  pe.scheme.proposals = prop.load();
  pe.scheme.accepted = acc.load();
  return pe;
}

PathEnsemble sample_levy_type_path(const LevyTypeKernel& k, const ThinningBound& bound,
                                   const StartSampler& start, const SamplerConfig& cfg) {
  if (!k.base.levy) throw std::invalid_argument("lévy-type sampler requires a jump part");
  if (k.base.a != 0.0)
    throw std::invalid_argument("lévy-type sampler covers pure-jump kernels");

  JumpSampler jumps(*k.base.levy, cfg.eps);
  StepWorkspace w;
  w.jumps = &jumps;
  w.sigma_eps = std::sqrt(small_jump_variance(*k.base.levy, cfg.eps));
  w.dt_max = cfg.dt_max;
  w.proposals_per_step = cfg.proposals_per_step;
  w.phi = &k.phi;
  w.bound = &bound.bound;
  std::atomic<long> prop{0}, acc{0}, viol{0};
  w.proposals = &prop;
  w.accepted = &acc;
  w.violations = &viol;
  PathEnsemble pe = run_scheme(start, cfg, w, "thinned-kernel");
  pe.scheme.proposals = prop.load();
  pe.scheme.accepted = acc.load();
  pe.scheme.bound_violations = viol.load();
  return pe;
}

namespace {

size_t time_index(const PathEnsemble& pe, double t) {
  for (size_t j = 0; j < pe.times.size(); ++j)
    if (std::abs(pe.times[j] - t) < 1e-9) return j;
  throw std::invalid_argument("time " + std::to_string(t) + " not recorded");
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("two-sample KS requires nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

}  // namespace

double empirical_invariant_distance(const PathEnsemble& pe, const GridFunction& rho) {
  if (!rho.is_real(1e-9)) throw GridError("rho must be real");
  const GridInterpolant R = GridInterpolant::make(rho, TailModel::Auto);
  const Grid& g = rho.grid;
  const double h = g.spacing();
  const ArrayXd v = rho.values.real();

  // CDF of the grid density with algebraic tail mass on both sides.
  const Index n = g.n;
  std::vector<double> cum(n + 1);
  double left_tail = 0.0, right_tail = 0.0;
  if (R.tail().kind == TailModel::Algebraic) {
    const auto& tf = R.tail();
    if (tf.exponent_left > 1.0)
      left_tail = tf.coeff_left * std::pow(std::abs(g.x_min), 1.0 - tf.exponent_left) /
                  (tf.exponent_left - 1.0);
    if (tf.exponent_right > 1.0)
      right_tail = tf.coeff_right *
                   std::pow(std::abs(g.point(n - 1)), 1.0 - tf.exponent_right) /
                   (tf.exponent_right - 1.0);
  }
  cum[0] = left_tail;
  for (Index i = 0; i < n; ++i) cum[i + 1] = cum[i] + h * v[i];
  const double total = cum[n] + right_tail;

  const auto target_cdf = [&](double x) {
    if (x <= g.x_min) {
      if (left_tail == 0.0) return 0.0;
      const auto& tf = R.tail();
      return left_tail * std::pow(std::abs(g.x_min) / std::abs(x), tf.exponent_left - 1.0) /
             total;
    }
    const double last = g.point(n - 1);
    if (x >= last) {
      if (right_tail == 0.0) return 1.0;
      const auto& tf = R.tail();
      return 1.0 -
             right_tail * std::pow(std::abs(last) / std::abs(x), tf.exponent_right - 1.0) /
                 total;
    }
    const double s = (x - g.x_min) / h;
    const Index i = static_cast<Index>(std::floor(s));
    const double t = s - static_cast<double>(i);
    return (cum[i] + t * (cum[i + 1] - cum[i])) / total;
  };

  const auto col = pe.paths.col(pe.times.size() - 1);
  std::vector<double> xs(col.data(), col.data() + col.size());
  std::sort(xs.begin(), xs.end());
  const double N = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double F = target_cdf(xs[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / N));
    d = std::max(d, std::abs(F - static_cast<double>(i + 1) / N));
  }
  return d;
}

double reversibility_statistic(const PathEnsemble& pe, double lag) {
  // Latest recorded pair (t, t + lag).
  size_t i0 = 0, j0 = 0;
  bool found = false;
  for (size_t j = pe.times.size(); j-- > 0 && !found;) {
    for (size_t i = j; i-- > 0;) {
      if (std::abs(pe.times[j] - pe.times[i] - lag) < 1e-9) {
        i0 = i;
        j0 = j;
        found = true;
        break;
      }
    }
  }
  if (!found) throw std::invalid_argument("no recorded pair with the requested lag");

  std::vector<double> sum_fwd, sum_bwd;
  for (Eigen::Index p = 0; p < pe.paths.rows(); ++p) {
    const double a = pe.paths(p, i0);
    const double b = pe.paths(p, j0);
    if (a == b) continue;
    (a > b ? sum_fwd : sum_bwd).push_back(a + b);
  }
  return ks_two_sample(std::move(sum_fwd), std::move(sum_bwd));
}

CharFunctionEstimate empirical_char_function(const PathEnsemble& pe, double u, double lag) {
  if (pe.paths.rows() < 1000)
    throw std::invalid_argument("char function estimate needs at least 10^3 paths");
  // Earliest recorded pair separated by lag; lag == first recorded time uses
  // the implicit start at t = 0 only if recorded, so require both endpoints.
  size_t i0 = 0, j0 = 0;
  bool found = false;
  for (size_t i = 0; i < pe.times.size() && !found; ++i) {
    for (size_t j = i + 1; j < pe.times.size(); ++j) {
      if (std::abs(pe.times[j] - pe.times[i] - lag) < 1e-9) {
        i0 = i;
        j0 = j;
        found = true;
        break;
      }
    }
  }
  if (!found) throw std::invalid_argument("no recorded pair with the requested lag");

  const double N = static_cast<double>(pe.paths.rows());
  double sc = 0.0, ss = 0.0, sc2 = 0.0, ss2 = 0.0;
  for (Eigen::Index p = 0; p < pe.paths.rows(); ++p) {
    const double d = pe.paths(p, j0) - pe.paths(p, i0);
    const double c = std::cos(u * d), s = std::sin(u * d);
    sc += c;
    ss += s;
    sc2 += c * c;
    ss2 += s * s;
  }
  CharFunctionEstimate est;
  est.mean = Complex(sc / N, ss / N);
  const double var_c = std::max(0.0, sc2 / N - (sc / N) * (sc / N));
  const double var_s = std::max(0.0, ss2 / N - (ss / N) * (ss / N));
  est.standard_error = std::sqrt((var_c + var_s) / N);
  return est;
}

}  // namespace levymech
