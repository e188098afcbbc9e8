#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "symcone/distributions.hpp"

namespace symcone {

namespace {

struct ScalarGig {
  double p;
  double a;
  double b;
};

ScalarGig scalar_params(const GigParams& params) {
  if (params.algebra().rank() != 1) {
    throw InvalidArgument("scalar GIG quadrature is only supported at rank 1");
  }
  return {params.p(), params.a()[0], params.b()[0]};
}

// Integrand in s = log x: exp(p s - a e^s - b e^-s).
struct LogSpaceKernel {
  ScalarGig g;
  double peak;
  double peak_value;
  double lo;
  double hi;

  explicit LogSpaceKernel(const ScalarGig& params) : g(params) {
    peak = std::log((g.p + std::sqrt(g.p * g.p + 4.0 * g.a * g.b)) / (2.0 * g.a));
    peak_value = raw(peak);
    // Below exp(-60) relative to the peak the tails do not matter at double
    // precision.
    constexpr double kDrop = 60.0;
    double step = 0.5;
    lo = peak - step;
    while (raw(lo) - peak_value > -kDrop) {
      lo -= step;
      step *= 1.5;
    }
    step = 0.5;
    hi = peak + step;
    while (raw(hi) - peak_value > -kDrop) {
      hi += step;
      step *= 1.5;
    }
  }

  double raw(double s) const { return g.p * s - g.a * std::exp(s) - g.b * std::exp(-s); }
  double operator()(double s) const { return std::exp(raw(s) - peak_value); }

  double integrate(double from, double to) const {
    if (to <= from) return 0.0;
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(*this, from, to, 12,
                                                                          1e-11, &error);
  }
};

void require_positive_scalars(const ScalarGig& g) {
  if (!(g.a > 0.0) || !(g.b > 0.0)) throw NotInCone("scalar GIG needs a > 0 and b > 0");
}

}  // namespace

double gig_norm_constant_rank1(const GigParams& params) {
  const ScalarGig g = scalar_params(params);
  require_positive_scalars(g);
  const LogSpaceKernel kernel(g);
  // Split at the peak so the adaptive rule sees both shoulders.
  const double mass = kernel.integrate(kernel.lo, kernel.peak) +
                      kernel.integrate(kernel.peak, kernel.hi);
  return std::exp(kernel.peak_value) * mass;
}

double gig_cdf_rank1(const GigParams& params, double x) {
  const ScalarGig g = scalar_params(params);
  require_positive_scalars(g);
  if (x <= 0.0) return 0.0;
  const LogSpaceKernel kernel(g);
  const double s = std::log(x);
  if (s <= kernel.lo) return 0.0;
  if (s >= kernel.hi) return 1.0;
  const double left = kernel.integrate(kernel.lo, kernel.peak);
  const double right = kernel.integrate(kernel.peak, kernel.hi);
  const double below = s <= kernel.peak ? kernel.integrate(kernel.lo, s)
                                        : left + kernel.integrate(kernel.peak, s);
  return std::min(1.0, below / (left + right));
}

ScalarGigSampler::ScalarGigSampler(double p, double a, double b)
    : lambda_(p), omega_(2.0 * std::sqrt(a * b)), scale_(std::sqrt(b / a)) {
  if (!(a > 0.0) || !(b > 0.0)) throw NotInCone("scalar GIG needs a > 0 and b > 0");
  // Work with z = x / scale, density z^(lambda-1) exp(-omega/2 (z + 1/z)).
  mode_ = ((lambda_ - 1.0) + std::sqrt((lambda_ - 1.0) * (lambda_ - 1.0) + omega_ * omega_)) /
          omega_;
  log_mode_value_ = 0.0;
  log_mode_value_ = log_kernel(mode_);

  // Extremes of (z - m) sqrt(h(z)) on each side of the mode, found on a
  // log-spaced grid and polished with Brent's method.
  auto side_extreme = [this](bool right) {
    auto objective = [this, right](double t) {
      const double z = right ? mode_ * std::exp(t) : mode_ * std::exp(-t);
      const double value = std::log(std::abs(z - mode_)) + 0.5 * log_kernel(z);
      return std::isfinite(value) ? -value : std::numeric_limits<double>::infinity();
    };
    constexpr int kGrid = 400;
    const double t_min = 1e-6;
    const double t_max = 60.0;
    double best_t = t_min;
    double best = objective(t_min);
    std::vector<double> grid(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      grid[i] = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (kGrid - 1));
      const double f = objective(grid[i]);
      if (f < best) {
        best = f;
        best_t = grid[i];
      }
    }
    auto it = std::lower_bound(grid.begin(), grid.end(), best_t);
    const double lo = it == grid.begin() ? t_min * 0.5 : *(it - 1);
    const double hi = (it + 1) == grid.end() ? t_max : *(it + 1);
    const auto polished = boost::math::tools::brent_find_minima(objective, lo, hi, 50);
    const double value = std::min(best, polished.second);
    return std::exp(-value);
  };
  constexpr double kInflate = 1.0 + 1e-6;
  v_max_ = kInflate * side_extreme(true);
  v_min_ = -kInflate * side_extreme(false);
}

double ScalarGigSampler::log_kernel(double z) const {
  return (lambda_ - 1.0) * std::log(z) - 0.5 * omega_ * (z + 1.0 / z) - log_mode_value_;
}

double ScalarGigSampler::acceptance_bound() const { return v_max_ - v_min_; }

double ScalarGigSampler::operator()(Rng& rng) const {
  for (;;) {
    const double u = uniform01(rng);
    const double v = v_min_ + (v_max_ - v_min_) * uniform01(rng);
    if (u <= 0.0) continue;
    const double z = mode_ + v / u;
    if (z <= 0.0) continue;
    if (2.0 * std::log(u) <= log_kernel(z)) return scale_ * z;
  }
}

}  // namespace symcone
