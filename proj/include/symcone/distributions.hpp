#ifndef SYMCONE_DISTRIBUTIONS_HPP_
#define SYMCONE_DISTRIBUTIONS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symcone/jordan_algebra.hpp"
#include "symcone/random.hpp"

namespace symcone {

// Wishart law gamma_{p,a}: Laplace transform (det a / det(a + s))^p.
class WishartParams {
 public:
  WishartParams(double p, Element a);

  double p() const { return p_; }
  const Element& a() const { return a_; }
  const AlgebraDescriptor& algebra() const { return a_.algebra(); }
  // p > dim/r - 1, the range with a density.
  bool has_density() const;

 private:
  double p_;
  Element a_;
};

// Generalized inverse Gaussian mu_{p,a,b}, density proportional to
// (det x)^(p - dim/r) exp(-<a,x> - <b,x^-1>).
class GigParams {
 public:
  GigParams(double p, Element a, Element b);

  double p() const { return p_; }
  const Element& a() const { return a_; }
  const Element& b() const { return b_; }
  const AlgebraDescriptor& algebra() const { return a_.algebra(); }

 private:
  double p_;
  Element a_;
  Element b_;
};

// Random-walk Metropolis settings. The proposal standard deviation starts at
// proposal_scale * tr(x0)/r and is tuned during burn-in only.
struct McmcConfig {
  double proposal_scale = 0.15;
  int burn_in = 5000;
  int thinning = 10;
  double target_acceptance = 0.3;
  int adapt_interval = 100;
  double min_acceptance = 0.1;
  double max_acceptance = 0.7;
};

struct McmcDiagnostics {
  int burn_in = 0;
  int thinning = 0;
  double acceptance_rate = 0.0;  // after burn-in
  double proposal_std = 0.0;     // after adaptation
  bool acceptance_in_band = true;
};

enum class GigMethod {
  Auto,              // ratio-of-uniforms at rank 1, Metropolis otherwise
  RatioOfUniforms,   // exact, rank 1 only
  Metropolis,
  WishartRejection,  // exact, matrix kinds with |p| > dim/r - 1
};

std::string_view to_string(GigMethod method);
GigMethod parse_gig_method(std::string_view name);

struct SampleBatch {
  AlgebraDescriptor algebra;
  std::string distribution;  // "wishart" or "gig"
  double p = 0.0;
  std::optional<Element> a;
  std::optional<Element> b;
  std::vector<Element> samples;
  std::optional<std::uint64_t> seed;
  std::string method;
  std::optional<McmcDiagnostics> mcmc;
};

// log Gamma_V(p) = (dim - r)/2 log(2 pi) + sum_j log Gamma(p - (j - 1) d / 2).
double log_gamma_cone(double p, const AlgebraDescriptor& alg);
double gamma_cone(double p, const AlgebraDescriptor& alg);

// Log density of gamma_{p,a} with respect to Lebesgue measure on the
// canonical coordinates. For Lorentz algebras those coordinates are not
// orthonormal for tr(xy), which adds (dim/2) log 2 to the textbook formula.
double wishart_log_density(const WishartParams& params, const Element& x);
double wishart_laplace(const WishartParams& params, const Element& sigma);

// (p - dim/r) log det x - <a,x> - <b,x^-1>.
double gig_log_density_unnorm(const GigParams& params, const Element& x);
// Same, returning -infinity outside the open cone instead of throwing.
double gig_log_kernel(const GigParams& params, const Element& x);

// Integral of x^(p-1) exp(-a x - b/x) over (0, inf), rank 1 only.
double gig_norm_constant_rank1(const GigParams& params);
double gig_cdf_rank1(const GigParams& params, double x);

// Exact ratio-of-uniforms sampler (mode-shifted) for the scalar GIG density
// x^(p-1) exp(-a x - b/x).
class ScalarGigSampler {
 public:
  ScalarGigSampler(double p, double a, double b);
  double operator()(Rng& rng) const;
  double acceptance_bound() const;

 private:
  double log_kernel(double z) const;  // relative to the mode

  double lambda_;
  double omega_;
  double scale_;
  double mode_;
  double log_mode_value_;
  double v_min_;
  double v_max_;
};

// Random-walk Metropolis on canonical coordinates. log_target returns
// -infinity outside the support.
struct McmcRun {
  std::vector<Element> samples;
  McmcDiagnostics diagnostics;
};
McmcRun random_walk_metropolis(const std::function<double(const Element&)>& log_target,
                               Element start, Rng& rng, std::size_t n, const McmcConfig& config);

// Bartlett draws for matrix kinds, Metropolis for Lorentz.
SampleBatch sample_wishart(const WishartParams& params, Rng& rng, std::size_t n,
                           const McmcConfig& mcmc = {});

struct GigSamplerConfig {
  GigMethod method = GigMethod::Auto;
  McmcConfig mcmc;
};
SampleBatch sample_gig(const GigParams& params, Rng& rng, std::size_t n,
                       const GigSamplerConfig& config = {});

// Seeded entry points. Exact samplers split the work into fixed chunks with
// one RNG stream each, so output depends only on (seed, n), not on threads.
// Metropolis runs use a single chain on stream 0.
SampleBatch sample_wishart(const WishartParams& params, std::uint64_t seed, std::size_t n,
                           const McmcConfig& mcmc, int threads);
SampleBatch sample_gig(const GigParams& params, std::uint64_t seed, std::size_t n,
                       const GigSamplerConfig& config, int threads);

}  // namespace symcone

#endif  // SYMCONE_DISTRIBUTIONS_HPP_
