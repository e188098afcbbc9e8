#include "symcone/distributions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "symcone/parallel.hpp"

namespace symcone {

namespace {

constexpr std::size_t kChunkSize = 2048;

double coordinate_measure_log_factor(const AlgebraDescriptor& alg) {
  return alg.kind() == AlgebraKind::Lorentz ? 0.5 * alg.dim() * std::numbers::ln2 : 0.0;
}

void require_density_shape(double p, const AlgebraDescriptor& alg) {
  if (!(p > alg.dim_over_rank() - 1.0)) {
    throw ShapeOutOfRange("shape p = " + std::to_string(p) + " must exceed dim/r - 1 = " +
                          std::to_string(alg.dim_over_rank() - 1.0) + " for " + alg.label());
  }
}

// t e maximizing (det x)^(p - dim/r) exp(-<a,x> - <b,x^-1>) along the ray.
Element ray_start(double p, const Element& a, const std::optional<Element>& b) {
  const auto& alg = a.algebra();
  const double c = alg.rank() * p - alg.dim();
  const double tr_a = trace(a);
  const double tr_b = b ? trace(*b) : 0.0;
  double t = (c + std::sqrt(c * c + 4.0 * tr_a * tr_b)) / (2.0 * tr_a);
  if (!(t > 0.0)) t = alg.rank() / tr_a;
  return t * identity(alg);
}

// W ~ gamma_{p,e} as T T* with T lower triangular, T_ii^2 ~ Gamma(p - i d/2),
// real parts of off-diagonal entries N(0, 1/2) and, for Hermitian matrices,
// imaginary parts N(0, 1/2) as well.
std::vector<Element> bartlett_draws(const WishartParams& params, Rng& rng, std::size_t n) {
  const auto& alg = params.algebra();
  const int r = alg.rank();
  const bool complex = alg.kind() == AlgebraKind::HermComplex;
  const double off_sd = std::sqrt(0.5);
  const Element transport = sqrt(inverse(params.a()));
  std::vector<Element> out;
  out.reserve(n);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(r, r);
  for (std::size_t k = 0; k < n; ++k) {
    for (int i = 0; i < r; ++i) {
      t(i, i) = std::sqrt(gamma_variate(rng, params.p() - 0.5 * i * alg.peirce()));
      for (int j = 0; j < i; ++j) {
        const double re = off_sd * standard_normal(rng);
        const double im = complex ? off_sd * standard_normal(rng) : 0.0;
        t(i, j) = std::complex<double>(re, im);
      }
    }
    const Element w = from_matrix(alg, t * t.adjoint());
    out.push_back(quad_apply(transport, w));
  }
  return out;
}

std::vector<Element> ratio_of_uniforms_draws(const GigParams& params, Rng& rng, std::size_t n) {
  if (params.algebra().rank() != 1) {
    throw InvalidArgument("ratio-of-uniforms GIG sampler is rank 1 only");
  }
  const ScalarGigSampler sampler(params.p(), params.a()[0], params.b()[0]);
  std::vector<Element> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXd c(1);
    c[0] = sampler(rng);
    out.emplace_back(params.algebra(), std::move(c));
  }
  return out;
}

// Exact draws for matrix kinds. When p > dim/r - 1, propose X ~ gamma_{p,a}
// and accept with probability exp(-<b, X^-1>). When -p > dim/r - 1, propose
// X = W^-1 with W ~ gamma_{-p,b} and accept with probability exp(-<a, X>).
std::vector<Element> wishart_rejection_draws(const GigParams& params, Rng& rng, std::size_t n) {
  const auto& alg = params.algebra();
  if (!alg.is_matrix_kind()) {
    throw InvalidArgument("Wishart-rejection GIG sampler needs a matrix algebra");
  }
  const double threshold = alg.dim_over_rank() - 1.0;
  const bool direct = params.p() > threshold;
  if (!direct && !(-params.p() > threshold)) {
    throw ShapeOutOfRange("Wishart-rejection GIG sampler needs |p| > dim/r - 1");
  }
  const WishartParams proposal = direct ? WishartParams(params.p(), params.a())
                                        : WishartParams(-params.p(), params.b());
  std::vector<Element> out;
  out.reserve(n);
  while (out.size() < n) {
    const std::size_t batch = std::max<std::size_t>(64, n - out.size());
    for (Element& w : bartlett_draws(proposal, rng, batch)) {
      if (out.size() == n) break;
      Element x = direct ? std::move(w) : inverse(w);
      const double log_accept = direct ? -inner(params.b(), inverse(x)) : -inner(params.a(), x);
      if (std::log(uniform01(rng)) < log_accept) out.push_back(std::move(x));
    }
  }
  return out;
}

GigMethod resolve(const GigParams& params, GigMethod method) {
  if (method != GigMethod::Auto) return method;
  return params.algebra().rank() == 1 ? GigMethod::RatioOfUniforms : GigMethod::Metropolis;
}

SampleBatch wishart_batch(const WishartParams& params) {
  SampleBatch batch{params.algebra(), "wishart", params.p(), params.a(), std::nullopt, {},
                    std::nullopt, "", std::nullopt};
  return batch;
}

SampleBatch gig_batch(const GigParams& params) {
  SampleBatch batch{params.algebra(), "gig", params.p(), params.a(), params.b(), {},
                    std::nullopt, "", std::nullopt};
  return batch;
}

template <typename Draw>
std::vector<Element> chunked(std::uint64_t seed, std::size_t n, int threads, Draw draw) {
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<Element>> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng = make_stream(seed, c);
    const std::size_t count = std::min(kChunkSize, n - c * kChunkSize);
    parts[c] = draw(rng, count);
  });
  std::vector<Element> out;
  out.reserve(n);
  for (auto& part : parts) {
    for (auto& x : part) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

WishartParams::WishartParams(double p, Element a) : p_(p), a_(std::move(a)) {
  if (!std::isfinite(p_)) throw InvalidArgument("Wishart shape must be finite");
  require_in_cone(a_, "Wishart scale a");
}

bool WishartParams::has_density() const { return p_ > algebra().dim_over_rank() - 1.0; }

GigParams::GigParams(double p, Element a, Element b)
    : p_(p), a_(std::move(a)), b_(std::move(b)) {
  if (!std::isfinite(p_)) throw InvalidArgument("GIG parameter p must be finite");
  require_same_algebra(a_, b_);
  require_in_cone(a_, "GIG parameter a");
  require_in_cone(b_, "GIG parameter b");
}

std::string_view to_string(GigMethod method) {
  switch (method) {
    case GigMethod::Auto:
      return "auto";
    case GigMethod::RatioOfUniforms:
      return "ratio-of-uniforms";
    case GigMethod::Metropolis:
      return "metropolis";
    case GigMethod::WishartRejection:
      return "wishart-rejection";
  }
  return "unknown";
}

GigMethod parse_gig_method(std::string_view name) {
  if (name == "auto") return GigMethod::Auto;
  if (name == "ratio-of-uniforms") return GigMethod::RatioOfUniforms;
  if (name == "metropolis") return GigMethod::Metropolis;
  if (name == "wishart-rejection") return GigMethod::WishartRejection;
  throw InvalidArgument("unknown GIG sampling method '" + std::string(name) + "'");
}

double log_gamma_cone(double p, const AlgebraDescriptor& alg) {
  require_density_shape(p, alg);
  double out = 0.5 * (alg.dim() - alg.rank()) * std::log(2.0 * std::numbers::pi);
  for (int j = 0; j < alg.rank(); ++j) out += std::lgamma(p - 0.5 * j * alg.peirce());
  return out;
}

double gamma_cone(double p, const AlgebraDescriptor& alg) {
  return std::exp(log_gamma_cone(p, alg));
}

double wishart_log_density(const WishartParams& params, const Element& x) {
  const auto& alg = params.algebra();
  require_density_shape(params.p(), alg);
  require_same_algebra(params.a(), x);
  require_in_cone(x, "x");
  return params.p() * log_det(params.a()) - log_gamma_cone(params.p(), alg) +
         (params.p() - alg.dim_over_rank()) * log_det(x) - inner(params.a(), x) +
         coordinate_measure_log_factor(alg);
}

double wishart_laplace(const WishartParams& params, const Element& sigma) {
  require_same_algebra(params.a(), sigma);
  const Element shifted = params.a() + sigma;
  require_in_cone(shifted, "a + sigma");
  return std::exp(params.p() * (log_det(params.a()) - log_det(shifted)));
}

double gig_log_kernel(const GigParams& params, const Element& x) {
  require_same_algebra(params.a(), x);
  const auto sd = spectral_decomposition(x);
  if (sd.eigenvalues.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
  Element inv = zero(x.algebra());
  for (int i = 0; i < sd.eigenvalues.size(); ++i) inv += (1.0 / sd.eigenvalues[i]) * sd.idempotents[i];
  const double ld = sd.eigenvalues.array().log().sum();
  return (params.p() - x.algebra().dim_over_rank()) * ld - inner(params.a(), x) -
         inner(params.b(), inv);
}

double gig_log_density_unnorm(const GigParams& params, const Element& x) {
  require_same_algebra(params.a(), x);
  require_in_cone(x, "x");
  return gig_log_kernel(params, x);
}

SampleBatch sample_wishart(const WishartParams& params, Rng& rng, std::size_t n,
                           const McmcConfig& mcmc) {
  const auto& alg = params.algebra();
  require_density_shape(params.p(), alg);
  SampleBatch batch = wishart_batch(params);
  if (alg.is_matrix_kind()) {
    batch.method = "bartlett";
    batch.samples = bartlett_draws(params, rng, n);
    return batch;
  }
  const double power = params.p() - alg.dim_over_rank();
  auto target = [&](const Element& x) {
    const Eigen::VectorXd eig = eigenvalues(x);
    if (eig.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
    return power * eig.array().log().sum() - inner(params.a(), x);
  };
  McmcRun run = random_walk_metropolis(target, ray_start(params.p(), params.a(), std::nullopt),
                                       rng, n, mcmc);
  batch.method = "metropolis";
  batch.samples = std::move(run.samples);
  batch.mcmc = run.diagnostics;
  return batch;
}

SampleBatch sample_gig(const GigParams& params, Rng& rng, std::size_t n,
                       const GigSamplerConfig& config) {
  SampleBatch batch = gig_batch(params);
  const GigMethod method = resolve(params, config.method);
  batch.method = std::string(to_string(method));
  switch (method) {
    case GigMethod::RatioOfUniforms:
      batch.samples = ratio_of_uniforms_draws(params, rng, n);
      break;
    case GigMethod::WishartRejection:
      batch.samples = wishart_rejection_draws(params, rng, n);
      break;
    case GigMethod::Metropolis:
    case GigMethod::Auto: {
      auto target = [&](const Element& x) { return gig_log_kernel(params, x); };
      McmcRun run = random_walk_metropolis(target, ray_start(params.p(), params.a(), params.b()),
                                           rng, n, config.mcmc);
      batch.samples = std::move(run.samples);
      batch.mcmc = run.diagnostics;
      break;
    }
  }
  return batch;
}

SampleBatch sample_wishart(const WishartParams& params, std::uint64_t seed, std::size_t n,
                           const McmcConfig& mcmc, int threads) {
  const auto& alg = params.algebra();
  if (!alg.is_matrix_kind()) {
    Rng rng = make_stream(seed, 0);
    SampleBatch batch = sample_wishart(params, rng, n, mcmc);
    batch.seed = seed;
    return batch;
  }
  require_density_shape(params.p(), alg);
  SampleBatch batch = wishart_batch(params);
  batch.method = "bartlett";
  batch.samples = chunked(seed, n, threads, [&](Rng& rng, std::size_t count) {
    return bartlett_draws(params, rng, count);
  });
  batch.seed = seed;
  return batch;
}

SampleBatch sample_gig(const GigParams& params, std::uint64_t seed, std::size_t n,
                       const GigSamplerConfig& config, int threads) {
  const GigMethod method = resolve(params, config.method);
  if (method != GigMethod::RatioOfUniforms && method != GigMethod::WishartRejection) {
    Rng rng = make_stream(seed, 0);
    SampleBatch batch = sample_gig(params, rng, n, config);
    batch.seed = seed;
    return batch;
  }
  SampleBatch batch = gig_batch(params);
  batch.method = std::string(to_string(method));
  batch.samples = chunked(seed, n, threads, [&](Rng& rng, std::size_t count) {
    return method == GigMethod::RatioOfUniforms ? ratio_of_uniforms_draws(params, rng, count)
                                                : wishart_rejection_draws(params, rng, count);
  });
  batch.seed = seed;
  return batch;
}

}  // namespace symcone
