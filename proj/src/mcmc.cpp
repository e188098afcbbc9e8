#include <cmath>
#include <limits>

#include "symcone/distributions.hpp"

namespace symcone {

McmcRun random_walk_metropolis(const std::function<double(const Element&)>& log_target,
                               Element start, Rng& rng, std::size_t n,
                               const McmcConfig& config) {
  if (config.burn_in < 0 || config.thinning < 1 || config.adapt_interval < 1 ||
      !(config.proposal_scale > 0.0)) {
    throw InvalidArgument("invalid Metropolis configuration");
  }
  const auto& alg = start.algebra();
  const int dim = alg.dim();
  double current_log = log_target(start);
  if (!std::isfinite(current_log)) throw NotInCone("Metropolis start point outside the support");

  double step = config.proposal_scale * std::abs(trace(start)) / alg.rank();
  Element current = std::move(start);
  Eigen::VectorXd proposal(dim);

  auto propose = [&]() {
    for (int i = 0; i < dim; ++i) proposal[i] = current.coords()[i] + step * standard_normal(rng);
    Element candidate(alg, proposal);
    const double candidate_log = log_target(candidate);
    if (std::isfinite(candidate_log) &&
        std::log(uniform01(rng)) < candidate_log - current_log) {
      current = std::move(candidate);
      current_log = candidate_log;
      return true;
    }
    return false;
  };

  // Burn-in with multiplicative step adaptation toward the target rate.
  int window_accepted = 0;
  for (int it = 1; it <= config.burn_in; ++it) {
    if (propose()) ++window_accepted;
    if (it % config.adapt_interval == 0) {
      const double rate = static_cast<double>(window_accepted) / config.adapt_interval;
      step *= std::exp(2.0 * (rate - config.target_acceptance));
      window_accepted = 0;
    }
  }

  McmcRun run;
  run.samples.reserve(n);
  std::size_t accepted = 0;
  std::size_t proposals = 0;
  while (run.samples.size() < n) {
    for (int t = 0; t < config.thinning; ++t) {
      if (propose()) ++accepted;
      ++proposals;
    }
    run.samples.push_back(current);
  }
  run.diagnostics.burn_in = config.burn_in;
  run.diagnostics.thinning = config.thinning;
  run.diagnostics.proposal_std = step;
  run.diagnostics.acceptance_rate =
      proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  run.diagnostics.acceptance_in_band =
      run.diagnostics.acceptance_rate >= config.min_acceptance &&
      run.diagnostics.acceptance_rate <= config.max_acceptance;
  return run;
}

}  // namespace symcone
