#include <algorithm>
#include <array>
#include <cmath>

#include "symcone/my_transform.hpp"
#include "symcone/parallel.hpp"
#include "symcone/stats.hpp"
#include "symcone/verification.hpp"

namespace symcone {

namespace {

// Auto picks an exact sampler whenever one applies, so the permutation and
// KS tests see i.i.d. draws; Metropolis remains the fallback.
GigMethod exact_if_available(const GigParams& params, GigMethod requested) {
  if (requested != GigMethod::Auto) return requested;
  const auto& alg = params.algebra();
  if (alg.rank() == 1) return GigMethod::RatioOfUniforms;
  if (alg.is_matrix_kind() && std::abs(params.p()) > alg.dim_over_rank() - 1.0) {
    return GigMethod::WishartRejection;
  }
  return GigMethod::Metropolis;
}

struct Functionals {
  std::vector<double> tr;
  std::vector<double> det;
  std::vector<double> dir;

  Functionals(const std::vector<Element>& xs, const Element& direction, int threads)
      : tr(xs.size()), det(xs.size()), dir(xs.size()) {
    parallel_for(xs.size(), threads, [&](std::size_t i) {
      tr[i] = trace(xs[i]);
      det[i] = symcone::det(xs[i]);
      dir[i] = inner(direction, xs[i]);
    });
  }
};

void record(IndependenceReport& report, const SampleBatch& batch) {
  report.sampler_methods.push_back(batch.distribution + ":" + batch.method);
  if (batch.mcmc) {
    report.mcmc_acceptance_rates.push_back(batch.mcmc->acceptance_rate);
    if (!batch.mcmc->acceptance_in_band) report.inconclusive = true;
  }
}

}  // namespace

std::vector<double> IndependenceReport::all_p_values() const {
  std::vector<double> out;
  for (const auto& r : independence) out.push_back(r.p_value);
  for (const auto& r : v_marginal) out.push_back(r.p_value);
  for (const auto& r : u_marginal) out.push_back(r.p_value);
  return out;
}

IndependenceReport my_property_test(const AlgebraDescriptor& alg, double p, const Element& a,
                                    const Element& b, std::size_t n, std::uint64_t seed,
                                    const MyPropertyConfig& config) {
  require_same_algebra(a, b);
  if (!(a.algebra() == alg)) throw AlgebraMismatch("parameters from another algebra");
  require_in_cone(a, "a");
  require_in_cone(b, "b");
  if (n < 4) throw InvalidArgument("independence test needs n >= 4");

  IndependenceReport report{alg};
  report.p = p;
  report.n = n;
  report.seed = seed;
  report.permutations = config.permutations;
  report.significance = config.significance;
  report.dependent_control = config.dependent_control;

  const GigParams x_law(-p, a, b);
  const WishartParams y_law(p, a);
  const GigParams u_law(-p, b, a);
  const WishartParams v_law(p, b);

  GigSamplerConfig x_cfg = config.gig;
  x_cfg.method = exact_if_available(x_law, config.gig.method);
  GigSamplerConfig u_cfg = config.gig;
  u_cfg.method = exact_if_available(u_law, config.gig.method);

  const SampleBatch xs = sample_gig(x_law, derive_seed(seed, 0), n, x_cfg, config.threads);
  record(report, xs);
  std::vector<Element> ys;
  if (config.dependent_control) {
    ys.reserve(n);
    Rng rng = make_stream(derive_seed(seed, 4), 0);
    for (const Element& x : xs.samples) {
      ys.push_back(x + config.control_noise * random_cone_point(alg, rng));
    }
  } else {
    SampleBatch yb = sample_wishart(y_law, derive_seed(seed, 1), n, config.wishart_mcmc,
                                    config.threads);
    record(report, yb);
    ys = std::move(yb.samples);
  }

  std::vector<Element> us;
  std::vector<Element> vs;
  us.reserve(n);
  vs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ConePair uv = my_map(xs.samples[i], ys[i]);
    us.push_back(uv.first());
    vs.push_back(uv.second());
  }

  const SampleBatch fresh_v =
      sample_wishart(v_law, derive_seed(seed, 2), n, config.wishart_mcmc, config.threads);
  record(report, fresh_v);
  const SampleBatch fresh_u = sample_gig(u_law, derive_seed(seed, 3), n, u_cfg, config.threads);
  record(report, fresh_u);

  const Functionals fu(us, a, config.threads);
  const Functionals fv(vs, b, config.threads);

  report.functional_names = {"tr U", "tr V", "det U", "det V", "<a,U>", "<b,V>"};
  const std::array<const std::vector<double>*, 6> columns{&fu.tr, &fv.tr, &fu.det,
                                                          &fv.det, &fu.dir, &fv.dir};
  report.correlation_matrix.assign(6, std::vector<double>(6, 1.0));
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      const double c = stats::pearson_correlation(*columns[i], *columns[j]);
      report.correlation_matrix[i][j] = c;
      report.correlation_matrix[j][i] = c;
    }
  }

  const std::array<std::string, 3> pair_names{"tr U ~ tr V", "det U ~ det V", "<a,U> ~ <b,V>"};
  for (int k = 0; k < 3; ++k) {
    const auto& x = *columns[2 * k];
    const auto& y = *columns[2 * k + 1];
    const auto test = stats::distance_correlation_test(x, y, config.permutations,
                                                       derive_seed(seed, 10 + k), config.threads);
    report.independence.push_back(
        {pair_names[k], stats::pearson_correlation(x, y), test.distance_correlation, test.p_value});
  }

  const Functionals ref_v(fresh_v.samples, b, config.threads);
  const Functionals ref_u(fresh_u.samples, a, config.threads);
  auto ks = [](std::string name, const std::vector<double>& x, const std::vector<double>& y) {
    const auto r = stats::ks_two_sample(x, y);
    return MarginalResult{std::move(name), r.statistic, r.p_value};
  };
  report.v_marginal.push_back(ks("V tr", fv.tr, ref_v.tr));
  report.v_marginal.push_back(ks("V det", fv.det, ref_v.det));
  report.u_marginal.push_back(ks("U tr", fu.tr, ref_u.tr));
  report.u_marginal.push_back(ks("U det", fu.det, ref_u.det));

  report.v_trace_mean = stats::mean(fv.tr);
  report.v_trace_expected = p * trace(inverse(b));
  const bool correlated = xs.mcmc.has_value() || !report.mcmc_acceptance_rates.empty();
  report.v_trace_standard_error = correlated ? stats::batch_means_standard_error(fv.tr)
                                             : stats::iid_standard_error(fv.tr);

  bool pass = true;
  const double ind_level = config.significance / static_cast<double>(report.independence.size());
  for (const auto& r : report.independence) pass = pass && r.p_value > ind_level;
  const double v_level = config.significance / static_cast<double>(report.v_marginal.size());
  for (const auto& r : report.v_marginal) pass = pass && r.p_value > v_level;
  const double u_level = config.significance / static_cast<double>(report.u_marginal.size());
  for (const auto& r : report.u_marginal) pass = pass && r.p_value > u_level;
  report.pass = pass && !report.inconclusive;
  return report;
}

}  // namespace symcone
