#include "symcone/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symcone/my_transform.hpp"
#include "symcone/parallel.hpp"

namespace symcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double relative_gap(const Eigen::VectorXd& lhs, const Eigen::VectorXd& rhs) {
  return (lhs - rhs).norm() / std::max({1.0, lhs.norm(), rhs.norm()});
}

double relative_gap(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

double ratio_gap(double lhs, double rhs) { return std::abs(lhs - rhs) / std::abs(rhs); }

// Evaluates `trial` once per index with its own RNG stream. Exceptions from
// the numerics count as an infinite residual so the report fails visibly.
template <typename Trial>
std::vector<double> run_residuals(const CheckOptions& options, Trial trial) {
  std::vector<double> residuals(options.trials, 0.0);
  parallel_for(options.trials, options.threads, [&](std::size_t i) {
    Rng rng = make_stream(options.seed, i);
    try {
      const double r = trial(rng);
      residuals[i] = std::isnan(r) ? kInf : r;
    } catch (const Error&) {
      residuals[i] = kInf;
    }
  });
  return residuals;
}

CheckReport summarize(std::string name, const AlgebraDescriptor& alg, const CheckOptions& options,
                      double default_tolerance, std::string residual_kind,
                      const std::vector<double>& residuals) {
  CheckReport report{std::move(name), alg};
  report.trials = residuals.size();
  report.seed = options.seed;
  report.tolerance = options.tolerance.value_or(default_tolerance);
  report.residual_kind = std::move(residual_kind);
  double sum = 0.0;
  for (double r : residuals) {
    report.max_residual = std::max(report.max_residual, r);
    sum += r;
  }
  report.mean_residual = residuals.empty() ? 0.0 : sum / static_cast<double>(residuals.size());
  report.pass = report.max_residual <= report.tolerance;
  return report;
}

template <typename Trial>
CheckReport residual_check(std::string name, const AlgebraDescriptor& alg,
                           const CheckOptions& options, double default_tolerance,
                           std::string residual_kind, Trial trial) {
  return summarize(std::move(name), alg, options, default_tolerance, std::move(residual_kind),
                   run_residuals(options, trial));
}

Element random_unit_ball(const AlgebraDescriptor& alg, Rng& rng) {
  Element v = random_element(alg, rng);
  const double radius = uniform01(rng);
  return (radius / norm(v)) * v;
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

double positive_scalar(Rng& rng) { return std::exp(standard_normal(rng)); }

double operator_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

struct FeTerms {
  double lhs;
  double rhs;
  double scale;
};

FeTerms fe_cone_terms(const FeSolutionConstants& k, const Element& x, const Element& y,
                      double perturbation) {
  const ConePair uv = my_map(x, y);
  const Element& u = uv.first();
  const Element& v = uv.second();
  const double a = k.q * log_det(x) + inner(k.f, x) + inner(k.g, inverse(x)) + k.gamma1 +
                   k.gamma3 + perturbation * std::sqrt(det(x));
  const double b = -k.q * log_det(y) + inner(k.f, y) + k.gamma2;
  const double c = k.q * log_det(u) + inner(k.g, u) + inner(k.f, inverse(u)) + k.gamma3;
  const double d = -k.q * log_det(v) + inner(k.g, v) + k.gamma1 + k.gamma2;
  return {a + b, c + d, 1.0 + std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d)};
}

CheckReport fe_cone_report(std::string name, const AlgebraDescriptor& alg,
                           const FeSolutionConstants& constants, double perturbation,
                           const CheckOptions& options) {
  require_same_algebra(constants.f, constants.g);
  if (!(constants.f.algebra() == alg)) throw AlgebraMismatch("constants from another algebra");
  return residual_check(std::move(name), alg, options, 1e-8, "|lhs-rhs|/(1+|a|+|b|+|c|+|d|)",
                        [&](Rng& rng) {
                          const Element x = random_cone_point(alg, rng);
                          const Element y = random_cone_point(alg, rng);
                          const FeTerms t = fe_cone_terms(constants, x, y, perturbation);
                          return std::abs(t.lhs - t.rhs) / t.scale;
                        });
}

}  // namespace

bool CheckReport::ok() const {
  if (negative_control) return !pass && max_residual > 10.0 * tolerance;
  return pass;
}

Fe1dConstants::Fe1dConstants(double p, double f, double g, double c1, double c2, double c3,
                             double c4)
    : p_(p), f_(f), g_(g), c1_(c1), c2_(c2), c3_(c3), c4_(c4) {
  const double scale = 1.0 + std::abs(c1) + std::abs(c2) + std::abs(c3) + std::abs(c4);
  if (std::abs(c1 + c2 - c3 - c4) > 1e-12 * scale) {
    throw InvalidArgument("Fe1dConstants require C1 + C2 = C3 + C4");
  }
}

std::vector<CheckReport> check_algebra(const AlgebraDescriptor& alg, const CheckOptions& options) {
  std::vector<CheckReport> out;
  const Element e = identity(alg);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(alg.dim(), alg.dim());

  out.push_back(residual_check("jordan_commutativity", alg, options, 1e-10, "relative coords",
                               [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 const Element y = random_element(alg, rng);
                                 return relative_gap(jordan_product(x, y).coords(),
                                                     jordan_product(y, x).coords());
                               }));
  out.push_back(residual_check("jordan_identity", alg, options, 1e-10, "relative coords",
                               [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 const Element y = random_element(alg, rng);
                                 const Element x2 = square(x);
                                 return relative_gap(
                                     jordan_product(x, jordan_product(x2, y)).coords(),
                                     jordan_product(x2, jordan_product(x, y)).coords());
                               }));
  out.push_back(residual_check("jordan_unit", alg, options, 1e-10, "relative coords",
                               [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 return relative_gap(jordan_product(x, e).coords(), x.coords());
                               }));
  out.push_back(residual_check("form_associativity", alg, options, 1e-10, "relative scalar",
                               [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 const Element y = random_element(alg, rng);
                                 const Element z = random_element(alg, rng);
                                 return relative_gap(inner(x, jordan_product(y, z)),
                                                     inner(jordan_product(x, y), z));
                               }));
  out.push_back(residual_check("operator_symmetry", alg, options, 1e-10,
                               "relative Frobenius of L-L^T and P-P^T", [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 const Eigen::MatrixXd l = lmap(x).matrix;
                                 const Eigen::MatrixXd p = quad_rep(x).matrix;
                                 return std::max(
                                     (l - l.transpose()).norm() / std::max(1.0, l.norm()),
                                     (p - p.transpose()).norm() / std::max(1.0, p.norm()));
                               }));
  out.push_back(residual_check("power_associativity", alg, options, 1e-9,
                               "||[L(x),L(x^2)]|| / max(1, ||L(x)|| ||L(x^2)||)", [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 const Eigen::MatrixXd l1 = lmap(x).matrix;
                                 const Eigen::MatrixXd l2 = lmap(square(x)).matrix;
                                 return operator_norm(l1 * l2 - l2 * l1) /
                                        std::max(1.0, operator_norm(l1) * operator_norm(l2));
                               }));
  out.push_back(residual_check("quad_rep_consistency", alg, options, 1e-10, "relative coords",
                               [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 const Element y = random_element(alg, rng);
                                 return relative_gap(quad_rep(x).apply(y).coords(),
                                                     quad_apply(x, y).coords());
                               }));
  out.push_back(residual_check("det_of_quadratic_image", alg, options, 1e-8,
                               "|det(P(x)y) - det(x)^2 det(y)| / |det(x)^2 det(y)|",
                               [&](Rng& rng) {
                                 const Element x = random_cone_point(alg, rng);
                                 const Element y = random_cone_point(alg, rng);
                                 const double rhs = det(x) * det(x) * det(y);
                                 return ratio_gap(det(quad_apply(x, y)), rhs);
                               }));
  out.push_back(residual_check("operator_det_of_quad_rep", alg, options, 1e-8,
                               "|Det P(x) - det(x)^(2 dim/r)| / |det(x)^(2 dim/r)|",
                               [&](Rng& rng) {
                                 const Element x = random_cone_point(alg, rng);
                                 const double rhs = std::pow(det(x), 2.0 * alg.dim_over_rank());
                                 return ratio_gap(quad_rep(x).determinant(), rhs);
                               }));
  out.push_back(residual_check(
      "spectral_round_trip", alg, options, 1e-9,
      "max of reconstruction, idempotency, orthogonality, completeness, eigenvalue drift",
      [&](Rng& rng) {
        const Element x = random_element(alg, rng);
        const auto sd = spectral_decomposition(x);
        double worst = relative_gap(sd.reconstruct().coords(), x.coords());
        Element total = zero(alg);
        for (std::size_t i = 0; i < sd.idempotents.size(); ++i) {
          const Element& c = sd.idempotents[i];
          total += c;
          worst = std::max(worst, relative_gap(square(c).coords(), c.coords()));
          for (std::size_t j = i + 1; j < sd.idempotents.size(); ++j) {
            worst = std::max(worst, std::abs(inner(c, sd.idempotents[j])));
          }
        }
        worst = std::max(worst, relative_gap(total.coords(), e.coords()));
        const Eigen::VectorXd again = eigenvalues(sd.reconstruct());
        worst = std::max(worst, relative_gap(again, sd.eigenvalues));
        return worst;
      }));
  out.push_back(residual_check("trace_det_consistency", alg, options, 1e-10,
                               "relative gap to matrix (or Lorentz closed-form) trace and det",
                               [&](Rng& rng) {
                                 const Element x = random_element(alg, rng);
                                 double ref_trace = 0.0;
                                 double ref_det = 0.0;
                                 if (alg.is_matrix_kind()) {
                                   const Eigen::MatrixXcd m = to_matrix(x);
                                   ref_trace = m.trace().real();
                                   ref_det = m.determinant().real();
                                 } else {
                                   const auto& c = x.coords();
                                   ref_trace = 2.0 * c[0];
                                   ref_det = c[0] * c[0] - c.tail(c.size() - 1).squaredNorm();
                                 }
                                 return std::max(relative_gap(trace(x), ref_trace),
                                                 relative_gap(det(x), ref_det));
                               }));
  out.push_back(residual_check("inverse_identities", alg, options, 1e-8,
                               "max of |x x^-1 - e| and ||P(x^-1) P(x) - Id||", [&](Rng& rng) {
                                 const Element x = random_cone_point(alg, rng);
                                 const Element inv = inverse(x);
                                 const double prod = relative_gap(jordan_product(x, inv).coords(),
                                                                  e.coords());
                                 const Eigen::MatrixXd pp =
                                     quad_rep(inv).matrix * quad_rep(x).matrix;
                                 return std::max(prod, (pp - id).norm());
                               }));
  out.push_back(residual_check("sqrt_identity", alg, options, 1e-9, "relative coords",
                               [&](Rng& rng) {
                                 const Element x = random_cone_point(alg, rng);
                                 return relative_gap(square(sqrt(x)).coords(), x.coords());
                               }));
  return out;
}

CheckReport check_hua(const AlgebraDescriptor& alg, const CheckOptions& options) {
  return residual_check("hua_identity", alg, options, 1e-8, "relative coords", [&](Rng& rng) {
    const Element a = random_cone_point(alg, rng);
    const Element b = random_cone_point(alg, rng);
    return relative_gap(hua_rhs(a, b).coords(), hua_lhs(a, b).coords());
  });
}

CheckReport check_involution(const AlgebraDescriptor& alg, const CheckOptions& options) {
  return residual_check("my_involution", alg, options, 1e-9, "relative coords of (x, y)",
                        [&](Rng& rng) {
                          const Element x = random_cone_point(alg, rng);
                          const Element y = random_cone_point(alg, rng);
                          const ConePair uv = my_map(x, y);  // throws if outputs leave the cone
                          const ConePair back = my_map(uv.first(), uv.second());
                          Eigen::VectorXd lhs(2 * alg.dim());
                          Eigen::VectorXd rhs(2 * alg.dim());
                          lhs << back.first().coords(), back.second().coords();
                          rhs << x.coords(), y.coords();
                          return relative_gap(lhs, rhs);
                        });
}

CheckReport check_jacobian(const AlgebraDescriptor& alg, const CheckOptions& options) {
  const double tol = options.tolerance.value_or(1e-4);
  return residual_check("jacobian_formula_vs_numeric", alg, options, 1e-4,
                        "|numeric - formula| / formula", [&](Rng& rng) {
                          const Element u = random_cone_point_in_band(alg, rng, 0.2, 5.0);
                          const Element v = random_cone_point_in_band(alg, rng, 0.2, 5.0);
                          return compare_jacobian(u, v, tol).relative_error;
                        });
}

CheckReport check_cauchy_additive(const AlgebraDescriptor& alg, const Element& f_vec,
                                  const CheckOptions& options) {
  if (!(f_vec.algebra() == alg)) throw AlgebraMismatch("f_vec from another algebra");
  return residual_check("cauchy_additive", alg, options, 1e-8,
                        "|f(x)+f(y)-f(x+y)|/(1+|f(x)|+|f(y)|)", [&](Rng& rng) {
                          const Element x = random_cone_point(alg, rng);
                          const Element y = random_cone_point(alg, rng);
                          const double fx = inner(f_vec, x);
                          const double fy = inner(f_vec, y);
                          return std::abs(fx + fy - inner(f_vec, x + y)) /
                                 (1.0 + std::abs(fx) + std::abs(fy));
                        });
}

CheckReport check_pexider_log(const AlgebraDescriptor& alg, double q, double gamma1,
                              double gamma2, const CheckOptions& options) {
  return residual_check("pexider_log", alg, options, 1e-8,
                        "|f1(x)+f2(y)-f3(P(x^1/2)y)|/(1+|f1|+|f2|+|f3|)", [&](Rng& rng) {
                          const Element x = random_cone_point(alg, rng);
                          const Element y = random_cone_point(alg, rng);
                          const double f1 = q * log_det(x) + gamma1;
                          const double f2 = q * log_det(y) + gamma2;
                          const double f3 =
                              q * log_det(quad_apply(sqrt(x), y)) + gamma1 + gamma2;
                          return std::abs(f1 + f2 - f3) /
                                 (1.0 + std::abs(f1) + std::abs(f2) + std::abs(f3));
                        });
}

CheckReport check_fe_univariate_g_alpha(const GAlphaConstants& k, const CheckOptions& options) {
  const AlgebraDescriptor scalar = AlgebraDescriptor::sym_real(1);
  auto g = [&](double t) { return k.a * t + k.b * std::log(t) + k.c; };
  auto alpha = [&](double t) { return k.a * t * t + k.b * std::log(t) + k.d; };
  return residual_check("fe_univariate_g_alpha", scalar, options, 1e-8,
                        "|lhs-rhs|/(1+sum of |terms|)", [&](Rng& rng) {
                          const double x = positive_scalar(rng);
                          const double y = positive_scalar(rng);
                          const double t1 = g(x * (x + y));
                          const double t2 = g(y * (x + y));
                          const double t3 = alpha(x);
                          const double t4 = alpha(y);
                          return std::abs((t1 - t2) - (t3 - t4)) /
                                 (1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
                        });
}

CheckReport check_fe_univariate_abcd(const Fe1dConstants& k, const CheckOptions& options) {
  const AlgebraDescriptor scalar = AlgebraDescriptor::sym_real(1);
  auto fa = [&](double t) { return -k.p() * std::log(t) + k.f() * t + k.g() / t + k.c1(); };
  auto fb = [&](double t) { return k.p() * std::log(t) + k.f() * t + k.c2(); };
  auto fc = [&](double t) { return -k.p() * std::log(t) + k.g() * t + k.f() / t + k.c3(); };
  auto fd = [&](double t) { return k.p() * std::log(t) + k.g() * t + k.c4(); };
  return residual_check("fe_univariate_abcd", scalar, options, 1e-8,
                        "|lhs-rhs|/(1+sum of |terms|)", [&](Rng& rng) {
                          const double x = positive_scalar(rng);
                          const double y = positive_scalar(rng);
                          const double u = 1.0 / (x + y);
                          const double v = 1.0 / x - u;
                          const double t1 = fa(x);
                          const double t2 = fb(y);
                          const double t3 = fc(u);
                          const double t4 = fd(v);
                          return std::abs(t1 + t2 - t3 - t4) /
                                 (1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4));
                        });
}

CheckReport check_fe_cone(const AlgebraDescriptor& alg, const FeSolutionConstants& constants,
                          const CheckOptions& options) {
  return fe_cone_report("fe_cone", alg, constants, 0.0, options);
}

CheckReport check_perturbed_fe_rejects(const AlgebraDescriptor& alg,
                                       const FeSolutionConstants& constants, double perturbation,
                                       const CheckOptions& options) {
  CheckReport report = fe_cone_report("fe_cone_perturbed", alg, constants, perturbation, options);
  report.negative_control = perturbation != 0.0;
  return report;
}

FeSolutionConstants random_fe_constants(const AlgebraDescriptor& alg, Rng& rng) {
  const double q = uniform(rng, -3.0, 3.0);
  Element f = random_unit_ball(alg, rng);
  Element g = random_unit_ball(alg, rng);
  const double g1 = uniform(rng, -5.0, 5.0);
  const double g2 = uniform(rng, -5.0, 5.0);
  const double g3 = uniform(rng, -5.0, 5.0);
  return {q, std::move(f), std::move(g), g1, g2, g3};
}

Fe1dConstants random_fe1d_constants(Rng& rng) {
  const double p = uniform(rng, -3.0, 3.0);
  const double f = uniform(rng, -1.0, 1.0);
  const double g = uniform(rng, -1.0, 1.0);
  const double c1 = uniform(rng, -5.0, 5.0);
  const double c2 = uniform(rng, -5.0, 5.0);
  const double c3 = uniform(rng, -5.0, 5.0);
  return Fe1dConstants(p, f, g, c1, c2, c3, c1 + c2 - c3);
}

GAlphaConstants random_g_alpha_constants(Rng& rng) {
  GAlphaConstants k;
  k.a = uniform(rng, -3.0, 3.0);
  k.b = uniform(rng, -3.0, 3.0);
  k.c = uniform(rng, -5.0, 5.0);
  k.d = uniform(rng, -5.0, 5.0);
  return k;
}

std::string_view to_string(FamilyCheck check) {
  switch (check) {
    case FamilyCheck::Cauchy:
      return "cauchy_additive";
    case FamilyCheck::Pexider:
      return "pexider_log";
    case FamilyCheck::GAlpha:
      return "fe_univariate_g_alpha";
    case FamilyCheck::Fe1d:
      return "fe_univariate_abcd";
    case FamilyCheck::FeCone:
      return "fe_cone";
  }
  return "unknown";
}

CheckReport check_family_sweep(FamilyCheck check, const AlgebraDescriptor& alg,
                               int constant_sets, const CheckOptions& options) {
  if (constant_sets < 1) throw InvalidArgument("need at least one constant set");
  std::vector<CheckReport> runs;
  for (int s = 0; s < constant_sets; ++s) {
    Rng rng = make_stream(derive_seed(options.seed, 2 * s), 0);
    CheckOptions sub = options;
    sub.seed = derive_seed(options.seed, 2 * s + 1);
    switch (check) {
      case FamilyCheck::Cauchy:
        runs.push_back(check_cauchy_additive(alg, random_unit_ball(alg, rng), sub));
        break;
      case FamilyCheck::Pexider: {
        const double q = uniform(rng, -3.0, 3.0);
        const double g1 = uniform(rng, -5.0, 5.0);
        const double g2 = uniform(rng, -5.0, 5.0);
        runs.push_back(check_pexider_log(alg, q, g1, g2, sub));
        break;
      }
      case FamilyCheck::GAlpha:
        runs.push_back(check_fe_univariate_g_alpha(random_g_alpha_constants(rng), sub));
        break;
      case FamilyCheck::Fe1d:
        runs.push_back(check_fe_univariate_abcd(random_fe1d_constants(rng), sub));
        break;
      case FamilyCheck::FeCone:
        runs.push_back(check_fe_cone(alg, random_fe_constants(alg, rng), sub));
        break;
    }
  }
  CheckReport out = runs.front();
  out.name = std::string(to_string(check)) + "_sweep";
  out.seed = options.seed;
  out.trials = 0;
  out.max_residual = 0.0;
  double mean_sum = 0.0;
  for (const auto& r : runs) {
    out.trials += r.trials;
    out.max_residual = std::max(out.max_residual, r.max_residual);
    mean_sum += r.mean_residual;
  }
  out.mean_residual = mean_sum / static_cast<double>(runs.size());
  out.pass = out.max_residual <= out.tolerance;
  return out;
}

CheckReport density_factorization_check(const AlgebraDescriptor& alg, double p, const Element& a,
                                        const Element& b, const CheckOptions& options,
                                        bool swap_control) {
  const GigParams fx(-p, a, b);
  const GigParams fu(-p, b, a);
  const WishartParams fy(p, a);
  const WishartParams fv(p, swap_control ? a : b);
  if (!fy.has_density()) throw ShapeOutOfRange("factorization check needs p > dim/r - 1");

  std::vector<double> gaps(options.trials, 0.0);
  parallel_for(options.trials, options.threads, [&](std::size_t i) {
    Rng rng = make_stream(options.seed, i);
    // The first trial sits at the interior point u = v = e.
    const Element u = i == 0 ? identity(alg) : random_cone_point(alg, rng);
    const Element v = i == 0 ? identity(alg) : random_cone_point(alg, rng);
    try {
      const ConePair xy = my_map(u, v);
      const double lhs = gig_log_density_unnorm(fu, u) + wishart_log_density(fv, v);
      const double rhs = log_jacobian_det_formula(u, v) + gig_log_density_unnorm(fx, xy.first()) +
                         wishart_log_density(fy, xy.second());
      gaps[i] = lhs - rhs;
    } catch (const Error&) {
      gaps[i] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  double mean = 0.0;
  for (double g : gaps) mean += g;
  mean /= static_cast<double>(gaps.size());
  std::vector<double> residuals(gaps.size());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    residuals[i] = std::isfinite(gaps[i]) && std::isfinite(mean) ? std::abs(gaps[i] - mean) : kInf;
  }
  CheckReport report = summarize(swap_control ? "density_factorization_swapped"
                                              : "density_factorization",
                                 alg, options, 1e-10, "|log-ratio - mean log-ratio|", residuals);
  report.negative_control = swap_control;
  return report;
}

}  // namespace symcone
