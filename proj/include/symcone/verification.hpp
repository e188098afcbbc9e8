#ifndef SYMCONE_VERIFICATION_HPP_
#define SYMCONE_VERIFICATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symcone/distributions.hpp"
#include "symcone/jordan_algebra.hpp"

namespace symcone {

// Outcome of one residual or statistical check.
//
// Residual checks: pass = (max_residual <= tolerance). Residuals are relative
// to the magnitude of the compared quantities; each check documents its scale
// in `residual_kind`.
//
// Negative controls expect to fail. `ok()` folds that in: a negative control is
// ok when it failed with max_residual above 10 x tolerance.
struct CheckReport {
  std::string name;
  AlgebraDescriptor algebra;
  std::size_t trials = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string residual_kind;
  std::vector<double> p_values;
  bool negative_control = false;

  bool ok() const;
};

// Constants of the solution family of
//   a(x) + b(y) = c((x+y)^-1) + d(x^-1 - (x+y)^-1)
// on the cone:
//   a(x) =  q log det x + <f,x> + <g,x^-1> + gamma1 + gamma3
//   b(x) = -q log det x + <f,x> + gamma2
//   c(x) =  q log det x + <g,x> + <f,x^-1> + gamma3
//   d(x) = -q log det x + <g,x> + gamma1 + gamma2
struct FeSolutionConstants {
  double q = 0.0;
  Element f;
  Element g;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
};

// Scalar family for A(x) + B(y) = C((x+y)^-1) + D(x^-1 - (x+y)^-1):
//   A(x) = -p log x + f x + g/x + C1     B(x) = p log x + f x + C2
//   C(x) = -p log x + g x + f/x + C3     D(x) = p log x + g x + C4
// with C1 + C2 = C3 + C4, enforced by the constructor.
class Fe1dConstants {
 public:
  Fe1dConstants(double p, double f, double g, double c1, double c2, double c3, double c4);

  double p() const { return p_; }
  double f() const { return f_; }
  double g() const { return g_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double c3() const { return c3_; }
  double c4() const { return c4_; }

 private:
  double p_, f_, g_, c1_, c2_, c3_, c4_;
};

// g(x) = A x + B log x + C, alpha(x) = A x^2 + B log x + D solving
// g(x(x+y)) - g(y(x+y)) = alpha(x) - alpha(y).
struct GAlphaConstants {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

struct CheckOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;  // per-check default when unset
  int threads = 1;
};

// Jordan axioms, operator identities, determinant identities, spectral and
// functional-calculus properties. One report per property.
std::vector<CheckReport> check_algebra(const AlgebraDescriptor& alg, const CheckOptions& options);

CheckReport check_hua(const AlgebraDescriptor& alg, const CheckOptions& options);
// Psi(Psi(x,y)) = (x,y), with cone closure of both outputs.
CheckReport check_involution(const AlgebraDescriptor& alg, const CheckOptions& options);
// Closed-form Jacobian against finite differences at points with eigenvalues
// in [0.2, 5]. Default tolerance 1e-4 relative.
CheckReport check_jacobian(const AlgebraDescriptor& alg, const CheckOptions& options);

CheckReport check_cauchy_additive(const AlgebraDescriptor& alg, const Element& f_vec,
                                  const CheckOptions& options);
CheckReport check_pexider_log(const AlgebraDescriptor& alg, double q, double gamma1,
                              double gamma2, const CheckOptions& options);
CheckReport check_fe_univariate_g_alpha(const GAlphaConstants& constants,
                                        const CheckOptions& options);
CheckReport check_fe_univariate_abcd(const Fe1dConstants& constants, const CheckOptions& options);
CheckReport check_fe_cone(const AlgebraDescriptor& alg, const FeSolutionConstants& constants,
                          const CheckOptions& options);
// Adds perturbation * sqrt(det x) to a(x). Reported as a negative control.
CheckReport check_perturbed_fe_rejects(const AlgebraDescriptor& alg,
                                       const FeSolutionConstants& constants, double perturbation,
                                       const CheckOptions& options);

// Bounded random constants: |q| <= 3, |f|, |g| <= 1, |gamma_i| <= 5.
FeSolutionConstants random_fe_constants(const AlgebraDescriptor& alg, Rng& rng);
Fe1dConstants random_fe1d_constants(Rng& rng);
GAlphaConstants random_g_alpha_constants(Rng& rng);

// Runs `constant_sets` random constant draws of a family check and folds them
// into one report (max over sets, mean over all trials).
enum class FamilyCheck { Cauchy, Pexider, GAlpha, Fe1d, FeCone };
std::string_view to_string(FamilyCheck check);
CheckReport check_family_sweep(FamilyCheck check, const AlgebraDescriptor& alg,
                               int constant_sets, const CheckOptions& options);

// log f_U(u) + log f_V(v) - [log J + log f_X(x) + log f_Y(y)] must be the same
// constant at every (u, v), where (x, y) = Psi(u, v), X ~ mu_{-p,a,b},
// Y ~ gamma_{p,a}, U ~ mu_{-p,b,a}, V ~ gamma_{p,b}. Residual is the largest
// deviation from the mean difference. swap_control evaluates f_V with a in
// place of b, which must break constancy when a != b.
CheckReport density_factorization_check(const AlgebraDescriptor& alg, double p, const Element& a,
                                        const Element& b, const CheckOptions& options,
                                        bool swap_control = false);

struct MyPropertyConfig {
  int permutations = 500;
  double significance = 0.01;
  GigSamplerConfig gig;
  McmcConfig wishart_mcmc;
  // Negative control: Y replaced by X + noise * (cone point).
  bool dependent_control = false;
  double control_noise = 0.1;
  int threads = 1;
};

struct FunctionalPairResult {
  std::string name;  // e.g. "tr U ~ tr V"
  double pearson = 0.0;
  double distance_correlation = 0.0;
  double p_value = 1.0;
};

struct MarginalResult {
  std::string name;  // e.g. "V tr"
  double ks_statistic = 0.0;
  double p_value = 1.0;
};

struct IndependenceReport {
  AlgebraDescriptor algebra;
  double p = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  int permutations = 0;
  double significance = 0.0;
  std::vector<std::string> functional_names;
  std::vector<std::vector<double>> correlation_matrix;
  std::vector<FunctionalPairResult> independence;
  std::vector<MarginalResult> v_marginal;
  std::vector<MarginalResult> u_marginal;
  double v_trace_mean = 0.0;
  double v_trace_expected = 0.0;
  double v_trace_standard_error = 0.0;
  std::vector<std::string> sampler_methods;
  std::vector<double> mcmc_acceptance_rates;
  bool dependent_control = false;
  bool inconclusive = false;
  bool pass = false;

  // Every reported p-value, in the order independence, V, U.
  std::vector<double> all_p_values() const;
};

// Samples X ~ mu_{-p,a,b} and Y ~ gamma_{p,a}, maps them through Psi, and
// tests independence of U and V plus both marginals. pass requires every
// p-value above significance / (number of tests in its family).
IndependenceReport my_property_test(const AlgebraDescriptor& alg, double p, const Element& a,
                                    const Element& b, std::size_t n, std::uint64_t seed,
                                    const MyPropertyConfig& config = {});

}  // namespace symcone

#endif  // SYMCONE_VERIFICATION_HPP_
