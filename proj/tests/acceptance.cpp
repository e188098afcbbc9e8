// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Seeds are fixed here and were not tuned against the outcome.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "symcone/distributions.hpp"
#include "symcone/jordan_algebra.hpp"
#include "symcone/my_transform.hpp"
#include "symcone/stats.hpp"
#include "symcone/verification.hpp"

using namespace symcone;

namespace {

constexpr std::uint64_t kSeed = 20250117;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<AlgebraDescriptor> all_kinds() {
  return {AlgebraDescriptor::sym_real(1),     AlgebraDescriptor::sym_real(2),
          AlgebraDescriptor::sym_real(3),     AlgebraDescriptor::herm_complex(2),
          AlgebraDescriptor::herm_complex(3), AlgebraDescriptor::lorentz(2),
          AlgebraDescriptor::lorentz(3),      AlgebraDescriptor::lorentz(4)};
}

CheckOptions opts(std::size_t trials, std::uint64_t seed) {
  CheckOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

Element scalar(double v) {
  return Element(AlgebraDescriptor::sym_real(1), Eigen::VectorXd::Constant(1, v));
}

void residual(Verdict& v, const CheckReport& r) {
  v.require(r.ok(), r.name + " on " + r.algebra.label() + " max=" + std::to_string(r.max_residual));
}

// Runs one criterion, times it and prints its line.
bool criterion(int id, const std::string& title, double budget_seconds,
               const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0) {
    v.require(secs < budget_seconds, "runtime budget " + std::to_string(budget_seconds) + " s");
  }
  char head[64];
  std::snprintf(head, sizeof head, "%s criterion %2d (%.1f s) ", v.pass ? "PASS" : "FAIL", id,
                secs);
  std::cout << head << title << v.detail.str() << std::endl;
  return v.pass;
}

// --- 6: Wishart moments -----------------------------------------------------

void wishart_case(Verdict& v, const WishartParams& w, const std::vector<Element>& probes,
                  std::uint64_t seed) {
  const SampleBatch batch = sample_wishart(w, seed, 100000, McmcConfig{}, 1);
  const bool mcmc = batch.mcmc.has_value();
  if (mcmc) v.require(batch.mcmc->acceptance_in_band, "metropolis acceptance out of band");
  auto se = [mcmc](const std::vector<double>& xs) {
    return mcmc ? stats::batch_means_standard_error(xs) : stats::iid_standard_error(xs);
  };
  const std::string label = w.algebra().label();
  double worst = 0.0;
  for (const Element& sigma : probes) {
    std::vector<double> vals;
    vals.reserve(batch.samples.size());
    for (const auto& x : batch.samples) vals.push_back(std::exp(-inner(sigma, x)));
    const double z = std::abs(stats::mean(vals) - wishart_laplace(w, sigma)) / se(vals);
    worst = std::max(worst, z);
    v.require(z < 3.0, "laplace probe on " + label + " z=" + std::to_string(z));
  }
  const Element expected = w.p() * inverse(w.a());
  for (int k = 0; k < expected.coords().size(); ++k) {
    std::vector<double> c;
    c.reserve(batch.samples.size());
    for (const auto& x : batch.samples) c.push_back(x[k]);
    const double z = std::abs(stats::mean(c) - expected[k]) / se(c);
    worst = std::max(worst, z);
    v.require(z < 3.0, "mean coordinate " + std::to_string(k) + " on " + label +
                           " z=" + std::to_string(z));
  }
  v.detail << " " << label << ":" << batch.method << " max|z|=" << worst;
}

// --- 10: CLI determinism ----------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs the CLI twice with --out to two files and compares every byte,
// including the CSV sidecar when there is one.
void cli_twice(Verdict& v, const std::string& args, bool sidecar) {
  const auto dir = std::filesystem::temp_directory_path();
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("symcone_acceptance_" + std::to_string(run));
    const std::string cmd = std::string("\"") + SYMCONE_CLI_PATH + "\" " + args + " --out \"" +
                            out.string() + "\" > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    v.require(status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0,
              "exit status of: " + args);
    std::string bytes = slurp(out);
    std::filesystem::remove(out);
    if (sidecar) {
      bytes += "\n--sidecar--\n" + slurp(out.string() + ".json");
      std::filesystem::remove(out.string() + ".json");
    }
    v.require(!bytes.empty(), "empty output of: " + args);
    outputs.push_back(std::move(bytes));
  }
  v.require(outputs[0] == outputs[1], "bytes differ for: " + args);
}

}  // namespace

int main() {
  std::cout << "symcone acceptance, seed " << kSeed << std::endl;
  int failures = 0;
  auto tally = [&failures](bool ok) { failures += ok ? 0 : 1; };

  tally(criterion(1, "Jordan axioms on 8 algebras, 1000 triples, tol 1e-10", 10.0, [](Verdict& v) {
    const std::vector<std::string> axioms{"jordan_commutativity", "jordan_identity", "jordan_unit",
                                          "form_associativity"};
    for (const auto& alg : all_kinds()) {
      int found = 0;
      for (CheckReport& r : check_algebra(alg, opts(1000, derive_seed(kSeed, 1)))) {
        if (std::find(axioms.begin(), axioms.end(), r.name) == axioms.end()) continue;
        ++found;
        v.require(r.tolerance <= 1e-10, r.name + " tolerance");
        residual(v, r);
      }
      v.require(found == 4, "axiom reports missing on " + alg.label());
    }
  }));

  tally(criterion(2, "det(P(x)y) and Det P(x) identities, 1000 points, tol 1e-8", 30.0,
                  [](Verdict& v) {
                    for (const auto& alg : all_kinds()) {
                      int found = 0;
                      for (CheckReport& r : check_algebra(alg, opts(1000, derive_seed(kSeed, 2)))) {
                        if (r.name != "det_of_quadratic_image" &&
                            r.name != "operator_det_of_quad_rep")
                          continue;
                        ++found;
                        v.require(r.tolerance <= 1e-8, r.name + " tolerance");
                        residual(v, r);
                      }
                      v.require(found == 2, "determinant reports missing on " + alg.label());
                    }
                  }));

  tally(criterion(3, "Hua identity (1e-8) and involution (1e-9), 1000 pairs", 0.0, [](Verdict& v) {
    for (const auto& alg : all_kinds()) {
      const CheckReport h = check_hua(alg, opts(1000, derive_seed(kSeed, 3)));
      v.require(h.tolerance <= 1e-8, "hua tolerance");
      residual(v, h);
      const CheckReport i = check_involution(alg, opts(1000, derive_seed(kSeed, 4)));
      v.require(i.tolerance <= 1e-9, "involution tolerance");
      residual(v, i);
    }
  }));

  tally(criterion(4, "Jacobian vs finite differences at 100 points, 1e-4; rank-1 value 1/4", 0.0,
                  [](Verdict& v) {
                    for (const auto& alg :
                         {AlgebraDescriptor::sym_real(2), AlgebraDescriptor::lorentz(2)}) {
                      const CheckReport r = check_jacobian(alg, opts(100, derive_seed(kSeed, 5)));
                      v.require(r.tolerance <= 1e-4, "jacobian tolerance");
                      residual(v, r);
                      v.detail << " " << alg.label() << " max=" << r.max_residual;
                    }
                    const double f = jacobian_det_formula(scalar(1), scalar(1));
                    const double n = jacobian_det_numeric(scalar(1), scalar(1));
                    v.require(std::abs(f - 0.25) < 1e-6, "closed form at u=v=1");
                    v.require(std::abs(n - 0.25) < 1e-6, "finite differences at u=v=1");
                  }));

  tally(criterion(5, "functional-equation families, 1000 points x 20 sets, tol 1e-8, plus control",
                  60.0, [](Verdict& v) {
                    const CheckOptions o = opts(1000, derive_seed(kSeed, 6));
                    for (const auto& alg : all_kinds()) {
                      for (FamilyCheck f :
                           {FamilyCheck::FeCone, FamilyCheck::Cauchy, FamilyCheck::Pexider}) {
                        const CheckReport r = check_family_sweep(f, alg, 20, o);
                        v.require(r.tolerance <= 1e-8, r.name + " tolerance");
                        v.require(r.trials == 20000, r.name + " trial count");
                        residual(v, r);
                      }
                    }
                    const auto scalar_alg = AlgebraDescriptor::sym_real(1);
                    for (FamilyCheck f : {FamilyCheck::Fe1d, FamilyCheck::GAlpha}) {
                      const CheckReport r = check_family_sweep(f, scalar_alg, 20, o);
                      v.require(r.trials == 20000, r.name + " trial count");
                      residual(v, r);
                    }
                    Rng rng = make_stream(derive_seed(kSeed, 7), 0);
                    for (const auto& alg : {scalar_alg, AlgebraDescriptor::sym_real(2),
                                            AlgebraDescriptor::lorentz(2)}) {
                      const FeSolutionConstants k = random_fe_constants(alg, rng);
                      const CheckReport c = check_perturbed_fe_rejects(alg, k, 0.1, o);
                      v.require(c.negative_control && !c.pass && c.ok(),
                                "perturbed family was not rejected on " + alg.label());
                    }
                  }));

  tally(criterion(6, "Wishart Laplace transform at 3 probes and mean, n = 1e5, within 3 SE",
                  120.0, [](Verdict& v) {
                    wishart_case(v, WishartParams(2.0, scalar(1.5)),
                                 {scalar(0.3), scalar(1.0), scalar(2.5)}, derive_seed(kSeed, 8));
                    const auto s2 = AlgebraDescriptor::sym_real(2);
                    const Element a2(s2, Eigen::Vector3d(1.0, 2.0, 0.3));
                    wishart_case(v, WishartParams(2.0, a2),
                                 {diagonal(s2, {0.5, 0.5}), Element(s2, Eigen::Vector3d(1.0, 0.2, 0.3)),
                                  0.1 * identity(s2)},
                                 derive_seed(kSeed, 9));
                    const auto l2 = AlgebraDescriptor::lorentz(2);
                    const Element al(l2, Eigen::Vector3d(1.0, 0.3, -0.2));
                    wishart_case(v, WishartParams(3.0, al),
                                 {Element(l2, Eigen::Vector3d(0.5, 0.2, 0.1)), 0.2 * identity(l2),
                                  Element(l2, Eigen::Vector3d(1.0, -0.5, 0.4))},
                                 derive_seed(kSeed, 10));
                  }));

  tally(criterion(7, "rank-1 GIG: exact sampler vs quadrature cdf, metropolis vs exact, KS at 1%",
                  0.0, [](Verdict& v) {
                    int idx = 0;
                    for (double p : {-1.0, 0.5, 2.0}) {
                      const GigParams g(p, scalar(1.0), scalar(2.0));
                      GigSamplerConfig exact;
                      exact.method = GigMethod::RatioOfUniforms;
                      const SampleBatch e =
                          sample_gig(g, derive_seed(kSeed, 11 + 2 * idx), 10000, exact, 1);
                      std::vector<double> xs;
                      for (const auto& x : e.samples) xs.push_back(x[0]);
                      const auto ks = stats::ks_one_sample(
                          xs, [&g](double t) { return gig_cdf_rank1(g, t); });
                      v.require(ks.p_value > 0.01, "one-sample KS at p=" + std::to_string(p));

                      // Thinned so the chain output is close to independent draws.
                      GigSamplerConfig chain;
                      chain.method = GigMethod::Metropolis;
                      chain.mcmc.thinning = 50;
                      const SampleBatch m =
                          sample_gig(g, derive_seed(kSeed, 12 + 2 * idx), 10000, chain, 1);
                      std::vector<double> ms;
                      for (const auto& x : m.samples) ms.push_back(x[0]);
                      const auto two = stats::ks_two_sample(xs, ms);
                      v.require(two.p_value > 0.01, "two-sample KS at p=" + std::to_string(p));
                      v.require(m.mcmc && m.mcmc->acceptance_in_band, "metropolis acceptance");
                      v.detail << " p=" << p << ":" << ks.p_value << "/" << two.p_value;
                      ++idx;
                    }
                  }));

  tally(criterion(8, "independence property at rank 1 (n=1e5) and sym-real(2) (n=1e4), control",
                  300.0, [](Verdict& v) {
                    const MyPropertyConfig cfg;
                    auto all_above = [&v](const IndependenceReport& r, const std::string& what) {
                      double lo = 1.0;
                      for (double pv : r.all_p_values()) lo = std::min(lo, pv);
                      v.require(lo > 0.01, what + " min p=" + std::to_string(lo));
                      v.require(!r.inconclusive, what + " inconclusive");
                      v.detail << " " << what << " min p=" << lo;
                    };
                    all_above(my_property_test(AlgebraDescriptor::sym_real(1), 2.0, scalar(1),
                                               scalar(1), 100000, derive_seed(kSeed, 20), cfg),
                              "rank-1");
                    const auto s2 = AlgebraDescriptor::sym_real(2);
                    all_above(my_property_test(s2, 2.0, identity(s2), identity(s2), 10000,
                                               derive_seed(kSeed, 21), cfg),
                              "sym-real(2)");
                    MyPropertyConfig dep = cfg;
                    dep.dependent_control = true;
                    const IndependenceReport d =
                        my_property_test(AlgebraDescriptor::sym_real(1), 2.0, scalar(1), scalar(1),
                                         100000, derive_seed(kSeed, 22), dep);
                    double lo = 1.0;
                    for (const auto& f : d.independence) lo = std::min(lo, f.p_value);
                    v.require(lo < 0.01, "dependent control not detected, min p=" +
                                             std::to_string(lo));
                    v.detail << " control min p=" << lo;
                  }));

  tally(criterion(9, "density factorization, 1000 pairs, deviation < 1e-10", 0.0, [](Verdict& v) {
    const CheckReport r1 = density_factorization_check(AlgebraDescriptor::sym_real(1), 2.0,
                                                       scalar(1), scalar(2),
                                                       opts(1000, derive_seed(kSeed, 30)));
    v.require(r1.max_residual < 1e-10, "rank 1 max=" + std::to_string(r1.max_residual));
    const auto s2 = AlgebraDescriptor::sym_real(2);
    const CheckReport r2 = density_factorization_check(
        s2, 2.0, identity(s2), Element(s2, Eigen::Vector3d(1.0, 2.0, 0.3)),
        opts(1000, derive_seed(kSeed, 31)));
    v.require(r2.max_residual < 1e-10, "sym-real(2) max=" + std::to_string(r2.max_residual));
    v.detail << " max " << r1.max_residual << ", " << r2.max_residual;
  }));

  tally(criterion(10, "seeded CLI runs are byte-identical across invocations", 0.0,
                  [](Verdict& v) {
                    cli_twice(v, "suite --kind sym-real --rank 2 --seed 5", false);
                    cli_twice(v, "suite --kind lorentz --dim 3 --seed 6 --threads 2", false);
                    cli_twice(v, "check fe-cone --kind herm-complex --rank 2 --sets 3 --seed 7 "
                                 "--format csv",
                              false);
                    cli_twice(v, "sample wishart --kind sym-real --rank 3 --p 3 --n 500 --seed 8",
                              false);
                    cli_twice(v, "sample gig --kind lorentz --dim 3 --p -2 --n 300 --seed 9 "
                                 "--format csv",
                              true);
                    cli_twice(v, "test my-property --rank 1 --n 2000 --permutations 99 --seed 10",
                              false);
                  }));

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << " (" << failures
            << " failing)" << std::endl;
  return failures == 0 ? 0 : 1;
}
