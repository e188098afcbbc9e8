#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "symcone/random.hpp"
#include "symcone/stats.hpp"

using namespace symcone;

namespace {

// Direct O(n^2) double-centered V-statistic.
double naive_dcov_sq(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> a(n * n);
  std::vector<double> b(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = std::abs(x[i] - x[j]);
      b[i * n + j] = std::abs(y[i] - y[j]);
    }
  }
  auto center = [n](std::vector<double>& m) {
    std::vector<double> row(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) row[i] += m[i * n + j];
      total += row[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m[i * n + j] += -row[i] / n - row[j] / n + total / (n * n);
      }
    }
  };
  center(a);
  center(b);
  double sum = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) sum += a[k] * b[k];
  return sum / (n * n);
}

}  // namespace

TEST_CASE("kolmogorov survival function reference values") {
  CHECK(stats::kolmogorov_survival(0.0) == 1.0);
  CHECK(stats::kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(stats::kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(stats::kolmogorov_survival(0.5) == doctest::Approx(0.9639).epsilon(1e-3));
  // The two series agree at the switch point.
  CHECK(stats::kolmogorov_survival(1.1799) ==
        doctest::Approx(stats::kolmogorov_survival(1.1801)).epsilon(1e-3));
}

TEST_CASE("one-sample KS") {
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto r = stats::ks_one_sample(x, [](double t) { return t; });
  CHECK(r.statistic == doctest::Approx(0.1));
  Rng rng = make_stream(1, 0);
  std::vector<double> u(5000);
  for (auto& v : u) v = uniform01(rng);
  CHECK(stats::ks_one_sample(u, [](double t) { return t; }).p_value > 0.01);
  CHECK(stats::ks_one_sample(u, [](double t) { return t * t; }).p_value < 1e-6);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  CHECK(stats::ks_two_sample(a, b).statistic == doctest::Approx(1.0));
  CHECK(stats::ks_two_sample(a, a).statistic == doctest::Approx(0.0));
  Rng rng = make_stream(2, 0);
  std::vector<double> x(4000);
  std::vector<double> y(4000);
  std::vector<double> z(4000);
  for (auto& v : x) v = standard_normal(rng);
  for (auto& v : y) v = standard_normal(rng);
  for (auto& v : z) v = standard_normal(rng) + 0.2;
  CHECK(stats::ks_two_sample(x, y).p_value > 0.01);
  CHECK(stats::ks_two_sample(x, z).p_value < 1e-4);
}

TEST_CASE("fast distance covariance matches the quadratic definition") {
  Rng rng = make_stream(3, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 50 + 37 * trial;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = standard_normal(rng);
      y[i] = 0.5 * x[i] * x[i] + standard_normal(rng);
    }
    if (trial == 4) {
      // Ties in both samples.
      for (auto& v : x) v = std::round(v);
      for (auto& v : y) v = std::round(v);
    }
    const double fast = stats::distance_covariance_sq(x, y);
    CHECK(fast == doctest::Approx(naive_dcov_sq(x, y)).epsilon(1e-10));
  }
}

TEST_CASE("distance correlation basics") {
  std::vector<double> x{1, 2, 3, 4, 5, 6};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v - 2.0);
  CHECK(stats::distance_correlation(x, y) == doctest::Approx(1.0));
  const std::vector<double> c(6, 2.0);
  CHECK(stats::distance_correlation(x, c) == 0.0);
}

TEST_CASE("permutation test detects dependence and not independence") {
  Rng rng = make_stream(4, 0);
  const std::size_t n = 2000;
  std::vector<double> x(n);
  std::vector<double> y(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = standard_normal(rng);
    y[i] = standard_normal(rng);
    z[i] = x[i] * x[i] + 0.5 * standard_normal(rng);  // uncorrelated but dependent
  }
  const auto ind = stats::distance_correlation_test(x, y, 199, 9, 1);
  const auto dep = stats::distance_correlation_test(x, z, 199, 9, 1);
  CHECK(ind.p_value > 0.01);
  CHECK(dep.p_value == doctest::Approx(1.0 / 200.0));
  CHECK(std::abs(stats::pearson_correlation(x, z)) < 0.1);
  // Same seed, different thread counts: identical p-values.
  CHECK(stats::distance_correlation_test(x, y, 199, 9, 3).p_value == ind.p_value);
}

TEST_CASE("moments and standard errors") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(stats::mean(x) == doctest::Approx(2.5));
  CHECK(stats::sample_variance(x) == doctest::Approx(5.0 / 3.0));
  CHECK(stats::iid_standard_error(x) == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK_THROWS(stats::mean(std::vector<double>{}));

  // AR(1) with phi = 0.9: batch means SE must exceed the naive one.
  Rng rng = make_stream(5, 0);
  std::vector<double> ar(40000);
  double v = 0.0;
  for (auto& s : ar) {
    v = 0.9 * v + standard_normal(rng);
    s = v;
  }
  const double naive = stats::iid_standard_error(ar);
  const double batch = stats::batch_means_standard_error(ar);
  // Long-run variance factor (1+phi)/(1-phi) = 19.
  CHECK(batch / naive == doctest::Approx(std::sqrt(19.0)).epsilon(0.25));
}
