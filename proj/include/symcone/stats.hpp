#ifndef SYMCONE_STATS_HPP_
#define SYMCONE_STATS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace symcone::stats {

// Survival function of the Kolmogorov distribution,
// Q(l) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 l^2).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic p-values with Stephens' small-sample correction.
KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

// Squared sample distance covariance (V-statistic) of two scalar samples,
// computed in O(n log n).
double distance_covariance_sq(std::span<const double> x, std::span<const double> y);
double distance_correlation(std::span<const double> x, std::span<const double> y);

struct PermutationTestResult {
  double distance_correlation = 0.0;
  double p_value = 1.0;
  int permutations = 0;
};

// Permutation test of independence based on distance covariance. Permutation
// b draws from make_stream(seed, b), so the p-value does not depend on threads.
PermutationTestResult distance_correlation_test(std::span<const double> x,
                                                std::span<const double> y, int permutations,
                                                std::uint64_t seed, int threads = 1);

double mean(std::span<const double> x);
double sample_variance(std::span<const double> x);
double pearson_correlation(std::span<const double> x, std::span<const double> y);
// Standard error of the mean for independent draws.
double iid_standard_error(std::span<const double> x);
// Standard error of the mean from floor(sqrt(n)) non-overlapping batch means;
// valid for autocorrelated (Metropolis) output.
double batch_means_standard_error(std::span<const double> x);

}  // namespace symcone::stats

#endif  // SYMCONE_STATS_HPP_
