#include "symcone/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "symcone/errors.hpp"
#include "symcone/parallel.hpp"
#include "symcone/random.hpp"

namespace symcone::stats {

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Theta-function form converges quickly for small arguments.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int k = 1; k <= 9; k += 2) sum += std::pow(y, k * k);
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InvalidArgument("KS test needs a non-empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw InvalidArgument("KS test needs non-empty samples");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((en + 0.12 + 0.11 / en) * d)};
}

namespace {

// Fenwick tree over y-ranks holding count, sum y, sum x, sum xy.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1) {}

  void add(std::size_t rank, double x, double y) {
    for (std::size_t i = rank + 1; i < tree_.size(); i += i & (~i + 1)) {
      tree_[i][0] += 1.0;
      tree_[i][1] += y;
      tree_[i][2] += x;
      tree_[i][3] += x * y;
    }
  }

  // Sums over ranks strictly below `rank`.
  std::array<double, 4> prefix(std::size_t rank) const {
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = rank; i > 0; i -= i & (~i + 1)) {
      for (int k = 0; k < 4; ++k) out[k] += tree_[i][k];
    }
    return out;
  }

 private:
  std::vector<std::array<double, 4>> tree_;
};

std::vector<double> centered(std::span<const double> v) {
  const double m = mean(v);
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [m](double t) { return t - m; });
  return out;
}

// Row sums sum_j |v_i - v_j| for every i.
std::vector<double> distance_row_sums(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  std::vector<double> out(n);
  double below = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vk = v[order[k]];
    const double above = total - below - vk;
    out[order[k]] = vk * static_cast<double>(k) - below + above -
                    vk * static_cast<double>(n - k - 1);
    below += vk;
  }
  return out;
}

std::vector<std::size_t> ranks_of(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<std::size_t> rank(v.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  return rank;
}

// Both samples are given in ascending-x order; returns sum_{i,j} |dx||dy|.
double cross_distance_sum(const std::vector<double>& xs, const std::vector<double>& ys,
                          const std::vector<std::size_t>& yrank) {
  const std::size_t n = xs.size();
  Fenwick tree(n);
  std::array<double, 4> totals{0.0, 0.0, 0.0, 0.0};
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = xs[j];
    const double y = ys[j];
    const auto le = tree.prefix(yrank[j]);
    std::array<double, 4> diff;
    for (int k = 0; k < 4; ++k) diff[k] = le[k] - (totals[k] - le[k]);
    sum += x * y * diff[0] - x * diff[1] - y * diff[2] + diff[3];
    tree.add(yrank[j], x, y);
    totals[0] += 1.0;
    totals[1] += y;
    totals[2] += x;
    totals[3] += x * y;
  }
  return 2.0 * sum;
}

// Everything about the pair that survives a permutation of y.
struct Prepared {
  std::size_t n = 0;
  std::vector<double> xs;              // centered x, ascending
  std::vector<double> ax;              // x row sums, x order
  std::vector<double> yc;              // centered y, original order (aligned with x)
  std::vector<double> by;              // y row sums, original order
  std::vector<std::size_t> yrank;      // rank of each y, original order
  std::vector<std::size_t> x_order;    // original index at each x position
  double a_total = 0.0;
  double b_total = 0.0;

  Prepared(std::span<const double> x, std::span<const double> y) : n(x.size()) {
    if (x.size() != y.size() || x.size() < 2) {
      throw InvalidArgument("distance covariance needs two samples of equal size >= 2");
    }
    const std::vector<double> xc = centered(x);
    yc = centered(y);
    const std::vector<double> a_rows = distance_row_sums(xc);
    by = distance_row_sums(yc);
    yrank = ranks_of(yc);
    x_order.resize(n);
    std::iota(x_order.begin(), x_order.end(), 0);
    std::stable_sort(x_order.begin(), x_order.end(),
                     [&](std::size_t a, std::size_t b) { return xc[a] < xc[b]; });
    xs.resize(n);
    ax.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      xs[k] = xc[x_order[k]];
      ax[k] = a_rows[x_order[k]];
    }
    a_total = std::accumulate(a_rows.begin(), a_rows.end(), 0.0);
    b_total = std::accumulate(by.begin(), by.end(), 0.0);
  }

  // dCov^2 when y index perm[i] is paired with x index i.
  double dcov_sq(const std::vector<std::size_t>& perm) const {
    std::vector<double> ys(n);
    std::vector<std::size_t> ranks(n);
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t src = perm[x_order[k]];
      ys[k] = yc[src];
      ranks[k] = yrank[src];
      s2 += ax[k] * by[src];
    }
    const double s1 = cross_distance_sum(xs, ys, ranks);
    const double nd = static_cast<double>(n);
    return s1 / (nd * nd) - 2.0 * s2 / (nd * nd * nd) + a_total * b_total / (nd * nd * nd * nd);
  }
};

std::vector<std::size_t> identity_permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

double distance_covariance_sq(std::span<const double> x, std::span<const double> y) {
  const Prepared prep(x, y);
  return std::max(0.0, prep.dcov_sq(identity_permutation(prep.n)));
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
  const double vxy = distance_covariance_sq(x, y);
  const double vxx = distance_covariance_sq(x, x);
  const double vyy = distance_covariance_sq(y, y);
  if (vxx <= 0.0 || vyy <= 0.0) return 0.0;
  return std::sqrt(vxy / std::sqrt(vxx * vyy));
}

PermutationTestResult distance_correlation_test(std::span<const double> x,
                                                std::span<const double> y, int permutations,
                                                std::uint64_t seed, int threads) {
  if (permutations < 1) throw InvalidArgument("permutation count must be positive");
  const Prepared prep(x, y);
  const double observed = prep.dcov_sq(identity_permutation(prep.n));
  std::vector<char> exceeds(permutations, 0);
  parallel_for(static_cast<std::size_t>(permutations), threads, [&](std::size_t b) {
    Rng rng = make_stream(seed, b);
    std::vector<std::size_t> perm = identity_permutation(prep.n);
    std::shuffle(perm.begin(), perm.end(), rng);
    exceeds[b] = prep.dcov_sq(perm) >= observed ? 1 : 0;
  });
  const int count = std::accumulate(exceeds.begin(), exceeds.end(), 0);
  PermutationTestResult out;
  out.distance_correlation = distance_correlation(x, y);
  out.permutations = permutations;
  out.p_value = (1.0 + count) / (1.0 + permutations);
  return out;
}

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("variance needs at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("correlation needs two samples of equal size >= 2");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double iid_standard_error(std::span<const double> x) {
  return std::sqrt(sample_variance(x) / static_cast<double>(x.size()));
}

double batch_means_standard_error(std::span<const double> x) {
  const std::size_t batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(x.size())));
  if (batches < 2) throw InvalidArgument("batch means need at least four values");
  const std::size_t size = x.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) means[b] = mean(x.subspan(b * size, size));
  return std::sqrt(sample_variance(means) / static_cast<double>(batches));
}

}  // namespace symcone::stats
