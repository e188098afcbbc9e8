#include "symcone/random.hpp"

#include <cmath>

#include "symcone/jordan_algebra.hpp"

namespace symcone {

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double gamma_variate(Rng& rng, double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(rng);
}

Element random_element(const AlgebraDescriptor& alg, Rng& rng) {
  Eigen::VectorXd c(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) c[i] = standard_normal(rng);
  return Element(alg, std::move(c));
}

Element random_cone_point(const AlgebraDescriptor& alg, Rng& rng, double spread, double floor) {
  const Element g = spread * random_element(alg, rng);
  return square(g) + floor * identity(alg);
}

Element random_cone_point_in_band(const AlgebraDescriptor& alg, Rng& rng, double lo, double hi) {
  const auto frame = spectral_decomposition(random_element(alg, rng)).idempotents;
  Element out = zero(alg);
  for (const auto& c : frame) out += (lo + (hi - lo) * uniform01(rng)) * c;
  return out;
}

}  // namespace symcone
