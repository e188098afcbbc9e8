#ifndef SYMCONE_RANDOM_HPP_
#define SYMCONE_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace symcone {

using Rng = std::mt19937_64;

// Independent generator for (master seed, stream index). Used wherever work is
// split across trials or threads so results do not depend on scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// Child seed for sub-task k of a seeded run (splitmix64 of seed and k).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

double standard_normal(Rng& rng);
double uniform01(Rng& rng);
// Gamma(shape, scale 1).
double gamma_variate(Rng& rng, double shape);

}  // namespace symcone

#endif  // SYMCONE_RANDOM_HPP_
