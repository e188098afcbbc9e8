#ifndef SYMCONE_CLI_HPP_
#define SYMCONE_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symcone/jordan_algebra.hpp"

namespace symcone::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;

// Environment variable read for the default seed.
inline constexpr const char* kSeedEnv = "SYMCONE_SEED";

enum class Format { Json, Csv };

// Fully resolved settings for one invocation (defaults < config file < flags).
struct RunConfig {
  std::string command;  // e.g. "check hua", "sample gig", "suite"
  std::string kind = "sym-real";
  int rank = 2;
  std::optional<int> dim;  // Lorentz ambient dimension n + 1
  double p = 2.0;
  std::string a = "identity";
  std::string b = "identity";
  std::size_t n = 1000;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  std::string out;  // empty: no report file; "-": stdout
  Format format = Format::Json;
  int threads = 1;
  int sets = 20;
  double perturbation = 0.1;
  std::string method = "auto";
  int permutations = 500;
  double significance = 0.01;
  bool dependent_control = false;
  int burn_in = 5000;
  int thinning = 10;
};

AlgebraDescriptor descriptor(const RunConfig& config);

// "identity", "diag:v1,...,vr" (matrix kinds) or "coords:c1,...,c_dim".
Element parse_element(std::string_view spec, const AlgebraDescriptor& alg);

// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace symcone::cli

#endif  // SYMCONE_CLI_HPP_
