#include "symcone/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <list>
#include <sstream>

#include "CLI11.hpp"
#include "symcone/distributions.hpp"
#include "symcone/report_json.hpp"
#include "symcone/verification.hpp"

namespace symcone::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(std::string_view list) {
  std::vector<double> out;
  std::stringstream ss{std::string(list)};
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("malformed number '" + cell + "'");
    }
    if (used != cell.size() || !std::isfinite(v)) {
      throw InvalidArgument("malformed number '" + cell + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty number list");
  return out;
}

// One leaf command together with its own settings and the options bound to it.
class Leaf {
 public:
  Leaf(std::string command, CLI::App* app) : app_(app) { config_.command = std::move(command); }

  RunConfig& config() { return config_; }
  CLI::App* app() const { return app_; }

  template <typename T>
  void option(const std::string& key, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag_for(key), target, help)->capture_default_str();
    bindings_.push_back({key, opt, [&target](const json& j) { target = j.get<T>(); }});
  }

  void flag(const std::string& key, bool& target, const std::string& help) {
    CLI::Option* opt = app_->add_flag(flag_for(key), target, help);
    bindings_.push_back({key, opt, [&target](const json& j) { target = j.get<bool>(); }});
  }

  void algebra_options() {
    option("kind", config_.kind, "sym-real, herm-complex or lorentz");
    option("rank", config_.rank, "rank r of a matrix algebra");
    option("dim", dim_, "Lorentz ambient dimension n+1");
  }

  void common_options() {
    option("seed", config_.seed, "master seed");
    option("threads", config_.threads, "worker threads");
    option("out", config_.out, "report path, '-' for stdout");
    option("format", format_, "json or csv");
    app_->add_option("--config", config_path_, "JSON file with flat option keys");
  }

  void check_options() {
    option("trials", config_.trials, "random trials per check");
    option("tol", tolerance_, "tolerance override");
  }

  // Applies the config file (only where no flag was given) and normalizes.
  RunConfig resolve() {
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw UsageError("cannot read config file '" + config_path_ + "'");
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError("config file is not valid JSON: " + std::string(e.what()));
      }
      if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
      for (const auto& [key, value] : cfg.items()) {
        auto it = std::find_if(bindings_.begin(), bindings_.end(),
                               [&](const Binding& b) { return b.key == key; });
        if (it == bindings_.end()) {
          throw UsageError("unknown config key '" + key + "' for '" + config_.command + "'");
        }
        if (it->option->count() > 0) continue;
        try {
          it->set(value);
        } catch (const json::exception&) {
          throw UsageError("config key '" + key + "' has the wrong type");
        }
      }
    }
    RunConfig out = config_;
    if (dim_ != 0) out.dim = dim_;
    if (!std::isnan(tolerance_)) out.tolerance = tolerance_;
    if (format_ == "json") {
      out.format = Format::Json;
    } else if (format_ == "csv") {
      out.format = Format::Csv;
    } else {
      throw UsageError("--format must be json or csv");
    }
    return out;
  }

 private:
  struct Binding {
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> set;
  };

  static std::string flag_for(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
  }

  CLI::App* app_;
  RunConfig config_;
  std::vector<Binding> bindings_;
  std::string config_path_;
  std::string format_ = "json";
  double tolerance_ = std::numeric_limits<double>::quiet_NaN();
  int dim_ = 0;
};

struct Outcome {
  std::vector<json> reports;
  std::vector<std::string> lines;
  int status = kExitPass;
  // Alternative payload for sample commands.
  std::optional<SampleBatch> batch;
};

void merge_status(Outcome& o, int status) {
  if (status == kExitFail || o.status == kExitFail) {
    o.status = kExitFail;
  } else if (status == kExitInconclusive) {
    o.status = kExitInconclusive;
  }
}

std::string short_double(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

void add(Outcome& o, const CheckReport& r) {
  std::string line = r.ok() ? "PASS " : "FAIL ";
  line += r.name + " " + r.algebra.label() + " trials=" + std::to_string(r.trials) +
          " max_residual=" + short_double(r.max_residual) + " tol=" + short_double(r.tolerance);
  if (r.negative_control) line += " (negative control, expected to exceed tol)";
  o.lines.push_back(std::move(line));
  o.reports.push_back(report_to_json(r));
  merge_status(o, r.ok() ? kExitPass : kExitFail);
}

void add(Outcome& o, const std::vector<CheckReport>& rs) {
  for (const auto& r : rs) add(o, r);
}

CheckOptions check_options(const RunConfig& c) {
  CheckOptions opt;
  opt.trials = c.trials;
  opt.seed = c.seed;
  opt.tolerance = c.tolerance;
  opt.threads = c.threads;
  return opt;
}

McmcConfig mcmc_config(const RunConfig& c) {
  McmcConfig m;
  m.burn_in = c.burn_in;
  m.thinning = c.thinning;
  return m;
}

Element cone_parameter(const std::string& spec, const AlgebraDescriptor& alg,
                       std::string_view name) {
  Element x = parse_element(spec, alg);
  require_in_cone(x, name);
  return x;
}

void fe_cone_reports(Outcome& o, const AlgebraDescriptor& alg, const RunConfig& c) {
  const CheckOptions opt = check_options(c);
  add(o, check_family_sweep(FamilyCheck::FeCone, alg, c.sets, opt));
  add(o, check_family_sweep(FamilyCheck::Cauchy, alg, c.sets, opt));
  add(o, check_family_sweep(FamilyCheck::Pexider, alg, c.sets, opt));
  if (c.perturbation != 0.0) {
    Rng rng = make_stream(derive_seed(c.seed, 7), 0);
    add(o, check_perturbed_fe_rejects(alg, random_fe_constants(alg, rng), c.perturbation, opt));
  }
}

void fe_1d_reports(Outcome& o, const RunConfig& c) {
  const AlgebraDescriptor scalar = AlgebraDescriptor::sym_real(1);
  const CheckOptions opt = check_options(c);
  add(o, check_family_sweep(FamilyCheck::Fe1d, scalar, c.sets, opt));
  add(o, check_family_sweep(FamilyCheck::GAlpha, scalar, c.sets, opt));
}

void factorization_reports(Outcome& o, const AlgebraDescriptor& alg, double p, const Element& a,
                           const Element& b, const RunConfig& c) {
  const CheckOptions opt = check_options(c);
  add(o, density_factorization_check(alg, p, a, b, opt));
  if (a.coords() != b.coords()) add(o, density_factorization_check(alg, p, a, b, opt, true));
}

Outcome run_check(const std::string& which, const RunConfig& c) {
  Outcome o;
  const CheckOptions opt = check_options(c);
  if (which == "fe-1d") {
    fe_1d_reports(o, c);
    return o;
  }
  const AlgebraDescriptor alg = descriptor(c);
  if (which == "algebra") {
    add(o, check_algebra(alg, opt));
  } else if (which == "hua") {
    add(o, check_hua(alg, opt));
  } else if (which == "involution") {
    add(o, check_involution(alg, opt));
  } else if (which == "jacobian") {
    add(o, check_jacobian(alg, opt));
  } else if (which == "fe-cone") {
    fe_cone_reports(o, alg, c);
  } else if (which == "factorization") {
    const Element a = cone_parameter(c.a, alg, "a");
    const Element b = cone_parameter(c.b, alg, "b");
    if (!WishartParams(c.p, a).has_density()) {
      throw ShapeOutOfRange("factorization needs p > dim/r - 1");
    }
    factorization_reports(o, alg, c.p, a, b, c);
  }
  return o;
}

Outcome run_suite(const RunConfig& c) {
  Outcome o;
  const AlgebraDescriptor alg = descriptor(c);
  const CheckOptions opt = check_options(c);
  add(o, check_algebra(alg, opt));
  add(o, check_hua(alg, opt));
  add(o, check_involution(alg, opt));
  add(o, check_jacobian(alg, opt));
  fe_cone_reports(o, alg, c);
  fe_1d_reports(o, c);
  const Element e = identity(alg);
  factorization_reports(o, alg, alg.dim_over_rank() + 1.0, e, 2.0 * e, c);
  return o;
}

void describe_batch(Outcome& o, const std::string& command, const SampleBatch& batch) {
  std::string line = "DONE " + command + " " + batch.algebra.label() +
                     " n=" + std::to_string(batch.samples.size()) + " method=" + batch.method;
  if (batch.mcmc) {
    line += " acceptance=" + short_double(batch.mcmc->acceptance_rate);
    if (!batch.mcmc->acceptance_in_band) {
      line = "INCONCLUSIVE" + line.substr(4) + " (acceptance outside band)";
      merge_status(o, kExitInconclusive);
    }
  }
  o.lines.push_back(std::move(line));
}

Outcome run_sample(const std::string& which, const RunConfig& c) {
  Outcome o;
  const AlgebraDescriptor alg = descriptor(c);
  const Element a = cone_parameter(c.a, alg, "a");
  if (which == "wishart") {
    const WishartParams params(c.p, a);
    if (!params.has_density()) throw ShapeOutOfRange("Wishart sampling needs p > dim/r - 1");
    o.batch = sample_wishart(params, c.seed, c.n, mcmc_config(c), c.threads);
  } else {
    const Element b = cone_parameter(c.b, alg, "b");
    GigSamplerConfig cfg;
    cfg.method = parse_gig_method(c.method);
    cfg.mcmc = mcmc_config(c);
    o.batch = sample_gig(GigParams(c.p, a, b), c.seed, c.n, cfg, c.threads);
  }
  describe_batch(o, "sample " + which, *o.batch);
  return o;
}

Outcome run_property(const RunConfig& c) {
  Outcome o;
  const AlgebraDescriptor alg = descriptor(c);
  const Element a = cone_parameter(c.a, alg, "a");
  const Element b = cone_parameter(c.b, alg, "b");
  MyPropertyConfig cfg;
  cfg.permutations = c.permutations;
  cfg.significance = c.significance;
  cfg.gig.method = parse_gig_method(c.method);
  cfg.gig.mcmc = mcmc_config(c);
  cfg.wishart_mcmc = mcmc_config(c);
  cfg.dependent_control = c.dependent_control;
  cfg.threads = c.threads;
  const IndependenceReport r = my_property_test(alg, c.p, a, b, c.n, c.seed, cfg);
  o.reports.push_back(report_to_json(r));

  double min_ind = 1.0;
  for (const auto& f : r.independence) min_ind = std::min(min_ind, f.p_value);
  double min_all = 1.0;
  for (double pv : r.all_p_values()) min_all = std::min(min_all, pv);
  const std::string detail = " " + alg.label() + " n=" + std::to_string(r.n) +
                             " min_independence_p=" + short_double(min_ind) +
                             " min_p=" + short_double(min_all);
  if (r.inconclusive) {
    o.lines.push_back("INCONCLUSIVE my_property" + detail + " (MCMC acceptance outside band)");
    merge_status(o, kExitInconclusive);
  } else if (c.dependent_control) {
    const bool detected = min_ind < c.significance;
    o.lines.push_back(std::string(detected ? "PASS" : "FAIL") + " my_property_dependent_control" +
                      detail + " (negative control, expects dependence)");
    merge_status(o, detected ? kExitPass : kExitFail);
  } else {
    o.lines.push_back(std::string(r.pass ? "PASS" : "FAIL") + " my_property" + detail);
    merge_status(o, r.pass ? kExitPass : kExitFail);
  }
  return o;
}

std::string reports_csv(const std::vector<json>& reports) {
  std::string out;
  for (const auto& r : reports) {
    if (r.at("type") == "check") {
      if (out.empty()) {
        out = "name,algebra,trials,seed,tolerance,max_residual,mean_residual,negative_control,"
              "pass\n";
      }
      out += r.at("name").get<std::string>() + "," +
             r.at("algebra").at("label").get<std::string>() + "," +
             std::to_string(r.at("trials").get<std::size_t>()) + "," +
             std::to_string(r.at("seed").get<std::uint64_t>()) + "," +
             format_double(r.at("tolerance").get<double>()) + "," +
             format_double(r.at("max_residual").is_number() ? r.at("max_residual").get<double>()
                                                            : HUGE_VAL) +
             "," +
             format_double(r.at("mean_residual").is_number() ? r.at("mean_residual").get<double>()
                                                             : HUGE_VAL) +
             "," + (r.at("negative_control").get<bool>() ? "true" : "false") + "," +
             (r.at("pass").get<bool>() ? "true" : "false") + "\n";
    } else {
      out += "test,name,statistic,p_value\n";
      for (const auto& f : r.at("independence")) {
        out += "independence," + f.at("name").get<std::string>() + "," +
               format_double(f.at("distance_correlation").get<double>()) + "," +
               format_double(f.at("p_value").get<double>()) + "\n";
      }
      for (const char* key : {"v_marginal", "u_marginal"}) {
        for (const auto& m : r.at(key)) {
          out += std::string(key) + "," + m.at("name").get<std::string>() + "," +
                 format_double(m.at("ks_statistic").get<double>()) + "," +
                 format_double(m.at("p_value").get<double>()) + "\n";
        }
      }
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

// Writes the payload. Returns true when it went to stdout.
bool emit(const Outcome& o, const RunConfig& c, std::ostream& out) {
  if (c.out.empty()) return false;
  std::string text;
  std::string sidecar;
  if (o.batch) {
    if (c.format == Format::Csv) {
      std::ostringstream s;
      write_samples_csv(s, *o.batch);
      text = s.str();
      sidecar = dump(batch_metadata(*o.batch));
    } else {
      text = dump(batch_to_json(*o.batch));
    }
  } else if (c.format == Format::Csv) {
    text = reports_csv(o.reports);
  } else {
    json doc = {{"schema_version", kSchemaVersion},
                {"command", c.command},
                {"seed", c.seed},
                {"exit_code", o.status},
                {"reports", o.reports}};
    text = dump(doc);
  }
  if (c.out == "-") {
    out << text;
    return true;
  }
  write_file(c.out, text);
  if (!sidecar.empty()) write_file(c.out + ".json", sidecar);
  return false;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string_view(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(kSeedEnv) + " must be an unsigned integer");
}

}  // namespace

AlgebraDescriptor descriptor(const RunConfig& c) {
  switch (parse_kind(c.kind)) {
    case AlgebraKind::SymReal:
      return AlgebraDescriptor::sym_real(c.rank);
    case AlgebraKind::HermComplex:
      return AlgebraDescriptor::herm_complex(c.rank);
    case AlgebraKind::Lorentz:
      if (!c.dim) throw InvalidArgument("lorentz needs --dim");
      return AlgebraDescriptor::lorentz_with_dim(*c.dim);
  }
  throw InvalidArgument("unknown algebra kind");
}

Element parse_element(std::string_view spec, const AlgebraDescriptor& alg) {
  if (spec == "identity") return identity(alg);
  if (spec.starts_with("diag:")) {
    if (!alg.is_matrix_kind()) throw InvalidArgument("diag: needs a matrix algebra");
    const auto values = parse_numbers(spec.substr(5));
    if (static_cast<int>(values.size()) != alg.rank()) {
      throw InvalidArgument("diag: needs " + std::to_string(alg.rank()) + " values");
    }
    return diagonal(alg, values);
  }
  if (spec.starts_with("coords:")) {
    const auto values = parse_numbers(spec.substr(7));
    if (static_cast<int>(values.size()) != alg.dim()) {
      throw InvalidArgument("coords: needs " + std::to_string(alg.dim()) + " values");
    }
    return Element(alg, Eigen::Map<const Eigen::VectorXd>(values.data(), values.size()));
  }
  throw InvalidArgument("element must be 'identity', 'diag:...' or 'coords:...'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric cone arithmetic, samplers and identity checks"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::uint64_t seed0 = 0;
  try {
    seed0 = default_seed();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::list<Leaf> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                  const std::string& command) -> Leaf& {
    Leaf& l = leaves.emplace_back(command, parent->add_subcommand(name, help));
    l.config().seed = seed0;
    l.common_options();
    return l;
  };

  CLI::App* check = app.add_subcommand("check", "run one residual check family");
  check->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> checks = {
      {"algebra", "Jordan axioms, operator and spectral identities"},
      {"hua", "Hua's identity"},
      {"involution", "the map is its own inverse"},
      {"jacobian", "closed-form Jacobian against finite differences"},
      {"fe-cone", "functional-equation solution families on the cone"},
      {"fe-1d", "scalar functional-equation solution families"},
      {"factorization", "density factorization under the map"}};
  for (const auto& [name, help] : checks) {
    Leaf& l = leaf(check, name, help, "check " + name);
    if (name != "fe-1d") l.algebra_options();
    l.check_options();
    if (name == "fe-cone" || name == "fe-1d") {
      l.option("sets", l.config().sets, "random constant sets");
    }
    if (name == "fe-cone") {
      l.option("perturbation", l.config().perturbation, "negative-control perturbation, 0 skips");
    }
    if (name == "factorization") {
      l.option("p", l.config().p, "shape parameter");
      l.option("a", l.config().a, "parameter a");
      l.option("b", l.config().b, "parameter b");
    }
  }

  CLI::App* sample = app.add_subcommand("sample", "draw samples");
  sample->require_subcommand(1);
  for (const std::string name : {"wishart", "gig"}) {
    Leaf& l = leaf(sample, name, name == "wishart" ? "Wishart gamma_{p,a}" : "GIG mu_{p,a,b}",
                   "sample " + name);
    l.algebra_options();
    l.option("p", l.config().p, "shape parameter");
    l.option("a", l.config().a, "parameter a");
    if (name == "gig") {
      l.option("b", l.config().b, "parameter b");
      l.option("method", l.config().method,
               "auto, ratio-of-uniforms, metropolis or wishart-rejection");
    }
    l.option("n", l.config().n, "sample count");
    l.option("burn_in", l.config().burn_in, "Metropolis burn-in");
    l.option("thinning", l.config().thinning, "Metropolis thinning");
  }

  CLI::App* test = app.add_subcommand("test", "statistical tests");
  test->require_subcommand(1);
  {
    Leaf& l = leaf(test, "my-property", "independence of U and V and their marginals",
                   "test my-property");
    l.config().n = 10000;
    l.algebra_options();
    l.option("p", l.config().p, "shape parameter");
    l.option("a", l.config().a, "parameter a");
    l.option("b", l.config().b, "parameter b");
    l.option("n", l.config().n, "sample count");
    l.option("method", l.config().method, "GIG sampler method");
    l.option("permutations", l.config().permutations, "permutations per independence test");
    l.option("significance", l.config().significance, "family-wise significance level");
    l.flag("dependent_control", l.config().dependent_control,
           "replace Y by X plus noise (negative control)");
    l.option("burn_in", l.config().burn_in, "Metropolis burn-in");
    l.option("thinning", l.config().thinning, "Metropolis thinning");
  }

  {
    Leaf& l = leaf(&app, "suite", "every residual check for one algebra", "suite");
    l.algebra_options();
    l.check_options();
    l.option("sets", l.config().sets, "random constant sets");
    l.option("perturbation", l.config().perturbation, "negative-control perturbation, 0 skips");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Leaf* chosen = nullptr;
  for (Leaf& l : leaves) {
    if (l.app()->parsed()) chosen = &l;
  }
  if (chosen == nullptr) {
    err << "usage error: no command given\n";
    return kExitUsage;
  }

  RunConfig config;
  try {
    config = chosen->resolve();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (config.threads < 1) {
    err << "usage error: --threads must be at least 1\n";
    return kExitUsage;
  }

  Outcome outcome;
  try {
    const std::string& cmd = config.command;
    if (cmd.starts_with("check ")) {
      outcome = run_check(cmd.substr(6), config);
    } else if (cmd.starts_with("sample ")) {
      outcome = run_sample(cmd.substr(7), config);
    } else if (cmd == "test my-property") {
      outcome = run_property(config);
    } else {
      outcome = run_suite(config);
    }
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeOutOfRange& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotInCone& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << "\n";
    outcome.reports.push_back({{"schema_version", kSchemaVersion},
                               {"type", "error"},
                               {"command", config.command},
                               {"message", e.what()},
                               {"pass", false}});
    outcome.lines.push_back("FAIL " + config.command + " (" + e.what() + ")");
    outcome.status = kExitFail;
  }

  try {
    const bool to_stdout = emit(outcome, config, out);
    std::ostream& summary = to_stdout ? err : out;
    for (const auto& line : outcome.lines) summary << line << "\n";
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return outcome.status;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace symcone::cli
