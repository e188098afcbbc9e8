#include "symcone/report_json.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace symcone {

using nlohmann::json;

namespace {

json algebra_json(const AlgebraDescriptor& alg) {
  return {{"kind", std::string(to_string(alg.kind()))},
          {"rank", alg.rank()},
          {"dim", alg.dim()},
          {"label", alg.label()}};
}

json mcmc_json(const McmcDiagnostics& d) {
  return {{"burn_in", d.burn_in},
          {"thinning", d.thinning},
          {"acceptance_rate", d.acceptance_rate},
          {"proposal_std", d.proposal_std},
          {"acceptance_in_band", d.acceptance_in_band}};
}

}  // namespace

json element_to_json(const Element& x) {
  const auto& c = x.coords();
  return {{"kind", std::string(to_string(x.algebra().kind()))},
          {"rank", x.algebra().rank()},
          {"coords", std::vector<double>(c.data(), c.data() + c.size())}};
}

Element element_from_json(const json& j) {
  const AlgebraKind kind = parse_kind(j.at("kind").get<std::string>());
  const auto coords = j.at("coords").get<std::vector<double>>();
  AlgebraDescriptor alg = AlgebraDescriptor::sym_real(1);
  switch (kind) {
    case AlgebraKind::SymReal:
      alg = AlgebraDescriptor::sym_real(j.at("rank").get<int>());
      break;
    case AlgebraKind::HermComplex:
      alg = AlgebraDescriptor::herm_complex(j.at("rank").get<int>());
      break;
    case AlgebraKind::Lorentz:
      alg = AlgebraDescriptor::lorentz_with_dim(static_cast<int>(coords.size()));
      break;
  }
  return Element(alg, Eigen::Map<const Eigen::VectorXd>(coords.data(), coords.size()));
}

json report_to_json(const CheckReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"type", "check"},
          {"name", r.name},
          {"algebra", algebra_json(r.algebra)},
          {"trials", r.trials},
          {"seed", r.seed},
          {"tolerance", r.tolerance},
          {"max_residual", r.max_residual},
          {"mean_residual", r.mean_residual},
          {"residual_kind", r.residual_kind},
          {"p_values", r.p_values},
          {"negative_control", r.negative_control},
          {"pass", r.pass},
          {"ok", r.ok()}};
}

json report_to_json(const IndependenceReport& r) {
  json pairs = json::array();
  for (const auto& f : r.independence) {
    pairs.push_back({{"name", f.name},
                     {"pearson", f.pearson},
                     {"distance_correlation", f.distance_correlation},
                     {"p_value", f.p_value}});
  }
  auto marginals = [](const std::vector<MarginalResult>& ms) {
    json out = json::array();
    for (const auto& m : ms) {
      out.push_back({{"name", m.name}, {"ks_statistic", m.ks_statistic}, {"p_value", m.p_value}});
    }
    return out;
  };
  return {{"schema_version", kSchemaVersion},
          {"type", "independence"},
          {"algebra", algebra_json(r.algebra)},
          {"p", r.p},
          {"n", r.n},
          {"seed", r.seed},
          {"permutations", r.permutations},
          {"significance", r.significance},
          {"functional_names", r.functional_names},
          {"correlation_matrix", r.correlation_matrix},
          {"independence", pairs},
          {"v_marginal", marginals(r.v_marginal)},
          {"u_marginal", marginals(r.u_marginal)},
          {"v_trace_mean", r.v_trace_mean},
          {"v_trace_expected", r.v_trace_expected},
          {"v_trace_standard_error", r.v_trace_standard_error},
          {"sampler_methods", r.sampler_methods},
          {"mcmc_acceptance_rates", r.mcmc_acceptance_rates},
          {"dependent_control", r.dependent_control},
          {"inconclusive", r.inconclusive},
          {"pass", r.pass}};
}

json batch_metadata(const SampleBatch& b) {
  json j = {{"schema_version", kSchemaVersion},
            {"type", "samples"},
            {"algebra", algebra_json(b.algebra)},
            {"distribution", b.distribution},
            {"p", b.p},
            {"n", b.samples.size()},
            {"method", b.method},
            {"coordinates", coordinate_names(b.algebra)}};
  j["a"] = b.a ? element_to_json(*b.a) : json(nullptr);
  j["b"] = b.b ? element_to_json(*b.b) : json(nullptr);
  j["seed"] = b.seed ? json(*b.seed) : json(nullptr);
  j["mcmc"] = b.mcmc ? mcmc_json(*b.mcmc) : json(nullptr);
  return j;
}

json batch_to_json(const SampleBatch& b) {
  json j = batch_metadata(b);
  json rows = json::array();
  for (const auto& x : b.samples) {
    const auto& c = x.coords();
    rows.push_back(std::vector<double>(c.data(), c.data() + c.size()));
  }
  j["samples"] = std::move(rows);
  return j;
}

std::vector<std::string> coordinate_names(const AlgebraDescriptor& alg) {
  std::vector<std::string> names;
  if (!alg.is_matrix_kind()) {
    for (int i = 0; i < alg.dim(); ++i) names.push_back("x" + std::to_string(i));
    return names;
  }
  const int r = alg.rank();
  for (int i = 1; i <= r; ++i) names.push_back("e" + std::to_string(i) + std::to_string(i));
  for (int j = 2; j <= r; ++j) {
    for (int i = 1; i < j; ++i) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      names.push_back("s" + ij);
      if (alg.kind() == AlgebraKind::HermComplex) names.push_back("a" + ij);
    }
  }
  return names;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_header(const AlgebraDescriptor& alg) {
  std::string out;
  for (const auto& name : coordinate_names(alg)) {
    if (!out.empty()) out += ',';
    out += name;
  }
  return out;
}

std::string csv_row(const Element& x) {
  std::string out;
  const auto& c = x.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(c[i]);
  }
  return out;
}

Element parse_csv_row(const std::string& line, const AlgebraDescriptor& alg) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("malformed CSV cell '" + cell + "'");
    }
    if (used != cell.size()) throw InvalidArgument("malformed CSV cell '" + cell + "'");
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != alg.dim()) {
    throw InvalidArgument("CSV row has " + std::to_string(values.size()) + " values, expected " +
                          std::to_string(alg.dim()));
  }
  return Element(alg, Eigen::Map<const Eigen::VectorXd>(values.data(), values.size()));
}

void write_samples_csv(std::ostream& out, const SampleBatch& batch) {
  out << csv_header(batch.algebra) << '\n';
  for (const auto& x : batch.samples) out << csv_row(x) << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace symcone
