#ifndef SYMCONE_REPORT_JSON_HPP_
#define SYMCONE_REPORT_JSON_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "symcone/distributions.hpp"
#include "symcone/verification.hpp"

namespace symcone {

inline constexpr int kSchemaVersion = 1;

// Element as {"kind", "rank", "coords"}.
nlohmann::json element_to_json(const Element& x);
Element element_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const CheckReport& report);
nlohmann::json report_to_json(const IndependenceReport& report);
// Metadata sidecar for a sample batch (everything except the samples).
nlohmann::json batch_metadata(const SampleBatch& batch);
// Full batch in one document, samples as coordinate arrays.
nlohmann::json batch_to_json(const SampleBatch& batch);

// Coordinate names in canonical basis order: e11, e22, ..., s12, a12, ... for
// matrix kinds (s = symmetric part, a = antisymmetric imaginary part) and
// x0, x1, ... for Lorentz.
std::vector<std::string> coordinate_names(const AlgebraDescriptor& alg);

// %.17g, which round-trips every finite double.
std::string format_double(double v);
std::string csv_header(const AlgebraDescriptor& alg);
std::string csv_row(const Element& x);
Element parse_csv_row(const std::string& line, const AlgebraDescriptor& alg);
void write_samples_csv(std::ostream& out, const SampleBatch& batch);

// Stable two-space-indented text with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace symcone

#endif  // SYMCONE_REPORT_JSON_HPP_
