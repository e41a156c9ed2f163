#ifndef ZSIG_JSON_IO_HPP
#define ZSIG_JSON_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zsig/heights.hpp"
#include "zsig/primdiv.hpp"
#include "zsig/sequences.hpp"
#include "zsig/vojta.hpp"

namespace zsig {

// Conventions: arbitrary-precision integers and rationals are decimal
// strings, reals are 12-significant-digit decimal text, structural indices
// and counts are plain JSON numbers.

nlohmann::json to_json(const HomogeneousForm& F);
nlohmann::json to_json(const Morphism& f);
nlohmann::json to_json(const ProjectivePoint& P);
nlohmann::json to_json(const SequenceSpec& spec);
nlohmann::json to_json(const TermRecord& record);
nlohmann::json to_json(const ZsigmondyReport& report);
nlohmann::json to_json(const HeightEstimate& estimate);
nlohmann::json to_json(const ThresholdVerdict& verdict);
nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentReport& report);

HomogeneousForm form_from_json(const nlohmann::json& j, int num_vars_hint = 0);
Morphism morphism_from_json(const nlohmann::json& j);
ProjectivePoint point_from_json(const nlohmann::json& j);
SequenceSpec spec_from_json(const nlohmann::json& j);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// CSV projection of a report: n, digits, c_n_digits, has_primitive, b_n.
std::string to_csv(const ZsigmondyReport& report);

// Text syntax for polynomials: variables x0..x9 (aliases x, y, z, w),
// integer coefficients, +, -, *, ^ and parentheses. A morphism is a
// comma-separated list of forms; a point is a comma-separated integer list.
HomogeneousForm parse_form(std::string_view text, int num_vars);
Morphism parse_morphism(std::string_view text);
ProjectivePoint parse_point(std::string_view text);
mpq_class parse_rational(std::string_view text);
mpz_class parse_integer(std::string_view text);
std::vector<mpz_class> parse_int_list(std::string_view text);

/// Orbit persistence: JSON-lines records {"n": i, "coords": [...]}, valid
/// iff indices are consecutive from 0.
void save_orbit_jsonl(std::ostream& os, const std::vector<ProjectivePoint>& points);
std::vector<ProjectivePoint> load_orbit_jsonl(std::istream& is);

} // namespace zsig

#endif
