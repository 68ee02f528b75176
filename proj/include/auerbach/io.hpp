#pragma once

// File formats: JSON body definitions (with an optional frame for the
// verify / hessian-report commands), frame serialization as row-major data
// with a dimension header, and the JSON / CSV / text renderings of search
// reports and bounds tables.

#include "auerbach/bodies.hpp"
#include "auerbach/manifold.hpp"
#include "auerbach/simplex.hpp"
#include "auerbach/solver.hpp"
#include "auerbach/topology.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace auerbach {

using Json = nlohmann::ordered_json;

struct BodyFile {
  Body body;
  std::optional<Frame> frame;
};

Body body_from_json(const Json& j);
Json body_to_json(const Body& body);  // radial-function bodies do not serialize

BodyFile parse_body_file(const Json& j);
BodyFile load_body_file(const std::string& path);

Json frame_to_json(const Frame& frame);
Frame frame_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);  // {"rows","cols","data"} row-major
Matrix matrix_from_json(const Json& j);

Json gs_to_json(const GSCoordinates& coords);
GSCoordinates gs_from_json(const Json& j);

Json search_config_to_json(const SearchConfig& config);
Json auerbach_report_to_json(const AuerbachReport& report);
Json morse_check_to_json(const MorseCheckReport& report);

Json basis_report_to_json(const Body& body, const BasisSearchReport& report,
                          const MorseCheckReport& morse);
std::string basis_classes_csv(const BasisSearchReport& report);
std::string basis_report_text(const Body& body, const BasisSearchReport& report,
                              const MorseCheckReport& morse);

Json simplex_report_to_json(const Body& body, const SimplexSearchReport& report);
std::string simplex_classes_csv(const SimplexSearchReport& report);
std::string simplex_report_text(const Body& body,
                                const SimplexSearchReport& report);

Json bounds_to_json(const std::vector<BoundsReport>& rows);
std::string bounds_to_csv(const std::vector<BoundsReport>& rows);
std::string bounds_to_text(const std::vector<BoundsReport>& rows);

// Explanation attached to the soft Morse target (the 2^floor(n/2)+4 count):
// empty when met, otherwise names the degenerate classes / divergences that
// account for the shortfall.
std::string morse_soft_explanation(const BasisSearchReport& report,
                                   long long required, long long observed);

}  // namespace auerbach
