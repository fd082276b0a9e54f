#pragma once

#include <json.hpp>

#include "qtate/scatter.hpp"
#include "qtate/sheaf.hpp"
#include "qtate/spectra.hpp"
#include "qtate/twisted.hpp"

namespace qtate::io {

using json = nlohmann::ordered_json;

/// Thrown on structurally invalid input documents (CLI exit 2).
class format_error : public std::runtime_error {
 public:
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

json rational_to_json(const mpq_class& v);
mpq_class rational_from_json(const json& j);
std::vector<mpq_class> rationals_from_json(const json& j);
json rationals_to_json(std::span<const mpq_class> v);

json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j);

json element_to_json(const TwistedElement& f);
TwistedElement element_from_json(const json& j);

json free_element_to_json(const FreeElement& f, int alphabet);
FreeElement free_element_from_json(const json& j);

json point_to_json(const spectra::SpectrumPoint& p);
spectra::SpectrumPoint point_from_json(const json& j);

json polytope_to_json(const sheaf::Polytope& u);
sheaf::Polytope polytope_from_json(const json& j);

json transition_to_json(const sheaf::TransitionData& g);
sheaf::TransitionData transition_from_json(const json& j);

json wall_to_json(const scatter::WallAutomorphism& w);
scatter::WallAutomorphism wall_from_json(const json& j);

json diagram_to_json(const scatter::ScatteringDiagram& d);
scatter::ScatteringDiagram diagram_from_json(const json& j);

}  // namespace qtate::io
