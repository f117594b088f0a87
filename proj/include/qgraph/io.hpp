#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgraph/graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

// {"topology", "v1", "v2", "m", "seed", "edges": [{"id", "kind", "length"}]};
// lengths carry 17 significant digits so they round-trip bit for bit.
std::string graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const nlohmann::json& j);

// index,lambda (one row per level, merged levels repeated; index counts from
// the first level above zero).
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
nlohmann::json spectrum_to_json(const Spectrum& s);

// Lines of `comments` are written first, each prefixed with "# ".
void write_curve_csv(std::ostream& out, const FormFactorCurve& curve,
                     const std::vector<std::string>& comments = {});
nlohmann::json curve_to_json(const FormFactorCurve& curve);

nlohmann::json shape_to_json(const QuasarShape& shape, Topology topology);

}  // namespace qgraph
