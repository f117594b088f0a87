#include "qgraph/io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace qgraph {

std::string graph_to_json(const MetricGraph& g) {
  const QuasarShape& s = g.shape();
  std::ostringstream out;
  out << std::setprecision(17);
  out << "{\n  \"topology\": \"" << (g.topology() == Topology::star ? "star" : "quasar")
      << "\",\n  \"v1\": " << s.v1 << ",\n  \"v2\": " << s.v2 << ",\n  \"m\": " << s.m
      << ",\n  \"seed\": " << s.seed << ",\n  \"edges\": [";
  const auto lengths = g.edge_lengths();
  for (int e = 0; e < g.edge_count(); ++e) {
    out << (e ? ",\n" : "\n") << "    {\"id\": " << e << ", \"kind\": \""
        << to_string(g.edge_kind(e)) << "\", \"length\": " << lengths[e] << "}";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

MetricGraph graph_from_json(const nlohmann::json& j) {
  QuasarShape shape{j.at("v1").get<int>(), j.at("v2").get<int>(), j.at("m").get<int>(),
                    j.at("seed").get<std::uint64_t>()};
  const Topology topology =
      j.value("topology", std::string("quasar")) == "star" ? Topology::star : Topology::quasar;
  const auto& edges = j.at("edges");
  std::vector<double> lengths(edges.size());
  for (const auto& e : edges) {
    const int id = e.at("id").get<int>();
    if (id < 0 || id >= static_cast<int>(lengths.size()))
      throw std::invalid_argument("edge id out of range");
    lengths[id] = e.at("length").get<double>();
  }
  MetricGraph g(topology, shape, std::move(lengths));
  for (const auto& e : edges) {
    if (edge_kind_from_string(e.at("kind").get<std::string>()) != g.edge_kind(e.at("id").get<int>()))
      throw std::invalid_argument("edge kind does not match the shape's edge order");
  }
  return g;
}

nlohmann::json shape_to_json(const QuasarShape& shape, Topology topology) {
  return {{"topology", topology == Topology::star ? "star" : "quasar"},
          {"v1", shape.v1},
          {"v2", shape.v2},
          {"m", shape.m},
          {"seed", shape.seed}};
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "index,lambda\n" << std::setprecision(17);
  long index = s.levels_below + 1;
  for (double v : s.levels()) out << index++ << ',' << v << '\n';
}

nlohmann::json spectrum_to_json(const Spectrum& s) {
  return {{"shape", shape_to_json(s.shape, s.topology)},
          {"solver", s.solver},
          {"lambda_min", s.lambda_min},
          {"lambda_max", s.lambda_max},
          {"levels_below", s.levels_below},
          {"grid_step", s.grid_step},
          {"tolerance", s.tolerance},
          {"merge_tolerance", s.merge_tolerance},
          {"levels", s.level_count()},
          {"winding_count", s.winding_count},
          {"unresolved_clusters", s.unresolved_clusters},
          {"values", s.values},
          {"multiplicity", s.multiplicity}};
}

void write_curve_csv(std::ostream& out, const FormFactorCurve& curve,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# method=" << to_string(curve.method) << '\n';
  out << "tau,K,stderr,n_realizations\n" << std::setprecision(17);
  for (const auto& p : curve.points)
    out << p.tau << ',' << p.k << ',' << p.stderr_k << ',' << curve.realizations << '\n';
}

nlohmann::json curve_to_json(const FormFactorCurve& curve) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : curve.points) points.push_back({{"tau", p.tau}, {"K", p.k}, {"stderr", p.stderr_k}});
  return {{"method", to_string(curve.method)},
          {"realizations", curve.realizations},
          {"window", curve.window},
          {"bin_width", curve.bin_width},
          {"warnings", curve.warnings},
          {"points", points}};
}

}  // namespace qgraph
