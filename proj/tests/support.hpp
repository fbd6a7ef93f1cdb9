#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orchardist/core.hpp"

namespace orchardist::testing {

// Network from named arcs; vertex ids follow first appearance, arc ids
// follow listing order. Sink names become leaf labels.
inline PhyloNetwork from_arcs(
    const std::vector<std::pair<std::string, std::string>>& arcs) {
  RawDigraph raw;
  auto id = [&raw](const std::string& name) {
    for (std::size_t i = 0; i < raw.names.size(); ++i) {
      if (raw.names[i] == name) return i;
    }
    return raw.add_vertex(name);
  };
  for (const auto& [u, v] : arcs) {
    const std::size_t a = id(u);
    const std::size_t b = id(v);
    raw.add_arc(a, b);
  }
  return validate(raw);
}

inline PhyloNetwork blob() {
  return from_arcs({{"rho", "t0"}, {"t0", "b"}, {"t0", "u"}, {"u", "v"}, {"u", "w"},
                    {"v", "w"}, {"v", "r"}, {"w", "r"}, {"r", "a"}});
}

inline PhyloNetwork reticulated_cherry() {
  return from_arcs({{"rho", "g"}, {"g", "p"}, {"g", "r"}, {"p", "r"}, {"p", "y"},
                    {"r", "x"}});
}

inline ArcId arc(const PhyloNetwork& net, const std::string& u, const std::string& v) {
  return net.arc_between(u, v);
}

inline VertexId vertex(const PhyloNetwork& net, const std::string& name) {
  return *net.find(name);
}

}  // namespace orchardist::testing
