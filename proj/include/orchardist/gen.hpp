#pragma once

// Instance generators: birth-hybridization simulation, random linked trees,
// the vertex-cover reduction, and the family meeting the r - 1 bound.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orchardist/core.hpp"
#include "orchardist/errors.hpp"

namespace orchardist {

// ---------------------------------------------------------------------------
// Birth-hybridization

struct GenConfig {
  std::size_t leaves = 20;
  std::size_t reticulations = 5;
  double lambda = 1.0;
  std::optional<double> nu;  // fixed rate; otherwise drawn per attempt
  double nu_min = 0.0001;
  double nu_max = 0.4;
  std::uint64_t seed = 0;
  std::size_t max_retries = 10000;
};

struct Generated {
  PhyloNetwork network;
  double nu;
  std::size_t attempts;
};

inline void check_config(const GenConfig& c) {
  auto bad = [](const std::string& why) {
    throw GenerationError(GenerationError::Reason::kBadConfig, why);
  };
  if (c.leaves < 2) bad("need at least two leaves");
  if (!(c.lambda > 0)) bad("speciation rate must be positive");
  if (c.nu && !(*c.nu > 0)) bad("hybridization rate must be positive");
  if (!c.nu && !(c.nu_min > 0 && c.nu_min <= c.nu_max)) bad("bad hybridization interval");
  if (c.max_retries == 0) bad("need at least one attempt");
}

namespace detail {

// One run of the process; nullopt when the reticulation count misses.
inline std::optional<PhyloNetwork> birth_hybridization_once(const GenConfig& c, double nu,
                                                            std::mt19937_64& rng) {
  RawDigraph raw;
  std::vector<std::size_t> lineages{raw.add_vertex("rho")};  // tails of open lineages
  std::size_t events = 0;
  std::size_t hybridizations = 0;
  const std::size_t event_cap = 100 * (c.leaves + c.reticulations) + 1000;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (lineages.size() < c.leaves) {
    if (++events > event_cap) return std::nullopt;
    const double n = static_cast<double>(lineages.size());
    const double birth = c.lambda * n;
    const double hybrid = nu * n * (n - 1) / 2;
    if (unit(rng) * (birth + hybrid) < birth) {
      std::uniform_int_distribution<std::size_t> pick(0, lineages.size() - 1);
      const std::size_t i = pick(rng);
      const std::size_t s = raw.add_vertex();
      raw.add_arc(lineages[i], s);
      lineages[i] = s;
      lineages.push_back(s);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, lineages.size() - 1);
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) j = pick(rng);
      if (i > j) std::swap(i, j);
      const std::size_t h = raw.add_vertex();
      raw.add_arc(lineages[i], h);
      raw.add_arc(lineages[j], h);
      lineages[i] = h;
      lineages.erase(lineages.begin() + static_cast<std::ptrdiff_t>(j));
      // Two lineages of one fresh split merge into parallel arcs, which the
      // clean-up below removes again; only the others can count.
      if (raw.arcs[raw.arcs.size() - 1].first != raw.arcs[raw.arcs.size() - 2].first) {
        if (++hybridizations > c.reticulations) return std::nullopt;
      }
    }
  }
  for (std::size_t i = 0; i < lineages.size(); ++i) {
    const std::size_t leaf = raw.add_vertex("x" + std::to_string(i + 1));
    raw.add_arc(lineages[i], leaf);
  }
  PhyloNetwork net = validate(clean_up(raw));
  if (net.num_reticulations() != c.reticulations || net.num_leaves() != c.leaves) {
    return std::nullopt;
  }
  return net;
}

}  // namespace detail

// Gillespie simulation: speciation at rate lambda per lineage, hybridization
// at rate nu per unordered pair of lineages, stopped at `leaves` lineages.
// Runs are rejected until the reticulation count is exact; nu is drawn
// uniformly from [nu_min, nu_max] for every attempt unless fixed.
inline Generated generate(const GenConfig& config) {
  check_config(config);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> nu_dist(config.nu_min, config.nu_max);
  for (std::size_t attempt = 1; attempt <= config.max_retries; ++attempt) {
    const double nu = config.nu ? *config.nu : nu_dist(rng);
    if (auto net = detail::birth_hybridization_once(config, nu, rng)) {
      return {std::move(*net), nu, attempt};
    }
  }
  throw GenerationError(GenerationError::Reason::kRetriesExhausted,
                        "no network with " + std::to_string(config.reticulations) +
                            " reticulations after " + std::to_string(config.max_retries) +
                            " attempts");
}

// ---------------------------------------------------------------------------
// Random linked trees

// A uniform-ish random tree on `leaves` leaves with `reticulations` extra
// arcs between subdivision points of random arcs. Unlike birth-hybridization
// networks these need not be time-consistent, so they reach every class.
inline PhyloNetwork random_linked(std::size_t leaves, std::size_t reticulations,
                                  std::mt19937_64& rng) {
  if (leaves < 1) {
    throw GenerationError(GenerationError::Reason::kBadConfig, "need at least one leaf");
  }
  // With one leaf there is a single arc, and a link would need two.
  if (leaves == 1 && reticulations > 0) {
    throw GenerationError(GenerationError::Reason::kBadConfig,
                          "a single leaf admits no reticulations");
  }
  RawDigraph raw;
  const std::size_t root = raw.add_vertex("rho");
  raw.add_arc(root, raw.add_vertex("x1"));
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto subdivide = [&raw](std::size_t a) {
    const std::size_t m = raw.add_vertex();
    const std::size_t head = raw.arcs[a].second;
    raw.arcs[a].second = m;
    raw.add_arc(m, head);
    return m;
  };
  for (std::size_t i = 2; i <= leaves; ++i) {
    const std::size_t m = subdivide(pick(raw.arcs.size()));
    raw.add_arc(m, raw.add_vertex("x" + std::to_string(i)));
  }
  // Reachability from a vertex, for the cycle test.
  auto reaches = [&raw](std::size_t from, std::size_t to) {
    std::vector<std::vector<std::size_t>> out(raw.num_vertices());
    for (auto [u, v] : raw.arcs) out[u].push_back(v);
    std::vector<char> seen(raw.num_vertices(), 0);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      if (v == to) return true;
      if (seen[v]) continue;
      seen[v] = 1;
      for (std::size_t w : out[v]) stack.push_back(w);
    }
    return false;
  };
  std::size_t added = 0;
  while (added < reticulations) {
    const std::size_t a = pick(raw.arcs.size());
    const std::size_t b = pick(raw.arcs.size());
    if (a == b) continue;
    // The new arc runs from a point on a to a point on b; it closes a cycle
    // exactly when b's head reaches a's tail.
    if (reaches(raw.arcs[b].second, raw.arcs[a].first)) continue;
    const std::size_t s = subdivide(a);
    const std::size_t t = subdivide(b);
    raw.add_arc(s, t);
    ++added;
  }
  return validate(raw);
}

// ---------------------------------------------------------------------------
// Cubic graphs and the vertex-cover reduction

struct CubicGraph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::vector<std::vector<std::size_t>> neighbours() const {
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& n : adj) std::sort(n.begin(), n.end());
    return adj;
  }
};

inline void check_cubic(const CubicGraph& g) {
  auto fail = [](const std::string& why) {
    throw GenerationError(GenerationError::Reason::kNotCubic, why);
  };
  if (g.vertices.size() < 4) fail("a cubic graph needs at least four vertices");
  const auto adj = g.neighbours();
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (adj[v].size() != 3) {
      fail("vertex " + g.vertices[v] + " has degree " + std::to_string(adj[v].size()));
    }
    if (std::adjacent_find(adj[v].begin(), adj[v].end()) != adj[v].end() ||
        std::count(adj[v].begin(), adj[v].end(), v) > 0) {
      fail("vertex " + g.vertices[v] + " has a loop or parallel edge");
    }
  }
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{0};
  std::size_t count = 0;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    ++count;
    for (std::size_t w : adj[v]) stack.push_back(w);
  }
  if (count != adj.size()) fail("graph is not connected");
}

// "u v" per line, '#' comments; vertices in order of first appearance.
inline CubicGraph parse_cubic_graph(std::string_view text) {
  CubicGraph g;
  std::map<std::string, std::size_t> ids;
  auto id = [&](const std::string& name) {
    auto [it, fresh] = ids.try_emplace(name, g.vertices.size());
    if (fresh) g.vertices.push_back(name);
    return it->second;
  };
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string u, v;
    if (!(words >> u)) continue;
    if (!(words >> v)) {
      throw GenerationError(GenerationError::Reason::kNotCubic, "edge line needs two names");
    }
    const std::size_t a = id(u);
    const std::size_t b = id(v);
    g.edges.emplace_back(a, b);
  }
  check_cubic(g);
  return g;
}

inline CubicGraph cubic_from_edges(std::size_t n,
                                   std::vector<std::pair<std::size_t, std::size_t>> edges) {
  CubicGraph g;
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back(std::to_string(i));
  g.edges = std::move(edges);
  check_cubic(g);
  return g;
}

inline CubicGraph k4_graph() {
  return cubic_from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

inline CubicGraph k33_graph() {
  return cubic_from_edges(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5},
                              {2, 3}, {2, 4}, {2, 5}});
}

inline CubicGraph prism_graph() {
  return cubic_from_edges(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3},
                              {0, 3}, {1, 4}, {2, 5}});
}

inline CubicGraph cube_graph() {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 0; v < 8; ++v) {
    for (std::size_t bit : {1u, 2u, 4u}) {
      if ((v & bit) == 0) edges.emplace_back(v, v | bit);
    }
  }
  return cubic_from_edges(8, std::move(edges));
}

// Exhaustive minimum vertex cover over all vertex subsets.
inline std::size_t min_vertex_cover(const CubicGraph& g) {
  const std::size_t n = g.vertices.size();
  std::size_t best = n;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const bool covers = std::all_of(g.edges.begin(), g.edges.end(), [mask](const auto& e) {
      return ((mask >> e.first) & 1) || ((mask >> e.second) & 1);
    });
    if (covers) best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(mask)));
  }
  return best;
}

// Names used by the reduction, e.g. "r3_v2", "w7_v0", "l5_v1".
inline std::string gadget_name(const std::string& kind, int i, std::size_t v) {
  return kind + (i >= 0 ? std::to_string(i) : std::string()) + "_v" + std::to_string(v);
}

// N_G: one gadget per vertex whose principal part is an N-fence of 15 arcs,
// a spine of tree vertices joining the gadget roots, and one arc per ordered
// pair of adjacent vertices from r_{tau_u(v)} of u to w_{pi_v(u)} of v.
// tau and pi number each vertex's neighbours in id order.
inline PhyloNetwork reduce_vertex_cover(const CubicGraph& g) {
  check_cubic(g);
  const std::size_t n = g.vertices.size();
  const auto adj = g.neighbours();
  RawDigraph raw;
  std::map<std::string, std::size_t> ids;
  auto id = [&](const std::string& name) {
    auto [it, fresh] = ids.try_emplace(name, raw.names.size());
    if (fresh) raw.add_vertex(name);
    return it->second;
  };
  auto arc = [&](const std::string& u, const std::string& v) { raw.add_arc(id(u), id(v)); };

  id("rho");
  for (std::size_t i = 1; i + 1 <= n - 1; ++i) id("s" + std::to_string(i));
  arc("rho", "s1");
  for (std::size_t i = 1; i + 1 <= n - 1; ++i) {
    arc("s" + std::to_string(i), "s" + std::to_string(i + 1));
  }
  for (std::size_t i = 1; i <= n - 1; ++i) {
    arc("s" + std::to_string(i), gadget_name("rho", -1, i - 1));
  }
  arc("s" + std::to_string(n - 1), gadget_name("rho", -1, n - 1));

  for (std::size_t v = 0; v < n; ++v) {
    auto r = [v](int i) { return gadget_name("r", i, v); };
    auto w = [v](int i) { return gadget_name("w", i, v); };
    auto m = [v](int i) { return gadget_name("m", i, v); };
    auto l = [v](int i) { return gadget_name("l", i, v); };
    const std::string top = gadget_name("rho", -1, v);
    // principal part
    arc(r(0), r(1));
    for (int i = 1; i <= 6; ++i) {
      arc(w(i), r(i));
      arc(w(i), r(i + 1));
    }
    arc(w(7), r(7));
    arc(w(7), l(5));
    for (int i = 1; i <= 4; ++i) arc(r(i), l(i));
    arc(m(1), r(0));
    arc(m(1), w(4));
    arc(m(2), m(1));
    arc(m(2), w(5));
    arc(m(3), m(2));
    arc(m(3), w(6));
    arc(m(4), m(3));
    arc(m(4), r(0));
    arc(top, m(4));
    arc(top, w(7));
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t v = adj[u][k];  // tau_u(v) = 5 + k
      const auto pos = std::find(adj[v].begin(), adj[v].end(), u) - adj[v].begin();
      arc(gadget_name("r", 5 + static_cast<int>(k), u),
          gadget_name("w", 1 + static_cast<int>(pos), v));
    }
  }
  // Every name is unique and leaf names double as labels.
  return validate(raw);
}

// Arcs of the principal part of the gadget of graph vertex v.
inline std::vector<ArcId> principal_part(const PhyloNetwork& net, std::size_t v) {
  auto r = [v](int i) { return gadget_name("r", i, v); };
  auto w = [v](int i) { return gadget_name("w", i, v); };
  std::vector<ArcId> arcs{net.arc_between(r(0), r(1))};
  for (int i = 1; i <= 6; ++i) {
    arcs.push_back(net.arc_between(w(i), r(i)));
    arcs.push_back(net.arc_between(w(i), r(i + 1)));
  }
  arcs.push_back(net.arc_between(w(7), r(7)));
  arcs.push_back(net.arc_between(w(7), gadget_name("l", 5, v)));
  return arcs;
}

// ---------------------------------------------------------------------------
// Sharp upper bound

// Two-leaf network with k reticulations and orchard distance k - 1. A tree
// path q1 -> ... -> qk hangs beside leaf b; qi -> ri for every i, qk -> r1
// as well, and the reticulations form the chain r1 -> ... -> rk -> a. Only
// r1 can take a horizontal arc: every other ri has a reticulation parent and
// a tree parent whose other child reaches ri. k = 2 is the funnel blob
// N_blob; k = 1 is a reticulated cherry.
inline PhyloNetwork tight_family(std::size_t k) {
  if (k == 0) {
    throw GenerationError(GenerationError::Reason::kBadConfig, "need k >= 1");
  }
  std::vector<std::pair<std::string, std::string>> arcs;
  if (k == 1) {
    arcs = {{"rho", "t0"}, {"t0", "q1"}, {"t0", "r1"}, {"q1", "r1"}, {"q1", "b"},
            {"r1", "a"}};
  } else {
    auto q = [](std::size_t i) { return "q" + std::to_string(i); };
    auto r = [](std::size_t i) { return "r" + std::to_string(i); };
    arcs = {{"rho", "t0"}, {"t0", "b"}, {"t0", q(1)}};
    for (std::size_t i = 1; i < k; ++i) {
      arcs.emplace_back(q(i), q(i + 1));
      arcs.emplace_back(q(i), r(i));
    }
    arcs.emplace_back(q(k), r(1));
    arcs.emplace_back(q(k), r(k));
    for (std::size_t i = 1; i < k; ++i) arcs.emplace_back(r(i), r(i + 1));
    arcs.emplace_back(r(k), "a");
  }
  RawDigraph raw;
  std::map<std::string, std::size_t> ids;
  for (const auto& [u, v] : arcs) {
    for (const auto& name : {u, v}) {
      if (ids.try_emplace(name, raw.names.size()).second) raw.add_vertex(name);
    }
    raw.add_arc(ids[u], ids[v]);
  }
  return validate(raw);
}

}  // namespace orchardist
