#pragma once

// Binary rooted phylogenetic networks: the data model, structural validation,
// clean-up, and the leaf edit operations everything else is built on.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "orchardist/errors.hpp"

namespace orchardist {

enum class VertexId : std::uint32_t {};
enum class ArcId : std::uint32_t {};

constexpr std::size_t index(VertexId v) { return static_cast<std::size_t>(v); }
constexpr std::size_t index(ArcId a) { return static_cast<std::size_t>(a); }
constexpr VertexId vertex_id(std::size_t i) {
  return static_cast<VertexId>(static_cast<std::uint32_t>(i));
}
constexpr ArcId arc_id(std::size_t i) {
  return static_cast<ArcId>(static_cast<std::uint32_t>(i));
}

enum class VertexKind { kRoot, kTree, kReticulation, kLeaf };
enum class ArcKind { kRootArc, kTreeArc, kReticulationArc };

struct Arc {
  VertexId tail;
  VertexId head;
  friend bool operator==(const Arc&, const Arc&) = default;
};

// Unvalidated labelled digraph. Vertex i is named names[i]; the names of
// outdegree-0 vertices are their taxon labels. Internal names are optional
// and carry no meaning beyond I/O.
struct RawDigraph {
  std::vector<std::string> names;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;

  std::size_t add_vertex(std::string name = {}) {
    names.push_back(std::move(name));
    return names.size() - 1;
  }
  void add_arc(std::size_t tail, std::size_t head) {
    arcs.emplace_back(tail, head);
  }
  std::size_t num_vertices() const { return names.size(); }
};

class PhyloNetwork;
PhyloNetwork validate(const RawDigraph& raw);

// Immutable binary phylogenetic network. Vertex and arc ids are dense
// indices fixed at construction; edits return new networks.
class PhyloNetwork {
 public:
  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_arcs() const { return arcs_.size(); }
  std::size_t num_leaves() const { return leaves_.size(); }
  std::size_t num_reticulations() const { return reticulations_.size(); }

  VertexId root() const { return root_; }
  ArcId root_arc() const { return adj_[index(root_)].out[0]; }

  const Arc& arc(ArcId a) const { return arcs_[index(a)]; }
  VertexId tail(ArcId a) const { return arcs_[index(a)].tail; }
  VertexId head(ArcId a) const { return arcs_[index(a)].head; }

  std::span<const ArcId> in_arcs(VertexId v) const {
    const auto& rec = adj_[index(v)];
    return {rec.in.data(), rec.in_count};
  }
  std::span<const ArcId> out_arcs(VertexId v) const {
    const auto& rec = adj_[index(v)];
    return {rec.out.data(), rec.out_count};
  }
  std::size_t indegree(VertexId v) const { return adj_[index(v)].in_count; }
  std::size_t outdegree(VertexId v) const { return adj_[index(v)].out_count; }

  std::vector<VertexId> parents(VertexId v) const {
    std::vector<VertexId> out;
    for (ArcId a : in_arcs(v)) out.push_back(tail(a));
    return out;
  }
  std::vector<VertexId> children(VertexId v) const {
    std::vector<VertexId> out;
    for (ArcId a : out_arcs(v)) out.push_back(head(a));
    return out;
  }

  VertexKind kind(VertexId v) const {
    const auto& rec = adj_[index(v)];
    if (rec.in_count == 0) return VertexKind::kRoot;
    if (rec.out_count == 0) return VertexKind::kLeaf;
    if (rec.in_count == 2) return VertexKind::kReticulation;
    return VertexKind::kTree;
  }
  bool is_leaf(VertexId v) const { return kind(v) == VertexKind::kLeaf; }
  bool is_reticulation(VertexId v) const {
    return kind(v) == VertexKind::kReticulation;
  }
  bool is_tree_vertex(VertexId v) const {
    return kind(v) == VertexKind::kTree;
  }

  ArcKind arc_kind(ArcId a) const {
    if (tail(a) == root_) return ArcKind::kRootArc;
    return is_reticulation(head(a)) ? ArcKind::kReticulationArc
                                    : ArcKind::kTreeArc;
  }
  bool is_reticulation_arc(ArcId a) const {
    return arc_kind(a) == ArcKind::kReticulationArc;
  }

  const std::string& name(VertexId v) const { return names_[index(v)]; }
  // Taxon of a leaf.
  const std::string& label(VertexId leaf) const { return names_[index(leaf)]; }

  std::optional<VertexId> leaf(std::string_view label) const {
    auto it = leaf_by_label_.find(std::string(label));
    if (it == leaf_by_label_.end()) return std::nullopt;
    return it->second;
  }
  // First vertex carrying `name` (internal names need not be unique).
  std::optional<VertexId> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return vertex_id(i);
    }
    return std::nullopt;
  }
  std::optional<ArcId> find_arc(VertexId tail_v, VertexId head_v) const {
    for (ArcId a : out_arcs(tail_v)) {
      if (head(a) == head_v) return a;
    }
    return std::nullopt;
  }
  // Convenience lookup by vertex names; throws EditError if absent.
  ArcId arc_between(std::string_view tail_name,
                    std::string_view head_name) const {
    auto t = find(tail_name);
    auto h = find(head_name);
    if (t && h) {
      if (auto a = find_arc(*t, *h)) return *a;
    }
    throw EditError(EditError::Reason::kUnknownArc,
                    "no arc " + std::string(tail_name) + " -> " +
                        std::string(head_name));
  }

  // Sorted by id.
  const std::vector<VertexId>& leaves() const { return leaves_; }
  const std::vector<VertexId>& reticulations() const { return reticulations_; }
  // Parents before children; ties broken by id.
  const std::vector<VertexId>& topological_order() const { return topo_; }

  bool is_tree() const { return reticulations_.empty(); }

  RawDigraph to_raw() const {
    RawDigraph raw;
    raw.names = names_;
    raw.arcs.reserve(arcs_.size());
    for (const Arc& a : arcs_) raw.arcs.emplace_back(index(a.tail), index(a.head));
    return raw;
  }

 private:
  struct Adjacency {
    std::array<ArcId, 2> in{};
    std::array<ArcId, 2> out{};
    std::uint8_t in_count = 0;
    std::uint8_t out_count = 0;
  };

  friend PhyloNetwork validate(const RawDigraph& raw);
  PhyloNetwork() = default;

  std::vector<std::string> names_;
  std::vector<Arc> arcs_;
  std::vector<Adjacency> adj_;
  VertexId root_{};
  std::vector<VertexId> topo_;
  std::vector<VertexId> leaves_;
  std::vector<VertexId> reticulations_;
  std::unordered_map<std::string, VertexId> leaf_by_label_;
};

// Checks every structural invariant of a binary network and returns the
// network, or throws ValidationError naming the first violation found.
// Checks run in the order: emptiness, id range, parallel arcs, acyclicity,
// root uniqueness, degrees, leaf labels.
inline PhyloNetwork validate(const RawDigraph& raw) {
  using Reason = ValidationError::Reason;
  const std::size_t n = raw.names.size();
  if (n == 0) throw ValidationError(Reason::kEmpty, "network has no vertices");

  std::vector<std::vector<std::size_t>> out(n), in(n);
  for (std::size_t i = 0; i < raw.arcs.size(); ++i) {
    auto [u, v] = raw.arcs[i];
    if (u >= n || v >= n) {
      throw ValidationError(Reason::kVertexOutOfRange,
                            "arc " + std::to_string(i) +
                                " references an unknown vertex");
    }
    if (u == v) {
      throw ValidationError(Reason::kNotADag,
                            "self-loop at vertex '" + raw.names[u] + "'", u);
    }
    out[u].push_back(i);
    in[v].push_back(i);
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < out[u].size(); ++i) {
      for (std::size_t j = i + 1; j < out[u].size(); ++j) {
        if (raw.arcs[out[u][i]].second == raw.arcs[out[u][j]].second) {
          throw ValidationError(Reason::kParallelArcs,
                                "parallel arcs leaving vertex '" +
                                    raw.names[u] + "'",
                                u);
        }
      }
    }
  }

  // Kahn's algorithm with smallest-id-first tie breaking.
  std::vector<std::size_t> remaining(n);
  std::priority_queue<std::size_t, std::vector<std::size_t>,
                      std::greater<std::size_t>>
      ready;
  for (std::size_t v = 0; v < n; ++v) {
    remaining[v] = in[v].size();
    if (remaining[v] == 0) ready.push(v);
  }
  std::vector<VertexId> topo;
  topo.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    topo.push_back(vertex_id(v));
    for (std::size_t a : out[v]) {
      if (--remaining[raw.arcs[a].second] == 0) ready.push(raw.arcs[a].second);
    }
  }
  if (topo.size() != n) {
    throw ValidationError(Reason::kNotADag, "digraph contains a directed cycle");
  }

  std::optional<std::size_t> root;
  for (std::size_t v = 0; v < n; ++v) {
    if (!in[v].empty()) continue;
    if (root) {
      throw ValidationError(Reason::kMultipleRoots,
                            "vertices '" + raw.names[*root] + "' and '" +
                                raw.names[v] + "' both have indegree 0",
                            v);
    }
    root = v;
  }

  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t di = in[v].size(), dout = out[v].size();
    const bool ok = (di == 0 && dout == 1) || (di == 1 && dout == 2) ||
                    (di == 2 && dout == 1) || (di == 1 && dout == 0);
    if (!ok) {
      throw ValidationError(Reason::kBadDegree,
                            "vertex '" + raw.names[v] + "' has indegree " +
                                std::to_string(di) + " and outdegree " +
                                std::to_string(dout),
                            v);
    }
  }

  PhyloNetwork net;
  net.names_ = raw.names;
  net.adj_.resize(n);
  net.arcs_.reserve(raw.arcs.size());
  for (std::size_t i = 0; i < raw.arcs.size(); ++i) {
    auto [u, v] = raw.arcs[i];
    net.arcs_.push_back({vertex_id(u), vertex_id(v)});
    auto& ru = net.adj_[u];
    ru.out[ru.out_count++] = arc_id(i);
    auto& rv = net.adj_[v];
    rv.in[rv.in_count++] = arc_id(i);
  }
  net.root_ = vertex_id(*root);
  net.topo_ = std::move(topo);
  for (std::size_t v = 0; v < n; ++v) {
    if (out[v].empty()) {
      if (raw.names[v].empty()) {
        throw ValidationError(Reason::kMissingLabel,
                              "leaf " + std::to_string(v) + " has no label", v);
      }
      auto [it, inserted] = net.leaf_by_label_.emplace(raw.names[v], vertex_id(v));
      if (!inserted) {
        throw ValidationError(Reason::kDuplicateLabel,
                              "label '" + raw.names[v] + "' used twice", v);
      }
      net.leaves_.push_back(vertex_id(v));
    } else if (in[v].size() == 2) {
      net.reticulations_.push_back(vertex_id(v));
    }
  }
  return net;
}

namespace detail {

// Applies clean-up reductions one at a time. `pick` chooses which of the
// currently applicable reductions to apply next.
template <typename Pick>
RawDigraph clean_up_with(const RawDigraph& g, Pick&& pick) {
  const std::size_t n = g.names.size();
  std::vector<std::pair<std::size_t, std::size_t>> arcs = g.arcs;
  std::vector<bool> arc_alive(arcs.size(), true);
  std::vector<bool> vertex_alive(n, true);
  std::vector<std::vector<std::size_t>> out(n), in(n);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    out[arcs[i].first].push_back(i);
    in[arcs[i].second].push_back(i);
  }
  auto erase = [](std::vector<std::size_t>& list, std::size_t a) {
    list.erase(std::find(list.begin(), list.end(), a));
  };

  // A reduction is either "suppress vertex v" or "drop duplicate arc a".
  struct Reduction {
    bool suppress;
    std::size_t target;
  };
  std::vector<Reduction> applicable;
  while (true) {
    applicable.clear();
    for (std::size_t v = 0; v < n; ++v) {
      if (!vertex_alive[v]) continue;
      if (in[v].size() == 1 && out[v].size() == 1) applicable.push_back({true, v});
      for (std::size_t i = 0; i < out[v].size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (arcs[out[v][i]].second == arcs[out[v][j]].second) {
            applicable.push_back({false, std::max(out[v][i], out[v][j])});
            break;
          }
        }
      }
    }
    if (applicable.empty()) break;
    const Reduction r = applicable[pick(applicable.size())];
    if (r.suppress) {
      const std::size_t v = r.target;
      const std::size_t a = in[v][0], b = out[v][0];
      const std::size_t w = arcs[b].second;
      arcs[a].second = w;
      arc_alive[b] = false;
      std::replace(in[w].begin(), in[w].end(), b, a);
      in[v].clear();
      out[v].clear();
      vertex_alive[v] = false;
    } else {
      const std::size_t a = r.target;
      arc_alive[a] = false;
      erase(out[arcs[a].first], a);
      erase(in[arcs[a].second], a);
    }
  }

  RawDigraph result;
  std::vector<std::size_t> renumber(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (vertex_alive[v]) renumber[v] = result.add_vertex(g.names[v]);
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (arc_alive[i]) {
      result.add_arc(renumber[arcs[i].first], renumber[arcs[i].second]);
    }
  }
  return result;
}

}  // namespace detail

// Suppresses indegree-1/outdegree-1 vertices and merges parallel arcs until
// neither applies. Surviving vertices and arcs keep their relative order; a
// suppressed vertex's in-arc takes over its out-arc. The result is not
// validated.
inline RawDigraph clean_up(const RawDigraph& g) {
  return detail::clean_up_with(g, [](std::size_t) { return std::size_t{0}; });
}

// Same reductions applied in an order drawn from `rng`.
template <typename Rng>
RawDigraph clean_up_shuffled(const RawDigraph& g, Rng& rng) {
  return detail::clean_up_with(g, [&rng](std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng);
  });
}

// N + (arc, label). The subdivided arc keeps its id as the upper half
// (tail -> new vertex); the lower half and the pendant arc get the next two
// arc ids, and the new tree vertex and leaf the next two vertex ids.
inline PhyloNetwork add_leaf(const PhyloNetwork& net, ArcId arc,
                             const std::string& label) {
  if (index(arc) >= net.num_arcs()) {
    throw EditError(EditError::Reason::kUnknownArc,
                    "arc " + std::to_string(index(arc)) + " does not exist");
  }
  if (label.empty() || net.leaf(label)) {
    throw EditError(EditError::Reason::kLabelClash,
                    "label '" + label + "' is empty or already in use");
  }
  RawDigraph raw = net.to_raw();
  const std::size_t w = raw.add_vertex();
  const std::size_t x = raw.add_vertex(label);
  const std::size_t head = raw.arcs[index(arc)].second;
  raw.arcs[index(arc)].second = w;
  raw.add_arc(w, head);
  raw.add_arc(w, x);
  return validate(raw);
}

struct LeafAddition {
  ArcId arc;
  std::string label;
  friend bool operator==(const LeafAddition&, const LeafAddition&) = default;
};

// Applies several additions; arc ids refer to the input network and stay
// valid because add_leaf keeps the subdivided arc's id.
inline PhyloNetwork add_leaves(const PhyloNetwork& net,
                               std::span<const LeafAddition> additions) {
  PhyloNetwork result = net;
  for (const auto& add : additions) result = add_leaf(result, add.arc, add.label);
  return result;
}

inline PhyloNetwork delete_leaf(const PhyloNetwork& net, VertexId leaf) {
  if (index(leaf) >= net.num_vertices() || !net.is_leaf(leaf)) {
    throw EditError(EditError::Reason::kNotALeaf,
                    "vertex " + std::to_string(index(leaf)) + " is not a leaf");
  }
  RawDigraph raw = net.to_raw();
  RawDigraph pruned;
  std::vector<std::size_t> renumber(raw.num_vertices());
  for (std::size_t v = 0; v < raw.num_vertices(); ++v) {
    if (v != index(leaf)) renumber[v] = pruned.add_vertex(raw.names[v]);
  }
  for (auto [u, v] : raw.arcs) {
    if (v != index(leaf)) pruned.add_arc(renumber[u], renumber[v]);
  }
  return validate(clean_up(pruned));
}

inline PhyloNetwork delete_leaf(const PhyloNetwork& net,
                                std::string_view label) {
  auto v = net.leaf(label);
  if (!v) {
    throw EditError(EditError::Reason::kNotALeaf,
                    "no leaf labelled '" + std::string(label) + "'");
  }
  return delete_leaf(net, *v);
}

inline PhyloNetwork delete_reticulation_arc(const PhyloNetwork& net, ArcId arc) {
  if (index(arc) >= net.num_arcs()) {
    throw EditError(EditError::Reason::kUnknownArc,
                    "arc " + std::to_string(index(arc)) + " does not exist");
  }
  if (!net.is_reticulation_arc(arc)) {
    throw EditError(EditError::Reason::kNotAReticulationArc,
                    "arc " + std::to_string(index(arc)) +
                        " is not a reticulation arc");
  }
  RawDigraph raw = net.to_raw();
  raw.arcs.erase(raw.arcs.begin() + static_cast<std::ptrdiff_t>(index(arc)));
  return validate(clean_up(raw));
}

namespace detail {

// Colour refinement over both networks at once, so colours are comparable.
inline std::pair<std::vector<int>, std::vector<int>> refine_colours(
    const PhyloNetwork& a, const PhyloNetwork& b) {
  using Signature = std::tuple<int, std::vector<int>, std::vector<int>>;
  std::array<const PhyloNetwork*, 2> nets{&a, &b};
  std::array<std::vector<int>, 2> colour;
  {
    std::map<std::pair<int, std::string>, int> initial;
    for (int k = 0; k < 2; ++k) {
      const auto& net = *nets[k];
      colour[k].resize(net.num_vertices());
      for (std::size_t i = 0; i < net.num_vertices(); ++i) {
        VertexId v = vertex_id(i);
        std::pair<int, std::string> key{static_cast<int>(net.kind(v)),
                                        net.is_leaf(v) ? net.label(v) : ""};
        auto it = initial.try_emplace(key, static_cast<int>(initial.size())).first;
        colour[k][i] = it->second;
      }
    }
  }
  std::size_t classes = 0;
  while (true) {
    std::map<Signature, int> palette;
    std::array<std::vector<int>, 2> next;
    for (int k = 0; k < 2; ++k) {
      const auto& net = *nets[k];
      next[k].resize(net.num_vertices());
      for (std::size_t i = 0; i < net.num_vertices(); ++i) {
        VertexId v = vertex_id(i);
        std::vector<int> up, down;
        for (VertexId p : net.parents(v)) up.push_back(colour[k][index(p)]);
        for (VertexId c : net.children(v)) down.push_back(colour[k][index(c)]);
        std::sort(up.begin(), up.end());
        std::sort(down.begin(), down.end());
        Signature sig{colour[k][i], std::move(up), std::move(down)};
        auto it = palette.try_emplace(std::move(sig), static_cast<int>(palette.size())).first;
        next[k][i] = it->second;
      }
    }
    colour = std::move(next);
    if (palette.size() == classes) break;
    classes = palette.size();
  }
  return {std::move(colour[0]), std::move(colour[1])};
}

}  // namespace detail

// True iff some bijection of vertices preserves arcs and leaf labels.
// Colour refinement followed by backtracking; fine at test scale.
inline bool isomorphic(const PhyloNetwork& a, const PhyloNetwork& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_arcs() != b.num_arcs() ||
      a.num_leaves() != b.num_leaves() ||
      a.num_reticulations() != b.num_reticulations()) {
    return false;
  }
  auto [ca, cb] = detail::refine_colours(a, b);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::map<int, std::vector<VertexId>> by_colour;
  for (std::size_t i = 0; i < b.num_vertices(); ++i) {
    by_colour[cb[i]].push_back(vertex_id(i));
  }
  const auto& order = a.topological_order();
  std::vector<std::optional<VertexId>> image(a.num_vertices());
  std::vector<bool> taken(b.num_vertices(), false);

  auto consistent = [&](VertexId x, VertexId y) {
    std::vector<std::size_t> mapped, actual;
    for (VertexId p : a.parents(x)) mapped.push_back(index(*image[index(p)]));
    for (VertexId p : b.parents(y)) actual.push_back(index(p));
    std::sort(mapped.begin(), mapped.end());
    std::sort(actual.begin(), actual.end());
    return mapped == actual;
  };
  auto extend = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == order.size()) return true;
    VertexId x = order[pos];
    for (VertexId y : by_colour[ca[index(x)]]) {
      if (taken[index(y)] || !consistent(x, y)) continue;
      image[index(x)] = y;
      taken[index(y)] = true;
      if (self(self, pos + 1)) return true;
      taken[index(y)] = false;
      image[index(x)].reset();
    }
    return false;
  };
  return extend(extend, 0);
}

}  // namespace orchardist
