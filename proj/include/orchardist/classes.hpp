#pragma once

// Membership in the tree-child, orchard and tree-based classes, and the two
// leaf-addition distances that are computable in linear time.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "orchardist/core.hpp"

namespace orchardist {

// ---------------------------------------------------------------------------
// Tree-child: omnians.

// Internal vertices all of whose children are reticulations, by id.
inline std::vector<VertexId> omnians(const PhyloNetwork& net) {
  std::vector<VertexId> result;
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    VertexId v = vertex_id(i);
    const VertexKind k = net.kind(v);
    if (k != VertexKind::kTree && k != VertexKind::kReticulation) continue;
    bool all = true;
    for (ArcId a : net.out_arcs(v)) all = all && net.is_reticulation(net.head(a));
    if (all) result.push_back(v);
  }
  return result;
}

inline std::size_t l_tc(const PhyloNetwork& net) { return omnians(net).size(); }

inline bool is_tree_child(const PhyloNetwork& net) { return l_tc(net) == 0; }

// The lowest-id out-arc of every omnian; a leaf on each makes the network
// tree-child.
inline std::vector<ArcId> tc_additions(const PhyloNetwork& net) {
  std::vector<ArcId> arcs;
  for (VertexId v : omnians(net)) {
    auto out = net.out_arcs(v);
    arcs.push_back(*std::min_element(out.begin(), out.end()));
  }
  return arcs;
}

// ---------------------------------------------------------------------------
// Tree-based: maximal zig-zag trails.

enum class TrailKind { kCrown, kMFence, kNFence, kWFence };

inline const char* to_string(TrailKind kind) {
  switch (kind) {
    case TrailKind::kCrown: return "crown";
    case TrailKind::kMFence: return "M-fence";
    case TrailKind::kNFence: return "N-fence";
    case TrailKind::kWFence: return "W-fence";
  }
  return "?";
}

struct ZigZagTrail {
  TrailKind kind;
  // Consecutive arcs share a tail or a head. N-fences start at the arc whose
  // tail is a reticulation; crowns start at their lowest arc id and move to
  // its tail sibling first; M- and W-fences start at the end with the lower
  // arc id.
  std::vector<ArcId> arcs;
};

struct ZigZagDecomposition {
  std::vector<ZigZagTrail> trails;

  std::size_t count(TrailKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        trails.begin(), trails.end(),
        [kind](const ZigZagTrail& t) { return t.kind == kind; }));
  }
};

namespace detail {

// The sibling out-arc of a's tail, if that tail is a tree vertex.
inline std::optional<ArcId> tail_partner(const PhyloNetwork& net, ArcId a) {
  VertexId t = net.tail(a);
  if (!net.is_tree_vertex(t)) return std::nullopt;
  auto out = net.out_arcs(t);
  return out[0] == a ? out[1] : out[0];
}

// The other in-arc of a's head, if that head is a reticulation.
inline std::optional<ArcId> head_partner(const PhyloNetwork& net, ArcId a) {
  VertexId h = net.head(a);
  if (!net.is_reticulation(h)) return std::nullopt;
  auto in = net.in_arcs(h);
  return in[0] == a ? in[1] : in[0];
}

}  // namespace detail

// Every arc has at most one tail partner and one head partner, so the
// partner relation splits the non-root arcs into paths and cycles; each is a
// maximal zig-zag trail. Linear time.
inline ZigZagDecomposition zigzag_decompose(const PhyloNetwork& net) {
  const std::size_t m = net.num_arcs();
  const ArcId root_arc = net.root_arc();
  std::vector<std::array<std::optional<ArcId>, 2>> partners(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (arc_id(i) == root_arc) continue;
    partners[i] = {detail::tail_partner(net, arc_id(i)),
                   detail::head_partner(net, arc_id(i))};
  }
  auto degree = [&](ArcId a) {
    return static_cast<int>(partners[index(a)][0].has_value()) +
           static_cast<int>(partners[index(a)][1].has_value());
  };
  // Walks from `start` leaving through partner slot `slot` first, then
  // alternating slots, until the trail ends or closes.
  auto walk = [&](ArcId start, int slot) {
    std::vector<ArcId> trail{start};
    ArcId current = start;
    while (auto next = partners[index(current)][slot]) {
      if (*next == start) break;
      trail.push_back(*next);
      current = *next;
      slot = 1 - slot;
    }
    return trail;
  };

  ZigZagDecomposition result;
  std::vector<bool> seen(m, false);
  seen[index(root_arc)] = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    ArcId a = arc_id(i);
    // Find one end of the component, or detect a cycle.
    ArcId end = a;
    int exit_slot = partners[i][0] ? 0 : 1;
    bool cycle = false;
    if (degree(a) == 2) {
      ArcId prev = a;
      ArcId cur = *partners[i][0];
      int slot = 1;  // we arrived at cur through its tail slot
      while (true) {
        if (cur == a) {
          cycle = true;
          break;
        }
        auto next = partners[index(cur)][slot];
        if (!next) break;
        prev = cur;
        cur = *next;
        slot = 1 - slot;
      }
      (void)prev;
      if (!cycle) {
        end = cur;
        exit_slot = partners[index(cur)][0] ? 0 : 1;
      }
    }

    ZigZagTrail trail;
    if (cycle) {
      // The component of `a` is a cycle; `a` has the smallest id in it since
      // ids are scanned in increasing order.
      trail.kind = TrailKind::kCrown;
      trail.arcs = walk(a, 0);
    } else {
      std::vector<ArcId> arcs = degree(end) == 0 ? std::vector<ArcId>{end}
                                                 : walk(end, exit_slot);
      const ArcId first = arcs.front(), last = arcs.back();
      const bool first_ret = net.is_reticulation(net.tail(first));
      const bool last_ret = net.is_reticulation(net.tail(last));
      if (first_ret && last_ret && arcs.size() > 1) {
        trail.kind = TrailKind::kWFence;
      } else if (first_ret || last_ret) {
        trail.kind = TrailKind::kNFence;
        if (!first_ret) std::reverse(arcs.begin(), arcs.end());
      } else {
        trail.kind = TrailKind::kMFence;
      }
      if (trail.kind != TrailKind::kNFence && index(last) < index(first)) {
        std::reverse(arcs.begin(), arcs.end());
      }
      trail.arcs = std::move(arcs);
    }
    for (ArcId x : trail.arcs) seen[index(x)] = true;
    result.trails.push_back(std::move(trail));
  }
  return result;
}

inline std::size_t l_tb(const PhyloNetwork& net) {
  return zigzag_decompose(net).count(TrailKind::kWFence);
}

inline bool is_tree_based(const PhyloNetwork& net) { return l_tb(net) == 0; }

// The first arc of every W-fence.
inline std::vector<ArcId> tb_additions(const PhyloNetwork& net) {
  std::vector<ArcId> arcs;
  for (const auto& trail : zigzag_decompose(net).trails) {
    if (trail.kind == TrailKind::kWFence) arcs.push_back(trail.arcs.front());
  }
  return arcs;
}

// ---------------------------------------------------------------------------
// Orchard: cherry picking.

// A (reticulated) cherry (x, y). Reducing a cherry deletes leaf x; reducing
// a reticulated cherry deletes the arc from y's parent to x's parent.
struct ReducedPair {
  std::string x;
  std::string y;
  bool reticulated = false;
  friend bool operator==(const ReducedPair&, const ReducedPair&) = default;
};

namespace detail {

// Mutable copy of a network supporting cherry-picking reductions and the
// clean-up they trigger, with provenance for every surviving link: the
// original arc that enters the link's head, and whether the link passes
// through a leaf added during the run.
class CherryPicker {
 public:
  static constexpr int kNone = -1;

  struct InLink {
    int parent = kNone;
    ArcId orig{};
    bool via_added = false;
  };

  explicit CherryPicker(const PhyloNetwork& net)
      : nodes_(net.num_vertices()), root_(static_cast<int>(index(net.root()))) {
    for (std::size_t i = 0; i < net.num_arcs(); ++i) {
      const Arc& a = net.arc(arc_id(i));
      link(static_cast<int>(index(a.tail)), static_cast<int>(index(a.head)),
           arc_id(i), false);
    }
    for (VertexId v : net.leaves()) {
      nodes_[index(v)].label = net.label(v);
      leaves_.push_back(static_cast<int>(index(v)));
    }
    sort_leaves();
    removed_in_.assign(net.num_vertices(), std::nullopt);
  }

  std::size_t live_leaves() const {
    return static_cast<std::size_t>(std::count_if(
        leaves_.begin(), leaves_.end(), [&](int v) { return nodes_[v].alive; }));
  }
  // The trivial network: one leaf and nothing left above it but the root.
  // Reticulations stacked over a lone leaf are not cleaned away.
  bool single_leaf() const {
    if (live_leaves() != 1) return false;
    return std::none_of(nodes_.begin(), nodes_.end(),
                        [](const Node& n) { return n.alive && n.in_count == 2; });
  }

  struct Found {
    ReducedPair pair;
    int x = kNone;
    int px = kNone;  // for reticulated cherries: x's parent
    int py = kNone;  // for reticulated cherries: y's parent
  };

  // Scans leaves in label order; the first leaf in a cherry or reticulated
  // cherry decides the pair.
  std::optional<Found> find() const {
    for (int x : leaves_) {
      const Node& nx = nodes_[x];
      if (!nx.alive) continue;
      const int p = nx.in[0].parent;
      const Node& np = nodes_[p];
      if (np.in_count == 1 && np.out_count == 2) {
        const int other = np.out[0] == x ? np.out[1] : np.out[0];
        if (is_leaf(other)) {
          return Found{{nx.label, nodes_[other].label, false}, x};
        }
      } else if (np.in_count == 2) {
        for (int k = 0; k < 2; ++k) {
          const int q = np.in[k].parent;
          const Node& nq = nodes_[q];
          if (nq.out_count != 2) continue;
          const int other = nq.out[0] == p ? nq.out[1] : nq.out[0];
          if (is_leaf(other)) {
            return Found{{nx.label, nodes_[other].label, true}, x, p, q};
          }
        }
      }
    }
    return std::nullopt;
  }

  void reduce(const Found& f) {
    if (!f.pair.reticulated) {
      const int p = nodes_[f.x].in[0].parent;
      unlink(p, f.x);
      nodes_[f.x].alive = false;
      settle({p});
    } else {
      const InLink removed = in_link(f.py, f.px);
      record_removal(f.px, removed);
      unlink(f.py, f.px);
      settle({f.py, f.px});
    }
  }

  // Runs reductions to a fixpoint and returns the pairs reduced.
  std::vector<ReducedPair> reduce_all() {
    std::vector<ReducedPair> sequence;
    while (auto f = find()) {
      sequence.push_back(f->pair);
      reduce(*f);
    }
    return sequence;
  }

  // Live reticulations with no live reticulation below them.
  std::vector<int> lowest_reticulations() const {
    std::vector<int> result;
    std::vector<int> state(nodes_.size(), 0);  // 1 = has reticulation below
    std::vector<int> order = live_topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      const Node& n = nodes_[v];
      bool below = false;
      for (int k = 0; k < n.out_count; ++k) {
        const int c = n.out[k];
        below = below || state[c] != 0 || nodes_[c].in_count == 2;
      }
      state[v] = below ? 1 : 0;
      if (n.in_count == 2 && !below) result.push_back(v);
    }
    std::sort(result.begin(), result.end());
    return result;
  }

  // Subdivides the link parent -> child with a new tree vertex carrying a
  // new leaf; the lower half of the link is marked as passing through it.
  void add_leaf(int parent, int child, std::string label) {
    const InLink old = in_link(parent, child);
    unlink(parent, child);
    const int w = new_node();
    const int z = new_node();
    link(parent, w, old.orig, old.via_added);
    link(w, child, old.orig, true);
    link(w, z, old.orig, old.via_added);
    nodes_[z].label = std::move(label);
    leaves_.push_back(z);
    sort_leaves();
  }

  const InLink& in_link(int parent, int child) const {
    const Node& n = nodes_[child];
    return n.in[0].parent == parent ? n.in[0] : n.in[1];
  }

  // For each original reticulation that lost an in-link: the link removed.
  const std::vector<std::optional<InLink>>& removed_in_links() const {
    return removed_in_;
  }
  bool alive(int v) const { return nodes_[v].alive; }
  int in_link_parent(int v, int k) const { return nodes_[v].in[k].parent; }
  int in_count(int v) const { return nodes_[v].in_count; }

 private:
  struct Node {
    std::array<InLink, 2> in{};
    std::array<int, 2> out{kNone, kNone};
    int in_count = 0;
    int out_count = 0;
    bool alive = true;
    std::string label;
  };

  bool is_leaf(int v) const {
    return nodes_[v].out_count == 0 && nodes_[v].in_count == 1;
  }

  int new_node() {
    nodes_.emplace_back();
    removed_in_.emplace_back();
    return static_cast<int>(nodes_.size()) - 1;
  }

  void sort_leaves() {
    std::sort(leaves_.begin(), leaves_.end(), [&](int a, int b) {
      return nodes_[a].label < nodes_[b].label;
    });
  }

  void link(int u, int v, ArcId orig, bool via_added) {
    Node& nu = nodes_[u];
    nu.out[nu.out_count++] = v;
    Node& nv = nodes_[v];
    nv.in[nv.in_count++] = InLink{u, orig, via_added};
  }

  void unlink(int u, int v) {
    Node& nu = nodes_[u];
    if (nu.out[0] == v) nu.out[0] = nu.out[1];
    nu.out[1] = kNone;
    --nu.out_count;
    Node& nv = nodes_[v];
    if (nv.in[0].parent == u) nv.in[0] = nv.in[1];
    nv.in[1] = InLink{};
    --nv.in_count;
  }

  void record_removal(int v, const InLink& link_removed) {
    if (static_cast<std::size_t>(v) < removed_in_.size() && !removed_in_[v]) {
      removed_in_[v] = link_removed;
    }
  }

  // Suppresses indegree-1/outdegree-1 vertices, merging parallel links that
  // this creates, starting from the given vertices.
  void settle(std::vector<int> work) {
    while (!work.empty()) {
      const int v = work.back();
      work.pop_back();
      Node& n = nodes_[v];
      if (!n.alive || v == root_ || n.in_count != 1 || n.out_count != 1) continue;
      const int u = n.in[0].parent;
      const int w = n.out[0];
      const InLink lower = in_link(v, w);
      unlink(u, v);
      unlink(v, w);
      n.alive = false;
      Node& nu = nodes_[u];
      const bool parallel = nu.out_count > 0 &&
                            (nu.out[0] == w || (nu.out_count > 1 && nu.out[1] == w));
      if (parallel) {
        record_removal(w, lower);
        work.push_back(u);
        work.push_back(w);
      } else {
        link(u, w, lower.orig, lower.via_added);
      }
    }
  }

  std::vector<int> live_topological_order() const {
    std::vector<int> order;
    std::vector<int> remaining(nodes_.size(), 0);
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      if (nodes_[v].alive) remaining[v] = nodes_[v].in_count;
    }
    std::vector<int> stack{root_};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      const Node& n = nodes_[v];
      for (int k = 0; k < n.out_count; ++k) {
        if (--remaining[n.out[k]] == 0) stack.push_back(n.out[k]);
      }
    }
    return order;
  }

  std::vector<Node> nodes_;
  std::vector<int> leaves_;
  int root_;
  std::vector<std::optional<InLink>> removed_in_;
};

}  // namespace detail

// The first reducible pair in leaf-label order, if any.
inline std::optional<ReducedPair> find_reducible_pair(const PhyloNetwork& net) {
  detail::CherryPicker picker(net);
  auto found = picker.find();
  if (!found) return std::nullopt;
  return found->pair;
}

// Reduces the given pair; throws EditError if (x, y) is neither a cherry
// nor a reticulated cherry of the network.
inline PhyloNetwork reduce_pair(const PhyloNetwork& net, const ReducedPair& pair) {
  auto x = net.leaf(pair.x);
  auto y = net.leaf(pair.y);
  if (!x || !y || *x == *y) {
    throw EditError(EditError::Reason::kNotALeaf,
                    "(" + pair.x + ", " + pair.y + ") are not two leaves");
  }
  const VertexId px = net.parents(*x)[0];
  const VertexId py = net.parents(*y)[0];
  if (!pair.reticulated) {
    if (px != py) {
      throw EditError(EditError::Reason::kNotALeaf,
                      "(" + pair.x + ", " + pair.y + ") is not a cherry");
    }
    return delete_leaf(net, *x);
  }
  auto middle = net.find_arc(py, px);
  if (!net.is_reticulation(px) || !middle) {
    throw EditError(EditError::Reason::kNotAReticulationArc,
                    "(" + pair.x + ", " + pair.y +
                        ") is not a reticulated cherry");
  }
  return delete_reticulation_arc(net, *middle);
}

// Finds and reduces one (reticulated) cherry, preferring the leaf that comes
// first in label order. Returns nullopt at a fixpoint.
inline std::optional<std::pair<PhyloNetwork, ReducedPair>> reduce_once(
    const PhyloNetwork& net) {
  auto pair = find_reducible_pair(net);
  if (!pair) return std::nullopt;
  return std::make_pair(reduce_pair(net, *pair), *pair);
}

struct OrchardCheck {
  bool orchard = false;
  // Pairs reduced until the fixpoint; when `orchard`, applying them leaves a
  // single leaf.
  std::vector<ReducedPair> sequence;
};

inline OrchardCheck is_orchard(const PhyloNetwork& net) {
  detail::CherryPicker picker(net);
  OrchardCheck check;
  check.sequence = picker.reduce_all();
  check.orchard = picker.single_leaf();
  return check;
}

// ---------------------------------------------------------------------------
// Cherry covers.

struct CherryShape {
  enum class Kind { kCherry, kReticulatedCherry };
  Kind kind;
  // Cherry: the two out-arcs of `internal[0]`, lower id first.
  // Reticulated cherry: {p_x -> x, p_y -> p_x (middle), p_y -> y}.
  std::vector<ArcId> arcs;
  // Cherry: {p}; reticulated cherry: {p_x, p_y}.
  std::vector<VertexId> internal;
  std::array<VertexId, 2> endpoints{};

  ArcId middle() const { return arcs[1]; }
};

struct CherryCover {
  std::vector<CherryShape> shapes;
  // aux[b] lists the shapes c with an internal vertex that is an endpoint of
  // shape b, ascending.
  std::vector<std::vector<std::size_t>> aux;
};

// Reticulation -> the in-arc used as middle arc of its reticulated cherry
// shape.
using MiddleChoice = std::map<VertexId, ArcId>;

inline CherryCover build_cherry_cover(const PhyloNetwork& net,
                                      const MiddleChoice& choice) {
  using Reason = CoverError::Reason;
  if (!is_tree_based(net)) {
    throw CoverError(Reason::kNotTreeBased, "network has a W-fence");
  }
  CherryCover cover;
  std::vector<int> middles_from(net.num_vertices(), 0);
  for (VertexId r : net.reticulations()) {
    auto it = choice.find(r);
    if (it == choice.end() || net.head(it->second) != r) {
      throw CoverError(Reason::kInfeasibleChoice,
                       "no valid middle arc chosen for reticulation " +
                           std::to_string(index(r)));
    }
    const ArcId middle = it->second;
    const VertexId py = net.tail(middle);
    if (!net.is_tree_vertex(py)) {
      throw CoverError(Reason::kInfeasibleChoice,
                       "middle arc of reticulation " + std::to_string(index(r)) +
                           " leaves a non-tree vertex");
    }
    if (++middles_from[index(py)] > 1) {
      throw CoverError(Reason::kInfeasibleChoice,
                       "both out-arcs of tree vertex " +
                           std::to_string(index(py)) + " chosen as middles");
    }
    const ArcId sibling = *detail::tail_partner(net, middle);
    const ArcId down = net.out_arcs(r)[0];
    const VertexId x = net.head(down), y = net.head(sibling);
    if (x == y) {
      throw CoverError(Reason::kInfeasibleChoice,
                       "middle arc of reticulation " + std::to_string(index(r)) +
                           " yields a degenerate shape");
    }
    cover.shapes.push_back({CherryShape::Kind::kReticulatedCherry,
                            {down, middle, sibling},
                            {r, py},
                            {x, y}});
  }
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    VertexId p = vertex_id(i);
    if (!net.is_tree_vertex(p) || middles_from[i] != 0) continue;
    auto out = net.out_arcs(p);
    ArcId a = std::min(out[0], out[1]), b = std::max(out[0], out[1]);
    cover.shapes.push_back(
        {CherryShape::Kind::kCherry, {a, b}, {p}, {net.head(a), net.head(b)}});
  }

  std::vector<std::optional<std::size_t>> owner(net.num_vertices());
  for (std::size_t s = 0; s < cover.shapes.size(); ++s) {
    for (VertexId v : cover.shapes[s].internal) owner[index(v)] = s;
  }
  cover.aux.resize(cover.shapes.size());
  for (std::size_t s = 0; s < cover.shapes.size(); ++s) {
    std::set<std::size_t> targets;
    for (VertexId e : cover.shapes[s].endpoints) {
      if (owner[index(e)]) targets.insert(*owner[index(e)]);
    }
    cover.aux[s].assign(targets.begin(), targets.end());
  }
  return cover;
}

// True iff every non-root arc lies in exactly one shape.
inline bool covers_exactly_once(const PhyloNetwork& net, const CherryCover& cover) {
  std::vector<int> hits(net.num_arcs(), 0);
  for (const auto& shape : cover.shapes) {
    for (ArcId a : shape.arcs) ++hits[index(a)];
  }
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    const int expected = arc_id(i) == net.root_arc() ? 0 : 1;
    if (hits[i] != expected) return false;
  }
  return true;
}

inline bool aux_graph_is_acyclic(const CherryCover& cover) {
  const std::size_t n = cover.aux.size();
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& targets : cover.aux) {
    for (std::size_t t : targets) ++indeg[t];
  }
  std::vector<std::size_t> ready;
  for (std::size_t s = 0; s < n; ++s) {
    if (indeg[s] == 0) ready.push_back(s);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t s = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t t : cover.aux[s]) {
      if (--indeg[t] == 0) ready.push_back(t);
    }
  }
  return seen == n;
}

// The reticulated cherry shapes that every cherry cover must contain: for
// each N-fence (a_1, ..., a_k) with k >= 3 and each j, the shape made of
// the out-arc of head(a_{2j-1}) and the arcs a_{2j} (middle), a_{2j+1}.
inline std::vector<std::array<ArcId, 3>> forced_reticulated_shapes(
    const PhyloNetwork& net) {
  std::vector<std::array<ArcId, 3>> shapes;
  for (const auto& trail : zigzag_decompose(net).trails) {
    if (trail.kind != TrailKind::kNFence || trail.arcs.size() < 3) continue;
    for (std::size_t j = 1; 2 * j < trail.arcs.size(); ++j) {
      const ArcId down = net.out_arcs(net.head(trail.arcs[2 * j - 2]))[0];
      shapes.push_back({down, trail.arcs[2 * j - 1], trail.arcs[2 * j]});
    }
  }
  return shapes;
}

// A feasible middle choice derived from the zig-zag decomposition. N-fences
// are forced; M-fences take every second arc from their first arc's tail
// sibling on; crowns take the alternation containing their lowest arc.
// Throws CoverError(kNotTreeBased) on a W-fence.
inline MiddleChoice default_middle_choice(const PhyloNetwork& net) {
  MiddleChoice choice;
  for (const auto& trail : zigzag_decompose(net).trails) {
    const auto& arcs = trail.arcs;
    switch (trail.kind) {
      case TrailKind::kWFence:
        throw CoverError(CoverError::Reason::kNotTreeBased,
                         "network has a W-fence");
      case TrailKind::kNFence:
      case TrailKind::kMFence:
        for (std::size_t i = 1; i + 1 < arcs.size(); i += 2) {
          choice[net.head(arcs[i])] = arcs[i];
        }
        break;
      case TrailKind::kCrown:
        for (std::size_t i = 0; i < arcs.size(); i += 2) {
          choice[net.head(arcs[i])] = arcs[i];
        }
        break;
    }
  }
  return choice;
}

}  // namespace orchardist
