#pragma once

// Non-temporal labellings, horizontal arc assignments, and the quotient
// construction that turns an assignment into a labelling.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "orchardist/core.hpp"

namespace orchardist {

// Which in-arc of a reticulation is horizontal. In-arcs are ordered by id.
enum class RetChoice { kFirstInArc, kSecondInArc, kInret };

using HorizontalAssignment = std::map<VertexId, RetChoice>;

// In-arcs of a reticulation in id order.
inline std::array<ArcId, 2> sorted_in_arcs(const PhyloNetwork& net, VertexId r) {
  auto in = net.in_arcs(r);
  return {std::min(in[0], in[1]), std::max(in[0], in[1])};
}

inline std::optional<ArcId> horizontal_arc(const PhyloNetwork& net, VertexId r,
                                           RetChoice choice) {
  if (choice == RetChoice::kInret) return std::nullopt;
  const auto in = sorted_in_arcs(net, r);
  return choice == RetChoice::kFirstInArc ? in[0] : in[1];
}

// Reticulations assigned no horizontal in-arc; missing entries count as
// inrets.
inline std::vector<VertexId> assignment_inrets(const PhyloNetwork& net,
                                               const HorizontalAssignment& assign) {
  std::vector<VertexId> result;
  for (VertexId r : net.reticulations()) {
    auto it = assign.find(r);
    if (it == assign.end() || it->second == RetChoice::kInret) result.push_back(r);
  }
  return result;
}

struct NonTemporalLabelling {
  std::vector<std::int64_t> t;  // indexed by vertex id

  std::int64_t operator[](VertexId v) const { return t[index(v)]; }
};

struct LabellingCheck {
  bool non_temporal = false;
  bool hgt_consistent = false;
  std::vector<ArcId> horizontal_arcs;
  std::vector<VertexId> inrets;
  std::string violation;  // first failed condition, empty when valid
};

// Checks the three non-temporal conditions; HGT-consistency additionally
// needs exactly one horizontal in-arc per reticulation. `t` must cover
// every vertex.
inline LabellingCheck validate_labelling(const PhyloNetwork& net,
                                         const std::vector<std::int64_t>& t) {
  if (t.size() != net.num_vertices()) {
    throw LabellingError(LabellingError::Reason::kPartialLabelling,
                         "labelling has " + std::to_string(t.size()) +
                             " entries for " +
                             std::to_string(net.num_vertices()) + " vertices");
  }
  LabellingCheck check;
  auto fail = [&check](std::string why) {
    if (check.violation.empty()) check.violation = std::move(why);
  };
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    const Arc& a = net.arc(arc_id(i));
    const auto tu = t[index(a.tail)], tv = t[index(a.head)];
    if (tu > tv) fail("arc " + std::to_string(i) + " decreases");
    if (tu == tv) {
      if (!net.is_reticulation(a.head)) {
        fail("arc " + std::to_string(i) + " is level but enters a non-reticulation");
      }
      check.horizontal_arcs.push_back(arc_id(i));
    }
  }
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    VertexId v = vertex_id(i);
    const VertexKind k = net.kind(v);
    if (k != VertexKind::kTree && k != VertexKind::kReticulation) continue;
    bool rises = false;
    for (VertexId c : net.children(v)) rises = rises || t[i] < t[index(c)];
    if (!rises) fail("vertex " + std::to_string(i) + " has no strictly higher child");
  }
  bool every_one = true;
  for (VertexId r : net.reticulations()) {
    int level = 0;
    for (VertexId p : net.parents(r)) level += t[index(p)] == t[index(r)] ? 1 : 0;
    if (level > 1) fail("reticulation " + std::to_string(index(r)) + " has two level in-arcs");
    if (level == 0) check.inrets.push_back(r);
    every_one = every_one && level == 1;
  }
  check.non_temporal = check.violation.empty();
  check.hgt_consistent = check.non_temporal && every_one;
  return check;
}

inline LabellingCheck validate_labelling(const PhyloNetwork& net,
                                         const std::map<VertexId, std::int64_t>& t) {
  std::vector<std::int64_t> dense(net.num_vertices());
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    auto it = t.find(vertex_id(i));
    if (it == t.end()) {
      throw LabellingError(LabellingError::Reason::kPartialLabelling,
                           "vertex " + std::to_string(i) + " has no label");
    }
    dense[i] = it->second;
  }
  return validate_labelling(net, dense);
}

// The assignment whose horizontal arcs are the level arcs of `t`.
inline HorizontalAssignment assignment_from_labelling(
    const PhyloNetwork& net, const std::vector<std::int64_t>& t) {
  HorizontalAssignment assign;
  for (VertexId r : net.reticulations()) {
    const auto in = sorted_in_arcs(net, r);
    RetChoice choice = RetChoice::kInret;
    if (t[index(net.tail(in[0]))] == t[index(r)]) {
      choice = RetChoice::kFirstInArc;
    } else if (t[index(net.tail(in[1]))] == t[index(r)]) {
      choice = RetChoice::kSecondInArc;
    }
    assign[r] = choice;
  }
  return assign;
}

namespace detail {

// Contracts the horizontal arcs of an assignment. Returns the component of
// every vertex and the longest-path level of every component, or nullopt if
// the assignment leaves some internal vertex without a vertical out-arc or
// the contracted digraph has a cycle (self-loops included).
struct Quotient {
  std::vector<std::size_t> component;
  std::vector<std::int64_t> level;
};

inline std::optional<Quotient> contract(const PhyloNetwork& net,
                                        const HorizontalAssignment& assign) {
  const std::size_t n = net.num_vertices();
  std::vector<bool> horizontal(net.num_arcs(), false);
  for (const auto& [r, choice] : assign) {
    if (index(r) >= n || !net.is_reticulation(r)) return std::nullopt;
    if (auto a = horizontal_arc(net, r, choice)) horizontal[index(*a)] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    VertexId v = vertex_id(i);
    if (net.is_leaf(v)) continue;
    bool vertical_out = false;
    for (ArcId a : net.out_arcs(v)) vertical_out = vertical_out || !horizontal[index(a)];
    if (!vertical_out) return std::nullopt;
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    if (!horizontal[i]) continue;
    parent[find(index(net.tail(arc_id(i))))] = find(index(net.head(arc_id(i))));
  }
  Quotient q;
  q.component.resize(n);
  std::vector<std::size_t> rep_to_comp(n, n);
  std::size_t comps = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t rep = find(v);
    if (rep_to_comp[rep] == n) rep_to_comp[rep] = comps++;
    q.component[v] = rep_to_comp[rep];
  }
  std::vector<std::vector<std::size_t>> succ(comps);
  std::vector<std::size_t> indeg(comps, 0);
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    if (horizontal[i]) continue;
    const std::size_t cu = q.component[index(net.tail(arc_id(i)))];
    const std::size_t cv = q.component[index(net.head(arc_id(i)))];
    if (cu == cv) return std::nullopt;
    succ[cu].push_back(cv);
    ++indeg[cv];
  }
  q.level.assign(comps, 0);
  std::vector<std::size_t> ready;
  for (std::size_t c = 0; c < comps; ++c) {
    if (indeg[c] == 0) ready.push_back(c);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t c = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t d : succ[c]) {
      q.level[d] = std::max(q.level[d], q.level[c] + 1);
      if (--indeg[d] == 0) ready.push_back(d);
    }
  }
  if (seen != comps) return std::nullopt;
  return q;
}

}  // namespace detail

inline bool assignment_feasible(const PhyloNetwork& net,
                                const HorizontalAssignment& assign) {
  return detail::contract(net, assign).has_value();
}

// Levels of the contracted digraph: horizontal arcs become level, every
// other arc strictly increasing.
inline NonTemporalLabelling labelling_from_assignment(
    const PhyloNetwork& net, const HorizontalAssignment& assign) {
  auto q = detail::contract(net, assign);
  if (!q) {
    throw LabellingError(LabellingError::Reason::kInfeasibleAssignment,
                         "assignment admits no non-temporal labelling");
  }
  NonTemporalLabelling labelling;
  labelling.t.resize(net.num_vertices());
  for (std::size_t v = 0; v < net.num_vertices(); ++v) {
    labelling.t[v] = q->level[q->component[v]];
  }
  return labelling;
}

}  // namespace orchardist
