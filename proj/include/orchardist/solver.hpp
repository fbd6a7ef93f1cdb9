#pragma once

// Exact orchard distance. The search minimises inrets over horizontal
// assignments, which equals the number of leaf additions needed.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orchardist/classes.hpp"
#include "orchardist/core.hpp"
#include "orchardist/errors.hpp"
#include "orchardist/labelling.hpp"

namespace orchardist {

// ---------------------------------------------------------------------------
// MILP model

struct LinearTerm {
  std::int64_t coef;
  std::string var;
};

enum class Sense { kLessEqual, kGreaterEqual };

struct LinearConstraint {
  int family;  // equation number 1..7
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense;
  std::int64_t rhs;
};

struct MilpModel {
  std::vector<std::string> objective;   // minimise the sum of these
  std::vector<std::string> binaries;    // x variables, then h variables
  std::vector<std::string> continuous;  // l variables, all >= 0
  std::vector<LinearConstraint> constraints;
  std::int64_t big_m = 0;

  std::size_t count(int family) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(),
                      [family](const LinearConstraint& c) { return c.family == family; }));
  }
};

inline std::string x_var(ArcId a) { return "x_a" + std::to_string(index(a)); }
inline std::string h_var(VertexId v) { return "h_v" + std::to_string(index(v)); }
inline std::string l_var(VertexId v) { return "l_v" + std::to_string(index(v)); }

// x variables exist only for reticulation arcs; tree arcs are vertical by
// construction, so (2) is only needed where every out-arc is a reticulation
// arc and (5) covers the tree arcs.
inline MilpModel build_milp(const PhyloNetwork& net) {
  MilpModel m;
  const auto big_m = static_cast<std::int64_t>(net.num_vertices());
  m.big_m = big_m;
  const auto rets = net.reticulations();
  for (VertexId r : rets) {
    for (ArcId a : sorted_in_arcs(net, r)) m.binaries.push_back(x_var(a));
  }
  for (VertexId r : rets) {
    m.objective.push_back(h_var(r));
    m.binaries.push_back(h_var(r));
  }
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    m.continuous.push_back(l_var(vertex_id(i)));
  }
  auto pair_name = [&net](const char* prefix, ArcId a) {
    return std::string(prefix) + std::to_string(index(net.tail(a))) + "_" +
           std::to_string(index(net.head(a)));
  };

  for (VertexId r : rets) {
    const auto in = sorted_in_arcs(net, r);
    m.constraints.push_back({1, "c1_" + std::to_string(index(r)),
                             {{1, x_var(in[0])}, {1, x_var(in[1])}, {-1, h_var(r)}},
                             Sense::kLessEqual, 1});
  }
  for (std::size_t i = 0; i < net.num_vertices(); ++i) {
    const VertexId u = vertex_id(i);
    if (net.is_leaf(u)) continue;
    std::vector<ArcId> out(net.out_arcs(u).begin(), net.out_arcs(u).end());
    std::sort(out.begin(), out.end());
    const bool all_ret = std::all_of(out.begin(), out.end(), [&net](ArcId a) {
      return net.is_reticulation_arc(a);
    });
    if (!all_ret) continue;
    LinearConstraint c{2, "c2_" + std::to_string(i), {}, Sense::kGreaterEqual, 1};
    for (ArcId a : out) c.terms.push_back({1, x_var(a)});
    m.constraints.push_back(std::move(c));
  }
  for (VertexId r : rets) {
    const auto in = sorted_in_arcs(net, r);
    m.constraints.push_back({3, "c3_" + std::to_string(index(r)),
                             {{1, x_var(in[0])}, {1, x_var(in[1])}},
                             Sense::kGreaterEqual, 1});
  }
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    const ArcId a = arc_id(i);
    m.constraints.push_back({4, pair_name("c4_", a),
                             {{1, l_var(net.tail(a))}, {-1, l_var(net.head(a))}},
                             Sense::kLessEqual, 0});
  }
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    const ArcId a = arc_id(i);
    if (net.is_reticulation(net.head(a))) continue;
    m.constraints.push_back({5, pair_name("c5_", a),
                             {{1, l_var(net.tail(a))}, {-1, l_var(net.head(a))}},
                             Sense::kLessEqual, -1});
  }
  for (int family : {6, 7}) {
    for (std::size_t i = 0; i < net.num_arcs(); ++i) {
      const ArcId a = arc_id(i);
      if (!net.is_reticulation_arc(a)) continue;
      LinearConstraint c{family,
                         pair_name(family == 6 ? "c6_" : "c7_", a),
                         {{1, l_var(net.tail(a))},
                          {-1, l_var(net.head(a))},
                          {big_m, x_var(a)}},
                         family == 6 ? Sense::kLessEqual : Sense::kGreaterEqual,
                         family == 6 ? big_m - 1 : 0};
      m.constraints.push_back(std::move(c));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Upper bound and brute force

// Reticulations with no reticulation ancestor.
inline std::vector<VertexId> highest_reticulations(const PhyloNetwork& net) {
  std::vector<char> below(net.num_vertices(), 0);  // has a reticulation ancestor
  std::vector<VertexId> result;
  for (VertexId v : net.topological_order()) {
    if (net.is_reticulation(v) && !below[index(v)]) result.push_back(v);
    const bool mark = below[index(v)] || net.is_reticulation(v);
    if (mark) {
      for (VertexId c : net.children(v)) below[index(c)] = 1;
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

// One in-arc (the lower id) of every reticulation except the lowest-id
// highest one. Adding a leaf to each yields an orchard network.
inline std::vector<ArcId> upper_bound_additions(const PhyloNetwork& net) {
  std::vector<ArcId> result;
  if (net.num_reticulations() == 0) return result;
  const VertexId top = highest_reticulations(net).front();
  for (VertexId r : net.reticulations()) {
    if (r != top) result.push_back(sorted_in_arcs(net, r)[0]);
  }
  std::sort(result.begin(), result.end());
  return result;
}

// "z1", "z2", ... skipping labels already present.
inline std::vector<std::string> fresh_labels(const PhyloNetwork& net, std::size_t count) {
  std::vector<std::string> labels;
  for (std::size_t i = 1; labels.size() < count; ++i) {
    std::string label = "z" + std::to_string(i);
    if (!net.leaf(label)) labels.push_back(std::move(label));
  }
  return labels;
}

inline std::vector<LeafAddition> with_fresh_labels(const PhyloNetwork& net,
                                                   const std::vector<ArcId>& arcs) {
  const auto labels = fresh_labels(net, arcs.size());
  std::vector<LeafAddition> additions;
  for (std::size_t i = 0; i < arcs.size(); ++i) additions.push_back({arcs[i], labels[i]});
  return additions;
}

// Smallest k such that adding one leaf to each of some k reticulation arcs
// gives an orchard network, or nullopt if none with k <= k_max. k_max
// defaults to max(0, r - 1), which always suffices.
inline std::optional<std::size_t> brute_force_oracle(
    const PhyloNetwork& net, std::optional<std::size_t> k_max = std::nullopt,
    std::size_t guard = 10) {
  const std::size_t r = net.num_reticulations();
  if (r > guard) {
    throw SolverError(SolverError::Reason::kGuardExceeded,
                      std::to_string(r) + " reticulations exceed the guard of " +
                          std::to_string(guard));
  }
  std::vector<ArcId> candidates;
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    if (net.is_reticulation_arc(arc_id(i))) candidates.push_back(arc_id(i));
  }
  const std::size_t limit =
      std::min(k_max.value_or(r == 0 ? 0 : r - 1), candidates.size());
  const auto labels = fresh_labels(net, limit);
  for (std::size_t k = 0; k <= limit; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<LeafAddition> additions;
      for (std::size_t i = 0; i < k; ++i) additions.push_back({candidates[pick[i]], labels[i]});
      if (is_orchard(add_leaves(net, additions)).orchard) return k;
      // next combination in lexicographic order
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == candidates.size() - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Branch and bound

struct SolveOptions {
  double timeout_seconds = 3600.0;
  std::optional<std::size_t> node_limit;
  const std::atomic<bool>* cancel = nullptr;  // polled with the clock
};

struct SolveStats {
  std::size_t nodes = 0;
  double seconds = 0.0;
};

struct SolveResult {
  std::size_t l_or = 0;
  bool optimal = false;
  bool timed_out = false;
  std::size_t lower_bound = 0;
  HorizontalAssignment assignment;
  NonTemporalLabelling labelling;
  std::vector<LeafAddition> additions;
  SolveStats stats;
};

namespace detail {

// Reduces the network by cherry picking; when stuck, adds a leaf above the
// lowest reticulation. The removed in-links give an assignment whose inrets
// are the reticulations detached through an added leaf or never detached.
inline HorizontalAssignment cherry_picking_assignment(const PhyloNetwork& net) {
  CherryPicker picker(net);
  std::size_t added = 0;
  while (true) {
    picker.reduce_all();
    const auto lows = picker.lowest_reticulations();
    if (lows.empty()) break;
    const int r = lows.front();
    picker.add_leaf(picker.in_link_parent(r, 0), r, "\x01" + std::to_string(added++));
  }
  HorizontalAssignment assign;
  const auto& removed = picker.removed_in_links();
  for (VertexId r : net.reticulations()) {
    const auto& link = removed[index(r)];
    RetChoice choice = RetChoice::kInret;
    if (link && !link->via_added) {
      choice = link->orig == sorted_in_arcs(net, r)[0] ? RetChoice::kFirstInArc
                                                       : RetChoice::kSecondInArc;
    }
    assign[r] = choice;
  }
  return assign;
}

class VorSearch {
 public:
  using Clock = std::chrono::steady_clock;

  VorSearch(const PhyloNetwork& net, const SolveOptions& options, Clock::time_point start)
      : net_(net), options_(options), start_(start) {
    const std::size_t n = net.num_vertices();
    for (VertexId v : net.topological_order()) {
      if (net.is_reticulation(v)) order_.push_back(v);
    }
    partner_.assign(n, -1);
    used_tail_.assign(n, 0);
    level_.assign(n, 0);
    seen_.assign(n, 0);
    state_.assign(order_.size(), kUndecided);
    match_tail_.assign(n, -1);
    match_stamp_.assign(n, 0);
    visit_.assign(n, 0);
  }

  void set_incumbent(const HorizontalAssignment& assign, std::size_t value) {
    best_ = assign;
    bound_ = value;
    have_best_ = true;
  }
  void set_bound(std::size_t value) { bound_ = value; }

  void run() { search(true); }

  bool have_best() const { return have_best_; }
  const HorizontalAssignment& best() const { return best_; }
  std::size_t best_value() const { return bound_; }
  std::size_t root_lower_bound() const { return root_lb_; }
  std::size_t nodes() const { return nodes_; }
  bool stopped() const { return stopped_; }
  bool complete() const { return !stopped_; }

 private:
  static constexpr int kUndecided = -1;

  struct Option {
    ArcId arc;
    RetChoice choice;
    int tail;
  };

  int rep(int v) const { return partner_[v] >= 0 ? std::min(v, partner_[v]) : v; }

  // Longest-path levels of the current quotient.
  void compute_levels() {
    const std::size_t n = net_.num_vertices();
    std::vector<int> indeg(n, 0);
    for (std::size_t i = 0; i < net_.num_arcs(); ++i) {
      if (horizontal_arc_[i]) continue;
      ++indeg[rep(static_cast<int>(index(net_.head(arc_id(i)))))];
    }
    std::vector<int> ready;
    for (std::size_t v = 0; v < n; ++v) {
      if (rep(static_cast<int>(v)) == static_cast<int>(v) && indeg[v] == 0) {
        ready.push_back(static_cast<int>(v));
      }
      level_[v] = 0;
    }
    while (!ready.empty()) {
      const int c = ready.back();
      ready.pop_back();
      for (int v : {c, partner_[c]}) {
        if (v < 0) continue;
        for (ArcId a : net_.out_arcs(vertex_id(v))) {
          if (horizontal_arc_[index(a)]) continue;
          const int d = rep(static_cast<int>(index(net_.head(a))));
          level_[d] = std::max(level_[d], level_[c] + 1);
          if (--indeg[d] == 0) ready.push_back(d);
        }
      }
    }
  }

  // Whether r is reachable from s in the quotient, exploring only
  // components whose level is below r's.
  bool reaches(int s, int r) {
    const int limit = level_[r];
    if (level_[rep(s)] >= limit) return false;
    ++stamp_;
    std::vector<int>& stack = stack_;
    stack.clear();
    stack.push_back(rep(s));
    seen_[rep(s)] = stamp_;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      for (int v : {c, partner_[c]}) {
        if (v < 0) continue;
        for (ArcId a : net_.out_arcs(vertex_id(v))) {
          if (horizontal_arc_[index(a)]) continue;
          const int h = static_cast<int>(index(net_.head(a)));
          if (h == r) return true;
          const int d = rep(h);
          if (seen_[d] == stamp_ || level_[d] >= limit) continue;
          seen_[d] = stamp_;
          stack.push_back(d);
        }
      }
    }
    return false;
  }

  // Horizontal options still open for reticulation r.
  std::vector<Option> options_for(VertexId r) {
    std::vector<Option> result;
    const auto in = sorted_in_arcs(net_, r);
    for (int k = 0; k < 2; ++k) {
      const VertexId t = net_.tail(in[k]);
      if (!net_.is_tree_vertex(t) || used_tail_[index(t)]) continue;
      const auto kids = net_.children(t);
      const VertexId other = kids[0] == r ? kids[1] : kids[0];
      if (reaches(static_cast<int>(index(other)), static_cast<int>(index(r)))) continue;
      result.push_back({in[k], k == 0 ? RetChoice::kFirstInArc : RetChoice::kSecondInArc,
                        static_cast<int>(index(t))});
    }
    return result;
  }

  // Maximum matching of reticulations to distinct tails.
  std::size_t matching(const std::vector<std::vector<Option>>& opts) {
    ++match_epoch_;
    std::size_t size = 0;
    for (std::size_t i = 0; i < opts.size(); ++i) {
      if (opts[i].empty()) continue;
      ++visit_epoch_;
      if (augment(opts, static_cast<int>(i))) ++size;
    }
    return size;
  }

  bool augment(const std::vector<std::vector<Option>>& opts, int i) {
    for (const Option& o : opts[i]) {
      if (visit_[o.tail] == visit_epoch_) continue;
      visit_[o.tail] = visit_epoch_;
      const bool free = match_stamp_[o.tail] != match_epoch_;
      if (free || augment(opts, match_tail_[o.tail])) {
        match_stamp_[o.tail] = match_epoch_;
        match_tail_[o.tail] = i;
        return true;
      }
    }
    return false;
  }

  struct Undo {
    std::size_t pos;
    bool horizontal;
  };

  void apply(std::size_t pos, const Option* o) {
    if (o == nullptr) {
      state_[pos] = static_cast<int>(RetChoice::kInret);
      ++inrets_;
    } else {
      const int r = static_cast<int>(index(order_[pos]));
      state_[pos] = static_cast<int>(o->choice);
      horizontal_arc_[index(o->arc)] = 1;
      partner_[o->tail] = r;
      partner_[r] = o->tail;
      used_tail_[o->tail] = 1;
    }
    ++decided_;
    trail_.push_back({pos, o != nullptr});
  }

  void undo() {
    const Undo u = trail_.back();
    trail_.pop_back();
    const VertexId r = order_[u.pos];
    if (u.horizontal) {
      const auto arc = *horizontal_arc(net_, r, static_cast<RetChoice>(state_[u.pos]));
      const int t = static_cast<int>(index(net_.tail(arc)));
      horizontal_arc_[index(arc)] = 0;
      partner_[t] = -1;
      partner_[index(r)] = -1;
      used_tail_[t] = 0;
    } else {
      --inrets_;
    }
    state_[u.pos] = kUndecided;
    --decided_;
  }

  bool out_of_budget() {
    if (stopped_) return true;
    if (options_.node_limit && nodes_ >= *options_.node_limit) stopped_ = true;
    if ((nodes_ & 63) == 0) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start_).count();
      if (elapsed >= options_.timeout_seconds) stopped_ = true;
      if (options_.cancel && options_.cancel->load()) stopped_ = true;
    }
    return stopped_;
  }

  void record() {
    best_.clear();
    for (std::size_t i = 0; i < order_.size(); ++i) {
      best_[order_[i]] = static_cast<RetChoice>(state_[i]);
    }
    bound_ = inrets_;
    have_best_ = true;
    if (bound_ <= root_lb_) finished_ = true;
  }

  void search(bool root) {
    if (finished_ || out_of_budget()) return;
    ++nodes_;
    const std::size_t mark = trail_.size();
    compute_levels();
    std::vector<std::size_t> open;
    std::vector<std::vector<Option>> opts;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      if (state_[i] != kUndecided) continue;
      auto o = options_for(order_[i]);
      if (o.empty()) {
        apply(i, nullptr);  // inret in every completion
      } else {
        open.push_back(i);
        opts.push_back(std::move(o));
      }
    }
    const std::size_t lb = inrets_ + (open.size() - matching(opts));
    if (root) root_lb_ = lb;
    if (lb < bound_) {
      if (open.empty()) {
        record();
      } else {
        std::size_t pick = 0;
        if (inrets_ + 1 >= bound_) {
          // No inret to spare: a reticulation with one option is forced.
          for (std::size_t j = 0; j < open.size(); ++j) {
            if (opts[j].size() == 1) {
              pick = j;
              break;
            }
          }
        }
        const std::size_t pos = open[pick];
        for (const Option& o : opts[pick]) {
          apply(pos, &o);
          search(false);
          undo();
          if (finished_ || stopped_) break;
        }
        if (!finished_ && !stopped_ && inrets_ + 1 < bound_) {
          apply(pos, nullptr);
          search(false);
          undo();
        }
      }
    }
    while (trail_.size() > mark) undo();
  }

  const PhyloNetwork& net_;
  SolveOptions options_;
  Clock::time_point start_;
  std::vector<VertexId> order_;
  std::vector<int> partner_;
  std::vector<char> used_tail_;
  std::vector<char> horizontal_arc_ = std::vector<char>(net_.num_arcs(), 0);
  std::vector<int> level_;
  std::vector<unsigned> seen_;
  unsigned stamp_ = 0;
  std::vector<int> stack_;
  std::vector<int> state_;
  std::vector<int> match_tail_;
  std::vector<unsigned> match_stamp_;
  std::vector<unsigned> visit_;
  unsigned match_epoch_ = 0;
  unsigned visit_epoch_ = 0;
  std::vector<Undo> trail_;
  std::size_t inrets_ = 0;
  std::size_t decided_ = 0;
  std::size_t nodes_ = 0;
  std::size_t bound_ = 0;
  std::size_t root_lb_ = 0;
  bool have_best_ = false;
  bool finished_ = false;
  bool stopped_ = false;
  HorizontalAssignment best_;
};

}  // namespace detail

// Additions certifying an assignment: one fresh leaf on the lower-id in-arc
// of every inret.
inline std::vector<LeafAddition> additions_for(const PhyloNetwork& net,
                                               const HorizontalAssignment& assign) {
  std::vector<ArcId> arcs;
  for (VertexId r : assignment_inrets(net, assign)) arcs.push_back(sorted_in_arcs(net, r)[0]);
  return with_fresh_labels(net, arcs);
}

inline SolveResult solve_bnb(const PhyloNetwork& net, const SolveOptions& options = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::size_t r = net.num_reticulations();
  detail::VorSearch search(net, options, start);

  const auto seed = detail::cherry_picking_assignment(net);
  const std::size_t seed_value = assignment_inrets(net, seed).size();
  const std::size_t ub = r == 0 ? 0 : r - 1;
  if (seed_value <= ub && assignment_feasible(net, seed)) {
    search.set_incumbent(seed, seed_value);
  } else {
    search.set_bound(ub + 1);
  }
  search.run();

  SolveResult result;
  if (search.have_best()) {
    result.assignment = search.best();
  } else {
    for (VertexId v : net.reticulations()) result.assignment[v] = RetChoice::kInret;
  }
  result.l_or = assignment_inrets(net, result.assignment).size();
  result.timed_out = search.stopped();
  result.optimal = !search.stopped();
  result.lower_bound = result.optimal ? result.l_or : search.root_lower_bound();
  result.labelling = labelling_from_assignment(net, result.assignment);
  result.additions = additions_for(net, result.assignment);
  result.stats.nodes = search.nodes();
  result.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

struct Certificate {
  PhyloNetwork network;
  OrchardCheck proof;
};

// Applies the result's additions and re-checks orchardness independently.
inline Certificate extract_additions(const PhyloNetwork& net, const SolveResult& result) {
  const auto check = validate_labelling(net, result.labelling.t);
  if (!check.non_temporal || check.inrets.size() != result.l_or ||
      result.additions.size() != result.l_or) {
    throw SolverError(SolverError::Reason::kCertificateFailure,
                      "labelling does not certify " + std::to_string(result.l_or) +
                          " inrets");
  }
  PhyloNetwork extended = add_leaves(net, result.additions);
  OrchardCheck proof = is_orchard(extended);
  if (!proof.orchard) {
    throw SolverError(SolverError::Reason::kCertificateFailure,
                      "network with additions is not orchard");
  }
  return {std::move(extended), std::move(proof)};
}

}  // namespace orchardist
