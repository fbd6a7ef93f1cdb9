#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "orchardist/formats.hpp"
#include "orchardist/gen.hpp"
#include "orchardist/solver.hpp"
#include "support.hpp"

namespace orchardist {
namespace {

using testing::arc;
using testing::blob;
using testing::from_arcs;
using testing::vertex;

TEST(Bnb, Blob) {
  const PhyloNetwork net = blob();
  const SolveResult result = solve_bnb(net);
  EXPECT_TRUE(result.optimal);
  EXPECT_FALSE(result.timed_out);
  EXPECT_EQ(result.l_or, 1u);
  EXPECT_EQ(result.lower_bound, 1u);
  // the only optimum: (v, w) horizontal, r an inret
  const HorizontalAssignment expected{{vertex(net, "w"), RetChoice::kSecondInArc},
                                      {vertex(net, "r"), RetChoice::kInret}};
  EXPECT_EQ(result.assignment, expected);
  ASSERT_EQ(result.additions.size(), 1u);
  EXPECT_EQ(result.additions[0], (LeafAddition{arc(net, "v", "r"), "z1"}));
}

TEST(Bnb, BlobAssignmentIsUnique) {
  const PhyloNetwork net = blob();
  const VertexId w = vertex(net, "w"), r = vertex(net, "r");
  const RetChoice all[] = {RetChoice::kFirstInArc, RetChoice::kSecondInArc, RetChoice::kInret};
  int optimal = 0, zero = 0;
  for (RetChoice cw : all) {
    for (RetChoice cr : all) {
      const HorizontalAssignment a{{w, cw}, {r, cr}};
      if (!assignment_feasible(net, a)) continue;
      const auto inrets = assignment_inrets(net, a).size();
      zero += inrets == 0;
      optimal += inrets == 1;
    }
  }
  EXPECT_EQ(zero, 0);
  EXPECT_EQ(optimal, 1);
}

TEST(Bnb, TreesAreZero) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const SolveResult result = solve_bnb(random_linked(1 + rng() % 12, 0, rng));
    EXPECT_EQ(result.l_or, 0u);
    EXPECT_TRUE(result.optimal);
    EXPECT_TRUE(result.additions.empty());
  }
}

TEST(Bnb, TightFamily) {
  for (std::size_t k = 1; k <= 6; ++k) {
    const PhyloNetwork net = tight_family(k);
    const SolveResult result = solve_bnb(net);
    EXPECT_TRUE(result.optimal);
    EXPECT_EQ(result.l_or, k - 1) << k;
    if (k <= 5) {
      EXPECT_EQ(*brute_force_oracle(net), k - 1) << k;
    }
  }
}

TEST(Bnb, NodeLimitReportsIncumbent) {
  const PhyloNetwork net = reduce_vertex_cover(k4_graph());
  SolveOptions options;
  options.node_limit = 1;
  const SolveResult result = solve_bnb(net, options);
  EXPECT_FALSE(result.optimal);
  EXPECT_TRUE(result.timed_out);
  EXPECT_LE(result.lower_bound, result.l_or);
  EXPECT_GE(result.l_or, 3u);
  // the incumbent is still a certificate
  EXPECT_NO_THROW(extract_additions(net, result));
}

TEST(Bnb, CancelFlagStops) {
  const PhyloNetwork net = reduce_vertex_cover(prism_graph());
  std::atomic<bool> cancel{true};
  SolveOptions options;
  options.cancel = &cancel;
  const SolveResult result = solve_bnb(net, options);
  EXPECT_FALSE(result.optimal);
}

TEST(Bnb, Deterministic) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const PhyloNetwork net = random_linked(3 + rng() % 8, 2 + rng() % 6, rng);
    const SolveResult a = solve_bnb(net), b = solve_bnb(net);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  }
}

TEST(Oracle, Examples) {
  EXPECT_EQ(*brute_force_oracle(blob()), 1u);
  EXPECT_EQ(*brute_force_oracle(testing::reticulated_cherry()), 0u);
  EXPECT_EQ(*brute_force_oracle(tight_family(3)), 2u);
  EXPECT_FALSE(brute_force_oracle(blob(), 0));
}

TEST(Oracle, SingleAdditionsOnBlob) {
  // which single reticulation-arc additions make N_blob orchard
  const PhyloNetwork net = blob();
  std::set<std::pair<std::string, std::string>> good;
  for (std::size_t i = 0; i < net.num_arcs(); ++i) {
    const ArcId a = arc_id(i);
    if (!net.is_reticulation_arc(a)) continue;
    if (is_orchard(add_leaf(net, a, "z")).orchard) {
      good.insert({net.name(net.tail(a)), net.name(net.head(a))});
    }
  }
  // a leaf on (u, w) leaves no cherry and no reticulated cherry
  EXPECT_EQ(good, (std::set<std::pair<std::string, std::string>>{{"v", "r"}, {"w", "r"}}));
}

TEST(Oracle, StackedReticulationsOverOneLeaf) {
  // one leaf, but the reticulations above it survive every reduction
  const PhyloNetwork net = from_arcs({{"rho", "a"}, {"a", "b"}, {"a", "c"}, {"b", "c"},
                                      {"b", "d"}, {"c", "d"}, {"d", "x"}});
  EXPECT_FALSE(is_orchard(net).orchard);
  const SolveResult result = solve_bnb(net);
  EXPECT_EQ(result.l_or, 1u);
  EXPECT_EQ(*brute_force_oracle(net), 1u);
}

TEST(Oracle, Guard) {
  try {
    brute_force_oracle(tight_family(11));
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.reason(), SolverError::Reason::kGuardExceeded);
  }
}

TEST(UpperBound, Examples) {
  EXPECT_TRUE(upper_bound_additions(from_arcs({{"rho", "x"}})).empty());
  const PhyloNetwork net = blob();
  EXPECT_EQ(highest_reticulations(net), (std::vector<VertexId>{vertex(net, "w")}));
  EXPECT_EQ(upper_bound_additions(net), (std::vector<ArcId>{arc(net, "v", "r")}));
}

TEST(UpperBound, AlwaysOrchard) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    const PhyloNetwork net = random_linked(2 + rng() % 9, rng() % 9, rng);
    const auto arcs = upper_bound_additions(net);
    EXPECT_EQ(arcs.size(), net.num_reticulations() == 0 ? 0 : net.num_reticulations() - 1);
    EXPECT_TRUE(is_orchard(add_leaves(net, with_fresh_labels(net, arcs))).orchard);
  }
}

TEST(FreshLabels, SkipClashes) {
  const PhyloNetwork net = from_arcs({{"rho", "p"}, {"p", "z1"}, {"p", "z3"}});
  EXPECT_EQ(fresh_labels(net, 3), (std::vector<std::string>{"z2", "z4", "z5"}));
}

TEST(Milp, BlobInstances) {
  const MilpModel model = build_milp(blob());
  EXPECT_EQ(model.objective, (std::vector<std::string>{"h_v5", "h_v6"}));
  EXPECT_EQ(model.big_m, 8);
  EXPECT_EQ(model.count(1), 2u);
  EXPECT_EQ(model.count(2), 2u);
  EXPECT_EQ(model.count(3), 2u);
  EXPECT_EQ(model.count(4), 9u);
  EXPECT_EQ(model.count(5), 5u);
  EXPECT_EQ(model.count(6), 4u);
  EXPECT_EQ(model.count(7), 4u);
}

TEST(Milp, TreeIsTrivial) {
  const MilpModel model = build_milp(from_arcs({{"rho", "p"}, {"p", "x"}, {"p", "y"}}));
  EXPECT_TRUE(model.objective.empty());
  EXPECT_TRUE(model.binaries.empty());
}

TEST(Certificate, Blob) {
  const PhyloNetwork net = blob();
  const Certificate cert = extract_additions(net, solve_bnb(net));
  EXPECT_TRUE(cert.proof.orchard);
  std::vector<std::string> labels;
  for (VertexId v : cert.network.leaves()) labels.push_back(cert.network.label(v));
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<std::string>{"a", "b", "z1"}));
}

TEST(Certificate, OrchardInputIsIdentity) {
  const PhyloNetwork net = testing::reticulated_cherry();
  const SolveResult result = solve_bnb(net);
  EXPECT_EQ(result.l_or, 0u);
  const Certificate cert = extract_additions(net, result);
  EXPECT_TRUE(isomorphic(cert.network, net));
  EXPECT_TRUE(validate_labelling(net, result.labelling.t).hgt_consistent);
}

TEST(Certificate, TightFive) {
  const PhyloNetwork net = tight_family(5);
  const Certificate cert = extract_additions(net, solve_bnb(net));
  EXPECT_EQ(cert.network.num_leaves(), 6u);
  EXPECT_TRUE(cert.proof.orchard);
}

TEST(Certificate, DetectsForgery) {
  const PhyloNetwork net = blob();
  SolveResult forged = solve_bnb(net);
  forged.l_or = 0;
  forged.additions.clear();
  try {
    extract_additions(net, forged);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.reason(), SolverError::Reason::kCertificateFailure);
  }
}

TEST(Reduction, K4) {
  const PhyloNetwork net = reduce_vertex_cover(k4_graph());
  const SolveResult result = solve_bnb(net);
  EXPECT_TRUE(result.optimal);
  EXPECT_EQ(result.l_or, 3u);
  EXPECT_EQ(result.l_or, min_vertex_cover(k4_graph()));
}

TEST(Reduction, K4AdditionsTouchEveryEdge) {
  // every edge has an endpoint whose principal part receives a leaf
  const CubicGraph g = k4_graph();
  const PhyloNetwork net = reduce_vertex_cover(g);
  const SolveResult result = solve_bnb(net);
  std::set<std::size_t> touched;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const auto part = principal_part(net, v);
    for (const auto& add : result.additions) {
      if (std::find(part.begin(), part.end(), add.arc) != part.end()) touched.insert(v);
    }
  }
  for (const auto& [u, v] : g.edges) {
    EXPECT_TRUE(touched.count(u) || touched.count(v)) << u << "-" << v;
  }
}

}  // namespace
}  // namespace orchardist
