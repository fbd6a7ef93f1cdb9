#include <gtest/gtest.h>

#include <random>

#include "orchardist/gen.hpp"
#include "orchardist/labelling.hpp"
#include "support.hpp"

namespace orchardist {
namespace {

using testing::arc;
using testing::blob;
using testing::from_arcs;
using testing::vertex;

// Labels given by vertex name.
std::vector<std::int64_t> by_name(const PhyloNetwork& net,
                                  const std::map<std::string, std::int64_t>& t) {
  std::vector<std::int64_t> out(net.num_vertices());
  for (const auto& [name, value] : t) out[index(vertex(net, name))] = value;
  return out;
}

std::vector<std::int64_t> depth_labelling(const PhyloNetwork& net) {
  std::vector<std::int64_t> t(net.num_vertices(), 0);
  for (VertexId v : net.topological_order()) {
    for (VertexId c : net.children(v)) t[index(c)] = std::max(t[index(c)], t[index(v)] + 1);
  }
  return t;
}

TEST(ValidateLabelling, DepthLabellingIsNonTemporal) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const PhyloNetwork net = random_linked(2 + rng() % 9, rng() % 8, rng);
    const LabellingCheck check = validate_labelling(net, depth_labelling(net));
    EXPECT_TRUE(check.non_temporal) << check.violation;
    EXPECT_TRUE(check.horizontal_arcs.empty());
    EXPECT_EQ(check.inrets.size(), net.num_reticulations());
  }
}

TEST(ValidateLabelling, BlobLevelArcIntoR) {
  // (w, r) level leaves w without a strictly higher child
  const PhyloNetwork net = blob();
  const LabellingCheck check = validate_labelling(
      net, by_name(net, {{"rho", 0}, {"t0", 1}, {"b", 2}, {"u", 2}, {"v", 3}, {"w", 4},
                         {"r", 4}, {"a", 5}}));
  EXPECT_FALSE(check.non_temporal);
  EXPECT_FALSE(check.hgt_consistent);
  EXPECT_EQ(check.violation,
            "vertex " + std::to_string(index(vertex(net, "w"))) +
                " has no strictly higher child");
}

TEST(ValidateLabelling, BlobLevelArcIntoW) {
  const PhyloNetwork net = blob();
  const LabellingCheck check = validate_labelling(
      net, by_name(net, {{"rho", 0}, {"t0", 1}, {"b", 2}, {"u", 2}, {"v", 3}, {"w", 3},
                         {"r", 4}, {"a", 5}}));
  EXPECT_TRUE(check.non_temporal) << check.violation;
  EXPECT_FALSE(check.hgt_consistent);
  EXPECT_EQ(check.horizontal_arcs, (std::vector<ArcId>{arc(net, "v", "w")}));
  EXPECT_EQ(check.inrets, (std::vector<VertexId>{vertex(net, "r")}));
}

TEST(ValidateLabelling, BlobAllDistinct) {
  const PhyloNetwork net = blob();
  const LabellingCheck check = validate_labelling(
      net, by_name(net, {{"rho", 0}, {"t0", 1}, {"b", 2}, {"u", 3}, {"v", 4}, {"w", 5},
                         {"r", 6}, {"a", 7}}));
  EXPECT_TRUE(check.non_temporal);
  EXPECT_EQ(check.inrets, (std::vector<VertexId>{vertex(net, "w"), vertex(net, "r")}));
}

TEST(ValidateLabelling, Violations) {
  const PhyloNetwork net = blob();
  auto base = std::map<std::string, std::int64_t>{{"rho", 0}, {"t0", 1}, {"b", 2}, {"u", 2},
                                                  {"v", 3}, {"w", 4}, {"r", 5}, {"a", 6}};
  auto with = [&](const std::string& name, std::int64_t value) {
    auto t = base;
    t[name] = value;
    return validate_labelling(net, by_name(net, t));
  };
  EXPECT_TRUE(with("b", 2).non_temporal);
  EXPECT_NE(with("b", 0).violation.find("decreases"), std::string::npos);
  EXPECT_NE(with("b", 1).violation.find("non-reticulation"), std::string::npos);
  // r level with both parents
  auto t = base;
  t["w"] = 3;
  t["r"] = 3;
  t["a"] = 4;
  EXPECT_FALSE(validate_labelling(net, by_name(net, t)).non_temporal);

  EXPECT_THROW(validate_labelling(net, std::vector<std::int64_t>(3, 0)), LabellingError);
  std::map<VertexId, std::int64_t> partial{{vertex(net, "rho"), 0}};
  try {
    validate_labelling(net, partial);
    FAIL();
  } catch (const LabellingError& e) {
    EXPECT_EQ(e.reason(), LabellingError::Reason::kPartialLabelling);
  }
}

TEST(ValidateLabelling, HgtConsistentReticulatedCherry) {
  const PhyloNetwork net = testing::reticulated_cherry();
  const LabellingCheck check = validate_labelling(
      net, by_name(net, {{"rho", 0}, {"g", 1}, {"p", 2}, {"r", 2}, {"x", 3}, {"y", 3}}));
  EXPECT_TRUE(check.hgt_consistent);
  EXPECT_TRUE(check.inrets.empty());
}

TEST(Assignment, BlobBothIntoV) {
  const PhyloNetwork net = blob();
  const VertexId w = vertex(net, "w"), r = vertex(net, "r");
  // in-arcs by id: w gets (u,w) then (v,w); r gets (v,r) then (w,r)
  EXPECT_FALSE(assignment_feasible(
      net, {{w, RetChoice::kSecondInArc}, {r, RetChoice::kFirstInArc}}));
}

TEST(Assignment, BlobLevelArcFromReticulation) {
  const PhyloNetwork net = blob();
  const VertexId w = vertex(net, "w"), r = vertex(net, "r");
  const HorizontalAssignment assign{{w, RetChoice::kInret}, {r, RetChoice::kSecondInArc}};
  EXPECT_EQ(*horizontal_arc(net, r, RetChoice::kSecondInArc), arc(net, "w", "r"));
  EXPECT_FALSE(assignment_feasible(net, assign));
  try {
    labelling_from_assignment(net, assign);
    FAIL();
  } catch (const LabellingError& e) {
    EXPECT_EQ(e.reason(), LabellingError::Reason::kInfeasibleAssignment);
  }
}

TEST(Assignment, BlobOptimum) {
  const PhyloNetwork net = blob();
  const VertexId w = vertex(net, "w"), r = vertex(net, "r");
  const HorizontalAssignment assign{{w, RetChoice::kSecondInArc}, {r, RetChoice::kInret}};
  ASSERT_TRUE(assignment_feasible(net, assign));
  const NonTemporalLabelling t = labelling_from_assignment(net, assign);
  EXPECT_EQ(t.t, by_name(net, {{"rho", 0}, {"t0", 1}, {"b", 2}, {"u", 2}, {"v", 3},
                               {"w", 3}, {"r", 4}, {"a", 5}}));
  const LabellingCheck check = validate_labelling(net, t.t);
  EXPECT_TRUE(check.non_temporal);
  EXPECT_EQ(check.inrets, assignment_inrets(net, assign));
  EXPECT_EQ(assignment_from_labelling(net, t.t), assign);
}

TEST(Assignment, AllInretAlwaysFeasible) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const PhyloNetwork net = random_linked(2 + rng() % 9, rng() % 8, rng);
    HorizontalAssignment assign;
    for (VertexId r : net.reticulations()) assign[r] = RetChoice::kInret;
    ASSERT_TRUE(assignment_feasible(net, assign));
    EXPECT_EQ(labelling_from_assignment(net, assign).t, depth_labelling(net));
    EXPECT_TRUE(assignment_feasible(net, {}));
    EXPECT_EQ(assignment_inrets(net, {}).size(), net.num_reticulations());
  }
}

TEST(Assignment, TreeDepthLabelling) {
  const PhyloNetwork net = from_arcs({{"rho", "p"}, {"p", "x"}, {"p", "q"}, {"q", "y"}, {"q", "z"}});
  const NonTemporalLabelling t = labelling_from_assignment(net, {});
  EXPECT_EQ(t.t, depth_labelling(net));
  EXPECT_TRUE(validate_labelling(net, t.t).inrets.empty());
}

TEST(Assignment, RejectsNonReticulation) {
  const PhyloNetwork net = blob();
  EXPECT_FALSE(assignment_feasible(net, {{vertex(net, "u"), RetChoice::kInret}}));
}

}  // namespace
}  // namespace orchardist
