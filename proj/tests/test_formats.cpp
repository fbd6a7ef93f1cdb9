#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "orchardist/formats.hpp"
#include "orchardist/gen.hpp"
#include "orchardist/solver.hpp"
#include "support.hpp"

namespace orchardist {
namespace {

using testing::blob;
using testing::from_arcs;
using testing::reticulated_cherry;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = ORCHARDIST_DATA_DIR;

TEST(ENewick, Cherry) {
  const PhyloNetwork net = parse_enewick("((x,y)p);");
  EXPECT_TRUE(isomorphic(net, from_arcs({{"rho", "p"}, {"p", "x"}, {"p", "y"}})));
}

TEST(ENewick, ReticulatedCherry) {
  const PhyloNetwork net = parse_enewick(" ( ( (x)#H1 , ( #H1 , y ) p ) g ) ; ");
  EXPECT_EQ(net.num_reticulations(), 1u);
  EXPECT_TRUE(isomorphic(net, reticulated_cherry()));
  EXPECT_TRUE(isomorphic(parse_enewick(slurp(kData + "/reticulated_cherry.enewick")),
                         reticulated_cherry()));
}

TEST(ENewick, ImplicitRoot) {
  const PhyloNetwork net = parse_enewick("(x,y);");
  EXPECT_TRUE(isomorphic(net, from_arcs({{"rho", "p"}, {"p", "x"}, {"p", "y"}})));
}

TEST(ENewick, LeafHybridTagsAndExtras) {
  // leaf-like hybrid occurrences, branch lengths, comments and quoting
  const PhyloNetwork net =
      parse_enewick("((('x':1.5)#H1:0.1,(#H1[note],y:2)p)g);");
  EXPECT_TRUE(isomorphic(net, reticulated_cherry()));
  const PhyloNetwork quoted = parse_enewick("(('a b','c,d'));");
  EXPECT_TRUE(quoted.leaf("a b"));
  EXPECT_TRUE(quoted.leaf("c,d"));
  EXPECT_TRUE(isomorphic(parse_enewick(serialize_enewick(quoted)), quoted));
}

TEST(ENewick, Errors) {
  try {
    parse_enewick("((x,y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.reason(), ParseError::Reason::kSyntax);
  }
  try {
    parse_enewick("((x)#H1,y);");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.reason(), ParseError::Reason::kUnbalancedHybridTag);
  }
  EXPECT_THROW(parse_enewick("((x,x)p);"), ValidationError);
  EXPECT_THROW(parse_enewick(slurp(kData + "/malformed.enewick")), ParseError);
}

TEST(ENewick, SerializeBlob) {
  const PhyloNetwork net = blob();
  const std::string text = serialize_enewick(net);
  EXPECT_EQ(text, "((b,((((a)#H2)#H1,#H2)v,#H1)u)t0)rho;");
  EXPECT_TRUE(isomorphic(parse_enewick(text), net));
}

TEST(ENewick, TightFiveFile) {
  const PhyloNetwork net = parse_enewick(slurp(kData + "/tight5.enewick"));
  EXPECT_TRUE(isomorphic(net, tight_family(5)));
}

TEST(EdgeList, BlobFile) {
  const PhyloNetwork net = parse_edge_list(slurp(kData + "/blob.edges"));
  EXPECT_EQ(net.num_arcs(), 9u);
  EXPECT_EQ(net.num_reticulations(), 2u);
  EXPECT_TRUE(isomorphic(net, blob()));
  // ids follow first appearance, so the file reproduces blob() exactly
  EXPECT_EQ(net.to_raw().arcs, blob().to_raw().arcs);
}

TEST(EdgeList, Errors) {
  EXPECT_THROW(parse_edge_list(""), ValidationError);
  EXPECT_THROW(parse_edge_list("# nothing\n\n"), ValidationError);
  EXPECT_THROW(parse_edge_list("rho x y\n"), ParseError);
  EXPECT_THROW(parse_edge_list("rho\n"), ParseError);
}

TEST(EdgeList, SerializeUsesTopologicalNames) {
  EXPECT_EQ(serialize_edge_list(blob()),
            "rho t0\nt0 b\nt0 u\nu v\nu w\nv w\nv r\nw r\nr a\n");
  // unnamed internal vertices get topological names
  const PhyloNetwork anon = parse_enewick("((x,(y,z)));");
  EXPECT_EQ(serialize_edge_list(anon), "n0 n1\nn1 x\nn1 n2\nn2 y\nn2 z\n");
}

TEST(Sniff, ByTrailingSemicolon) {
  EXPECT_EQ(sniff_format("((x,y)p);\n"), NetworkFormat::kENewick);
  EXPECT_EQ(sniff_format("rho x\n"), NetworkFormat::kEdgeList);
}

TEST(RoundTrip, GeneratedNetworks) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    PhyloNetwork net = random_linked(2 + rng() % 11, rng() % 7, rng);
    if (i % 2 == 1) {
      try {
        net = generate({.leaves = 2 + rng() % 10, .reticulations = rng() % 4, .seed = rng()})
                  .network;
      } catch (const GenerationError&) {
        continue;  // out of reach at this rate
      }
    }
    const PhyloNetwork via_newick = parse_enewick(serialize_enewick(net));
    const PhyloNetwork via_edges = parse_edge_list(serialize_edge_list(net));
    ASSERT_TRUE(isomorphic(via_newick, net)) << serialize_enewick(net);
    ASSERT_TRUE(isomorphic(via_edges, net)) << serialize_edge_list(net);
  }
}

TEST(Lp, BlobBytes) {
  const std::string expected =
      "\\ orchard distance model, big-M = 8\n"
      "Minimize\n"
      " obj: h_v5 + h_v6\n"
      "Subject To\n"
      " c1_5: x_a4 + x_a5 - h_v5 <= 1\n"
      " c1_6: x_a6 + x_a7 - h_v6 <= 1\n"
      " c2_4: x_a5 + x_a6 >= 1\n"
      " c2_5: x_a7 >= 1\n"
      " c3_5: x_a4 + x_a5 >= 1\n"
      " c3_6: x_a6 + x_a7 >= 1\n"
      " c4_0_1: l_v0 - l_v1 <= 0\n"
      " c4_1_2: l_v1 - l_v2 <= 0\n"
      " c4_1_3: l_v1 - l_v3 <= 0\n"
      " c4_3_4: l_v3 - l_v4 <= 0\n"
      " c4_3_5: l_v3 - l_v5 <= 0\n"
      " c4_4_5: l_v4 - l_v5 <= 0\n"
      " c4_4_6: l_v4 - l_v6 <= 0\n"
      " c4_5_6: l_v5 - l_v6 <= 0\n"
      " c4_6_7: l_v6 - l_v7 <= 0\n"
      " c5_0_1: l_v0 - l_v1 <= -1\n"
      " c5_1_2: l_v1 - l_v2 <= -1\n"
      " c5_1_3: l_v1 - l_v3 <= -1\n"
      " c5_3_4: l_v3 - l_v4 <= -1\n"
      " c5_6_7: l_v6 - l_v7 <= -1\n"
      " c6_3_5: l_v3 - l_v5 + 8 x_a4 <= 7\n"
      " c6_4_5: l_v4 - l_v5 + 8 x_a5 <= 7\n"
      " c6_4_6: l_v4 - l_v6 + 8 x_a6 <= 7\n"
      " c6_5_6: l_v5 - l_v6 + 8 x_a7 <= 7\n"
      " c7_3_5: l_v3 - l_v5 + 8 x_a4 >= 0\n"
      " c7_4_5: l_v4 - l_v5 + 8 x_a5 >= 0\n"
      " c7_4_6: l_v4 - l_v6 + 8 x_a6 >= 0\n"
      " c7_5_6: l_v5 - l_v6 + 8 x_a7 >= 0\n"
      "Bounds\n"
      " l_v0 >= 0\n l_v1 >= 0\n l_v2 >= 0\n l_v3 >= 0\n"
      " l_v4 >= 0\n l_v5 >= 0\n l_v6 >= 0\n l_v7 >= 0\n"
      "Binaries\n"
      " x_a4\n x_a5\n x_a6\n x_a7\n h_v5\n h_v6\n"
      "General\n"
      "End\n";
  const std::string text = write_lp(build_milp(blob()));
  EXPECT_EQ(text, expected);
  EXPECT_EQ(write_lp(build_milp(blob())), text);

  const LpCounts c = count_lp(text);
  EXPECT_EQ(c.x_vars, 4u);
  EXPECT_EQ(c.h_vars, 2u);
  EXPECT_EQ(c.l_vars, 8u);
}

TEST(Lp, TreeHasNoBinaries) {
  const PhyloNetwork tree = from_arcs({{"rho", "p"}, {"p", "x"}, {"p", "y"}});
  const std::string text = write_lp(build_milp(tree));
  EXPECT_NE(text.find(" obj: 0\n"), std::string::npos);
  EXPECT_NE(text.find("Binaries\nGeneral\n"), std::string::npos);
  EXPECT_EQ(count_lp(text).binaries, 0u);
}

TEST(Lp, SingleLeaf) {
  const LpCounts c = count_lp(write_lp(build_milp(from_arcs({{"rho", "x"}}))));
  // the root carries a label as well as the leaf
  EXPECT_EQ(c.l_vars, 2u);
  for (int f : {1, 2, 3, 6, 7}) EXPECT_EQ(c.family.count(f), 0u) << f;
  EXPECT_EQ(c.family.at(4), 1u);
  EXPECT_EQ(c.family.at(5), 1u);
}

TEST(Report, SchemaChecks) {
  Json ok = {{"is_orchard", false}, {"l_tc", 2}, {"l_tb", 0}, {"l_or", 1},
             {"additions", Json::array({{{"arc", 6}, {"label", "z1"}}})},
             {"labelling", {{"rho", 0}, {"a", 5}}},
             {"timings", {{"or", 0.01}}}};
  EXPECT_FALSE(report_violation(ok));

  Json bad = ok;
  bad["l_or"] = 3;
  EXPECT_TRUE(report_violation(bad));  // exceeds l_tc and disagrees with additions
  bad = ok;
  bad["l_tb"] = 2;
  EXPECT_EQ(*report_violation(bad), "l_tb exceeds l_or");
  bad = ok;
  bad["is_orchard"] = "no";
  EXPECT_TRUE(report_violation(bad));
  bad = ok;
  bad["labelling"]["a"] = 1.5;
  EXPECT_TRUE(report_violation(bad));
  EXPECT_TRUE(report_violation(Json::array()));
}

TEST(Report, CertificateJsonRoundTrips) {
  const PhyloNetwork net = blob();
  const SolveResult result = solve_bnb(net);
  Json doc = {{"l_or", result.l_or},
              {"additions", additions_json(net, result.additions)},
              {"labelling", labelling_json(net, result.labelling)}};
  const Json back = Json::parse(doc.dump());
  EXPECT_FALSE(report_violation(back));
  EXPECT_EQ(back["additions"][0]["tail"], "v");
  EXPECT_EQ(back["additions"][0]["head"], "r");
  EXPECT_EQ(back["labelling"].size(), net.num_vertices());
}

}  // namespace
}  // namespace orchardist
