#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graph_oracle.hpp"
#include "simll/graph.hpp"
#include "test_util.hpp"

using namespace simll;

TEST_CASE("c17 graph layout") {
  const auto g = to_graph(testutil::load("c17"));
  CHECK(g.node_count() == 11);
  CHECK(g.link_count() == 12);
  CHECK(g.name(0) == "N1");
  CHECK(g.feature(0) == kInputFeature);
  CHECK(g.name(5) == "N10");
  CHECK(g.feature(5) == "NAND");
  CHECK(g.is_primary_output(g.id("N22")));
  CHECK_FALSE(g.is_primary_output(g.id("N10")));
  CHECK(g.fanout(g.id("N11")) == 2);
  CHECK(g.fanout(g.id("N3")) == 2);
  CHECK(g.link_name(g.link(0)) == "N1->N10");
  CHECK_THROWS_AS(g.id("nope"), std::out_of_range);
  CHECK_FALSE(g.find("nope").has_value());
}

TEST_CASE("key inputs come after primary inputs") {
  const auto n = parse_bench("INPUT(a)\nINPUT(keyinput0)\nINPUT(b)\nOUTPUT(y)\nm = MUX(keyinput0, a, b)\ny = NOT(m)\n");
  const auto g = to_graph(n);
  CHECK(g.name(0) == "a");
  CHECK(g.name(1) == "b");
  CHECK(g.name(2) == "keyinput0");
  CHECK(g.name(3) == "m");
}

TEST_CASE("undirected neighbours of c17 N11") {
  const auto g = to_graph(testutil::load("c17"));
  CHECK(undirected_neighbors(g, "N11") == std::vector<std::string>{"N3", "N6", "N16", "N19"});
  CHECK(undirected_neighbors(g, "N22") == std::vector<std::string>{"N10", "N16"});
  CHECK_THROWS_AS(undirected_neighbors(g, "zz"), std::out_of_range);
}

TEST_CASE("a gate reading one net twice has it once as a neighbour") {
  const auto n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, a)\n");
  const auto g = to_graph(n);
  CHECK(g.link_count() == 2);
  CHECK(g.neighbors(g.id("y")).size() == 1);
}

TEST_CASE("BFS distances match Floyd-Warshall") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 5 + rng() % 25, 3);
    const auto d = oracle::floyd_warshall(oracle::adjacency(g));
    for (NodeId v = 0; v < g.node_count(); ++v) {
      for (std::uint32_t hops : {1u, 2u, 3u}) {
        const auto got = bfs_distances(g, v, hops);
        for (NodeId w = 0; w < g.node_count(); ++w) {
          if (d[v][w] <= static_cast<int>(hops)) {
            REQUIRE(got.count(w));
            CHECK(got.at(w) == static_cast<std::uint32_t>(d[v][w]));
          } else {
            CHECK_FALSE(got.count(w));
          }
        }
      }
    }
  }
}

TEST_CASE("directed reachability") {
  const auto g = to_graph(testutil::load("c17"));
  CHECK(reaches(g, g.id("N3"), g.id("N23")));
  CHECK(reaches(g, g.id("N10"), g.id("N10")));
  CHECK_FALSE(reaches(g, g.id("N22"), g.id("N3")));
  CHECK_FALSE(reaches(g, g.id("N1"), g.id("N23")));
}

TEST_CASE("DRNL labels equal the enumerated ordering for distances up to 20") {
  for (int du = 1; du <= 20; ++du)
    for (int dv = 1; du + dv <= 20; ++dv)
      CHECK(drnl_label(du, dv) == static_cast<std::uint32_t>(oracle::drnl_enumerated(du, dv)));
  CHECK(drnl_label(std::nullopt, 3) == 0);
  CHECK(drnl_label(2, std::nullopt) == 0);
}

TEST_CASE("DRNL labels equal direct formula evaluation for d up to 20") {
  for (int du = 0; du <= 20; ++du) {
    for (int dv = 0; du + dv <= 20; ++dv) {
      const int d = du + dv;
      const int expect = 1 + std::min(du, dv) + (d / 2) * ((d / 2) + (d % 2) - 1);
      CHECK(drnl_label(du, dv) == static_cast<std::uint32_t>(expect));
    }
  }
  CHECK(drnl_label(0, 1) == 1);
}

TEST_CASE("DRNL labels do not decrease with min distance at fixed d") {
  for (std::uint32_t d = 2; d <= 20; ++d)
    for (std::uint32_t m = 1; m + 1 <= d / 2; ++m) CHECK(drnl_label(m, d - m) <= drnl_label(m + 1, d - m - 1));
}

TEST_CASE("small DRNL values") {
  CHECK(drnl_label(1, 1) == 2);
  CHECK(drnl_label(1, 2) == 3);
  CHECK(drnl_label(2, 1) == 3);
  CHECK(drnl_label(1, 3) == 4);
  CHECK(drnl_label(2, 2) == 5);
}

TEST_CASE("enclosing subgraph of c17 N11->N16") {
  const auto g = to_graph(testutil::load("c17"));
  const auto sg = extract_enclosing_subgraph(g, g.id("N11"), g.id("N16"), 1);
  std::vector<std::string> names;
  for (auto v : sg.nodes) names.push_back(g.name(v));
  CHECK(names == std::vector<std::string>{"N2", "N3", "N6", "N11", "N16", "N19", "N22", "N23"});
  CHECK(sg.labels[sg.local_u] == 1);
  CHECK(sg.labels[sg.local_v] == 1);
  // With the target link dropped, N3 is 1 hop from N11 and 4 hops from N16
  // (N16-N23-N19-N11-N3).
  const auto n3 = std::find(sg.nodes.begin(), sg.nodes.end(), g.id("N3")) - sg.nodes.begin();
  CHECK(sg.labels[n3] == drnl_label(1, 4));
  CHECK(sg.labels[n3] == 6);
  const auto n2 = std::find(sg.nodes.begin(), sg.nodes.end(), g.id("N2")) - sg.nodes.begin();
  CHECK(sg.labels[n2] == 6);
  const auto u_adj = sg.adjacency[sg.local_u];
  CHECK(std::find(u_adj.begin(), u_adj.end(), sg.local_v) == u_adj.end());
}

TEST_CASE("keeping the target link changes the labels") {
  const auto g = to_graph(testutil::load("c17"));
  const auto sg = extract_enclosing_subgraph(g, g.id("N11"), g.id("N16"), 1, SubgraphOptions{false});
  const auto n3 = std::find(sg.nodes.begin(), sg.nodes.end(), g.id("N3")) - sg.nodes.begin();
  CHECK(sg.labels[n3] == drnl_label(1, 2));
}

TEST_CASE("enclosing subgraph labels match the brute-force reference") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_graph(rng, 6 + rng() % 24, 3);
    const auto& l = g.link(rng() % g.link_count());
    for (std::uint32_t hops : {1u, 2u, 3u}) {
      const auto sg = extract_enclosing_subgraph(g, l.source, l.target, hops);
      const auto full = oracle::floyd_warshall(oracle::adjacency(g));
      std::vector<NodeId> members;
      for (NodeId x = 0; x < g.node_count(); ++x)
        if (std::min(full[l.source][x], full[l.target][x]) <= static_cast<int>(hops)) members.push_back(x);
      REQUIRE(sg.nodes == members);
      const auto cut = oracle::adjacency(g, l.source, l.target);
      std::vector<std::vector<bool>> sub(members.size(), std::vector<bool>(members.size()));
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j) sub[i][j] = cut[members[i]][members[j]];
      const auto d = oracle::floyd_warshall(sub);
      for (std::uint32_t i = 0; i < members.size(); ++i) {
        int expect;
        if (i == sg.local_u || i == sg.local_v) expect = 1;
        else if (d[sg.local_u][i] >= oracle::kInf || d[sg.local_v][i] >= oracle::kInf) expect = 0;
        else expect = oracle::drnl_enumerated(d[sg.local_u][i], d[sg.local_v][i]);
        CHECK(sg.labels[i] == static_cast<std::uint32_t>(expect));
      }
    }
  }
}

TEST_CASE("subgraph of a non-edge and bad endpoints") {
  const auto g = to_graph(testutil::load("c17"));
  const auto sg = extract_enclosing_subgraph(g, g.id("N1"), g.id("N7"), 2);
  CHECK(sg.labels[sg.local_u] == 1);
  CHECK(sg.labels[sg.local_v] == 1);
  CHECK_THROWS_AS(extract_enclosing_subgraph(g, 0, 99, 2), std::out_of_range);
}

TEST_CASE("edge list dump") {
  const auto g = to_graph(testutil::load("c17"));
  const auto sg = extract_enclosing_subgraph(g, g.id("N10"), g.id("N22"), 1);
  const auto text = to_edge_list(g, sg);
  CHECK(text.find("# N10 1\n") != std::string::npos);
  CHECK(text.find("N1 N10\n") != std::string::npos);
  CHECK(text.find("N10 N22\n") == std::string::npos);
}

TEST_CASE("path t-u-v-w around u-v") {
  const CircuitGraph g({"t", "u", "v", "w"}, {"IN", "NOT", "NOT", "NOT"}, {{0, 1, 0}, {1, 2, 0}, {2, 3, 0}});
  const auto sg = extract_enclosing_subgraph(g, 1, 2, 1);
  CHECK(sg.nodes == std::vector<NodeId>{0, 1, 2, 3});
  CHECK(sg.labels == std::vector<std::uint32_t>{0, 1, 1, 0});
  const auto kept = extract_enclosing_subgraph(g, 1, 2, 1, SubgraphOptions{false});
  CHECK(kept.labels == std::vector<std::uint32_t>{3, 1, 1, 3});
}

TEST_CASE("node adjacent to both targets gets label 2") {
  const CircuitGraph g({"u", "v", "x"}, {"IN", "IN", "AND"}, {{0, 2, 0}, {1, 2, 1}});
  const auto sg = extract_enclosing_subgraph(g, 0, 1, 2);
  CHECK(sg.labels == std::vector<std::uint32_t>{1, 1, 2});
}
