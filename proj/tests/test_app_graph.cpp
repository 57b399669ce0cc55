#include <doctest.h>

#include <algorithm>
#include <set>

#include "dagscale/app_graph.hpp"
#include "dagscale/errors.hpp"
#include "oracles.hpp"

using namespace dagscale;

namespace {

// The five-function example app: f1 -> {f2, f3}, f2 -> {f4, f5}, all
// sequential, f1 and f5 entrypoints.
app_graph five_node_app() {
  return app_graph::build(
      {
          {"f1", 90.0, true},
          {"f2", std::nullopt, false},
          {"f3", std::nullopt, false},
          {"f4", std::nullopt, false},
          {"f5", std::nullopt, true},
      },
      {
          {"f1", "f2", 1, 1},
          {"f1", "f3", 2, 1},
          {"f2", "f4", 1, 1},
          {"f2", "f5", 2, 1},
      });
}

// Six functions with a parallel pair and multipliers: f1 calls f2 twice
// sequentially and {f3, f4} once in parallel; f2 calls f5 once and f6 twice,
// both sequential.
app_graph six_node_app() {
  return app_graph::build(
      {
          {"f1", 100.0, true},
          {"f2", std::nullopt, false},
          {"f3", std::nullopt, false},
          {"f4", std::nullopt, false},
          {"f5", std::nullopt, false},
          {"f6", std::nullopt, false},
      },
      {
          {"f1", "f2", 1, 2},
          {"f1", "f3", 2, 1},
          {"f1", "f4", 2, 1},
          {"f2", "f5", 1, 1},
          {"f2", "f6", 2, 2},
      });
}

}  // namespace

TEST_CASE("build accepts the five-node example") {
  auto g = five_node_app();
  CHECK(g.size() == 5);
  CHECK(g.entrypoint_names() == std::vector<std::string>{"f1", "f5"});
}

TEST_CASE("build accepts a single-node app") {
  auto g = app_graph::build({{"only", 10.0, true}}, {});
  CHECK(g.size() == 1);
  CHECK(g.topological_order() == std::vector<std::string>{"only"});
  CHECK(g.is_leaf("only"));
}

TEST_CASE("build rejects a two-cycle") {
  CHECK_THROWS_WITH_AS(app_graph::build({{"f1", 10.0, true}, {"f2", std::nullopt, false}},
                                        {{"f1", "f2", 1, 1}, {"f2", "f1", 1, 1}}),
                       doctest::Contains("CycleDetected"), error);
}

TEST_CASE("build rejects a self-loop as a cycle") {
  CHECK_THROWS_WITH_AS(app_graph::build({{"f1", 10.0, true}}, {{"f1", "f1", 1, 1}}),
                       doctest::Contains("CycleDetected"), error);
}

TEST_CASE("build names the offending cases") {
  CHECK_THROWS_WITH_AS(app_graph::build({{"f1", 10.0, true}}, {{"f1", "ghost", 1, 1}}),
                       doctest::Contains("UnknownFunction"), error);
  CHECK_THROWS_WITH_AS(app_graph::build({{"f1", 10.0, true}, {"f1", 20.0, true}}, {}),
                       doctest::Contains("DuplicateName"), error);
  // entrypoint without callers and without SLA
  CHECK_THROWS_WITH_AS(app_graph::build({{"f1", std::nullopt, true}}, {}),
                       doctest::Contains("MissingSla"), error);
  // non-entrypoint nobody calls
  CHECK_THROWS_WITH_AS(
      app_graph::build({{"f1", 10.0, true}, {"dead", std::nullopt, false}}, {}),
      doctest::Contains("UnreachableFunction"), error);
  CHECK_THROWS_WITH_AS(app_graph::build({{"f1", 10.0, true}, {"f2", std::nullopt, false}},
                                        {{"f1", "f2", 1, 0}}),
                       doctest::Contains("multiplier"), error);
}

TEST_CASE("entrypoint with callers may omit its SLA") {
  auto g = app_graph::build({{"f1", 90.0, true}, {"f5", std::nullopt, true}},
                            {{"f1", "f5", 1, 1}});
  CHECK(g.function("f5").entrypoint);
  CHECK_FALSE(g.function("f5").sla_ms.has_value());
}

TEST_CASE("topological order is lexicographic-stable and respects edges") {
  CHECK(five_node_app().topological_order() ==
        std::vector<std::string>{"f1", "f2", "f3", "f4", "f5"});

  auto chain = app_graph::build(
      {{"f1", 5.0, true}, {"f2", std::nullopt, false}, {"f3", std::nullopt, false}},
      {{"f1", "f2", 1, 1}, {"f2", "f3", 1, 1}});
  CHECK(chain.topological_order() == std::vector<std::string>{"f1", "f2", "f3"});
}

TEST_CASE("invocation groups partition out-edges by group id") {
  auto g = six_node_app();

  auto f1_groups = g.invocation_groups("f1");
  REQUIRE(f1_groups.size() == 2);
  CHECK(f1_groups[0].group_id == 1);
  CHECK_FALSE(f1_groups[0].parallel());
  REQUIRE(f1_groups[0].members.size() == 1);
  CHECK(f1_groups[0].members[0].child == "f2");
  CHECK(f1_groups[0].members[0].multiplier == 2);
  CHECK(f1_groups[1].parallel());
  REQUIRE(f1_groups[1].members.size() == 2);
  CHECK(f1_groups[1].members[0].child == "f3");
  CHECK(f1_groups[1].members[1].child == "f4");

  // f2's two singleton groups are sequential invocations.
  auto f2_groups = g.invocation_groups("f2");
  REQUIRE(f2_groups.size() == 2);
  CHECK_FALSE(f2_groups[0].parallel());
  CHECK_FALSE(f2_groups[1].parallel());
  CHECK(f2_groups[0].members[0].child == "f5");
  CHECK(f2_groups[1].members[0].child == "f6");
  CHECK(f2_groups[1].members[0].multiplier == 2);

  CHECK(g.invocation_groups("f6").empty());
}

TEST_CASE("incoming edges") {
  auto g = five_node_app();
  auto in_f5 = g.incoming_edges("f5");
  REQUIRE(in_f5.size() == 1);
  CHECK(in_f5[0].source == "f2");

  CHECK(g.incoming_edges("f1").empty());

  auto diamond = app_graph::build(
      {{"f1", 5.0, true}, {"f2", 5.0, true}, {"f3", std::nullopt, false}},
      {{"f1", "f3", 1, 1}, {"f2", "f3", 1, 1}});
  CHECK(diamond.incoming_edges("f3").size() == 2);

  CHECK_THROWS_WITH_AS(g.incoming_edges("nope"), doctest::Contains("UnknownFunction"), error);
}

TEST_CASE("multigraph: parallel and sequential edges between the same pair") {
  auto g = app_graph::build({{"f1", 10.0, true}, {"f2", std::nullopt, false}},
                            {{"f1", "f2", 1, 1}, {"f1", "f2", 2, 3}});
  CHECK(g.edges().size() == 2);
  CHECK(g.invocation_groups("f1").size() == 2);
}

TEST_CASE("property: groups cover the out-edge set exactly once") {
  splitmix_sequence rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto raw = testing::make_random_dag(rng, 10);
    auto g = app_graph::build(raw.functions, raw.edges);

    std::size_t total_members = 0;
    for (const auto& f : g.functions()) {
      for (const auto& group : g.invocation_groups(f.name)) total_members += group.members.size();
    }
    CHECK(total_members == g.edges().size());

    // Topological order is a permutation that respects every edge.
    const auto& order = g.topological_order();
    CHECK(order.size() == g.size());
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    for (const auto& e : g.edges()) CHECK(position.at(e.source) < position.at(e.target));
  }
}

TEST_CASE("property: injected cycles are always rejected") {
  splitmix_sequence rng(77);
  int rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto raw = testing::make_random_dag(rng, 8);
    if (raw.edges.empty()) continue;
    // Close a cycle: add the reverse of a random edge (as its own group).
    const auto& pick = raw.edges[rng.next_below(raw.edges.size())];
    raw.edges.push_back({pick.target, pick.source, 99, 1});
    try {
      app_graph::build(raw.functions, raw.edges);
      FAIL("cycle not detected");
    } catch (const error& e) {
      CHECK(e.code() == errc::cycle_detected);
      ++rejected;
    }
  }
  CHECK(rejected > 100);  // most random graphs have at least one edge
}
