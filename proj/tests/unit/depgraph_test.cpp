#include <algorithm>
#include <set>

#include "doctest.h"
#include "graph_oracles.hpp"
#include "random_systems.hpp"
#include "slin/depgraph.hpp"
#include "slin/system.hpp"

using namespace slin;

namespace {

PolySystem example1() {
  return parse_system(
      "vars: x1 x2 x3 x4 x5\n"
      "x1' = x2\n"
      "x2' = -x1\n"
      "x3' = x2^2\n"
      "x4' = x3 + x1*x2^2\n"
      "x5' = -x5 + x3^2 + x1^2*x2\n");
}

/// Seven nodes: {1,2,3} with a self-loop on 1 and the cycle 1->2->3->1,
/// {4,5} and {6,7} as two-cycles, plus cross edges 2->5, 3->5, 1->6, 4->7.
Wdg three_component_graph() {
  const auto space = make_space(testing::numbered_names(7, "v"));
  const auto one = Polynomial::constant(space, Rational(1));
  std::map<Wdg::EdgeKey, Polynomial> w;
  for (auto [i, j] : std::vector<std::pair<int, int>>{
           {1, 1}, {1, 2}, {2, 3}, {3, 1}, {4, 5}, {5, 4}, {6, 7}, {7, 6}, {2, 5}, {3, 5}, {1, 6}, {4, 7}}) {
    w.emplace(Wdg::EdgeKey{static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)}, one);
  }
  return Wdg(space, 7, std::move(w));
}

Wdg complete_graph(std::size_t n, bool loops) {
  const auto space = make_space(testing::numbered_names(n));
  std::map<Wdg::EdgeKey, Polynomial> w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (loops || i != j) w.emplace(Wdg::EdgeKey{i, j}, Polynomial::constant(space, Rational(static_cast<long>(i + 2 * j + 1))));
  return Wdg(space, n, std::move(w));
}

void check_decomposition_invariants(const Wdg& g) {
  const auto d = scc_decomposition(g);
  const auto s = build_skeleton(g, d);
  const auto reach = testing::reachability(g);
  const std::size_t n = g.node_count();

  // Partition, and same component iff mutually reachable (strong connectivity plus maximality).
  std::vector<int> seen(n, 0);
  for (std::size_t c = 0; c < d.size(); ++c) {
    REQUIRE_FALSE(d.components[c].empty());
    CHECK(std::is_sorted(d.components[c].begin(), d.components[c].end()));
    for (std::size_t v : d.components[c]) {
      ++seen[v];
      CHECK(d.component_of[v] == c);
    }
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      CHECK((d.component_of[i] == d.component_of[j]) == (reach[i][j] && reach[j][i]));

  // Topological order of the condensation.
  for (const auto& [key, w] : g.weights()) CHECK(d.component_of[key.first] <= d.component_of[key.second]);

  // Skeleton: no self-loops, edges strictly increase depth, layers partition,
  // U0 is exactly the sources, depth is the longest path from a source.
  CHECK(s.node_count == d.size());
  CHECK(s.projection == d.component_of);
  std::vector<std::size_t> indegree(s.node_count, 0);
  for (const auto& [a, b] : s.edges) {
    CHECK(a != b);
    CHECK(s.depth[b] >= s.depth[a] + 1);
    ++indegree[b];
  }
  std::set<std::pair<std::size_t, std::size_t>> expected_edges;
  for (const auto& [key, w] : g.weights()) {
    if (d.component_of[key.first] != d.component_of[key.second])
      expected_edges.emplace(d.component_of[key.first], d.component_of[key.second]);
  }
  CHECK(std::set<std::pair<std::size_t, std::size_t>>(s.edges.begin(), s.edges.end()) == expected_edges);
  std::vector<int> in_layer(s.node_count, 0);
  for (std::size_t m = 0; m < s.layers.size(); ++m) {
    CHECK_FALSE(s.layers[m].empty());
    for (std::size_t u : s.layers[m]) {
      ++in_layer[u];
      CHECK(s.depth[u] == m);
    }
  }
  CHECK(std::all_of(in_layer.begin(), in_layer.end(), [](int k) { return k == 1; }));
  for (std::size_t u = 0; u < s.node_count; ++u) {
    CHECK((s.depth[u] == 0) == (indegree[u] == 0));
    if (s.depth[u] > 0) {
      const bool tight = std::any_of(s.edges.begin(), s.edges.end(), [&](const auto& e) {
        return e.second == u && s.depth[e.first] + 1 == s.depth[u];
      });
      CHECK(tight);
    }
  }

  // Every intra-component edge lies on some simple cycle.
  if (n <= 6) {
    const auto cycles = testing::brute_force_cycles(g);
    for (const auto& [key, w] : g.weights()) {
      if (d.component_of[key.first] != d.component_of[key.second]) continue;
      const bool on_cycle = std::any_of(cycles.begin(), cycles.end(), [&](const auto& c) {
        for (std::size_t k = 0; k + 1 < c.size(); ++k)
          if (c[k] == key.first && c[k + 1] == key.second) return true;
        return false;
      });
      CHECK(on_cycle);
    }
  }
}

}  // namespace

TEST_CASE("dependency graph of the five-variable example") {
  const auto sys = example1();
  const Wdg g = build_wdg(sys);
  CHECK(g.edge_count() == 10);
  const std::map<std::pair<int, int>, std::string> expected{
      {{2, 1}, "1"},      {{1, 2}, "-1"},    {{2, 3}, "2*x2"},    {{3, 4}, "1"},       {{1, 4}, "x2^2"},
      {{2, 4}, "2*x1*x2"}, {{5, 5}, "-1"},   {{3, 5}, "2*x3"},    {{1, 5}, "2*x1*x2"}, {{2, 5}, "x1^2"}};
  for (const auto& [edge, weight] : expected) {
    const auto i = static_cast<std::size_t>(edge.first - 1), j = static_cast<std::size_t>(edge.second - 1);
    REQUIRE(g.has_edge(i, j));
    CHECK(g.weight(i, j).str() == weight);
  }
  CHECK_THROWS_AS(g.weight(0, 0), PreconditionError);

  const auto d = scc_decomposition(g);
  CHECK(d.components == std::vector<std::vector<std::size_t>>{{0, 1}, {2}, {3}, {4}});
  const auto s = build_skeleton(g, d);
  CHECK(s.layers == std::vector<std::vector<std::size_t>>{{0}, {1}, {2, 3}});
  CHECK(s.max_depth() == 2);
  check_decomposition_invariants(g);

  const std::size_t v1v2v1[] = {0, 1, 0};
  const std::size_t v5v5[] = {4, 4};
  const std::size_t v3[] = {2};
  CHECK(walk_weight(g, v1v2v1).str() == "-1");
  CHECK(walk_weight(g, v5v5).str() == "-1");
  CHECK(walk_weight(g, v3).str() == "1");

  const auto report = check_condition(g, d);
  CHECK(report.pass);
  CHECK(report.witnesses.empty());

  const auto cycles = enumerate_cycle_products(g);
  REQUIRE(cycles.size() == 2);
  CHECK(cycles[0].cycle == std::vector<std::size_t>{0, 1, 0});
  CHECK(cycles[0].product.str() == "-1");
  CHECK(cycles[1].cycle == std::vector<std::size_t>{4, 4});
  CHECK(cycles[1].product.str() == "-1");
}

TEST_CASE("small graphs") {
  const auto sq = parse_system("vars: x\nx' = x^2\n");
  const Wdg g = build_wdg(sq);
  CHECK(g.edge_count() == 1);
  CHECK(g.weight(0, 0).str() == "2*x");
  const auto report = check_condition(g, scc_decomposition(g));
  CHECK_FALSE(report.pass);
  REQUIRE(report.witnesses.size() == 1);
  CHECK(report.witnesses[0].from == 0);
  CHECK(report.witnesses[0].to == 0);
  CHECK(report.witnesses[0].weight == "2*x");

  const auto lonely = build_wdg(parse_system("vars: x\nx' = 3\n"));
  const auto d = scc_decomposition(lonely);
  CHECK(d.components == std::vector<std::vector<std::size_t>>{{0}});
  CHECK(enumerate_cycle_products(lonely).empty());

  const auto strongly = build_wdg(parse_system("vars: a b c\na' = c\nb' = a\nc' = b + 2\n"));
  const auto s = build_skeleton(strongly, scc_decomposition(strongly));
  CHECK(s.node_count == 1);
  CHECK(s.depth == std::vector<std::size_t>{0});
  CHECK(s.max_depth() == 0);

  const auto chain = build_wdg(parse_system("vars: a b c\na' = 1\nb' = a^2\nc' = b*a\n"));
  CHECK(enumerate_cycle_products(chain).empty());
}

TEST_CASE("linear systems: edges follow the transposed nonzero pattern") {
  testing::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(testing::uniform_int(rng, 1, 5));
    const auto space = make_space(testing::numbered_names(n));
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    std::vector<Polynomial> rhs;
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial f = Polynomial::constant(space, testing::random_rational(rng));
      for (std::size_t i = 0; i < n; ++i) {
        if (testing::coin(rng, 0.5)) a[j][i] = testing::random_rational(rng);
        f.add_term(a[j][i], Monomial::variable(n, i));
      }
      rhs.push_back(f);
    }
    const Wdg g = build_wdg(PolySystem(space, rhs));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(g.has_edge(i, j) == !a[j][i].is_zero());
        if (g.has_edge(i, j)) CHECK(g.weight(i, j) == Polynomial::constant(space, a[j][i]));
      }
    }
    CHECK(check_condition(g, scc_decomposition(g)).pass);
  }
}

TEST_CASE("three strongly connected components") {
  const Wdg g = three_component_graph();
  const auto d = scc_decomposition(g);
  CHECK(d.components == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4}, {5, 6}});
  const auto s = build_skeleton(g, d);
  CHECK(s.edges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(s.layers == std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
  check_decomposition_invariants(g);

  const std::string dot = skeleton_to_dot(g, d, s);
  CHECK(dot.find("u_1") != std::string::npos);
  CHECK(dot.find("v1, v2, v3") != std::string::npos);
  const std::string wdot = wdg_to_dot(build_wdg(example1()));
  CHECK(wdot.rfind("digraph", 0) == 0);
  CHECK(wdot.find("2*x1*x2") != std::string::npos);
}

TEST_CASE("cycle enumeration on complete digraphs matches the brute-force oracle") {
  const auto with_loops = complete_graph(3, true);
  const auto without = complete_graph(3, false);
  CHECK(enumerate_cycle_products(with_loops).size() == 8);
  CHECK(enumerate_cycle_products(without).size() == 5);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (bool loops : {true, false}) {
      const auto g = complete_graph(n, loops);
      const auto found = enumerate_cycle_products(g);
      std::vector<std::vector<std::size_t>> cycles;
      for (const auto& c : found) {
        cycles.push_back(c.cycle);
        CHECK(c.product == walk_weight(g, c.cycle));
      }
      std::sort(cycles.begin(), cycles.end());
      CHECK(cycles == testing::brute_force_cycles(g));
    }
  }
  CHECK_THROWS(enumerate_cycle_products(complete_graph(9, false)));
}

TEST_CASE("weak components") {
  const auto g = build_wdg(parse_system("vars: a b c d\na' = b\nb' = 1\nc' = d^2\nd' = -d\n"));
  CHECK(weak_components(g) == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
}

TEST_CASE("property: decomposition invariants and condition oracle on random graphs") {
  testing::Rng rng(22);
  for (int trial = 0; trial < 150; ++trial) {
    const Wdg g = testing::random_wdg(rng);
    check_decomposition_invariants(g);
    const auto d = scc_decomposition(g);
    bool all_constant = true;
    for (const auto& c : enumerate_cycle_products(g)) all_constant = all_constant && c.product.is_constant();
    CHECK(check_condition(g, d).pass == all_constant);
  }
}
