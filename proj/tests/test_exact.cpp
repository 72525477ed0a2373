#include <doctest.h>

#include "helpers.hpp"

using namespace submatch;
using namespace submatch::test;

TEST_CASE("maximum matching small cases") {
  QueryGraph tri = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(mu_exact(tri) == 1);
  CHECK(mu_exact(path_graph(5)) == 2);
  CHECK(mu_exhaustive(path_graph(5)) == 2);
  CHECK(mu_exact(petersen()) == 5);
  CHECK(mu_exhaustive(petersen()) == 5);
}

TEST_CASE("blossom agrees with exhaustive search on random small graphs") {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    Vertex n = 4 + rand_below(rng, 7);  // 4..10
    double p = 0.15 + 0.1 * rand_below(rng, 7);
    QueryGraph g = random_graph(n, p, rng);
    Matching m = max_matching_exact(g);
    CHECK(m.is_valid(g));
    CHECK(m.size() == mu_exhaustive(g));
  }
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(max_matching_exact(QueryGraph(10), 5), SizeCapExceeded);
}

TEST_CASE("static approx matching") {
  // eps = 1 eliminates length-1 augmenting paths: plain maximality
  Rng rng(5);
  QueryGraph g = random_graph(40, 0.2, rng);
  Matching maximal = static_approx_matching(g, 1.0);
  CHECK(maximal.is_valid(g));
  CHECK(2 * maximal.size() >= mu_exact(g));

  Matching p5 = static_approx_matching(path_graph(5), 0.3);
  CHECK(p5.size() == 2);

  for (int trial = 0; trial < 50; ++trial) {
    QueryGraph h = random_graph(64, 0.1 + 0.05 * (trial % 5), rng);
    double eps = 0.34;
    Matching m = static_approx_matching(h, eps);
    CHECK(m.is_valid(h));
    int mu = mu_exact(h);
    CHECK(m.size() * (1.0 + eps) >= static_cast<double>(mu));
    CHECK(m.size() <= mu);
  }
}

TEST_CASE("greedy reference follows the rank order") {
  QueryGraph single = graph_from_edges(2, {{0, 1}});
  Matching ms = gmm_reference(single, EdgePermutation(1));
  CHECK(ms.size() == 1);

  std::uint64_t seed = triangle_seed();
  QueryGraph tri = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  Matching mt = gmm_reference(tri, EdgePermutation(seed));
  CHECK(mt.size() == 1);
  CHECK(mt.mate[0] == 1);
  CHECK(mt.mate[1] == 0);
  CHECK(mt.mate[2] == kNoVertex);
}

TEST_CASE("greedy reference output is maximal") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    QueryGraph g = random_graph(30, 0.15, rng);
    Matching m = gmm_reference(g, EdgePermutation(rng()));
    CHECK(m.is_valid(g));
    for (Vertex u = 0; u < 30; ++u)
      for (Vertex v = u + 1; v < 30; ++v)
        if (g.peek(u, v))
          CHECK_FALSE(m.mate[u] == kNoVertex && m.mate[v] == kNoVertex);
  }
}

TEST_CASE("disjoint short augmenting path counting") {
  QueryGraph pm(12);
  for (Vertex v = 0; v + 1 < 12; v += 2) pm.set_edge(v, v + 1, true);

  // maximum matching: no augmenting path of any length
  std::vector<Vertex> full(12);
  for (Vertex v = 0; v < 12; v += 2) {
    full[v] = v + 1;
    full[v + 1] = v;
  }
  for (int k = 0; k <= 3; ++k)
    CHECK(count_disjoint_short_aug_paths(pm, full, k) == 0);

  // empty matching on disjoint edges: every edge is a length-1 path
  std::vector<Vertex> none(12, kNoVertex);
  CHECK(count_disjoint_short_aug_paths(pm, none, 0) == 6);

  // planted length-3 instance: path 0-1-2-3 with (1,2) matched
  QueryGraph p = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  std::vector<Vertex> mate(4, kNoVertex);
  mate[1] = 2;
  mate[2] = 1;
  CHECK(count_disjoint_short_aug_paths(p, mate, 1) == 1);
  CHECK(count_disjoint_short_aug_paths(p, mate, 0) == 0);
}
