#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace bikeshare;

TEST_CASE("decode splits the permutation into routes plus the unvisited pool") {
  // 9 stations, 3 trucks: routes are consecutive slices, remainder unvisited.
  const Genome g{{2, 6, 3, 0, 5, 1, 4, 7, 8}, {3, 2, 3, 1}};
  const RoutePlan plan = decode(g);
  REQUIRE(plan.routes.size() == 3);
  REQUIRE(plan.routes[0] == std::vector<int>{2, 6, 3});
  REQUIRE(plan.routes[1] == std::vector<int>{0, 5});
  REQUIRE(plan.routes[2] == std::vector<int>{1, 4, 7});
  REQUIRE(plan.unvisited == std::vector<int>{8});
  REQUIRE(plan.trucks_used() == 3);
}

TEST_CASE("all-unvisited genome decodes to the empty plan") {
  const Genome g{{0, 1, 2, 3}, {0, 0, 4}};
  const RoutePlan plan = decode(g);
  REQUIRE(plan.routes[0].empty());
  REQUIRE(plan.routes[1].empty());
  REQUIRE(plan.unvisited.size() == 4);
  REQUIRE(plan.trucks_used() == 0);
}

TEST_CASE("encode inverts decode on random genomes") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 1 + static_cast<int>(rng.index(12));
    const int T = 1 + static_cast<int>(rng.index(4));
    const Genome g = random_genome(rng, S, T);
    REQUIRE(genome_is_valid(g));
    const RoutePlan plan = decode(g);
    REQUIRE(plan_is_valid(plan, S));
    REQUIRE(encode(plan) == g);
  }
}

TEST_CASE("decode rejects corrupt genomes") {
  REQUIRE_THROWS_AS(decode(Genome{{0, 0, 1}, {2, 1}}), Error);        // repeated id
  REQUIRE_THROWS_AS(decode(Genome{{0, 1, 2}, {1, 1}}), Error);        // bad segment sum
  REQUIRE_THROWS_AS(decode(Genome{{0, 1, 2}, {4, -1}}), Error);       // negative length
  REQUIRE_THROWS_AS(decode(Genome{{0, 1, 5}, {2, 1}}), Error);        // id out of range
}

TEST_CASE("route_distance sums depot legs and hops") {
  Instance inst = oracle::flat_instance({{5, 10}, {5, 10}, {5, 10}}, 1, 10);
  inst.distances = {{0, 4, 2, 9}, {4, 0, 1, 3}, {2, 1, 0, 6}, {9, 3, 6, 0}};
  REQUIRE(route_distance({}, inst) == 0.0);
  REQUIRE(route_distance({0}, inst) == 8.0);  // out-and-back
  REQUIRE(route_distance({0, 1, 2}, inst) == 4.0 + 1.0 + 6.0 + 9.0);
}

TEST_CASE("route_distance is reversal-invariant under symmetric distances") {
  const Instance inst = generate_instance(14, 6, 1, 10);
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    Genome g = random_genome(rng, 6, 1);
    std::vector<int> route(g.perm.begin(), g.perm.begin() + g.seg_lengths[0]);
    std::vector<int> rev(route.rbegin(), route.rend());
    REQUIRE_THAT(route_distance(route, inst),
                 Catch::Matchers::WithinAbs(route_distance(rev, inst), 1e-9));
  }
}

TEST_CASE("apply_relocate moves one station between segments") {
  SECTION("emptying a single-station route into the unvisited pool") {
    const Genome g{{4, 0, 1, 2, 3}, {1, 2, 2}};
    const Genome moved = apply_relocate(g, {0, 2, 0, 2});
    REQUIRE(moved.seg_lengths == std::vector<int>{0, 2, 3});
    const RoutePlan plan = decode(moved);
    REQUIRE(plan.routes[0].empty());
    REQUIRE(plan.unvisited == std::vector<int>{2, 3, 4});
  }
  SECTION("relocate then inverse relocate restores the genome") {
    const Genome g{{3, 1, 4, 0, 2}, {2, 2, 1}};
    const Genome there = apply_relocate(g, {0, 1, 1, 0});
    const Genome back = apply_relocate(there, {1, 0, 0, 1});
    REQUIRE(back == g);
  }
  SECTION("forward-segment insertion accounts for the removed element") {
    const Genome g{{0, 1, 2, 3}, {2, 2, 0}};
    const Genome moved = apply_relocate(g, {0, 1, 0, 2});
    REQUIRE(moved.perm == std::vector<int>{1, 2, 3, 0});
    REQUIRE(moved.seg_lengths == std::vector<int>{1, 3, 0});
  }
  SECTION("invalid moves are rejected") {
    const Genome g{{0, 1, 2}, {2, 1, 0}};
    REQUIRE_THROWS_AS(apply_relocate(g, {0, 0, 0, 0}), Error);  // same segment
    REQUIRE_THROWS_AS(apply_relocate(g, {2, 0, 0, 0}), Error);  // empty source
    REQUIRE_THROWS_AS(apply_relocate(g, {0, 1, 2, 0}), Error);  // src_pos out of range
    REQUIRE_THROWS_AS(apply_relocate(g, {0, 1, 0, 2}), Error);  // ins_pos out of range
  }
}

TEST_CASE("random relocations keep genomes valid") {
  Rng rng(31);
  for (int trial = 0; trial < 10000; ++trial) {
    const int S = 2 + static_cast<int>(rng.index(10));
    const int T = 1 + static_cast<int>(rng.index(3));
    Genome g = random_genome(rng, S, T);
    std::vector<int> nonempty;
    for (int k = 0; k <= T; ++k)
      if (g.seg_lengths[k] > 0) nonempty.push_back(k);
    if (nonempty.empty()) continue;
    RelocateMove m;
    m.src_seg = nonempty[rng.index(nonempty.size())];
    do {
      m.dst_seg = static_cast<int>(rng.index(T + 1));
    } while (m.dst_seg == m.src_seg);
    m.src_pos = static_cast<int>(rng.index(g.seg_lengths[m.src_seg]));
    m.ins_pos = static_cast<int>(rng.index(g.seg_lengths[m.dst_seg] + 1));
    std::vector<int> before = g.perm;
    apply_relocate_inplace(g, m);
    REQUIRE(genome_is_valid(g));
    std::sort(before.begin(), before.end());
    std::vector<int> after = g.perm;
    std::sort(after.begin(), after.end());
    REQUIRE(before == after);
    REQUIRE(plan_is_valid(decode(g), S));
  }
}

TEST_CASE("enumerate_relocations lists every position pair") {
  const Genome g{{0, 1, 2, 3, 4, 5}, {2, 3, 1}};
  SECTION("|src|=2, |dst|=3 gives 8 moves") {
    const auto moves = enumerate_relocations(g, 0, 1);
    REQUIRE(moves.size() == 8);
    for (const RelocateMove& m : moves) REQUIRE_NOTHROW(apply_relocate(g, m));
  }
  SECTION("single-station source into an empty destination gives 1 move") {
    const Genome h{{0, 1}, {1, 0, 1}};
    const auto moves = enumerate_relocations(h, 0, 1);
    REQUIRE(moves.size() == 1);
    REQUIRE(moves[0].src_pos == 0);
    REQUIRE(moves[0].ins_pos == 0);
  }
  SECTION("empty source gives no moves") {
    const Genome h{{0, 1}, {0, 2, 0}};
    REQUIRE(enumerate_relocations(h, 0, 1).empty());
  }
  SECTION("every listed move yields a valid genome") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
      const Genome r = random_genome(rng, 8, 2);
      for (int src = 0; src < 3; ++src)
        for (int dst = 0; dst < 3; ++dst) {
          if (src == dst) continue;
          for (const RelocateMove& m : enumerate_relocations(r, src, dst))
            REQUIRE(genome_is_valid(apply_relocate(r, m)));
        }
    }
  }
}

TEST_CASE("random_genome covers valid genomes with correct composition") {
  Rng rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const int S = 1 + static_cast<int>(rng.index(15));
    const int T = 1 + static_cast<int>(rng.index(5));
    const Genome g = random_genome(rng, S, T);
    REQUIRE(g.station_count() == S);
    REQUIRE(g.truck_count() == T);
    REQUIRE(genome_is_valid(g));
  }
}

TEST_CASE("genome JSON round-trips and validates") {
  const Genome g{{2, 0, 1}, {1, 1, 1}};
  REQUIRE(genome_from_json(genome_to_json(g)) == g);
  REQUIRE_THROWS_AS(genome_from_json(nlohmann::json{{"perm", {0, 0}}, {"segments", {2, 0}}}),
                    Error);
  REQUIRE_THROWS_AS(genome_from_json(nlohmann::json{{"perm", {0, 1}}}), Error);
}
