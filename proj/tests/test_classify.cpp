#include <random>

#include "classify.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace dtwx;

namespace {

LabeledDataset two_instances() {
  std::vector<TimeSeries> v;
  v.emplace_back(std::vector<double>{0, 0, 0}, "1", "A");
  v.emplace_back(std::vector<double>{5, 5, 5}, "2", "B");
  return LabeledDataset(std::move(v), "toy");
}

}  // namespace

TEST_CASE("1-NN picks the strictly closer class") {
  const auto ds = two_instances();
  const TimeSeries q(std::vector<double>{1, 1, 1});
  CHECK(oracle::brute_dtw(q.values(), ds[0].values()) <
        oracle::brute_dtw(q.values(), ds[1].values()));
  const auto out = classify(ds, q, 1);
  CHECK(out.label == "A");
  CHECK(out.neighbors.size() == 1);
  CHECK(out.neighbors[0].index == 0);
  CHECK(out.neighbors[0].distance == oracle::brute_dtw(q.values(), ds[0].values()));
}

TEST_CASE("a training instance classifies as itself at distance zero") {
  const auto ds = two_instances();
  const auto out = classify(ds, ds[1], 1);
  CHECK(out.label == "B");
  CHECK(out.neighbors[0].distance == 0.0);
}

TEST_CASE("equidistant candidates fall to the lower instance index") {
  std::vector<TimeSeries> v;
  v.emplace_back(std::vector<double>{0, 4}, "1", "A");
  v.emplace_back(std::vector<double>{4, 0}, "2", "B");
  const LabeledDataset ds(std::move(v), "tie");
  const TimeSeries q(std::vector<double>{2, 2});
  const auto out = classify(ds, q, 1);
  CHECK(out.neighbors[0].index == 0);
  CHECK(out.label == "A");
}

TEST_CASE("classification argument validation") {
  const auto ds = two_instances();
  CHECK_THROWS_AS(classify(ds, ds[0], 0), ArgumentError);
  CHECK_THROWS_AS(classify(ds, ds[0], 3), ArgumentError);

  std::vector<TimeSeries> mono;
  mono.emplace_back(std::vector<double>{1}, "1", "A");
  mono.emplace_back(std::vector<double>{2}, "2", "A");
  const LabeledDataset single(std::move(mono), "single");
  CHECK_THROWS_AS(classify(single, ds[0], 1), ArgumentError);
}

TEST_CASE("retained grids agree with the scanning path") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ds = oracle::random_dataset(rng, 8, 12);
    const TimeSeries q(oracle::random_int_series(rng, 2, 12, 0, 4), "q");
    const auto scan = classify(ds, q, 1);
    const auto kept = classify(ds, q, 1, {}, {}, true);
    CHECK(scan.label == kept.label);
    CHECK(scan.neighbors[0].index == kept.neighbors[0].index);
    CHECK(scan.neighbors[0].distance == kept.neighbors[0].distance);
    REQUIRE(kept.forward.size() == ds.size());
    REQUIRE(kept.reversed.size() == ds.size());
    for (size_t i = 0; i < ds.size(); ++i) {
      CHECK(kept.forward[i]->distance() == kept.distances[i]);
      CHECK(kept.forward[i]->direction() == Direction::Forward);
      CHECK(kept.reversed[i]->direction() == Direction::Reversed);
      CHECK(kept.reversed[i]->query_len() == q.size());
    }
  }
}

TEST_CASE("sound bounds never change the answer") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 150; ++trial) {
    const auto ds = oracle::random_dataset(rng, 20, 30);
    const TimeSeries q(oracle::random_real_series(rng, 1, 30), "q");
    const size_t k = std::uniform_int_distribution<size_t>(1, std::min<size_t>(5, ds.size()))(rng);

    // synthetic sound bounds: random fractions of the true distance
    std::vector<double> truth(ds.size());
    for (size_t i = 0; i < ds.size(); ++i) truth[i] = oracle::simple_dtw(q.values(), ds[i].values());
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::vector<double> lb(ds.size());
    for (size_t i = 0; i < ds.size(); ++i) lb[i] = truth[i] * frac(rng);
    BoundProvider bounds;
    bounds.entries.push_back({true, [&lb](size_t i) { return lb[i]; }});

    const auto plain = classify(ds, q, k);
    const auto pruned = classify(ds, q, k, {}, bounds);
    CHECK(plain.label == pruned.label);
    REQUIRE(plain.neighbors.size() == pruned.neighbors.size());
    for (size_t i = 0; i < plain.neighbors.size(); ++i) {
      CHECK(plain.neighbors[i].index == pruned.neighbors[i].index);
      CHECK(plain.neighbors[i].distance == pruned.neighbors[i].distance);
    }
  }
}

TEST_CASE("majority vote matches the naive reference for k in {1,3,5}") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 150; ++trial) {
    const auto ds = oracle::random_dataset(rng, 12, 10);
    const TimeSeries q(oracle::random_int_series(rng, 1, 10, 0, 4), "q");
    for (size_t k : {size_t{1}, size_t{3}, size_t{5}}) {
      if (k > ds.size()) continue;
      CHECK(classify(ds, q, k).label == oracle::naive_classify(ds, q.values(), k));
    }
  }
}

TEST_CASE("classification is deterministic") {
  std::mt19937_64 rng(73);
  const auto ds = oracle::random_dataset(rng, 10, 15);
  const TimeSeries q(oracle::random_real_series(rng, 3, 15), "q");
  const auto a = classify(ds, q, 3);
  const auto b = classify(ds, q, 3);
  CHECK(a.label == b.label);
  REQUIRE(a.neighbors.size() == b.neighbors.size());
  for (size_t i = 0; i < a.neighbors.size(); ++i) {
    CHECK(a.neighbors[i].index == b.neighbors[i].index);
    CHECK(a.neighbors[i].distance == b.neighbors[i].distance);
  }
}

TEST_CASE("triangle repair on constant series clamps to 1") {
  std::vector<TimeSeries> v;
  v.emplace_back(std::vector<double>{0, 0}, "1", "A");
  v.emplace_back(std::vector<double>{1, 1}, "2", "B");
  v.emplace_back(std::vector<double>{3, 3}, "3", "A");
  const LabeledDataset ds(std::move(v), "const");
  const auto repair = estimate_triangle_repair(ds);
  CHECK(repair.distance(0, 1) == 2.0);
  CHECK(repair.distance(1, 2) == 4.0);
  CHECK(repair.distance(0, 2) == 6.0);
  CHECK(repair.stretch == 1.0);
}

TEST_CASE("triangle repair validates input and honours its own inequality") {
  std::vector<TimeSeries> v;
  v.emplace_back(std::vector<double>{0, 0}, "1", "A");
  v.emplace_back(std::vector<double>{1, 1}, "2", "B");
  CHECK_THROWS_AS(estimate_triangle_repair(LabeledDataset(std::move(v), "two")),
                  ArgumentError);

  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ds = oracle::random_dataset(rng, 10, 8);
    if (ds.size() < 3) continue;
    const auto repair = estimate_triangle_repair(ds);
    CHECK(repair.stretch >= 1.0);
    for (size_t x = 0; x < ds.size(); ++x) {
      for (size_t y = 0; y < ds.size(); ++y) {
        for (size_t z = 0; z < ds.size(); ++z) {
          if (x == y || y == z || x == z) continue;
          CHECK(repair.distance(x, z) <=
                repair.stretch * (repair.distance(x, y) + repair.distance(y, z)) + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("sampled stretch estimation stays within the exhaustive one") {
  std::mt19937_64 rng(149);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = oracle::random_dataset(rng, 10, 8);
    if (ds.size() < 3) continue;
    const auto exhaustive = estimate_triangle_repair(ds);
    const auto sampled = estimate_triangle_repair(ds, {}, 200);
    CHECK(sampled.stretch >= 1.0);
    CHECK(sampled.stretch <= exhaustive.stretch);
    CHECK(sampled.pairwise == exhaustive.pairwise);
  }
}

TEST_CASE("heuristic bound entries are ignored unless explicitly allowed") {
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ds = oracle::random_dataset(rng, 12, 12);
    const TimeSeries q(oracle::random_int_series(rng, 2, 12, 0, 4), "q");
    BoundProvider lying;
    lying.entries.push_back({false, [](size_t) { return 1e18; }});  // would prune everyone
    const auto guarded = classify(ds, q, 1, {}, lying);
    const auto plain = classify(ds, q, 1);
    CHECK(guarded.label == plain.label);
    CHECK(guarded.neighbors[0].index == plain.neighbors[0].index);
    CHECK(guarded.stats.bound_prunes == 0);
  }
}

TEST_CASE("exhaustive stretch keeps anchor bounds below in-dataset distances") {
  // When c majorizes all training triples and the query is itself a member,
  // the anchor bound can never price the true nearest neighbour out.
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 25; ++trial) {
    const auto ds = oracle::random_dataset(rng, 12, 8);
    if (ds.size() < 3) continue;
    const auto repair = estimate_triangle_repair(ds);
    for (size_t q = 0; q < ds.size(); ++q) {
      for (size_t a = 0; a < ds.size(); ++a) {
        for (size_t s = 0; s < ds.size(); ++s) {
          if (q == a || a == s || q == s) continue;
          CHECK(repair.anchor_bound(repair.distance(q, a), a, s) <=
                repair.distance(q, s) + 1e-9);
        }
      }
    }
  }
}
