#include <doctest.h>

#include <limits>

#include "posekit/impute.hpp"
#include "posekit/transfer.hpp"
#include "support/oracles.hpp"
#include "support/random_poses.hpp"

using namespace posekit;
using namespace posekit::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PoseFrame base_frame() {
  PoseFrame f;
  for (int j = 0; j < kNumJoints; ++j) f.set(j, {10.0, 10.0, 1.0});
  return f;
}

// Identical to base_frame except joint 0, offset by (dx, dy).
PoseFrame offset_frame(double dx, double dy = 0.0) {
  auto f = base_frame();
  f.set(0, {10.0 + dx, 10.0 + dy, 1.0});
  return f;
}

PoseSequence seq(std::vector<PoseFrame> frames) {
  PoseSequence s;
  s.frames = std::move(frames);
  s.dims = {100, 100};
  return s;
}

MatchParams raw(double lambda, std::size_t k = 1,
                CandidatePolicy policy = CandidatePolicy::MinDistance) {
  MatchParams p;
  p.k = k;
  p.lambda = lambda;
  p.normalize = false;
  p.candidate_policy = policy;
  return p;
}

}  // namespace

TEST_CASE("select_frame: switches when the improvement beats lambda") {
  // candidate 0 is the held frame at distance 0.40, candidate 1 is B-hat at 0.30
  const auto cands = seq({offset_frame(0.40), offset_frame(0.30)});
  const auto q = base_frame();

  const auto sw = select_frame(0, q, cands.dims, cands, raw(0.05));
  CHECK(sw.index == 1);
  CHECK(sw.switched);
  CHECK(sw.distance == doctest::Approx(0.30).epsilon(1e-12));

  const auto hold = select_frame(0, q, cands.dims, cands, raw(0.15));
  CHECK(hold.index == 0);
  CHECK_FALSE(hold.switched);
  CHECK(hold.distance == doctest::Approx(0.40).epsilon(1e-12));
}

TEST_CASE("select_frame: equal distances hold under lambda = 0") {
  const auto cands = seq({offset_frame(0.5), offset_frame(0.5)});
  // B-hat is frame 0 (tie -> smaller index) at the held frame's distance.
  const auto sel = select_frame(1, base_frame(), cands.dims, cands, raw(0.0));
  CHECK(sel.index == 1);
  CHECK_FALSE(sel.switched);
}

TEST_CASE("select_frame: nearest_prev_index prefers temporal continuity") {
  // distances: f0=1, f1=2, f2=3, f3=50, f4=2.5
  const auto cands = seq({offset_frame(1), offset_frame(2), offset_frame(3), offset_frame(50),
                          offset_frame(2.5)});
  const auto q = base_frame();

  // held frame 3; 3-NN = {0, 1, 4}; closest in index to 3 is 4.
  const auto near = select_frame(3, q, cands.dims, cands,
                                 raw(0.0, 3, CandidatePolicy::NearestPrevIndex));
  CHECK(near.index == 4);
  CHECK(near.distance == doctest::Approx(2.5));

  const auto closest = select_frame(3, q, cands.dims, cands, raw(0.0, 3));
  CHECK(closest.index == 0);

  // Index gap ties (frames 1 and 3 around held 2) go to the smaller distance.
  const auto tie = select_frame(2, q, cands.dims, seq({offset_frame(1), offset_frame(2),
                                                        offset_frame(9), offset_frame(1.5)}),
                                raw(0.0, 3, CandidatePolicy::NearestPrevIndex));
  CHECK(tie.index == 3);
}

TEST_CASE("select_frame: k larger than the candidate count uses every frame") {
  const auto cands = seq({offset_frame(3), offset_frame(1)});
  const auto sel = select_frame(0, base_frame(), cands.dims, cands, raw(0.0, 7));
  CHECK(sel.index == 1);
}

TEST_CASE("select_frame: switch predicate is monotone in lambda") {
  Rng rng(101);
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back(0.02 * i);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cands = random_sequence(rng, 30, {64, 64});
    const auto q = random_frame(rng, {64, 64});
    const auto prev = uniform_index(rng, 0, cands.size() - 1);
    bool switched_before = true;
    for (double lambda : grid) {
      MatchParams p;
      p.lambda = lambda;
      p.k = 1 + trial % 7;
      const bool s = select_frame(prev, q, {64, 64}, cands, p).switched;
      CHECK((switched_before || !s));
      switched_before = s;
    }
  }
}

TEST_CASE("match_sequence: infinite or huge lambda freezes the first choice") {
  Rng rng(7);
  const auto a = random_sequence(rng, 40, {320, 240});
  const auto b = random_sequence(rng, 25, {320, 240});
  // Normalized coordinates live in [0,1]^36, so the diameter is at most 6.
  for (double lambda : {kInf, 6.5}) {
    MatchParams p;
    p.lambda = lambda;
    const auto m = match_sequence(a, b, p);
    REQUIRE(m.size() == a.size());
    for (const auto& e : m.entries) {
      CHECK(e.b_index == m.entries[0].b_index);
      CHECK_FALSE(e.switched);
    }
    CHECK(m.switches() == 0);
  }
}

TEST_CASE("match_sequence: self match is the identity") {
  Rng rng(13);
  const auto a = random_sequence(rng, 30, {100, 80});
  MatchParams p;
  p.k = 1;
  const auto m = match_sequence(a, a, p);
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(m.entries[t].a_index == t);
    CHECK(m.entries[t].b_index == t);
    CHECK(m.entries[t].distance == 0.0);
  }
}

TEST_CASE("match_sequence: lambda 0, k 1 follows the greedy argmin oracle") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_walk(rng, 50, {640, 480}, 12.0);
    const auto b = random_walk(rng, 50, {640, 480}, 12.0);
    MatchParams p;
    const auto m = match_sequence(a, b, p);
    const auto d = oracle_distance_matrix(a, b, true);
    const auto expected = oracle_greedy(d, 0.0);
    for (std::size_t t = 0; t < a.size(); ++t) {
      CHECK(m.entries[t].b_index == expected[t]);
      if (m.entries[t].switched) CHECK(m.entries[t].b_index == argmin(d[t]));
      CHECK(m.entries[t].distance ==
            doctest::Approx(d[t][m.entries[t].b_index]).epsilon(1e-12));
    }
  }
}

TEST_CASE("match_sequence: thresholded recurrence matches the oracle for lambda > 0") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_walk(rng, 60, {200, 200}, 6.0);
    const auto b = random_walk(rng, 40, {200, 200}, 6.0);
    MatchParams p;
    p.lambda = 0.05;
    const auto m = match_sequence(a, b, p);
    const auto expected = oracle_greedy(oracle_distance_matrix(a, b, true), 0.05);
    for (std::size_t t = 0; t < a.size(); ++t) CHECK(m.entries[t].b_index == expected[t]);
  }
}

TEST_CASE("match_sequence: entry 0 ignores the policy and switched flags track changes") {
  Rng rng(23);
  const auto a = random_walk(rng, 30, {100, 100}, 8.0);
  const auto b = random_walk(rng, 30, {100, 100}, 8.0);
  MatchParams p;
  p.k = 7;
  const auto m = match_sequence(a, b, p);
  CHECK(m.entries[0].b_index == knn_query(a[0], a.dims, b, 1)[0].index);
  CHECK_FALSE(m.entries[0].switched);
  for (std::size_t t = 1; t < m.size(); ++t) {
    CHECK(m.entries[t].switched == (m.entries[t].b_index != m.entries[t - 1].b_index));
  }
}

TEST_CASE("match_sequence: empty inputs") {
  Rng rng(1);
  const auto s = random_sequence(rng, 3, {10, 10});
  CHECK_THROWS_AS(match_sequence(PoseSequence{}, s, MatchParams{}), EmptySequence);
  CHECK_THROWS_AS(match_sequence(s, PoseSequence{}, MatchParams{}), EmptySequence);
}

TEST_CASE("build_pairs_manifest: 2x3 distance-matrix example") {
  // Embedding of D = [[0.5, 0.1, 0.9], [0.3, 0.6, 0.2]]: A0 at the origin,
  // A1 at 0.7 along x, B_j at (t_j, w_j) with t_j = (d0^2 - d1^2 + 0.49) / 1.4.
  const double t0 = (0.25 - 0.09 + 0.49) / 1.4;
  const double w0 = std::sqrt(0.25 - t0 * t0);
  const auto a = seq({offset_frame(0.0), offset_frame(0.7)});
  const auto b = seq({offset_frame(t0, w0), offset_frame(0.1), offset_frame(0.9)});

  const auto d = oracle_distance_matrix(a, b, false);
  const double expected[2][3] = {{0.5, 0.1, 0.9}, {0.3, 0.6, 0.2}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(d[i][j] == doctest::Approx(expected[i][j]).epsilon(1e-12));
  }

  const auto manifest = build_pairs_manifest(a, b, raw(0.0, 7), std::nullopt);
  REQUIRE(manifest.pairs.size() == 2);
  CHECK(manifest.pairs[0].a_index == 0);
  CHECK(manifest.pairs[0].b_index == 1);
  CHECK(manifest.pairs[0].distance == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(manifest.pairs[1].a_index == 1);
  CHECK(manifest.pairs[1].b_index == 2);
  CHECK(manifest.pairs[1].distance == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(manifest.params.k == 7);

  const auto cut = build_pairs_manifest(a, b, raw(0.0), 0.15);
  REQUIRE(cut.pairs.size() == 1);
  CHECK(cut.pairs[0].b_index == 1);
}

TEST_CASE("build_pairs_manifest: zero cutoff without shared poses is empty") {
  Rng rng(31);
  const auto a = random_sequence(rng, 20, {100, 100});
  const auto b = random_sequence(rng, 20, {100, 100});
  CHECK(build_pairs_manifest(a, b, MatchParams{}, 0.0).pairs.empty());
}

TEST_CASE("build_pairs_manifest: self pairing and independent distances") {
  Rng rng(37);
  const auto a = random_sequence(rng, 25, {100, 100});
  const auto self = build_pairs_manifest(a, a, MatchParams{}, std::nullopt);
  REQUIRE(self.pairs.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(self.pairs[i] == Pair{i, i, 0.0});
  }

  const auto b = random_sequence(rng, 40, {200, 150});
  const auto m = build_pairs_manifest(a, b, MatchParams{}, 0.9, 4);
  CHECK(m == build_pairs_manifest(a, b, MatchParams{}, 0.9, 1));
  const auto d = oracle_distance_matrix(a, b, true);
  for (const auto& p : m.pairs) {
    CHECK(p.distance <= 0.9);
    CHECK(std::abs(p.distance - d[p.a_index][p.b_index]) <= 1e-12);
    CHECK(p.b_index == argmin(d[p.a_index]));
  }
}

TEST_CASE("interpolate_plan: examples") {
  const auto mapping_of = [](std::vector<std::size_t> bs) {
    FrameMapping m;
    for (std::size_t t = 0; t < bs.size(); ++t) {
      m.entries.push_back({t, bs[t], 0.0, t > 0 && bs[t] != bs[t - 1]});
    }
    return m;
  };
  using RI = RenderInstruction;

  const auto m = mapping_of({5, 5, 9});
  const std::vector<RI> one = {{RenderKind::Real, 5, 5, 0.0},
                               {RenderKind::Real, 5, 5, 0.0},
                               {RenderKind::Real, 9, 9, 0.0}};
  CHECK(interpolate_plan(m, 1) == one);

  const std::vector<RI> two = {{RenderKind::Real, 5, 5, 0.0},
                               {RenderKind::Real, 5, 5, 0.0},
                               {RenderKind::Blend, 5, 9, 0.5},
                               {RenderKind::Real, 9, 9, 0.0}};
  CHECK(interpolate_plan(m, 2) == two);

  const auto four = interpolate_plan(mapping_of({2, 7}), 4);
  REQUIRE(four.size() == 5);
  CHECK(four[0] == RI{RenderKind::Real, 2, 2, 0.0});
  CHECK(four[1] == RI{RenderKind::Blend, 2, 7, 0.25});
  CHECK(four[2] == RI{RenderKind::Blend, 2, 7, 0.5});
  CHECK(four[3] == RI{RenderKind::Blend, 2, 7, 0.75});
  CHECK(four[4] == RI{RenderKind::Real, 7, 7, 0.0});

  CHECK_THROWS_AS(interpolate_plan(FrameMapping{}, 2), InvalidArgument);
  CHECK_THROWS_AS(interpolate_plan(m, 0), InvalidArgument);
}

TEST_CASE("interpolate_plan: length and alpha ladder on random mappings") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_mapping(rng, uniform_index(rng, 1, 80), uniform_index(rng, 1, 20), 0.3);
    const std::size_t n = uniform_index(rng, 1, 6);
    const auto plan = interpolate_plan(m, n);
    CHECK(plan.size() == m.size() + (n - 1) * m.switches());

    std::size_t reals = 0;
    double last_alpha = 0.0;
    for (const auto& step : plan) {
      if (step.kind == RenderKind::Real) {
        CHECK(step.b_left == m.entries[reals].b_index);
        ++reals;
        last_alpha = 0.0;
      } else {
        CHECK(step.alpha > last_alpha);
        CHECK(step.alpha > 0.0);
        CHECK(step.alpha < 1.0);
        last_alpha = step.alpha;
      }
    }
    CHECK(reals == m.size());
  }
}

TEST_CASE("interpolate_pose: endpoints and midpoint") {
  auto l = offset_frame(0.0), r = offset_frame(10.0);
  l.clear(5);
  r.clear(6);
  CHECK(interpolate_pose(l, r, 0.0) == l);
  CHECK(interpolate_pose(l, r, 1.0) == r);
  const auto mid = interpolate_pose(l, r, 0.5);
  CHECK(mid.joint(0)->x == 15.0);
  CHECK(mid.has(5));   // only in r, r carries half the weight
  CHECK_FALSE(mid.has(6));
  CHECK(interpolate_pose(l, r, 0.25).has(6));
  CHECK_THROWS_AS(interpolate_pose(l, r, 1.5), InvalidArgument);
}
