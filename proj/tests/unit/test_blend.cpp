#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "footloco/blend.hpp"
#include "footloco/extract.hpp"

using namespace footloco;

namespace {

StepClip make_clip(const std::string& id, const Vec3& start, const Vec3& end, double duration = 0.5) {
  StepSpec s;
  s.id = id;
  s.label = BehaviourLabel::walking();
  s.support_side = Side::Right;
  s.start_foot = start;
  s.end_foot = end;
  s.duration = duration;
  return gen_step(s);
}

EnclosureSelection selection_of(const std::array<StepClip, 4>& clips, const FootPose& target) {
  EnclosureSelection sel;
  sel.foot_clips = clips;
  sel.toe_clips = clips;
  for (std::size_t i = 0; i < 4; ++i) {
    const FootPose e = aligned_end(clips[i]);
    sel.foot_vertices[i] = e.foot;
    sel.toe_vertices[i] = e.toe;
  }
  sel.foot_target = target.foot;
  sel.toe_target = target.toe;
  sel.target_yaw = target.yaw;
  return sel;
}

// Minimum-norm affine weights computed through the normal equations.
Eigen::Vector4d oracle_weights(const std::array<Vec3, 4>& v, const Vec3& t) {
  Eigen::Matrix<double, 3, 4> a;
  for (int i = 0; i < 4; ++i) a.col(i) << v[static_cast<std::size_t>(i)].x(), v[static_cast<std::size_t>(i)].z(), 1.0;
  const Eigen::Vector3d b(t.x(), t.z(), 1.0);
  const Eigen::Matrix3d aat = a * a.transpose();
  return a.transpose() * aat.fullPivLu().solve(b);
}

Vec3 reconstruct(const std::array<Vec3, 4>& v, const std::array<double, 4>& w) {
  Vec3 p = Vec3::Zero();
  for (std::size_t i = 0; i < 4; ++i) p += w[i] * v[i];
  return p;
}

}  // namespace

TEST(PositionWeights, VertexTargetIsReproduced) {
  const std::array<Vec3, 4> v{Vec3(0, 0, 0), Vec3(5, 0, 0), Vec3(5, 0, 5), Vec3(0, 0, 5)};
  const auto w = solve_position_weights(std::span<const Vec3, 4>(v), v[0]);
  const Vec3 p = reconstruct(v, w);
  EXPECT_NEAR(p.x(), 0.0, 1e-12);
  EXPECT_NEAR(p.z(), 0.0, 1e-12);
  EXPECT_GT(w[0], 0.5);
  EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-12);
}

TEST(PositionWeights, CentroidOfSquareIsUniform) {
  const std::array<Vec3, 4> v{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 1), Vec3(0, 0, 1)};
  const auto w = solve_position_weights(std::span<const Vec3, 4>(v), Vec3(0.5, 0, 0.5));
  for (double x : w) EXPECT_NEAR(x, 0.25, 1e-12);
}

TEST(PositionWeights, RandomQuadsMatchOracle) {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::array<Vec3, 4> v;
    for (Vec3& x : v) x = Vec3(fltest::uniform(rng, -1, 1), 0, fltest::uniform(rng, -1, 1));
    const Vec3 t = 0.25 * (v[0] + v[1] + v[2] + v[3]) +
                   Vec3(fltest::uniform(rng, -0.05, 0.05), 0, fltest::uniform(rng, -0.05, 0.05));
    if (!quad_contains(std::span<const Vec3, 4>(v), t)) continue;
    const auto w = solve_position_weights(std::span<const Vec3, 4>(v), t);
    const Vec3 p = reconstruct(v, w);
    EXPECT_LT(std::hypot(p.x() - t.x(), p.z() - t.z()), 1e-9);
    EXPECT_NEAR(w[0] + w[1] + w[2] + w[3], 1.0, 1e-12);
    const Eigen::Vector4d o = oracle_weights(v, t);
    if (o.minCoeff() >= kNegativeWeightFloor) {
      for (int i = 0; i < 4; ++i) EXPECT_NEAR(w[static_cast<std::size_t>(i)], o(i), 1e-9);
      ++compared;
    }
  }
  EXPECT_GT(compared, 100);
}

TEST(PositionWeights, CollinearVerticesAreDegenerate) {
  const std::array<Vec3, 4> v{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)};
  try {
    solve_position_weights(std::span<const Vec3, 4>(v), Vec3(1, 0, 0));
    FAIL() << "expected DegenerateVertices";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateVertices);
  }
}

TEST(JointWeights, IdenticalColumnsAreRankDeficient) {
  const std::vector<Vec3> rows{Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 0, 2)};
  try {
    solve_joint_weights(rows, rows, rows);
    FAIL() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
}

TEST(JointWeights, ExactFootFitSelectsFootColumn) {
  const std::vector<Vec3> foot{Vec3(0, 0, 1), Vec3(1, 0, 1), Vec3(0, 0, 2)};
  const std::vector<Vec3> toe{Vec3(0.3, 0, 1), Vec3(1, 0.2, 1), Vec3(0, 0, 2.5)};
  const JointWeights j = solve_joint_weights(foot, toe, foot);
  EXPECT_NEAR(j.v[0], 1.0, 1e-12);
  EXPECT_NEAR(j.v[1], 0.0, 1e-12);
  EXPECT_NEAR(j.residual, 0.0, 1e-12);
}

TEST(JointWeights, ResidualIsMinimalAgainstSampledAlternatives) {
  std::mt19937_64 rng(41);
  for (int sys = 0; sys < 20; ++sys) {
    std::vector<Vec3> foot, toe, target;
    for (int i = 0; i < 8; ++i) {
      foot.emplace_back(fltest::uniform(rng, -1, 1), fltest::uniform(rng, -1, 1), fltest::uniform(rng, -1, 1));
      toe.emplace_back(fltest::uniform(rng, -1, 1), fltest::uniform(rng, -1, 1), fltest::uniform(rng, -1, 1));
      target.emplace_back(fltest::uniform(rng, -1, 1), fltest::uniform(rng, -1, 1), fltest::uniform(rng, -1, 1));
    }
    const JointWeights j = solve_joint_weights(foot, toe, target);
    EXPECT_NEAR(j.v[0] + j.v[1], 1.0, 1e-12);
    for (int s = 0; s < 1000; ++s) {
      const double a = fltest::uniform(rng, -2, 3);
      double sq = 0.0;
      for (std::size_t i = 0; i < foot.size(); ++i) sq += (a * foot[i] + (1 - a) * toe[i] - target[i]).squaredNorm();
      EXPECT_LE(j.residual, std::sqrt(sq) + 1e-12);
    }
  }
}

TEST(BlendStep, OneHotWeightsReproduceTheClip) {
  const std::array<StepClip, 4> clips{make_clip("a", Vec3(0.2, 0, -0.3), Vec3(0.2, 0, 0.3)),
                                      make_clip("b", Vec3(0.25, 0, -0.3), Vec3(0.1, 0, 0.4)),
                                      make_clip("c", Vec3(0.15, 0, -0.2), Vec3(0.3, 0, 0.35)),
                                      make_clip("d", Vec3(0.2, 0, -0.4), Vec3(0.2, 0, 0.5))};
  const EnclosureSelection sel = selection_of(clips, aligned_end(clips[0]));
  BlendSolution w;
  w.w_foot = {1, 0, 0, 0};
  w.w_toe = {1, 0, 0, 0};
  w.v = {1, 0};
  const StepClip out = blend_step(sel, w);
  ASSERT_EQ(out.frames.size(), clips[0].frames.size());
  for (std::size_t f = 0; f < out.frames.size(); ++f) {
    EXPECT_NEAR((out.frames[f].right.foot - clips[0].frames[f].right.foot).norm(), 0.0, 1e-12);
    EXPECT_NEAR((out.frames[f].left.foot - clips[0].frames[f].left.foot).norm(), 0.0, 1e-12);
    EXPECT_NEAR((out.frames[f].root_pos - clips[0].frames[f].root_pos).norm(), 0.0, 1e-12);
    EXPECT_NEAR(normalize_angle(out.frames[f].left.yaw - clips[0].frames[f].left.yaw), 0.0, 1e-12);
  }
}

TEST(BlendStep, MirroredPairCancelsLateralOffset) {
  const std::array<StepClip, 4> clips{make_clip("a", Vec3(0.2, 0, -0.3), Vec3(0.2, 0, 0.3)),
                                      make_clip("b", Vec3(-0.2, 0, -0.3), Vec3(-0.2, 0, 0.3)),
                                      make_clip("c", Vec3(0.2, 0, -0.3), Vec3(0.2, 0, 0.3)),
                                      make_clip("d", Vec3(-0.2, 0, -0.3), Vec3(-0.2, 0, 0.3))};
  FootPose target;
  target.foot = Vec3(0, 0, 0.3);
  target.toe = target.foot + Vec3(0, 0, 0.15);
  const EnclosureSelection sel = selection_of(clips, target);
  BlendSolution w;
  w.w_foot = {0.5, 0.5, 0, 0};
  w.w_toe = {0.5, 0.5, 0, 0};
  const StepClip out = blend_step(sel, w);
  for (const Frame& f : out.frames) EXPECT_NEAR(f.left.foot.x(), 0.0, 1e-12);
}

TEST(BlendStep, PipelineLandsOnTheFootprint) {
  const MotionDatabase& db = fltest::default_db();
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    const Footprint support = fltest::print(Side::Right, -0.11, 0, 0, fltest::uniform(rng, -0.5, 0.5));
    const FootPose local{Vec3(fltest::uniform(rng, 0.18, 0.26), 0, fltest::uniform(rng, 0.2, 0.45)),
                         fltest::uniform(rng, -0.1, 0.1), Vec3::Zero()};
    const FootPose g = to_global(local, footprint_pose(support, db.toe_offset()));
    const Footprint target{Side::Left, g.foot, g.yaw};
    const EnclosureSelection sel = extract_enclosure(db, support, target, BehaviourLabel::walking(), 1.0).selection;
    const BlendSolution w = solve_blend(sel);
    EXPECT_NEAR(w.v[0] + w.v[1], 1.0, 1e-9);
    const StepClip out = blend_step(sel, w);
    const FootPose& end = out.frames.back().left;
    EXPECT_LT((end.foot - target.pos).norm(), 1e-3);
    EXPECT_LT(std::abs(normalize_angle(end.yaw - target.yaw)), 0.5 * kPi / 180.0);
    // The support foot never moves during a walking step.
    for (const Frame& f : out.frames) EXPECT_LT((f.right.foot - support.pos).norm(), 1e-9);
  }
}

TEST(Resample, EndpointsAreKeptAndInteriorIsLinear) {
  const StepClip c = make_clip("a", Vec3(0.2, 0, -0.3), Vec3(0.2, 0, 0.3));
  const std::vector<Frame> r = resample(c.frames, 7);
  ASSERT_EQ(r.size(), 7u);
  EXPECT_EQ(r.front(), c.frames.front());
  EXPECT_EQ(r.back(), c.frames.back());
  EXPECT_EQ(resample(c.frames, c.frames.size()), c.frames);
}

namespace {

MotionOutput drifting_motion(int n, double drift) {
  MotionOutput m;
  m.fps = 60.0;
  for (int i = 0; i < n; ++i) {
    OutputFrame f;
    f.pose.left.foot = Vec3(0.1, 0, 0.01 * i);
    f.pose.right.foot = Vec3(-0.1, 0, drift * i / (n - 1));
    f.pose.left.toe = f.pose.left.foot + Vec3(0, 0, 0.15);
    f.pose.right.toe = f.pose.right.foot + Vec3(0, 0, 0.15);
    m.frames.push_back(f);
  }
  return m;
}

}  // namespace

TEST(Cleanup, SatisfiedPinsLeaveMotionUnchanged) {
  const MotionOutput m = drifting_motion(60, 0.0);
  const ContactPin pin{Side::Right, m.frames[0].pose.right, 0, 59};
  EXPECT_EQ(cleanup_footskate(m, std::span<const ContactPin>(&pin, 1)), m);
}

TEST(Cleanup, DriftIsRemovedAndFarFramesUntouched) {
  const MotionOutput m = drifting_motion(120, 0.02);
  const ContactPin pin{Side::Right, m.frames[40].pose.right, 40, 70};
  const MotionOutput out = cleanup_footskate(m, std::span<const ContactPin>(&pin, 1));
  const int window = static_cast<int>(std::lround(kCleanupWindowSeconds * m.fps));
  for (int f = 40; f <= 70; ++f) {
    EXPECT_NEAR((out.frames[static_cast<std::size_t>(f)].pose.right.foot - pin.pose.foot).norm(), 0.0, 1e-12);
  }
  for (int f = 0; f < 120; ++f) {
    if (f >= 40 - window && f <= 70 + window) continue;
    EXPECT_EQ(out.frames[static_cast<std::size_t>(f)], m.frames[static_cast<std::size_t>(f)]) << f;
  }
  // The other foot is never touched.
  for (std::size_t f = 0; f < out.frames.size(); ++f) EXPECT_EQ(out.frames[f].pose.left, m.frames[f].pose.left);
}

TEST(Cleanup, DistantPinsSuperpose) {
  const MotionOutput m = drifting_motion(200, 0.05);
  const int window = static_cast<int>(std::lround(kCleanupWindowSeconds * m.fps));
  const ContactPin a{Side::Right, m.frames[20].pose.right, 20, 40};
  const ContactPin b{Side::Right, m.frames[40 + 2 * window + 5].pose.right, 40 + 2 * window + 5, 150};
  const std::array<ContactPin, 2> both{a, b};
  const MotionOutput ab = cleanup_footskate(m, both);
  const MotionOutput oa = cleanup_footskate(m, std::span<const ContactPin>(&a, 1));
  const MotionOutput ob = cleanup_footskate(m, std::span<const ContactPin>(&b, 1));
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    const Vec3 expected = oa.frames[f].pose.right.foot + ob.frames[f].pose.right.foot - m.frames[f].pose.right.foot;
    EXPECT_NEAR((ab.frames[f].pose.right.foot - expected).norm(), 0.0, 1e-12) << f;
  }
}

TEST(Cleanup, InvalidAndOverlappingPinsAreRejected) {
  const MotionOutput m = drifting_motion(50, 0.0);
  const ContactPin out_of_range{Side::Left, {}, 10, 80};
  EXPECT_THROW(cleanup_footskate(m, std::span<const ContactPin>(&out_of_range, 1)), Error);
  const std::array<ContactPin, 2> overlap{ContactPin{Side::Left, {}, 0, 20}, ContactPin{Side::Left, {}, 20, 30}};
  try {
    cleanup_footskate(m, overlap);
    FAIL() << "expected OverlappingPins";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingPins);
  }
}
