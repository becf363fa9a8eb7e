#include <gtest/gtest.h>

#include <random>

#include "footloco/types.hpp"

using namespace footloco;

namespace {

FootPose pose(double x, double y, double z, double yaw) {
  FootPose p;
  p.foot = Vec3(x, y, z);
  p.yaw = yaw;
  p.toe = p.foot + rotate_yaw(Vec3(0, 0, 0.15), yaw);
  return p;
}

void expect_pose_near(const FootPose& a, const FootPose& b, double tol) {
  EXPECT_NEAR((a.foot - b.foot).norm(), 0.0, tol);
  EXPECT_NEAR((a.toe - b.toe).norm(), 0.0, tol);
  EXPECT_NEAR(normalize_angle(a.yaw - b.yaw), 0.0, tol);
}

}  // namespace

TEST(Transform, IdentitySupportKeepsPose) {
  const FootPose p = pose(0.3, 0.1, -0.4, 0.7);
  expect_pose_near(to_global(p, pose(0, 0, 0, 0)), p, 1e-15);
  expect_pose_near(to_local(p, pose(0, 0, 0, 0)), p, 1e-15);
}

TEST(Transform, QuarterTurnMapsPlusZToPlusX) {
  const FootPose g = to_global(pose(0, 0, 1, 0), pose(1, 0, 0, kPi / 2));
  EXPECT_NEAR(g.foot.x(), 2.0, 1e-12);
  EXPECT_NEAR(g.foot.y(), 0.0, 1e-12);
  EXPECT_NEAR(g.foot.z(), 0.0, 1e-12);
  EXPECT_NEAR(g.yaw, kPi / 2, 1e-12);
}

TEST(Transform, SupportItselfIsLocalOrigin) {
  const FootPose s = pose(1.5, 0.2, -3.0, -2.1);
  const FootPose l = to_local(s, s);
  EXPECT_NEAR(l.foot.norm(), 0.0, 1e-12);
  EXPECT_NEAR(l.yaw, 0.0, 1e-12);
}

TEST(Transform, RoundTripOverRandomPoses) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3), a(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const FootPose p = pose(u(rng), u(rng), u(rng), a(rng));
    const FootPose s = pose(u(rng), u(rng), u(rng), a(rng));
    expect_pose_near(to_local(to_global(p, s), s), p, 1e-9);
    expect_pose_near(to_global(to_local(p, s), s), p, 1e-9);
  }
}

TEST(PlaneDistance, IgnoresHeight) {
  EXPECT_DOUBLE_EQ(plane_distance(Vec3(0, 5, 0), Vec3(3, 0, 4)), 5.0);
  EXPECT_DOUBLE_EQ(plane_distance(Vec3(1, 2, 3), Vec3(1, 9, 3)), 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const double y = u(rng);
    const Vec3 a(u(rng), y, u(rng)), b(u(rng), y, u(rng));
    EXPECT_NEAR(plane_distance(a, b), (a - b).norm(), 1e-12);
  }
}

TEST(Angles, NormalizeIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_NEAR(normalize_angle(-kPi), kPi, 1e-15);
  EXPECT_NEAR(normalize_angle(3 * kPi / 2), -kPi / 2, 1e-12);
  EXPECT_NEAR(normalize_angle(0.25 + 8 * kPi), 0.25, 1e-12);
}

TEST(Labels, ParseRoundTripAndMirror) {
  const BehaviourLabel all[] = {BehaviourLabel::walking(), BehaviourLabel::running(), BehaviourLabel::stair(),
                                BehaviourLabel::jump(LabelKind::JumpBothLiftBothLand, Side::Left),
                                BehaviourLabel::jump(LabelKind::JumpOneLiftBothLand, Side::Right),
                                BehaviourLabel::jump(LabelKind::JumpBothLiftOneLand, Side::Left),
                                BehaviourLabel::jump(LabelKind::JumpOneLiftOneLand, Side::Right)};
  for (const BehaviourLabel& l : all) {
    EXPECT_EQ(BehaviourLabel::parse(l.to_string()), l);
    EXPECT_EQ(l.mirrored().mirrored(), l);
    if (l.is_jump()) {
      EXPECT_EQ(l.family(), Family::Jumping);
      EXPECT_EQ(*l.mirrored().lead(), opposite(*l.lead()));
    } else {
      EXPECT_EQ(l.mirrored(), l);
    }
  }
  EXPECT_THROW(BehaviourLabel::parse("Skipping"), Error);
}

TEST(Footprint, PoseCarriesToeAlongYaw) {
  const FootPose p = footprint_pose(Footprint{Side::Left, Vec3(1, 0.2, 1), kPi / 2}, 0.15);
  EXPECT_NEAR(p.toe.x(), 1.15, 1e-12);
  EXPECT_NEAR(p.toe.z(), 1.0, 1e-12);
  EXPECT_NEAR(p.toe.y(), 0.2, 1e-12);
}

TEST(Errors, CarryCodeAndPlanIndex) {
  const Error e(ErrorCode::NotEnclosed, "x");
  EXPECT_EQ(e.plan_index(), -1);
  EXPECT_EQ(e.with_plan_index(7).plan_index(), 7);
  EXPECT_EQ(e.with_plan_index(7).code(), ErrorCode::NotEnclosed);
  EXPECT_EQ(to_string(ErrorCode::UnresolvablePlan), "UnresolvablePlan");
}
