#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "footloco/synthgen.hpp"

using namespace footloco;

namespace {

StepSpec walk_spec() {
  StepSpec s;
  s.id = "probe";
  s.label = BehaviourLabel::walking();
  s.support_side = Side::Right;
  s.support.foot = Vec3(1.0, 0.0, 2.0);
  s.support.yaw = 0.4;
  s.start_foot = Vec3(0.2, 0.0, -0.3);
  s.end_foot = Vec3(0.22, 0.0, 0.35);
  s.end_yaw = 0.1;
  return s;
}

int anchor_of(const std::vector<double>& ramp) {
  std::mt19937_64 rng(1);
  TransitionSpec t;
  t.ramp = ramp;
  return sequence_series(gen_transition_sequence(t, rng)).anchor;
}

}  // namespace

TEST(GenStep, CoincidentStartAndEndIsStationary) {
  StepSpec s = walk_spec();
  s.end_foot = s.start_foot;
  s.end_yaw = s.start_yaw;
  const StepClip c = gen_step(s);
  const Vec3 first = c.frames.front().foot(Side::Left).foot;
  for (const Frame& f : c.frames) EXPECT_NEAR((f.foot(Side::Left).foot - first).norm(), 0.0, 1e-12);
}

TEST(GenStep, EndReplaysThroughToGlobal) {
  const StepSpec s = walk_spec();
  const StepClip c = gen_step(s);
  EXPECT_NEAR((c.end_local.foot - s.end_foot).norm(), 0.0, 1e-9);
  const FootPose end = to_global(c.end_local, c.support);
  const FootPose& last = c.frames.back().foot(c.acting_side());
  EXPECT_NEAR((end.foot - last.foot).norm(), 0.0, 1e-9);
  EXPECT_NEAR(normalize_angle(end.yaw - last.yaw), 0.0, 1e-9);
  EXPECT_NEAR((end.foot - (s.support.foot + rotate_yaw(s.end_foot, s.support.yaw))).norm(), 0.0, 1e-9);
}

TEST(GenStep, SupportFootIsOneContactOverAllFrames) {
  const StepClip c = gen_step(walk_spec());
  const auto events = detect_contacts(c.frames, c.fps);
  int support_events = 0;
  for (const ContactEvent& e : events) {
    if (e.foot != c.support_side) continue;
    ++support_events;
    EXPECT_EQ(e.frame_start, 0);
    EXPECT_EQ(e.frame_end, static_cast<int>(c.frames.size()) - 1);
  }
  EXPECT_EQ(support_events, 1);
}

TEST(GenStep, TravelBeyondTheBandIsRejected) {
  StepSpec s = walk_spec();
  s.end_foot = Vec3(0.2, 0.0, 1.5);
  try {
    gen_step(s);
    FAIL() << "expected BandViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BandViolation);
  }
}

TEST(GenDatabase, DefaultSpecHasSixHundredClips) {
  EXPECT_EQ(gen_database(default_database_spec(), 1).size(), 600u);
  EXPECT_EQ(gen_database(small_database_spec(), 1).size(), 200u);
}

TEST(GenDatabase, SameSeedSameCorpus) {
  EXPECT_EQ(gen_database(small_database_spec(), 42), gen_database(small_database_spec(), 42));
  EXPECT_NE(gen_database(small_database_spec(), 42), gen_database(small_database_spec(), 43));
}

TEST(GenDatabase, RawOverlapsHaveTheConfiguredWidth) {
  const DatabaseSpec spec = default_database_spec();
  const FamilyRanges raw = fltest::default_db().raw_limits();
  EXPECT_NEAR(raw[Family::Walking].max - raw[Family::Running].min, spec.bands.walk.max - spec.bands.run.min, 1e-12);
  EXPECT_NEAR(raw[Family::Running].max - raw[Family::Jumping].min, spec.bands.run.max - spec.bands.jump.min, 1e-12);
}

TEST(GenDatabase, ClipsRoundTripThroughJson) {
  for (const StepClip& c : gen_database(small_database_spec(), 3)) {
    EXPECT_EQ(clip_from_json(Json::parse(dump_canonical(clip_to_json(c)))), c) << c.id;
  }
}

TEST(GenSequence, RampAnchorsAtItsPeak) {
  EXPECT_EQ(anchor_of({1.1, 1.6, 2.3, 2.9}), 3);
  EXPECT_EQ(anchor_of({2.0, 2.0, 2.0, 2.0}), 0);
  EXPECT_EQ(anchor_of({2.9, 2.3, 1.6, 1.1}), 0);
}

TEST(GenSequence, MeasuredVelocitiesFollowTheRamp) {
  std::mt19937_64 rng(2);
  TransitionSpec t;
  t.ramp = raised_cosine_ramp(1.1, 2.9, 4);
  const StepVelocitySeries s = sequence_series(gen_transition_sequence(t, rng));
  ASSERT_GE(s.pairs.size(), t.ramp.size());
  for (std::size_t i = 0; i < t.ramp.size(); ++i) EXPECT_NEAR(s.pairs[i].velocity, t.ramp[i], 1e-6) << i;
}

TEST(GenSequence, RaisedCosineRampEndpoints) {
  const auto r = raised_cosine_ramp(1.0, 3.0, 5);
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r.front(), 1.0);
  EXPECT_DOUBLE_EQ(r.back(), 3.0);
  EXPECT_NEAR(r[2], 2.0, 1e-12);
}

TEST(GenSpec, JsonRoundTrip) {
  const SynthSpec s = default_synth_spec();
  const Json j = synth_spec_to_json(s);
  EXPECT_EQ(synth_spec_to_json(synth_spec_from_json(j)), j);
  EXPECT_EQ(synth_spec_from_json(j).graphs.size(), 5u);
}
