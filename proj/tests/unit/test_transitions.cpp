#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "footloco/transitions.hpp"

using namespace footloco;

namespace {

constexpr double kFps = 60.0;

// Left foot planted at the origin on frames [10, 30], swinging above the
// ground elsewhere; the right foot stays airborne throughout.
std::vector<Frame> planted_window_frames() {
  std::vector<Frame> frames(41);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    Frame& fr = frames[f];
    fr.right.foot = Vec3(-0.2, 1.0, 0.05 * static_cast<double>(f));
    if (f >= 10 && f <= 30) {
      fr.left.foot = Vec3(0.1, 0.0, 0.0);
    } else {
      fr.left.foot = Vec3(0.1, 0.2, 0.05 * static_cast<double>(f));
    }
  }
  return frames;
}

StepVelocitySeries series_of(const std::vector<double>& v, int anchor) {
  StepVelocitySeries s;
  for (std::size_t i = 0; i < v.size(); ++i) s.pairs.push_back({static_cast<int>(i), v[i]});
  s.anchor = anchor;
  return s;
}

StepClassification moving(Family f, int plan_index) {
  StepClassification c;
  c.plan_index = plan_index;
  c.label = BehaviourLabel::of_family(f);
  return c;
}

std::vector<StepClassification> plan_of(const std::vector<Family>& families) {
  std::vector<StepClassification> out(2);
  out[0].flags.stance = out[1].flags.stance = true;
  out[1].plan_index = 1;
  for (std::size_t i = 0; i < families.size(); ++i) out.push_back(moving(families[i], static_cast<int>(i) + 2));
  return out;
}

constexpr std::array<double, 4> kBase{0.93, 1.91, 3.16, 0.64};

}  // namespace

TEST(Contacts, PlantedWindowIsOneEvent) {
  const auto events = detect_contacts(planted_window_frames(), kFps);
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].foot, Side::Left);
  EXPECT_EQ(events[0].frame_start, 10);
  EXPECT_EQ(events[0].frame_end, 30);
  EXPECT_EQ(events[0].step_index, 0);
}

TEST(Contacts, StandingStillGivesTwoEvents) {
  std::vector<Frame> frames(20);
  for (Frame& f : frames) {
    f.left.foot = Vec3(0.12, 0, 0);
    f.right.foot = Vec3(-0.12, 0, 0);
  }
  const auto events = detect_contacts(frames, kFps);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].foot, Side::Left);
  EXPECT_EQ(events[1].foot, Side::Right);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(events[i].step_index, i);
    EXPECT_EQ(events[i].frame_start, 0);
    EXPECT_EQ(events[i].frame_end, 19);
  }
}

TEST(Contacts, ZeroThresholdsDetectNothing) {
  EXPECT_TRUE(detect_contacts(planted_window_frames(), kFps, 0.0, 0.0).empty());
}

TEST(Contacts, ShortRunsAreNoise) {
  auto frames = planted_window_frames();
  for (std::size_t f = 12; f <= 30; ++f) frames[f].left.foot = Vec3(0.1, 0.2, 0.05 * static_cast<double>(f));
  EXPECT_TRUE(detect_contacts(frames, kFps).empty());  // frames 10..11 are too few

  frames[12].left.foot = Vec3(0.1, 0.0, 0.0);
  const auto kept = detect_contacts(frames, kFps);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].frame_end - kept[0].frame_start + 1, kMinContactFrames);
}

TEST(Contacts, FewerThanTwoFramesIsInvalid) {
  std::vector<Frame> one(1);
  EXPECT_THROW(detect_contacts(one, kFps), Error);
}

TEST(Identify, WalkRunAnchorsAtMaximum) {
  EXPECT_EQ(identify_transition(series_of({1.1, 1.4, 2.0, 2.9, 2.8}, 0), Family::Walking, Family::Running), 3);
}

TEST(Identify, WalkStairAnchorsAtMinimum) {
  EXPECT_EQ(identify_transition(series_of({1.2, 0.9, 0.6, 0.8}, 0), Family::Walking, Family::StairStep), 2);
}

TEST(Identify, ConstantSeriesAnchorsAtFirstStep) {
  EXPECT_EQ(identify_transition(series_of({1.5, 1.5, 1.5}, 0), Family::Walking, Family::Running), 0);
}

TEST(Identify, InversePairsUseTheForwardCharacteristic) {
  EXPECT_EQ(identify_transition(series_of({2.9, 2.0, 1.1}, 0), Family::Running, Family::Walking), 0);
}

TEST(Identify, PairWithoutCharacteristicIsUnknown) {
  try {
    identify_transition(series_of({1.0, 2.0}, 0), Family::Walking, Family::Walking);
    FAIL() << "expected UnknownPair";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownPair);
  }
}

TEST(Align, WindowStartIsRoundedMeanOfStepsBefore) {
  const std::vector<StepVelocitySeries> in{series_of({1, 1, 3, 1, 1, 1, 1}, 2), series_of({1, 1, 1, 1, 3, 1, 1}, 4)};
  const AlignedSeries a = align_and_trim(in);
  EXPECT_EQ(a.first_offset, -3);
  EXPECT_EQ(a.last_offset, 3);  // mean of {4, 2}
}

TEST(Align, SingleSeriesKeepsItsExtent) {
  const std::vector<StepVelocitySeries> in{series_of({1.0, 2.0, 4.0, 3.0}, 2)};
  const AlignedSeries a = align_and_trim(in);
  EXPECT_EQ(a.first_offset, -2);
  EXPECT_EQ(a.last_offset, 1);
  ASSERT_EQ(a.series.size(), 1u);
  EXPECT_EQ(a.series[0].size(), 4u);
}

TEST(Align, ShiftedCopiesCoincideAfterAlignment) {
  const std::vector<double> shape{1.0, 2.0, 5.0, 3.0};
  std::vector<double> shifted{0.2, 0.4};
  shifted.insert(shifted.end(), shape.begin(), shape.end());
  const std::vector<StepVelocitySeries> in{series_of(shape, 2), series_of(shifted, 4)};
  const AlignedSeries a = align_and_trim(in);
  for (const auto& [offset, v] : a.series[0]) {
    const auto it = std::find_if(a.series[1].begin(), a.series[1].end(), [&](const auto& p) { return p.first == offset; });
    ASSERT_NE(it, a.series[1].end()) << offset;
    EXPECT_DOUBLE_EQ(it->second, v);
  }
}

TEST(Graph, PointwiseMeanOfAlignedSeries) {
  AlignedSeries a;
  a.first_offset = 0;
  a.last_offset = 2;
  a.series = {{{0, 1.0}, {1, 2.0}, {2, 3.0}}, {{0, 1.0}, {1, 4.0}, {2, 3.0}}};
  const TransitionGraph g = build_graph(a, Family::Walking, Family::Running);
  ASSERT_EQ(g.steps.size(), 3u);
  EXPECT_DOUBLE_EQ(g.steps[0].v_mean, 1.0);
  EXPECT_DOUBLE_EQ(g.steps[1].v_mean, 3.0);
  EXPECT_DOUBLE_EQ(g.steps[2].v_mean, 3.0);
  EXPECT_EQ(g.characteristic, Characteristic::Max);
}

TEST(Graph, OneSeriesIsItsOwnGraph) {
  const std::vector<StepVelocitySeries> in{series_of({1.2, 0.9, 0.6, 0.8}, 2)};
  const TransitionGraph g = build_graph(align_and_trim(in), Family::Walking, Family::StairStep);
  ASSERT_EQ(g.steps.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(g.steps[i].offset, static_cast<int>(i) - 2);
    EXPECT_DOUBLE_EQ(g.steps[i].v_mean, in[0].pairs[i].velocity);
  }
  EXPECT_EQ(g.characteristic, Characteristic::Min);
}

TEST(Graph, CorpusRecoversGeneratingRamps) {
  const TransitionGraphSet& set = fltest::default_graphs();
  for (const GraphCorpusSpec& spec : default_graph_corpus()) {
    const auto g = set.find(spec.from, spec.to);
    ASSERT_TRUE(g);
    ASSERT_EQ(g->steps.size(), spec.ramp.size()) << to_string(spec.from) << "->" << to_string(spec.to);
    for (std::size_t i = 0; i < spec.ramp.size(); ++i) EXPECT_NEAR(g->steps[i].v_mean, spec.ramp[i], 0.05);
  }
}

TEST(Graph, ExtremumSitsAtOffsetZero) {
  for (const auto& [pair, g] : fltest::default_graphs().forward()) {
    double best = g.characteristic == Characteristic::Max ? -1e9 : 1e9;
    int at = 99;
    for (const GraphStep& s : g.steps) {
      if (g.characteristic == Characteristic::Max ? s.v_mean > best : s.v_mean < best) {
        best = s.v_mean;
        at = s.offset;
      }
    }
    EXPECT_EQ(at, 0);
  }
}

TEST(Graph, RebuildFromSourcesIsIdentical) {
  for (const auto& [pair, g] : fltest::default_graphs().forward()) {
    const TransitionGraph again = build_graph(g.sources, g.from, g.to);
    EXPECT_EQ(again.steps, g.steps);
  }
}

TEST(Graph, InversionIsStepReversal) {
  const auto fwd = fltest::default_graphs().find(Family::Walking, Family::Running);
  const auto inv = fltest::default_graphs().find(Family::Running, Family::Walking);
  ASSERT_TRUE(fwd && inv);
  EXPECT_TRUE(inv->inverted);
  ASSERT_EQ(inv->steps.size(), fwd->steps.size());
  const std::size_t n = fwd->steps.size();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(inv->steps[i].offset, -fwd->steps[n - 1 - i].offset);
    EXPECT_EQ(inv->steps[i].v_mean, fwd->steps[n - 1 - i].v_mean);
  }
  EXPECT_EQ(invert(*inv).steps, fwd->steps);
}

TEST(Graph, InverseMatchesAMeasuredReverseCorpus) {
  // Run-to-walk sequences on the reversed ramp, measured with the same pipeline.
  const auto fwd = fltest::default_graphs().find(Family::Walking, Family::Running);
  ASSERT_TRUE(fwd);
  std::vector<double> ramp = default_graph_corpus()[0].ramp;
  std::reverse(ramp.begin(), ramp.end());
  std::mt19937_64 rng(77);
  std::vector<StepVelocitySeries> series;
  for (int i = 0; i < 6; ++i) {
    TransitionSpec t;
    t.from = Family::Running;
    t.to = Family::Walking;
    t.ramp = ramp;
    t.post_steps = i % 3 == 2 ? 1 : 0;
    t.jitter = 0.02;
    series.push_back(sequence_series(gen_transition_sequence(t, rng)));
  }
  const TransitionGraph measured = build_graph(align_and_trim(series), Family::Running, Family::Walking);
  const TransitionGraph inv = invert(*fwd);
  ASSERT_EQ(measured.steps.size(), inv.steps.size());
  for (std::size_t i = 0; i < inv.steps.size(); ++i) {
    EXPECT_EQ(measured.steps[i].offset, inv.steps[i].offset);
    EXPECT_NEAR(measured.steps[i].v_mean, inv.steps[i].v_mean, 0.05);
  }
}

TEST(Graph, NonForwardSequencesAreRejected) {
  std::mt19937_64 rng(3);
  TransitionSpec t;
  t.from = Family::Running;
  t.to = Family::Walking;
  t.ramp = {2.0, 1.0};
  const std::vector<LabeledSequence> seqs{gen_transition_sequence(t, rng)};
  EXPECT_THROW(build_graph_set(seqs), Error);
}

TEST(Graph, JsonAndCsvRoundTrip) {
  const TransitionGraphSet& set = fltest::default_graphs();
  const TransitionGraphSet back = graph_set_from_json(Json::parse(dump_canonical(graph_set_to_json(set))));
  ASSERT_EQ(back.forward().size(), set.forward().size());
  for (const auto& [pair, g] : set.forward()) EXPECT_EQ(back.forward().at(pair).steps, g.steps);
  const std::string csv = graph_set_to_csv(set);
  EXPECT_EQ(csv.rfind("from,to,inverted,offset,v_mean\n", 0), 0u);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  std::size_t expected = 1;
  for (const auto& [pair, g] : set.forward()) expected += 2 * g.steps.size();
  EXPECT_EQ(rows, expected);
}

TEST(Graph, SequenceJsonRoundTrip) {
  std::mt19937_64 rng(4);
  TransitionSpec t;
  t.ramp = {1.1, 1.6, 2.3, 2.9};
  const LabeledSequence s = gen_transition_sequence(t, rng);
  const LabeledSequence back = sequence_from_json(Json::parse(dump_canonical(sequence_to_json(s))));
  EXPECT_EQ(back.frames, s.frames);
  EXPECT_EQ(back.ground, s.ground);
  EXPECT_EQ(back.from, s.from);
}

TEST(Schedule, AllWalkingIsBaseVelocity) {
  const auto steps = plan_of(std::vector<Family>(8, Family::Walking));
  const Schedule s = schedule_velocities(steps, fltest::default_graphs(), kBase);
  for (double v : s.velocity) EXPECT_DOUBLE_EQ(v, kBase[0]);
  EXPECT_TRUE(s.missing.empty());
}

TEST(Schedule, WalkToRunRampEndsOnTheChangeStep) {
  std::vector<Family> fam(6, Family::Walking);
  fam.insert(fam.end(), 4, Family::Running);
  const auto steps = plan_of(fam);
  const TransitionGraph g = *fltest::default_graphs().find(Family::Walking, Family::Running);
  ASSERT_EQ(g.steps.size(), 4u);
  const Schedule s = schedule_velocities(steps, fltest::default_graphs(), kBase);
  // Moving step k lives at classification 2 + k; the change is at moving step 6.
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(s.velocity[2 + k], kBase[0]) << k;
  for (int k = 3; k <= 6; ++k) EXPECT_DOUBLE_EQ(s.velocity[2 + k], g.steps[k - 3].v_mean) << k;
  for (int k = 7; k < 10; ++k) EXPECT_DOUBLE_EQ(s.velocity[2 + k], kBase[1]) << k;
}

TEST(Schedule, RunToWalkUsesTheReversedGraph) {
  TransitionGraphSet only;
  only.add(*fltest::default_graphs().find(Family::Walking, Family::Running));
  std::vector<Family> fam(6, Family::Running);
  fam.insert(fam.end(), 4, Family::Walking);
  const Schedule s = schedule_velocities(plan_of(fam), only, kBase);
  const TransitionGraph fwd = only.forward().begin()->second;
  for (int t = 0; t < 4; ++t) EXPECT_DOUBLE_EQ(s.velocity[2 + 3 + t], fwd.steps[3 - t].v_mean) << t;
  EXPECT_TRUE(s.missing.empty());
}

TEST(Schedule, MissingGraphFallsBackToLinearRamp) {
  const TransitionGraphSet empty;
  std::vector<Family> fam(5, Family::Walking);
  fam.insert(fam.end(), 3, Family::Running);
  const Schedule s = schedule_velocities(plan_of(fam), empty, kBase);
  ASSERT_EQ(s.missing.size(), 1u);
  EXPECT_EQ(s.missing[0], std::make_pair(Family::Walking, Family::Running));
  for (int t = 0; t < 4; ++t) {
    const double u = (t + 1) / 4.0;
    EXPECT_NEAR(s.velocity[2 + 2 + t], kBase[0] + u * (kBase[1] - kBase[0]), 1e-12);
  }
}

TEST(Schedule, IdempotentAndStanceFollowsFirstStep) {
  std::vector<Family> fam(6, Family::Running);
  fam.insert(fam.end(), 6, Family::StairStep);
  const auto steps = plan_of(fam);
  const Schedule a = schedule_velocities(steps, fltest::default_graphs(), kBase);
  const Schedule b = schedule_velocities(steps, fltest::default_graphs(), kBase);
  EXPECT_EQ(a.velocity, b.velocity);
  EXPECT_DOUBLE_EQ(a.velocity[0], kBase[1]);
  EXPECT_DOUBLE_EQ(a.velocity[1], kBase[1]);
}
