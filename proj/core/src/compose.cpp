#include "footloco/compose.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace footloco {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int frames_for(double seconds, double fps) { return std::max(1, static_cast<int>(std::lround(seconds * fps))); }

// Mean root height above the feet at the first frame of every clip.
double stance_root_height(const MotionDatabase& db) {
  double sum = 0.0;
  for (const StepClip& c : db.clips()) {
    const Frame& f = c.frames.front();
    sum += f.root_pos.y() - 0.5 * (f.left.foot.y() + f.right.foot.y());
  }
  return db.clips().empty() ? 0.0 : sum / static_cast<double>(db.clips().size());
}

struct BuiltStep {
  const StepClassification* cls = nullptr;
  std::vector<Frame> frames;
  StepReport report;
};

}  // namespace

ComposeReport validate(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan,
                       const ComposeConfig&) {
  ComposeReport r;
  Corrected corrected = correct_plan(plan, db.limits());
  r.plan = std::move(corrected.plan);
  r.corrections = std::move(corrected.log);
  r.corrected = std::move(corrected.touched);

  ClassifyConfig cc;
  cc.walk_run_window = graphs.window(Family::Walking, Family::Running, kDefaultTransitionSteps);
  cc.run_jump_window = graphs.window(Family::Running, Family::Jumping, kDefaultTransitionSteps);
  r.classifications = classify_plan(r.plan, db, cc);
  for (StepClassification& c : r.classifications) {
    if (c.flags.unreachable) {
      throw Error(ErrorCode::UnresolvablePlan, "footprint remains out of reach after correction", c.plan_index);
    }
    const auto i = static_cast<std::size_t>(c.plan_index);
    c.flags.corrected = r.corrected[i] || (c.consumed_footprints == 2 && r.corrected[i + 1]);
  }

  std::array<double, 4> base{};
  for (Family f : kAllFamilies) base[static_cast<std::size_t>(f)] = db.base_velocity(f);
  r.schedule = schedule_velocities(r.classifications, graphs, base);
  return r;
}

Composition compose(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan,
                    const ComposeConfig& cfg) {
  const auto t_start = Clock::now();
  Composition out;
  out.report = validate(db, graphs, plan, cfg);
  const std::vector<Footprint>& fps = out.report.plan.footprints;
  const double toe = db.toe_offset();
  const double rate = cfg.fps;

  std::array<FootPose, 2> current{};
  std::array<std::size_t, 2> current_print{};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto s = static_cast<std::size_t>(fps[i].side);
    current[s] = footprint_pose(fps[i], toe);
    current_print[s] = i;
  }
  const std::array<FootPose, 2> stance = current;

  std::vector<BuiltStep> steps;
  for (std::size_t ci = 0; ci < out.report.classifications.size(); ++ci) {
    const StepClassification& c = out.report.classifications[ci];
    if (c.flags.stance) continue;
    const auto t0 = Clock::now();
    const auto i = static_cast<std::size_t>(c.plan_index);
    const Footprint& target = fps[i];
    const Footprint& support = fps[i - 1];
    const auto acting = static_cast<std::size_t>(target.side);
    BuiltStep b;
    b.cls = &c;
    b.report.plan_index = c.plan_index;
    b.report.label = c.label;
    b.report.consumed_footprints = c.consumed_footprints;
    b.report.v_target = out.report.schedule.velocity[ci];
    try {
      Extraction ex = extract_enclosure(db, support, target, c.label, b.report.v_target, cfg.extract);
      b.report.candidate_count = ex.candidate_count;
      const EnclosureSelection& sel = ex.selection;
      const BlendSolution w = solve_blend(sel);
      StepPins pins;
      pins.acting_start = current[acting];
      pins.acting_end = footprint_pose(target, toe);
      pins.label = c.label;
      if (c.consumed_footprints == 2) pins.partner_end = footprint_pose(fps[i + 1], toe);
      StepClip clip = blend_step(sel, w, pins);

      const double duration = static_cast<double>(clip.frames.size() - 1) / clip.fps;
      const auto n = static_cast<std::size_t>(std::max(1L, std::lround(duration * rate))) + 1;
      b.frames = clip.fps == rate && clip.frames.size() == n ? std::move(clip.frames) : resample(clip.frames, n);
      b.frames.front().foot(target.side) = *pins.acting_start;
      b.frames.back().foot(target.side) = pins.acting_end;
      if (pins.partner_end) b.frames.back().foot(fps[i + 1].side) = *pins.partner_end;

      for (std::size_t k = 0; k < 4; ++k) {
        b.report.foot_clips[k] = sel.foot_clips[k].id;
        b.report.toe_clips[k] = sel.toe_clips[k].id;
      }
      b.report.weights = w;
      b.report.raw_error = raw_blend_error(sel, w);
      current[acting] = pins.acting_end;
      if (pins.partner_end) current[static_cast<std::size_t>(fps[i + 1].side)] = *pins.partner_end;
    } catch (const Error& e) {
      throw e.plan_index() < 0 ? e.with_plan_index(c.plan_index) : e;
    }
    b.report.seconds = seconds_since(t0);
    steps.push_back(std::move(b));
  }

  MotionOutput& m = out.motion;
  m.fps = rate;
  const int hold = frames_for(cfg.hold_seconds, rate);
  const int yaw_frames = frames_for(cfg.root_yaw_blend_seconds, rate);

  Frame stance_frame;
  stance_frame.left = stance[0];
  stance_frame.right = stance[1];
  if (steps.empty()) {
    stance_frame.root_pos = 0.5 * (stance[0].foot + stance[1].foot) + Vec3(0.0, stance_root_height(db), 0.0);
    stance_frame.root_yaw = normalize_angle(stance[0].yaw + 0.5 * normalize_angle(stance[1].yaw - stance[0].yaw));
  } else {
    stance_frame.root_pos = steps.front().frames.front().root_pos;
    stance_frame.root_yaw = steps.front().frames.front().root_yaw;
  }
  for (int f = 0; f < hold; ++f) m.frames.push_back(OutputFrame{stance_frame, true, true});

  Vec3 last_root = stance_frame.root_pos;
  double last_yaw = stance_frame.root_yaw;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    BuiltStep& b = steps[k];
    const std::size_t n = b.frames.size();
    const bool final = k + 1 == steps.size();
    const Vec3 d_pos = last_root - b.frames.front().root_pos;
    const double d_yaw = normalize_angle(last_yaw - b.frames.front().root_yaw);
    for (std::size_t j = 0; j < n; ++j) {
      Frame& fr = b.frames[j];
      const double t = static_cast<double>(j) / static_cast<double>(n - 1);
      fr.root_pos += (1.0 - smoothstep(t)) * d_pos;
      fr.root_yaw = normalize_angle(fr.root_yaw + (1.0 - smoothstep(static_cast<double>(j) / yaw_frames)) * d_yaw);
    }
    b.report.frame_begin = static_cast<int>(m.frames.size());
    const std::size_t count = final ? n : n - 1;
    for (std::size_t j = 0; j < count; ++j) m.frames.push_back(OutputFrame{b.frames[j], false, false});
    b.report.frame_end = static_cast<int>(m.frames.size());
    last_root = b.frames.back().root_pos;
    last_yaw = b.frames.back().root_yaw;
  }
  if (!steps.empty()) {
    const Frame end = m.frames.back().pose;
    for (int f = 0; f < hold; ++f) m.frames.push_back(OutputFrame{end, false, false});
  }
  const int last_frame = static_cast<int>(m.frames.size()) - 1;

  // Contact range of every footprint: from its landing to the frame before its foot lifts.
  std::vector<int> land(fps.size(), last_frame);
  std::vector<int> lift(fps.size(), last_frame);
  land[0] = land[1] = 0;
  std::array<std::size_t, 2> on_print{};
  for (std::size_t i = 0; i < 2; ++i) on_print[static_cast<std::size_t>(fps[i].side)] = i;
  for (const BuiltStep& b : steps) {
    const auto i = static_cast<std::size_t>(b.report.plan_index);
    const int begin = b.report.frame_begin;
    const double span = static_cast<double>(b.frames.size() - 1);
    const StepTiming timing = step_timing(b.report.label.kind());
    auto at = [&](double u) { return begin + static_cast<int>(std::lround(u * span)); };

    const auto acting = static_cast<std::size_t>(fps[i].side);
    std::size_t& lifted = on_print[acting];
    lift[lifted] = std::max(land[lifted], at(timing.acting.begin) - 1);
    land[i] = at(timing.acting.end);
    lifted = i;
    if (b.report.consumed_footprints == 2 && timing.partner) {
      const auto partner = static_cast<std::size_t>(fps[i + 1].side);
      std::size_t& p = on_print[partner];
      lift[p] = std::max(land[p], at(timing.partner->begin) - 1);
      land[i + 1] = at(timing.partner->end);
      p = i + 1;
    }
  }
  for (std::size_t j = 0; j < fps.size(); ++j) {
    out.pins.push_back(ContactPin{fps[j].side, footprint_pose(fps[j], toe), land[j], lift[j]});
  }

  m = cleanup_footskate(m, out.pins, cfg.cleanup_window_seconds);
  for (OutputFrame& f : m.frames) f.left_contact = f.right_contact = false;
  for (const ContactPin& p : out.pins) {
    for (int f = p.begin; f <= p.end; ++f) {
      OutputFrame& fr = m.frames[static_cast<std::size_t>(f)];
      (p.side == Side::Left ? fr.left_contact : fr.right_contact) = true;
    }
  }
  for (const BuiltStep& b : steps) {
    m.steps.push_back(StepAnnotation{b.report.plan_index, b.report.label, b.report.frame_begin, b.report.frame_end});
    out.report.steps.push_back(b.report);
  }
  out.report.seconds = seconds_since(t_start);
  return out;
}

Json report_to_json(const ComposeReport& r, bool timing) {
  Json schedule_missing = Json::array();
  for (const auto& [a, b] : r.schedule.missing) {
    schedule_missing.push_back(Json{{"from", std::string(to_string(a))}, {"to", std::string(to_string(b))}});
  }
  Json steps = Json::array();
  for (const StepReport& s : r.steps) {
    Json j{{"plan_index", s.plan_index},
           {"label", s.label.to_string()},
           {"consumed_footprints", s.consumed_footprints},
           {"v_target", s.v_target},
           {"candidate_count", s.candidate_count},
           {"foot_clips", s.foot_clips},
           {"toe_clips", s.toe_clips},
           {"weights",
            {{"w_foot", s.weights.w_foot},
             {"w_toe", s.weights.w_toe},
             {"v", s.weights.v},
             {"residual", s.weights.residual}}},
           {"raw_error", {{"position", s.raw_error.position}, {"yaw_deg", s.raw_error.yaw * 180.0 / kPi}}},
           {"frame_begin", s.frame_begin},
           {"frame_end", s.frame_end}};
    if (timing) j["seconds"] = s.seconds;
    steps.push_back(std::move(j));
  }
  Json j{{"plan", plan_to_json(r.plan)},
         {"corrections", change_log_to_json(r.corrections)},
         {"corrected", r.corrected},
         {"classifications", classifications_to_json(r.classifications)},
         {"schedule", {{"velocity", r.schedule.velocity}, {"missing", std::move(schedule_missing)}}},
         {"steps", std::move(steps)}};
  if (timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace footloco
