#pragma once

#include <array>
#include <string>
#include <vector>

#include "footloco/blend.hpp"
#include "footloco/correct.hpp"
#include "footloco/database.hpp"
#include "footloco/extract.hpp"
#include "footloco/patterns.hpp"
#include "footloco/transitions.hpp"

namespace footloco {

struct ComposeConfig {
  double fps = 60.0;
  ExtractConfig extract;
  double hold_seconds = 0.25;
  double root_yaw_blend_seconds = 0.1;
  double cleanup_window_seconds = kCleanupWindowSeconds;
};

struct StepReport {
  int plan_index = 0;
  BehaviourLabel label;
  int consumed_footprints = 1;
  double v_target = 0.0;
  std::size_t candidate_count = 0;
  std::array<std::string, 4> foot_clips;
  std::array<std::string, 4> toe_clips;
  BlendSolution weights;
  EndError raw_error;
  int frame_begin = 0;
  int frame_end = 0;  // exclusive
  double seconds = 0.0;
};

struct ComposeReport {
  FootprintPlan plan;  // corrected
  ChangeLog corrections;
  std::vector<bool> corrected;
  std::vector<StepClassification> classifications;
  Schedule schedule;
  std::vector<StepReport> steps;
  double seconds = 0.0;
};

struct Composition {
  MotionOutput motion;
  ComposeReport report;
  std::vector<ContactPin> pins;  // one per footprint of the corrected plan, in plan order
};

// Analysis only: correction, classification and velocity schedule.
ComposeReport validate(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan,
                       const ComposeConfig& cfg = {});

Composition compose(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan,
                    const ComposeConfig& cfg = {});

// Timing fields are omitted when `timing` is false so reports compare across runs.
Json report_to_json(const ComposeReport& r, bool timing = true);

}  // namespace footloco
