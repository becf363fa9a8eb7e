#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "footloco/database.hpp"
#include "footloco/io.hpp"
#include "footloco/types.hpp"

namespace footloco {

// Outcome of distance/height classification. Unreachable is a value, not an error.
enum class GlobalClass { Walking, Running, Jumping, StairStep, Unreachable };
std::string_view to_string(GlobalClass c);

inline constexpr double kStairTrigger = 0.04;  // meters of rise
// Tolerance on band edges, absorbing rounding in corrected distances.
inline constexpr double kLimitTolerance = 1e-9;

GlobalClass classify_global(double d, double dy, const BehaviourLimits& limits, double stair_trigger = kStairTrigger);

struct JumpPattern {
  double theta_lift = 0.0;
  double theta_land = 0.0;
  double travel = 0.0;     // acting-foot plane distance
  double feet_lift = 0.0;  // inter-foot plane distance at lift
  double feet_land = 0.0;  // inter-foot plane distance at landing; 0 without a partner print
  bool lift_simultaneous = false;
  bool land_simultaneous = false;
  std::optional<Side> lead_side;
};

struct JumpClassification {
  JumpPattern pattern;
  BehaviourLabel label;
  int consumed = 1;
};

// Jump sub-type of the step landing on plan[index]. plan[index - 1] supports the
// lift; plan[index + 1], if of the opposite side, is the partner's landing print.
JumpClassification classify_jump(std::span<const Footprint> plan, std::size_t index, const BehaviourLimits& limits);

struct StepFlags {
  bool long_step = false;
  bool corrected = false;
  bool unreachable = false;
  bool stance = false;  // plan indices 0 and 1
  friend bool operator==(const StepFlags&, const StepFlags&) = default;
};

struct StepClassification {
  int plan_index = 0;
  BehaviourLabel label;
  int consumed_footprints = 1;
  StepFlags flags;
  double travel = 0.0;
  double rise = 0.0;
  std::optional<JumpPattern> jump;
};

struct ClassifyConfig {
  std::size_t walk_run_window = 4;
  std::size_t run_jump_window = 4;
  double stair_trigger = kStairTrigger;
};

// Index of the last print before `index` on the same side, if any.
std::optional<std::size_t> previous_same_side(std::span<const Footprint> plan, std::size_t index);

// Acting-foot travel and rise over the support for the step onto plan[index].
struct StepGeometry {
  double travel = 0.0;
  double rise = 0.0;
};
StepGeometry step_geometry(std::span<const Footprint> plan, std::size_t index);

// Overlap-region disambiguation: looks at the `window` steps starting at index.
StepClassification lookahead_resolve(std::span<const Footprint> plan, std::size_t index, const MotionDatabase& db,
                                     const ClassifyConfig& cfg = {});

// One entry per footprint group: two stance entries, then one per step (jumps
// with a simultaneous phase cover two prints).
std::vector<StepClassification> classify_plan(const FootprintPlan& plan, const MotionDatabase& db,
                                              const ClassifyConfig& cfg = {});

FootprintPlan mirror_plan(const FootprintPlan& plan);

Json classification_to_json(const StepClassification& c);
Json classifications_to_json(std::span<const StepClassification> cs);

}  // namespace footloco
