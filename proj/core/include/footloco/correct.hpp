#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "footloco/database.hpp"
#include "footloco/io.hpp"
#include "footloco/patterns.hpp"
#include "footloco/types.hpp"

namespace footloco {

struct PlanChange {
  enum class Op { Move, Insert };
  Op op = Op::Move;
  std::size_t index = 0;  // position in the plan as it stood when the change was applied
  Footprint before;       // unused for inserts
  Footprint after;
  std::string reason;  // "height", "reach" or "deadlock"
  friend bool operator==(const PlanChange&, const PlanChange&) = default;
};

using ChangeLog = std::vector<PlanChange>;

inline constexpr std::size_t kMaxInsertions = 64;

struct CorrectConfig {
  // Applies the height formula as printed (support.y += l_stair - end.y) instead of
  // clamping the gain to l_stair.
  bool literal_height_formula = false;
  // Prints below this index never move. The full pass anchors the initial stance.
  std::size_t first_movable = 0;
  std::size_t max_insertions = kMaxInsertions;
};

struct Corrected {
  FootprintPlan plan;
  ChangeLog log;
  std::vector<bool> touched;  // per output footprint: moved or inserted
  std::size_t insertions = 0;
  bool residual = false;  // a single-operation call could not remove the violation
};

struct Violation {
  enum class Kind { Height, Reach };
  std::size_t index = 0;
  Kind kind = Kind::Height;
  double excess = 0.0;
};

std::optional<Violation> first_violation(const FootprintPlan& plan, const BehaviourLimits& limits,
                                         std::size_t from = 2);

// Raises the support of plan[index] so the gain is exactly l_stair, cascading
// backwards while the raised print violates its own predecessor.
Corrected correct_height(const FootprintPlan& plan, std::size_t index, double l_stair, const CorrectConfig& cfg = {});

// Splits the excess travel of plan[index] over the movable previous same-side
// prints: each of the n steps in that chain absorbs excess / n.
Corrected correct_reach(const FootprintPlan& plan, std::size_t index, const BehaviourLimits& limits,
                        const CorrectConfig& cfg = {});

// Full correction pass: height and reach corrections, falling back to pair
// insertion when a correction leaves a violation. Throws UnresolvablePlan at the cap.
Corrected resolve_deadlock(const FootprintPlan& plan, const BehaviourLimits& limits, const CorrectConfig& cfg = {});

// The pass used by composition: stance prints 0 and 1 stay fixed.
Corrected correct_plan(const FootprintPlan& plan, const BehaviourLimits& limits);

FootprintPlan replay(const FootprintPlan& original, const ChangeLog& log);

Json change_to_json(const PlanChange& c);
PlanChange change_from_json(const Json& j);
Json change_log_to_json(const ChangeLog& log);
ChangeLog change_log_from_json(const Json& j);

}  // namespace footloco
