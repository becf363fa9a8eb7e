#include "footloco/patterns.hpp"

#include <cmath>
#include <string>

namespace footloco {
namespace {

void check_alternation(std::span<const Footprint> plan) {
  for (std::size_t i = 1; i < plan.size(); ++i) {
    if (plan[i].side == plan[i - 1].side) {
      throw Error(ErrorCode::SideMismatch,
                  "consecutive footprints on the " + std::string(to_string(plan[i].side)) + " side",
                  static_cast<int>(i));
    }
  }
}

// Left print must sit on the left of the right print unless the yaws oppose.
void check_crossing(const Footprint& a, const Footprint& b, double feet_max, std::size_t index) {
  const Footprint& left = a.side == Side::Left ? a : b;
  const Footprint& right = a.side == Side::Left ? b : a;
  const double lateral = rotate_yaw(left.pos - right.pos, -right.yaw).x();
  if (lateral < -feet_max && std::abs(normalize_angle(left.yaw - right.yaw)) > kPi / 2.0) {
    throw Error(ErrorCode::AmbiguousPattern, "left and right prints cross", static_cast<int>(index));
  }
}

Family to_family(GlobalClass c) {
  switch (c) {
    case GlobalClass::Running: return Family::Running;
    case GlobalClass::Jumping: return Family::Jumping;
    case GlobalClass::StairStep: return Family::StairStep;
    default: return Family::Walking;
  }
}

}  // namespace

std::string_view to_string(GlobalClass c) {
  switch (c) {
    case GlobalClass::Walking: return "Walking";
    case GlobalClass::Running: return "Running";
    case GlobalClass::Jumping: return "Jumping";
    case GlobalClass::StairStep: return "StairStep";
    case GlobalClass::Unreachable: return "Unreachable";
  }
  return "?";
}

GlobalClass classify_global(double d, double dy, const BehaviourLimits& limits, double stair_trigger) {
  constexpr double tol = kLimitTolerance;
  if (dy > stair_trigger) {
    return dy <= limits.stair_height + tol ? GlobalClass::StairStep : GlobalClass::Unreachable;
  }
  if (d <= limits[Family::Walking].max + tol) return GlobalClass::Walking;
  if (d <= limits[Family::Running].max + tol) return GlobalClass::Running;
  if (d <= limits[Family::Jumping].max + tol) return GlobalClass::Jumping;
  return GlobalClass::Unreachable;
}

std::optional<std::size_t> previous_same_side(std::span<const Footprint> plan, std::size_t index) {
  for (std::size_t j = index; j-- > 0;) {
    if (plan[j].side == plan[index].side) return j;
  }
  return std::nullopt;
}

StepGeometry step_geometry(std::span<const Footprint> plan, std::size_t index) {
  StepGeometry g;
  if (index == 0) return g;
  if (auto prev = previous_same_side(plan, index)) g.travel = plane_distance(plan[*prev].pos, plan[index].pos);
  g.rise = plan[index].pos.y() - plan[index - 1].pos.y();
  return g;
}

JumpClassification classify_jump(std::span<const Footprint> plan, std::size_t index, const BehaviourLimits& limits) {
  if (index < 2 || index >= plan.size()) {
    throw Error(ErrorCode::InvalidInput, "a jump needs a support and a previous acting print", static_cast<int>(index));
  }
  const Footprint& land = plan[index];
  const Footprint& support = plan[index - 1];
  const auto prev_idx = previous_same_side(plan, index);
  if (!prev_idx) throw Error(ErrorCode::InvalidInput, "no previous acting print", static_cast<int>(index));
  const Footprint& lift = plan[*prev_idx];

  JumpClassification out;
  JumpPattern& p = out.pattern;
  p.travel = plane_distance(lift.pos, land.pos);
  p.theta_lift = interfoot_angle(support.pos, support.yaw, lift.pos);
  p.feet_lift = plane_distance(support.pos, lift.pos);

  const Footprint* partner = nullptr;
  if (index + 1 < plan.size() && plan[index + 1].side != land.side) partner = &plan[index + 1];
  if (partner) {
    p.theta_land = interfoot_angle(land.pos, land.yaw, partner->pos);
    p.feet_land = plane_distance(land.pos, partner->pos);
  }

  p.lift_simultaneous =
      partner != nullptr && std::abs(p.theta_lift) <= limits.theta_lift && p.feet_lift <= limits.feet_max;
  p.land_simultaneous =
      partner != nullptr && std::abs(p.theta_land) <= limits.theta_land && p.feet_land <= limits.feet_max;
  check_crossing(support, lift, limits.feet_max, index);
  if (partner) check_crossing(land, *partner, limits.feet_max, index);

  LabelKind kind;
  if (p.lift_simultaneous) {
    kind = p.land_simultaneous ? LabelKind::JumpBothLiftBothLand : LabelKind::JumpBothLiftOneLand;
  } else {
    kind = p.land_simultaneous ? LabelKind::JumpOneLiftBothLand : LabelKind::JumpOneLiftOneLand;
  }

  Side lead = land.side;
  if (!p.lift_simultaneous) {
    // The forward of the two lift prints along the direction of travel.
    const Vec3 mid = 0.5 * (support.pos + lift.pos);
    Vec3 dir = land.pos - mid;
    dir.y() = 0.0;
    const double ps = (support.pos - mid).dot(dir);
    const double pl = (lift.pos - mid).dot(dir);
    lead = ps >= pl ? support.side : lift.side;
  }
  p.lead_side = lead;
  out.label = BehaviourLabel::jump(kind, lead);
  out.consumed = (p.lift_simultaneous || p.land_simultaneous) ? 2 : 1;
  return out;
}

StepClassification lookahead_resolve(std::span<const Footprint> plan, std::size_t index, const MotionDatabase& db,
                                     const ClassifyConfig& cfg) {
  const BehaviourLimits& limits = db.limits();
  const FamilyRanges& raw = db.raw_limits();
  const StepGeometry g = step_geometry(plan, index);

  StepClassification out;
  out.plan_index = static_cast<int>(index);
  out.travel = g.travel;
  out.rise = g.rise;
  GlobalClass cls = classify_global(g.travel, g.rise, limits, cfg.stair_trigger);

  auto resolve = [&](Family lower, Family higher, std::size_t window) {
    const Range overlap{raw[higher].min, raw[lower].max};
    if (overlap.min > overlap.max || !overlap.contains(g.travel)) return;
    const Range higher_only{limits[lower].max, limits[higher].max};
    const std::size_t end = std::min(plan.size(), index + std::max<std::size_t>(window, 1));
    for (std::size_t j = index; j < end; ++j) {
      const StepGeometry gj = step_geometry(plan, j);
      if (gj.rise > cfg.stair_trigger) continue;
      if (gj.travel > higher_only.min && gj.travel <= higher_only.max) {
        cls = higher == Family::Running ? GlobalClass::Running : GlobalClass::Jumping;
        out.flags.long_step = false;
        return;
      }
    }
    out.flags.long_step = true;
  };
  if (cls == GlobalClass::Walking) resolve(Family::Walking, Family::Running, cfg.walk_run_window);
  if (cls == GlobalClass::Running) resolve(Family::Running, Family::Jumping, cfg.run_jump_window);

  if (cls == GlobalClass::Unreachable) {
    out.flags.unreachable = true;
    out.label = BehaviourLabel::walking();
    return out;
  }
  if (cls == GlobalClass::Jumping) {
    const JumpClassification j = classify_jump(plan, index, limits);
    out.label = j.label;
    out.consumed_footprints = j.consumed;
    out.jump = j.pattern;
    return out;
  }
  out.label = BehaviourLabel::of_family(to_family(cls));
  return out;
}

std::vector<StepClassification> classify_plan(const FootprintPlan& plan, const MotionDatabase& db,
                                              const ClassifyConfig& cfg) {
  const auto& fps = plan.footprints;
  if (fps.size() < 2) throw Error(ErrorCode::InvalidInput, "a plan needs at least two footprints");
  check_alternation(fps);

  std::vector<StepClassification> out;
  for (int i = 0; i < 2; ++i) {
    StepClassification stance;
    stance.plan_index = i;
    stance.label = BehaviourLabel::walking();
    stance.flags.stance = true;
    out.push_back(stance);
  }
  for (std::size_t i = 2; i < fps.size();) {
    StepClassification c = lookahead_resolve(fps, i, db, cfg);
    i += static_cast<std::size_t>(c.consumed_footprints);
    out.push_back(std::move(c));
  }
  return out;
}

FootprintPlan mirror_plan(const FootprintPlan& plan) {
  FootprintPlan out = plan;
  for (Footprint& f : out.footprints) {
    f.side = opposite(f.side);
    f.pos.x() = -f.pos.x();
    f.yaw = normalize_angle(-f.yaw);
  }
  return out;
}

Json classification_to_json(const StepClassification& c) {
  Json j{{"plan_index", c.plan_index},
         {"label", c.flags.unreachable ? std::string("Unreachable") : c.label.to_string()},
         {"consumed_footprints", c.consumed_footprints},
         {"travel", c.travel},
         {"rise", c.rise},
         {"flags",
          {{"long_step", c.flags.long_step},
           {"corrected", c.flags.corrected},
           {"unreachable", c.flags.unreachable},
           {"stance", c.flags.stance}}}};
  if (c.jump) {
    const JumpPattern& p = *c.jump;
    j["jump"] = Json{{"theta_lift", p.theta_lift},
                     {"theta_land", p.theta_land},
                     {"travel", p.travel},
                     {"feet_lift", p.feet_lift},
                     {"feet_land", p.feet_land},
                     {"lift_simultaneous", p.lift_simultaneous},
                     {"land_simultaneous", p.land_simultaneous},
                     {"lead_side", p.lead_side ? Json(std::string(to_string(*p.lead_side))) : Json(nullptr)}};
  }
  return j;
}

Json classifications_to_json(std::span<const StepClassification> cs) {
  Json arr = Json::array();
  for (const StepClassification& c : cs) arr.push_back(classification_to_json(c));
  return arr;
}

}  // namespace footloco
