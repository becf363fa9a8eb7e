#include "footloco/correct.hpp"

#include <algorithm>
#include <cmath>

#include "footloco/patterns.hpp"

namespace footloco {
namespace {

bool valid_through(const FootprintPlan& plan, const BehaviourLimits& limits, std::size_t last) {
  const auto v = first_violation(plan, limits, 2);
  return !v || v->index > last;
}

Corrected start_from(const FootprintPlan& plan) {
  Corrected c;
  c.plan = plan;
  c.touched.assign(plan.footprints.size(), false);
  return c;
}

void move(Corrected& c, std::size_t index, const Footprint& after, const char* reason) {
  c.log.push_back({PlanChange::Op::Move, index, c.plan.footprints[index], after, reason});
  c.plan.footprints[index] = after;
  c.touched[index] = true;
}

void insert(Corrected& c, std::size_t index, const Footprint& fp) {
  c.log.push_back({PlanChange::Op::Insert, index, Footprint{}, fp, "deadlock"});
  c.plan.footprints.insert(c.plan.footprints.begin() + static_cast<std::ptrdiff_t>(index), fp);
  c.touched.insert(c.touched.begin() + static_cast<std::ptrdiff_t>(index), true);
  ++c.insertions;
}

void merge(Corrected& into, Corrected&& step) {
  into.plan = std::move(step.plan);
  into.log.insert(into.log.end(), step.log.begin(), step.log.end());
  for (std::size_t i = 0; i < into.touched.size(); ++i) into.touched[i] = into.touched[i] || step.touched[i];
}

// Two prints placed before plan[i], halving the reach or climbing by l_stair.
std::pair<Footprint, Footprint> deadlock_pair(const FootprintPlan& plan, std::size_t i, Violation::Kind kind,
                                              double l_stair) {
  const Footprint& lift = plan.footprints[i - 2];
  const Footprint& support = plan.footprints[i - 1];
  const Footprint& target = plan.footprints[i];
  const double half_yaw = 0.5 * normalize_angle(target.yaw - lift.yaw);

  Footprint a;
  a.side = target.side;
  a.pos = 0.5 * (lift.pos + target.pos);
  a.yaw = normalize_angle(lift.yaw + half_yaw);
  Footprint b;
  b.side = support.side;
  b.pos = support.pos + (a.pos - lift.pos);
  b.yaw = normalize_angle(support.yaw + half_yaw);
  if (kind == Violation::Kind::Height) {
    a.pos.y() = std::min(support.pos.y() + l_stair, target.pos.y());
    b.pos.y() = std::min(a.pos.y() + l_stair, target.pos.y());
  }
  return {a, b};
}

}  // namespace

std::optional<Violation> first_violation(const FootprintPlan& plan, const BehaviourLimits& limits, std::size_t from) {
  const auto& fps = plan.footprints;
  const double reach = limits[Family::Jumping].max;
  for (std::size_t i = std::max<std::size_t>(from, 1); i < fps.size(); ++i) {
    const StepGeometry g = step_geometry(fps, i);
    if (g.rise > limits.stair_height + kLimitTolerance) {
      return Violation{i, Violation::Kind::Height, g.rise - limits.stair_height};
    }
    if (g.travel > reach + kLimitTolerance) return Violation{i, Violation::Kind::Reach, g.travel - reach};
  }
  return std::nullopt;
}

Corrected correct_height(const FootprintPlan& plan, std::size_t index, double l_stair, const CorrectConfig& cfg) {
  if (index == 0 || index >= plan.footprints.size()) {
    throw Error(ErrorCode::InvalidInput, "height correction index out of range", static_cast<int>(index));
  }
  Corrected c = start_from(plan);
  auto& fps = c.plan.footprints;
  for (std::size_t j = index; j >= 1; --j) {
    const double rise = fps[j].pos.y() - fps[j - 1].pos.y();
    if (rise <= l_stair + kLimitTolerance) break;
    if (j - 1 < cfg.first_movable) {
      c.residual = true;
      break;
    }
    Footprint raised = fps[j - 1];
    raised.pos.y() = cfg.literal_height_formula ? raised.pos.y() + l_stair - fps[j].pos.y() : fps[j].pos.y() - l_stair;
    move(c, j - 1, raised, "height");
    if (cfg.literal_height_formula) {
      c.residual = fps[j].pos.y() - fps[j - 1].pos.y() > l_stair + kLimitTolerance;
      break;
    }
  }
  return c;
}

Corrected correct_reach(const FootprintPlan& plan, std::size_t index, const BehaviourLimits& limits,
                        const CorrectConfig& cfg) {
  const auto& src = plan.footprints;
  if (index >= src.size()) throw Error(ErrorCode::InvalidInput, "reach correction index out of range");
  if (index < 2) throw Error(ErrorCode::NoPreviousFootprints, "no previous footprints to share the excess",
                             static_cast<int>(index));

  std::vector<std::size_t> chain;  // nearest first
  for (auto j = previous_same_side(src, index); j && *j >= cfg.first_movable; j = previous_same_side(src, *j)) {
    chain.push_back(*j);
  }
  if (chain.empty()) {
    throw Error(ErrorCode::NoPreviousFootprints, "no movable previous footprints on this side",
                static_cast<int>(index));
  }

  Corrected c = start_from(plan);
  const double d = plane_distance(src[chain.front()].pos, src[index].pos);
  const double excess = d - limits[Family::Jumping].max;
  if (excess <= 0.0) return c;

  const double n = static_cast<double>(chain.size());
  const Vec3& target = src[index].pos;
  for (std::size_t m = 0; m < chain.size(); ++m) {
    Footprint moved = src[chain[m]];
    Vec3 dir = target - moved.pos;
    dir.y() = 0.0;
    const double len = dir.norm();
    if (len <= 0.0) continue;
    moved.pos += (static_cast<double>(chain.size() - m) * excess / n / len) * dir;
    move(c, chain[m], moved, "reach");
  }
  c.residual = !valid_through(c.plan, limits, index);
  return c;
}

Corrected resolve_deadlock(const FootprintPlan& plan, const BehaviourLimits& limits, const CorrectConfig& cfg) {
  if (plan.footprints.size() < 2) throw Error(ErrorCode::InvalidInput, "a plan needs at least two footprints");
  Corrected state = start_from(plan);
  // Each successful correction advances the first violation; each insertion is capped.
  const std::size_t max_rounds = 4 * (plan.footprints.size() + cfg.max_insertions) + 16;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const auto v = first_violation(state.plan, limits, 2);
    if (!v) return state;

    std::optional<Corrected> attempt;
    if (v->kind == Violation::Kind::Height) {
      attempt = correct_height(state.plan, v->index, limits.stair_height, cfg);
    } else {
      try {
        attempt = correct_reach(state.plan, v->index, limits, cfg);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoPreviousFootprints) throw;
      }
    }
    if (attempt && !attempt->residual && valid_through(attempt->plan, limits, v->index)) {
      merge(state, std::move(*attempt));
      continue;
    }

    if (state.insertions + 2 > cfg.max_insertions) {
      throw Error(ErrorCode::UnresolvablePlan,
                  "more than " + std::to_string(cfg.max_insertions) + " footprints would have to be inserted",
                  static_cast<int>(v->index));
    }
    const auto [a, b] = deadlock_pair(state.plan, v->index, v->kind, limits.stair_height);
    insert(state, v->index, a);
    insert(state, v->index + 1, b);
  }
  throw Error(ErrorCode::UnresolvablePlan, "correction did not converge");
}

Corrected correct_plan(const FootprintPlan& plan, const BehaviourLimits& limits) {
  CorrectConfig cfg;
  cfg.first_movable = 2;
  return resolve_deadlock(plan, limits, cfg);
}

FootprintPlan replay(const FootprintPlan& original, const ChangeLog& log) {
  FootprintPlan p = original;
  for (const PlanChange& c : log) {
    if (c.op == PlanChange::Op::Insert) {
      if (c.index > p.footprints.size()) throw Error(ErrorCode::InvalidInput, "log insert out of range");
      p.footprints.insert(p.footprints.begin() + static_cast<std::ptrdiff_t>(c.index), c.after);
    } else {
      if (c.index >= p.footprints.size()) throw Error(ErrorCode::InvalidInput, "log move out of range");
      p.footprints[c.index] = c.after;
    }
  }
  return p;
}

Json change_to_json(const PlanChange& c) {
  Json j{{"op", c.op == PlanChange::Op::Move ? "move" : "insert"},
         {"index", c.index},
         {"after", footprint_to_json(c.after)},
         {"reason", c.reason}};
  if (c.op == PlanChange::Op::Move) j["before"] = footprint_to_json(c.before);
  return j;
}

PlanChange change_from_json(const Json& j) {
  PlanChange c;
  const std::string op = j.at("op").get<std::string>();
  if (op != "move" && op != "insert") throw Error(ErrorCode::InvalidInput, "unknown change op '" + op + "'");
  c.op = op == "move" ? PlanChange::Op::Move : PlanChange::Op::Insert;
  c.index = j.at("index").get<std::size_t>();
  c.after = footprint_from_json(j.at("after"));
  if (j.contains("before")) c.before = footprint_from_json(j.at("before"));
  c.reason = j.value("reason", std::string());
  return c;
}

Json change_log_to_json(const ChangeLog& log) {
  Json arr = Json::array();
  for (const PlanChange& c : log) arr.push_back(change_to_json(c));
  return arr;
}

ChangeLog change_log_from_json(const Json& j) {
  ChangeLog log;
  for (const Json& c : j) log.push_back(change_from_json(c));
  return log;
}

}  // namespace footloco
