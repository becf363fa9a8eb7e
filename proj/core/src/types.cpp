#include "footloco/types.hpp"

#include <cmath>

namespace footloco {

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

Side side_from_string(std::string_view s) {
  if (s == "left" || s == "Left" || s == "L") return Side::Left;
  if (s == "right" || s == "Right" || s == "R") return Side::Right;
  throw Error(ErrorCode::InvalidInput, "unknown side '" + std::string(s) + "'");
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Walking: return "Walking";
    case Family::Running: return "Running";
    case Family::Jumping: return "Jumping";
    case Family::StairStep: return "StairStep";
  }
  return "?";
}

Family family_from_string(std::string_view s) {
  for (Family f : kAllFamilies) {
    if (to_string(f) == s) return f;
  }
  throw Error(ErrorCode::InvalidInput, "unknown family '" + std::string(s) + "'");
}

std::string_view to_string(LabelKind k) {
  switch (k) {
    case LabelKind::Walking: return "Walking";
    case LabelKind::Running: return "Running";
    case LabelKind::StairStep: return "StairStep";
    case LabelKind::JumpBothLiftBothLand: return "JumpBothLiftBothLand";
    case LabelKind::JumpOneLiftBothLand: return "JumpOneLiftBothLand";
    case LabelKind::JumpBothLiftOneLand: return "JumpBothLiftOneLand";
    case LabelKind::JumpOneLiftOneLand: return "JumpOneLiftOneLand";
  }
  return "?";
}

BehaviourLabel BehaviourLabel::jump(LabelKind kind, Side lead) {
  if (!footloco::is_jump(kind)) {
    throw Error(ErrorCode::InvalidInput, "jump label requires a jump kind");
  }
  return BehaviourLabel(kind, lead);
}

BehaviourLabel BehaviourLabel::of_family(Family f, Side lead) {
  switch (f) {
    case Family::Walking: return walking();
    case Family::Running: return running();
    case Family::StairStep: return stair();
    case Family::Jumping: return jump(LabelKind::JumpOneLiftOneLand, lead);
  }
  return walking();
}

Family BehaviourLabel::family() const {
  switch (kind_) {
    case LabelKind::Walking: return Family::Walking;
    case LabelKind::Running: return Family::Running;
    case LabelKind::StairStep: return Family::StairStep;
    default: return Family::Jumping;
  }
}

BehaviourLabel BehaviourLabel::mirrored() const {
  BehaviourLabel out = *this;
  if (out.lead_) out.lead_ = opposite(*out.lead_);
  return out;
}

std::string BehaviourLabel::to_string() const {
  std::string s(footloco::to_string(kind_));
  if (lead_) {
    s += ':';
    s += footloco::to_string(*lead_);
  }
  return s;
}

BehaviourLabel BehaviourLabel::parse(std::string_view text) {
  auto colon = text.find(':');
  std::string_view kind_text = text.substr(0, colon);
  static constexpr LabelKind kinds[] = {
      LabelKind::Walking,           LabelKind::Running,
      LabelKind::StairStep,         LabelKind::JumpBothLiftBothLand,
      LabelKind::JumpOneLiftBothLand, LabelKind::JumpBothLiftOneLand,
      LabelKind::JumpOneLiftOneLand};
  for (LabelKind k : kinds) {
    if (footloco::to_string(k) != kind_text) continue;
    if (!footloco::is_jump(k)) {
      if (colon != std::string_view::npos) {
        throw Error(ErrorCode::InvalidInput, "non-jump label carries a side: " + std::string(text));
      }
      return BehaviourLabel(k, std::nullopt);
    }
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::InvalidInput, "jump label without side: " + std::string(text));
    }
    return BehaviourLabel(k, side_from_string(text.substr(colon + 1)));
  }
  throw Error(ErrorCode::InvalidInput, "unknown label '" + std::string(text) + "'");
}

std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::InvertedLimits: return "InvertedLimits";
    case ErrorCode::SideMismatch: return "SideMismatch";
    case ErrorCode::NoCandidates: return "NoCandidates";
    case ErrorCode::NotEnclosed: return "NotEnclosed";
    case ErrorCode::DegenerateVertices: return "DegenerateVertices";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::OverlappingPins: return "OverlappingPins";
    case ErrorCode::AmbiguousPattern: return "AmbiguousPattern";
    case ErrorCode::UnknownPair: return "UnknownPair";
    case ErrorCode::MissingGraph: return "MissingGraph";
    case ErrorCode::NoPreviousFootprints: return "NoPreviousFootprints";
    case ErrorCode::UnresolvablePlan: return "UnresolvablePlan";
    case ErrorCode::BandViolation: return "BandViolation";
  }
  return "Unknown";
}

double normalize_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Vec3 rotate_yaw(const Vec3& v, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * v.x() + s * v.z(), v.y(), -s * v.x() + c * v.z()};
}

double plane_distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a.x() - b.x(), a.z() - b.z());
}

FootPose to_global(const FootPose& local, const FootPose& support) {
  FootPose out;
  out.foot = support.foot + rotate_yaw(local.foot, support.yaw);
  out.toe = support.foot + rotate_yaw(local.toe, support.yaw);
  out.yaw = normalize_angle(support.yaw + local.yaw);
  return out;
}

FootPose to_local(const FootPose& global, const FootPose& support) {
  FootPose out;
  out.foot = rotate_yaw(global.foot - support.foot, -support.yaw);
  out.toe = rotate_yaw(global.toe - support.foot, -support.yaw);
  out.yaw = normalize_angle(global.yaw - support.yaw);
  return out;
}

FootPose footprint_pose(const Footprint& fp, double toe_offset) {
  FootPose p;
  p.foot = fp.pos;
  p.yaw = normalize_angle(fp.yaw);
  p.toe = fp.pos + rotate_yaw(Vec3(0.0, 0.0, toe_offset), p.yaw);
  return p;
}

}  // namespace footloco
