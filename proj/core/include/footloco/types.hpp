#pragma once

// Domain types shared across the locomotion composition pipeline.
//
// Conventions: y is up, the ground plane is x-z, and yaw is a rotation about
// +y measured from +z toward +x. A character facing +z has its left side at +x.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace footloco {

using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

enum class Side : std::uint8_t { Left, Right };

constexpr Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
std::string_view to_string(Side s);
Side side_from_string(std::string_view s);

enum class Family : std::uint8_t { Walking, Running, Jumping, StairStep };
inline constexpr Family kAllFamilies[] = {Family::Walking, Family::Running,
                                          Family::Jumping, Family::StairStep};
std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

enum class LabelKind : std::uint8_t {
  Walking,
  Running,
  StairStep,
  JumpBothLiftBothLand,
  JumpOneLiftBothLand,
  JumpBothLiftOneLand,
  JumpOneLiftOneLand,
};

constexpr bool is_jump(LabelKind k) {
  return k == LabelKind::JumpBothLiftBothLand || k == LabelKind::JumpOneLiftBothLand ||
         k == LabelKind::JumpBothLiftOneLand || k == LabelKind::JumpOneLiftOneLand;
}

// Behaviour label. Jump variants always carry the leading-foot side.
class BehaviourLabel {
 public:
  BehaviourLabel() = default;
  static BehaviourLabel walking() { return BehaviourLabel(LabelKind::Walking, std::nullopt); }
  static BehaviourLabel running() { return BehaviourLabel(LabelKind::Running, std::nullopt); }
  static BehaviourLabel stair() { return BehaviourLabel(LabelKind::StairStep, std::nullopt); }
  static BehaviourLabel jump(LabelKind kind, Side lead);
  static BehaviourLabel of_family(Family f, Side lead = Side::Left);

  LabelKind kind() const { return kind_; }
  std::optional<Side> lead() const { return lead_; }
  Family family() const;
  bool is_jump() const { return footloco::is_jump(kind_); }
  BehaviourLabel mirrored() const;

  std::string to_string() const;
  static BehaviourLabel parse(std::string_view text);

  friend bool operator==(const BehaviourLabel&, const BehaviourLabel&) = default;

 private:
  BehaviourLabel(LabelKind k, std::optional<Side> lead) : kind_(k), lead_(lead) {}
  LabelKind kind_ = LabelKind::Walking;
  std::optional<Side> lead_;
};

std::string_view to_string(LabelKind k);

struct FootPose {
  Vec3 foot = Vec3::Zero();
  double yaw = 0.0;  // radians, (-pi, pi]
  Vec3 toe = Vec3(0.0, 0.0, 0.15);

  friend bool operator==(const FootPose&, const FootPose&) = default;
};

struct Frame {
  Vec3 root_pos = Vec3::Zero();
  double root_yaw = 0.0;
  FootPose left;
  FootPose right;

  const FootPose& foot(Side s) const { return s == Side::Left ? left : right; }
  FootPose& foot(Side s) { return s == Side::Left ? left : right; }

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct StepClip {
  std::string id;
  FootPose support;  // global
  Side support_side = Side::Right;
  FootPose start_local;  // acting foot, support frame
  FootPose end_local;    // acting foot, support frame
  double v_root = 0.0;
  BehaviourLabel label;
  double fps = 60.0;
  std::vector<Frame> frames;

  Side acting_side() const { return opposite(support_side); }
  friend bool operator==(const StepClip&, const StepClip&) = default;
};

struct Footprint {
  Side side = Side::Left;
  Vec3 pos = Vec3::Zero();
  double yaw = 0.0;

  friend bool operator==(const Footprint&, const Footprint&) = default;
};

struct FootprintPlan {
  std::vector<Footprint> footprints;
  friend bool operator==(const FootprintPlan&, const FootprintPlan&) = default;
};

struct OutputFrame {
  Frame pose;
  bool left_contact = false;
  bool right_contact = false;

  bool contact(Side s) const { return s == Side::Left ? left_contact : right_contact; }
  friend bool operator==(const OutputFrame&, const OutputFrame&) = default;
};

struct StepAnnotation {
  int plan_index = 0;
  BehaviourLabel label;
  int frame_begin = 0;  // inclusive
  int frame_end = 0;    // exclusive
  friend bool operator==(const StepAnnotation&, const StepAnnotation&) = default;
};

struct MotionOutput {
  double fps = 60.0;
  std::vector<OutputFrame> frames;
  std::vector<StepAnnotation> steps;
  friend bool operator==(const MotionOutput&, const MotionOutput&) = default;
};

// Error codes surfaced through the CLI and the HTTP service.
enum class ErrorCode {
  InvalidInput,
  EmptyFamily,
  InvertedLimits,
  SideMismatch,
  NoCandidates,
  NotEnclosed,
  DegenerateVertices,
  RankDeficient,
  OverlappingPins,
  AmbiguousPattern,
  UnknownPair,
  MissingGraph,
  NoPreviousFootprints,
  UnresolvablePlan,
  BandViolation,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, int plan_index = -1)
      : std::runtime_error(std::move(message)), code_(code), plan_index_(plan_index) {}

  ErrorCode code() const { return code_; }
  int plan_index() const { return plan_index_; }
  Error with_plan_index(int idx) const { return Error(code_, what(), idx); }

 private:
  ErrorCode code_;
  int plan_index_;
};

// Geometry helpers.

// Wraps an angle to (-pi, pi].
double normalize_angle(double a);

// Rotation about +y by yaw applied to v.
Vec3 rotate_yaw(const Vec3& v, double yaw);

double plane_distance(const Vec3& a, const Vec3& b);

FootPose to_global(const FootPose& local, const FootPose& support);
FootPose to_local(const FootPose& global, const FootPose& support);

// Foot pose implied by a footprint: toe sits toe_offset ahead along the yaw.
FootPose footprint_pose(const Footprint& fp, double toe_offset);

}  // namespace footloco
