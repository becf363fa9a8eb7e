#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "footloco/extract.hpp"
#include "footloco/types.hpp"

namespace footloco {

// Weights of one blend: barycentric weights for the foot and toe polygons and
// the foot/toe combination (v[0] + v[1] = 1).
struct BlendSolution {
  std::array<double, 4> w_foot{};
  std::array<double, 4> w_toe{};
  std::array<double, 2> v{1.0, 0.0};
  double residual = 0.0;
};

struct JointWeights {
  std::array<double, 2> v{};
  double residual = 0.0;
};

// Most negative weight accepted from the minimum-norm solve before falling
// back to a triangle split.
inline constexpr double kNegativeWeightFloor = -0.05;

// Affine weights reproducing `target` in x-z from four vertices: the
// minimum-norm solution of the 3x4 interpolation system.
std::array<double, 4> solve_position_weights(std::span<const Vec3, 4> vertices, const Vec3& target);

// Least-squares (v1, v2) with v1 + v2 = 1 for rows v1*foot[i] + v2*toe[i] ~ target[i].
// The residual is the Euclidean norm of the stacked row errors.
JointWeights solve_joint_weights(std::span<const Vec3> foot_rows, std::span<const Vec3> toe_rows,
                                 std::span<const Vec3> targets);

// Stacks the eight vertex rows (four foot, four toe) of a selection.
struct JointRows {
  std::vector<Vec3> foot;
  std::vector<Vec3> toe;
  std::vector<Vec3> targets;
};
JointRows joint_rows(const EnclosureSelection& sel);

BlendSolution solve_blend(const EnclosureSelection& sel);

// Normalized time window in which a foot is airborne during a step.
struct FlightWindow {
  double begin = 0.0;
  double end = 1.0;
};

struct StepTiming {
  FlightWindow acting;
  std::optional<FlightWindow> partner;  // support-side foot, jumps only
};

StepTiming step_timing(LabelKind kind);

// Poses the blended step is warped onto at its ends.
struct StepPins {
  std::optional<FootPose> acting_start;
  FootPose acting_end;
  std::optional<FootPose> partner_end;
  std::optional<BehaviourLabel> label;
};

// Median-length time normalization, weighted blend of the eight clips, then a
// smooth displacement warp so the acting foot ends exactly on its footprint.
StepClip blend_step(const EnclosureSelection& sel, const BlendSolution& weights);
StepClip blend_step(const EnclosureSelection& sel, const BlendSolution& weights, const StepPins& pins);

// Pose error of the acting foot at the last frame relative to the selection target.
struct EndError {
  double position = 0.0;  // meters, 3D
  double yaw = 0.0;       // radians, absolute
};
EndError raw_blend_error(const EnclosureSelection& sel, const BlendSolution& weights);

std::vector<Frame> resample(std::span<const Frame> frames, std::size_t count);

struct ContactPin {
  Side side = Side::Left;
  FootPose pose;
  int begin = 0;  // inclusive frame range
  int end = 0;
};

inline constexpr double kCleanupWindowSeconds = 0.15;

// Pins each contact range exactly onto its footprint and eases the correction
// in and out over the neighbouring window with a C1 ramp.
MotionOutput cleanup_footskate(const MotionOutput& motion, std::span<const ContactPin> pins,
                               double window_seconds = kCleanupWindowSeconds);

double smoothstep(double t);

}  // namespace footloco
