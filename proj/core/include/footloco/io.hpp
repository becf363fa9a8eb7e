#pragma once

// JSON encodings of the core types: clip files, plan files, animation files.
//
// Angles are written both as radians ("yaw") and degrees ("yaw_deg"). Readers
// prefer the radian key when present so that a write/read cycle is bit-exact,
// and fall back to degrees for hand-authored files.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "footloco/types.hpp"

namespace footloco {

using Json = nlohmann::json;

Json vec_to_json(const Vec3& v);
Vec3 vec_from_json(const Json& j);

Json pose_to_json(const FootPose& p);
FootPose pose_from_json(const Json& j);

Json frame_to_json(const Frame& f);
Frame frame_from_json(const Json& j);

Json clip_to_json(const StepClip& c);
StepClip clip_from_json(const Json& j);

Json footprint_to_json(const Footprint& fp);
Footprint footprint_from_json(const Json& j);

Json plan_to_json(const FootprintPlan& p);
FootprintPlan plan_from_json(const Json& j);

Json motion_to_json(const MotionOutput& m);
MotionOutput motion_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j, int indent = 1);

// Canonical text form used by both the CLI and the service, so their outputs
// compare byte-for-byte.
std::string dump_canonical(const Json& j);

}  // namespace footloco
