#include "footloco/io.hpp"

#include <fstream>
#include <sstream>

namespace footloco {
namespace {

constexpr double kRadToDeg = 180.0 / kPi;
constexpr double kDegToRad = kPi / 180.0;

double read_angle(const Json& j, const char* rad_key, const char* deg_key) {
  if (j.contains(rad_key)) return j.at(rad_key).get<double>();
  if (j.contains(deg_key)) return normalize_angle(j.at(deg_key).get<double>() * kDegToRad);
  throw Error(ErrorCode::InvalidInput, std::string("missing angle key '") + deg_key + "'");
}

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing key '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

Json vec_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::InvalidInput, "expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Json pose_to_json(const FootPose& p) {
  return Json{{"foot", vec_to_json(p.foot)},
              {"yaw", p.yaw},
              {"yaw_deg", p.yaw * kRadToDeg},
              {"toe", vec_to_json(p.toe)}};
}

FootPose pose_from_json(const Json& j) {
  FootPose p;
  p.foot = vec_from_json(j.at("foot"));
  p.yaw = read_angle(j, "yaw", "yaw_deg");
  p.toe = vec_from_json(j.at("toe"));
  return p;
}

Json frame_to_json(const Frame& f) {
  return Json{{"root", vec_to_json(f.root_pos)},
              {"root_yaw", f.root_yaw},
              {"root_yaw_deg", f.root_yaw * kRadToDeg},
              {"left", pose_to_json(f.left)},
              {"right", pose_to_json(f.right)}};
}

Frame frame_from_json(const Json& j) {
  Frame f;
  f.root_pos = vec_from_json(j.at("root"));
  f.root_yaw = read_angle(j, "root_yaw", "root_yaw_deg");
  f.left = pose_from_json(j.at("left"));
  f.right = pose_from_json(j.at("right"));
  return f;
}

Json clip_to_json(const StepClip& c) {
  Json frames = Json::array();
  for (const Frame& f : c.frames) frames.push_back(frame_to_json(f));
  return Json{{"id", c.id},
              {"support", pose_to_json(c.support)},
              {"support_side", to_string(c.support_side)},
              {"start_local", pose_to_json(c.start_local)},
              {"end_local", pose_to_json(c.end_local)},
              {"v_root", c.v_root},
              {"label", c.label.to_string()},
              {"fps", c.fps},
              {"frames", std::move(frames)}};
}

StepClip clip_from_json(const Json& j) {
  StepClip c;
  c.id = required<std::string>(j, "id");
  c.support = pose_from_json(j.at("support"));
  c.support_side = side_from_string(required<std::string>(j, "support_side"));
  c.start_local = pose_from_json(j.at("start_local"));
  c.end_local = pose_from_json(j.at("end_local"));
  c.v_root = required<double>(j, "v_root");
  c.label = BehaviourLabel::parse(required<std::string>(j, "label"));
  c.fps = required<double>(j, "fps");
  for (const Json& f : j.at("frames")) c.frames.push_back(frame_from_json(f));
  if (c.frames.empty() || !(c.fps > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "clip '" + c.id + "' needs frames and a positive fps");
  }
  if (c.v_root < 0.0) throw Error(ErrorCode::InvalidInput, "clip '" + c.id + "' has negative v_root");
  return c;
}

Json footprint_to_json(const Footprint& fp) {
  return Json{{"side", to_string(fp.side)},
              {"pos", vec_to_json(fp.pos)},
              {"yaw", fp.yaw},
              {"yaw_deg", fp.yaw * kRadToDeg}};
}

Footprint footprint_from_json(const Json& j) {
  Footprint fp;
  fp.side = side_from_string(required<std::string>(j, "side"));
  fp.pos = vec_from_json(j.at("pos"));
  fp.yaw = read_angle(j, "yaw", "yaw_deg");
  if (!(fp.yaw > -kPi && fp.yaw <= kPi)) fp.yaw = normalize_angle(fp.yaw);
  return fp;
}

Json plan_to_json(const FootprintPlan& p) {
  Json arr = Json::array();
  for (const Footprint& fp : p.footprints) arr.push_back(footprint_to_json(fp));
  return Json{{"footprints", std::move(arr)}};
}

FootprintPlan plan_from_json(const Json& j) {
  FootprintPlan p;
  for (const Json& fp : j.at("footprints")) p.footprints.push_back(footprint_from_json(fp));
  if (p.footprints.size() < 2) {
    throw Error(ErrorCode::InvalidInput, "a plan needs at least two footprints");
  }
  return p;
}

Json motion_to_json(const MotionOutput& m) {
  Json frames = Json::array();
  for (const OutputFrame& f : m.frames) {
    Json jf = frame_to_json(f.pose);
    jf["left_contact"] = f.left_contact;
    jf["right_contact"] = f.right_contact;
    frames.push_back(std::move(jf));
  }
  Json steps = Json::array();
  for (const StepAnnotation& s : m.steps) {
    steps.push_back(Json{{"plan_index", s.plan_index},
                         {"label", s.label.to_string()},
                         {"frame_begin", s.frame_begin},
                         {"frame_end", s.frame_end}});
  }
  return Json{{"fps", m.fps}, {"frames", std::move(frames)}, {"steps", std::move(steps)}};
}

MotionOutput motion_from_json(const Json& j) {
  MotionOutput m;
  m.fps = required<double>(j, "fps");
  for (const Json& jf : j.at("frames")) {
    OutputFrame f;
    f.pose = frame_from_json(jf);
    f.left_contact = jf.at("left_contact").get<bool>();
    f.right_contact = jf.at("right_contact").get<bool>();
    m.frames.push_back(f);
  }
  for (const Json& js : j.at("steps")) {
    StepAnnotation s;
    s.plan_index = js.at("plan_index").get<int>();
    s.label = BehaviourLabel::parse(js.at("label").get<std::string>());
    s.frame_begin = js.at("frame_begin").get<int>();
    s.frame_end = js.at("frame_end").get<int>();
    m.steps.push_back(s);
  }
  return m;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j, int indent) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << j.dump(indent) << '\n';
}

std::string dump_canonical(const Json& j) { return j.dump(); }

}  // namespace footloco
