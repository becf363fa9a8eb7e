#include "footloco/service.hpp"

#include <httplib.h>

#include <vector>

#include "footloco/blend.hpp"
#include "footloco/extract.hpp"
#include "footloco/patterns.hpp"

namespace footloco::service {
namespace {

Json range_json(const Range& r) { return Json::array({r.min, r.max}); }

Json families_json(const FamilyRanges& f) {
  Json j = Json::object();
  for (Family fam : kAllFamilies) j[std::string(to_string(fam))] = range_json(f[fam]);
  return j;
}

Json weights_json(const BlendSolution& w) {
  return Json{{"w_foot", w.w_foot}, {"w_toe", w.w_toe}, {"v", w.v}, {"residual", w.residual}};
}

Response json_response(int status, const Json& j) { return Response{status, dump_canonical(j)}; }

Response error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, Json{{"code", code}, {"plan_index", nullptr}, {"message", message}});
}

int status_for(ErrorCode c) { return c == ErrorCode::InvalidInput ? 400 : 422; }

}  // namespace

Json db_summary(const MotionDatabase& db) {
  Json counts = Json::object();
  for (Family f : kAllFamilies) {
    counts[std::string(to_string(f))] = {{"Left", db.group(f, Side::Left).size()},
                                         {"Right", db.group(f, Side::Right).size()}};
  }
  const BehaviourLimits& l = db.limits();
  Json base = Json::object();
  for (Family f : kAllFamilies) base[std::string(to_string(f))] = db.base_velocity(f);
  return Json{{"clip_count", db.clips().size()},
              {"counts", std::move(counts)},
              {"toe_offset", db.toe_offset()},
              {"raw_limits", families_json(db.raw_limits())},
              {"limits",
               {{"bands", families_json(l.bands)},
                {"stair_height", l.stair_height},
                {"theta_lift_deg", l.theta_lift * 180.0 / kPi},
                {"theta_land_deg", l.theta_land * 180.0 / kPi},
                {"feet_max", l.feet_max}}},
              {"base_velocity", std::move(base)},
              {"mirror_complete", db.mirror_complete()}};
}

Json classify(const MotionDatabase& db, const FootprintPlan& plan) {
  return Json{{"classifications", classifications_to_json(classify_plan(plan, db))}};
}

Json correct(const MotionDatabase& db, const FootprintPlan& plan) {
  const Corrected c = correct_plan(plan, db.limits());
  return Json{{"plan", plan_to_json(c.plan)}, {"log", change_log_to_json(c.log)}, {"touched", c.touched}};
}

Json synthesize(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan) {
  const Composition c = compose(db, graphs, plan);
  return Json{{"motion", motion_to_json(c.motion)}, {"report", report_to_json(c.report, false)}};
}

Json explain_step(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan,
                  std::size_t plan_index) {
  const ComposeConfig cfg;
  const ComposeReport r = validate(db, graphs, plan, cfg);
  for (std::size_t ci = 0; ci < r.classifications.size(); ++ci) {
    const StepClassification& c = r.classifications[ci];
    if (c.flags.stance || static_cast<std::size_t>(c.plan_index) != plan_index) continue;
    const std::vector<Footprint>& fps = r.plan.footprints;
    const double v_target = r.schedule.velocity[ci];
    try {
      const Extraction ex = extract_enclosure(db, fps[plan_index - 1], fps[plan_index], c.label, v_target, cfg.extract);
      const BlendSolution w = solve_blend(ex.selection);
      const EndError raw = raw_blend_error(ex.selection, w);
      return Json{{"plan_index", c.plan_index},
                  {"classification", classification_to_json(c)},
                  {"v_target", v_target},
                  {"candidate_count", ex.candidate_count},
                  {"target", footprint_to_json(fps[plan_index])},
                  {"support", footprint_to_json(fps[plan_index - 1])},
                  {"selection", selection_to_json(ex.selection)},
                  {"weights", weights_json(w)},
                  {"raw_error", {{"position", raw.position}, {"yaw_deg", raw.yaw * 180.0 / kPi}}}};
    } catch (const Error& e) {
      throw e.plan_index() < 0 ? e.with_plan_index(c.plan_index) : e;
    }
  }
  throw Error(ErrorCode::InvalidInput, "no step starts at this footprint", static_cast<int>(plan_index));
}

Json error_to_json(const Error& e) {
  Json j{{"code", to_string(e.code())}, {"plan_index", nullptr}, {"message", e.what()}};
  if (e.plan_index() >= 0) j["plan_index"] = e.plan_index();
  return j;
}

Router::Router(std::shared_ptr<const MotionDatabase> db, std::shared_ptr<const TransitionGraphSet> graphs)
    : db_(std::move(db)), graphs_(std::move(graphs)) {}

Response Router::handle(std::string_view method, std::string_view path, std::string_view body) const {
  const bool get = method == "GET";
  const bool post = method == "POST";
  const bool known_get = path == "/db/summary" || path == "/graphs";
  const bool known_post = path == "/classify" || path == "/correct" || path == "/synthesize";
  if (!known_get && !known_post) return error_response(404, "NotFound", "unknown endpoint");
  if ((known_get && !get) || (known_post && !post)) return error_response(405, "MethodNotAllowed", "wrong method");
  try {
    if (path == "/db/summary") return json_response(200, db_summary(*db_));
    if (path == "/graphs") return json_response(200, graph_set_to_json(*graphs_));

    FootprintPlan plan;
    try {
      plan = plan_from_json(Json::parse(body));
    } catch (const Json::exception& e) {
      return error_response(400, to_string(ErrorCode::InvalidInput), e.what());
    }
    if (path == "/classify") return json_response(200, classify(*db_, plan));
    if (path == "/correct") return json_response(200, correct(*db_, plan));
    return json_response(200, synthesize(*db_, *graphs_, plan));
  } catch (const Error& e) {
    return json_response(status_for(e.code()), error_to_json(e));
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(Router r) : router(std::move(r)) {}
  Router router;
  httplib::Server server;
};

HttpServer::HttpServer(Router router) : impl_(std::make_unique<Impl>(std::move(router))) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const Response r = impl_->router.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  for (const char* p : {"/db/summary", "/graphs"}) impl_->server.Get(p, forward);
  for (const char* p : {"/classify", "/correct", "/synthesize"}) impl_->server.Post(p, forward);
  impl_->server.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const Response r = impl_->router.handle(req.method, req.path, req.body);
    res.set_content(r.body, "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace footloco::service
