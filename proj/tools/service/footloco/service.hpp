#pragma once

// Request handlers shared by the command-line tool and the HTTP service. Every
// handler is a pure function of the loaded artifacts and its input, and every
// JSON body is rendered with dump_canonical so both front ends agree byte-for-byte.

#include <memory>
#include <string>
#include <string_view>

#include "footloco/compose.hpp"
#include "footloco/database.hpp"
#include "footloco/transitions.hpp"

namespace footloco::service {

inline constexpr int kDefaultPort = 7600;
inline constexpr const char* kDefaultBind = "127.0.0.1";

Json db_summary(const MotionDatabase& db);
Json classify(const MotionDatabase& db, const FootprintPlan& plan);
// {"plan": corrected plan, "log": change log}
Json correct(const MotionDatabase& db, const FootprintPlan& plan);
// {"motion": MotionOutput, "report": report without timing}
Json synthesize(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan);
// Enclosure and blend weights of one step of the corrected plan.
Json explain_step(const MotionDatabase& db, const TransitionGraphSet& graphs, const FootprintPlan& plan,
                  std::size_t plan_index);

Json error_to_json(const Error& e);

struct Response {
  int status = 200;
  std::string body;
};

// Routes one request without any networking. Never throws.
class Router {
 public:
  Router(std::shared_ptr<const MotionDatabase> db, std::shared_ptr<const TransitionGraphSet> graphs);
  Response handle(std::string_view method, std::string_view path, std::string_view body) const;

 private:
  std::shared_ptr<const MotionDatabase> db_;
  std::shared_ptr<const TransitionGraphSet> graphs_;
};

// Blocking HTTP front end over a Router.
class HttpServer {
 public:
  explicit HttpServer(Router router);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  // Serves until stop(); returns false if the listener failed.
  bool listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace footloco::service
