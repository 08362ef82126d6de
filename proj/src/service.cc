#include "xplain/service.h"

#include <cstdlib>
#include <iostream>
#include <random>

#include <httplib.h>

#include "xplain/wire.h"

namespace xplain {

ServiceConfig ApplyEnvironment(ServiceConfig config) {
  if (const char* port = std::getenv("XPLAIN_PORT"); port && *port) {
    std::size_t used = 0;
    try {
      config.port = std::stoi(port, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || port[used] != '\0') {
      throw PreconditionError(std::string("XPLAIN_PORT is not a number: ") + port);
    }
  }
  return config;
}

void ValidateConfig(const ServiceConfig& config) {
  if (config.port < 0 || config.port > 65535) {
    throw PreconditionError("port must be in 0..65535");
  }
  if (config.ttl.count() <= 0) throw PreconditionError("ttl must be positive");
  if (config.feasibility_bound == 0) {
    throw PreconditionError("feasibility bound must be positive");
  }
  if (config.limits.max_objects == 0 || config.limits.max_ground_actions == 0) {
    throw PreconditionError("object and ground action limits must be positive");
  }
  if (config.lock_wait.count() <= 0 || config.max_body_bytes == 0) {
    throw PreconditionError("lock wait and body size limit must be positive");
  }
}

// ---------------------------------------------------------------------------
// SessionStore

namespace {

std::string RandomId() {
  static std::mutex mutex;
  static std::random_device device;
  std::lock_guard<std::mutex> lock(mutex);
  static const char* kHex = "0123456789abcdef";
  std::string id;
  for (int i = 0; i < 4; ++i) {
    std::uint32_t word = device();
    for (int j = 0; j < 8; ++j) {
      id += kHex[word & 0xf];
      word >>= 4;
    }
  }
  return id;
}

}  // namespace

SessionStore::SessionStore(std::chrono::seconds ttl,
                           std::function<Clock::time_point()> now)
    : ttl_(ttl), now_(std::move(now)) {}

std::string SessionStore::Insert(Session session) {
  auto entry = std::make_shared<Entry>();
  entry->snapshot = std::make_shared<const Session>(std::move(session));
  std::lock_guard<std::mutex> lock(mutex_);
  entry->last_access = now_();
  SweepLocked(entry->last_access);
  std::string id;
  do {
    id = RandomId();
  } while (entries_.count(id) || gone_.count(id));
  entries_.emplace(id, std::move(entry));
  return id;
}

void SessionStore::SweepLocked(Clock::time_point now) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (now - it->second->last_access > ttl_) {
      it->second->erased = true;
      gone_.insert(it->first);
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

void SessionStore::Sweep() {
  std::lock_guard<std::mutex> lock(mutex_);
  SweepLocked(now_());
}

std::size_t SessionStore::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.size();
}

SessionStore::Status SessionStore::Find(const std::string& id,
                                        std::shared_ptr<Entry>* out) {
  std::lock_guard<std::mutex> lock(mutex_);
  const Clock::time_point now = now_();
  SweepLocked(now);
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    return gone_.count(id) ? Status::kGone : Status::kNotFound;
  }
  it->second->last_access = now;
  *out = it->second;
  return Status::kOk;
}

SessionStore::Status SessionStore::Get(const std::string& id,
                                       std::shared_ptr<const Session>* out) {
  std::shared_ptr<Entry> entry;
  Status status = Find(id, &entry);
  if (status != Status::kOk) return status;
  std::lock_guard<std::mutex> lock(mutex_);
  *out = entry->snapshot;
  return Status::kOk;
}

SessionStore::Status SessionStore::Mutate(
    const std::string& id, std::chrono::milliseconds wait,
    const std::function<void(Session&)>& fn,
    std::shared_ptr<const Session>* out) {
  std::shared_ptr<Entry> entry;
  Status status = Find(id, &entry);
  if (status != Status::kOk) return status;
  std::unique_lock<std::timed_mutex> write(entry->write, std::defer_lock);
  if (!write.try_lock_for(wait)) return Status::kBusy;
  std::shared_ptr<const Session> current;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (entry->erased) return Status::kGone;
    current = entry->snapshot;
  }
  auto next = std::make_shared<Session>(*current);
  fn(*next);
  std::lock_guard<std::mutex> lock(mutex_);
  if (entry->erased) return Status::kGone;
  entry->snapshot = next;
  if (out) *out = next;
  return Status::kOk;
}

SessionStore::Status SessionStore::Erase(const std::string& id) {
  std::lock_guard<std::mutex> lock(mutex_);
  SweepLocked(now_());
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    return gone_.count(id) ? Status::kGone : Status::kNotFound;
  }
  it->second->erased = true;
  gone_.insert(id);
  entries_.erase(it);
  return Status::kOk;
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

constexpr const char* kJson = "application/json";

void Send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void SendError(httplib::Response& res, int status, const std::string& code,
               const std::string& message, Json extra = Json::object()) {
  Json error = {{"code", code}, {"message", message}};
  for (auto& [key, value] : extra.items()) error[key] = value;
  Send(res, status, {{"error", error}});
}

bool StoreError(SessionStore::Status status, const std::string& id,
                httplib::Response& res) {
  switch (status) {
    case SessionStore::Status::kOk:
      return false;
    case SessionStore::Status::kNotFound:
      SendError(res, 404, "not_found", "no session " + id);
      return true;
    case SessionStore::Status::kGone:
      SendError(res, 410, "gone", "session " + id + " was evicted or deleted");
      return true;
    case SessionStore::Status::kBusy:
      SendError(res, 409, "busy",
                "session " + id + " is being modified; retry the request");
      return true;
  }
  return true;
}

Json CqList(const Session& session, const std::string& argument_id) {
  Json cqs = Json::array();
  for (const CQInstance& cq : session.AvailableCQs(argument_id)) {
    cqs.push_back(ToJson(cq, session));
  }
  return cqs;
}

Json Overview(const std::string& id, const Session& session) {
  Json asked = Json::array();
  for (const auto& [cq_id, cq] : session.asked()) asked.push_back(ToJson(cq, session));
  return {{"sessionId", id},
          {"verdict", ToJson(session.verdict())},
          {"arguments", session.order()},
          {"asked", asked},
          {"complete", session.complete()}};
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)), store(config.ttl) {}

  void Routes();

  ServiceConfig config;
  SessionStore store;
  httplib::Server server;
};

void Service::Impl::Routes() {
  server.set_payload_max_length(config.max_body_bytes);
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                  std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      SendError(res, 500, "internal", e.what());
    } catch (...) {
      SendError(res, 500, "internal", "unknown error");
    }
  });

  server.Post("/v1/sessions", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const std::exception& e) {
      return SendError(res, 400, "bad_request",
                       std::string("request body is not JSON: ") + e.what());
    }
    for (const char* key : {"domain", "problem", "plan"}) {
      if (!body.is_object() || !body.contains(key) || !body[key].is_string()) {
        return SendError(res, 400, "bad_request",
                         std::string("missing string field '") + key + "'");
      }
    }
    Inputs inputs;
    try {
      inputs = LoadInputs(body["domain"].get<std::string>(),
                          body["problem"].get<std::string>(),
                          body["plan"].get<std::string>(), config.limits);
    } catch (const InputError& e) {
      Json where = {{"input", e.input()}};
      where["line"] = e.line() ? Json(*e.line()) : Json(nullptr);
      where["column"] = e.column() ? Json(*e.column()) : Json(nullptr);
      where["detail"] = e.detail();
      return SendError(res, 400, "parse_error", e.what(), where);
    }
    Session session = Session::Create(std::move(inputs.problem),
                                      std::move(inputs.plan),
                                      config.feasibility_bound);
    if (!session.has_summary()) {
      return SendError(res, 400, "not_a_solution", RenderVerdict(session.verdict()),
                       {{"verdict", ToJson(session.verdict())}});
    }
    Json summary = ToJson(session.summary());
    Json cqs = CqList(session, session.summary().id);
    Json verdict = ToJson(session.verdict());
    const std::string id = store.Insert(std::move(session));
    Send(res, 201, {{"sessionId", id},
                    {"verdict", verdict},
                    {"summaryArgument", summary},
                    {"cqs", cqs}});
  });

  server.Get(R"(/v1/sessions/([0-9a-f]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               std::shared_ptr<const Session> s;
               if (StoreError(store.Get(id, &s), id, res)) return;
               Send(res, 200, Overview(id, *s));
             });

  server.Get(R"(/v1/sessions/([0-9a-f]+)/arguments/([^/]+))",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               const std::string aid = req.matches[2];
               std::shared_ptr<const Session> s;
               if (StoreError(store.Get(id, &s), id, res)) return;
               if (!s->HasArgument(aid)) {
                 return SendError(res, 404, "not_found", "no argument " + aid);
               }
               Send(res, 200, ToJson(s->argument(aid)));
             });

  server.Get(R"(/v1/sessions/([0-9a-f]+)/arguments/([^/]+)/cqs)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               const std::string aid = req.matches[2];
               std::shared_ptr<const Session> s;
               if (StoreError(store.Get(id, &s), id, res)) return;
               if (!s->HasArgument(aid)) {
                 return SendError(res, 404, "not_found", "no argument " + aid);
               }
               Send(res, 200, {{"argument", aid}, {"cqs", CqList(*s, aid)}});
             });

  auto cq_route = [this](bool answer) {
    return [this, answer](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const std::string cq_id = req.matches[2];
      std::string answer_id;
      std::shared_ptr<const Session> s;
      SessionStore::Status status;
      try {
        status = store.Mutate(
            id, config.lock_wait,
            [&](Session& session) {
              if (answer) {
                answer_id = session.Answer(cq_id).id;
              } else {
                session.Ask(cq_id);
              }
            },
            &s);
      } catch (const NotFoundError& e) {
        return SendError(res, 404, "not_found", e.what());
      } catch (const ExplanationError& e) {
        return SendError(res, 422, "no_explanation", e.what());
      }
      if (StoreError(status, id, res)) return;
      if (answer) {
        Json body = ToJson(s->argument(answer_id));
        body["answers"] = cq_id;
        body["cqs"] = CqList(*s, answer_id);
        Send(res, 200, body);
      } else {
        Send(res, 200, ToJson(s->asked().at(cq_id), *s));
      }
    };
  };
  server.Post(R"(/v1/sessions/([0-9a-f]+)/cqs/([^/]+)/answer)", cq_route(true));
  server.Post(R"(/v1/sessions/([0-9a-f]+)/cqs/([^/]+)/ask)", cq_route(false));

  server.Get(R"(/v1/sessions/([0-9a-f]+)/af)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               std::shared_ptr<const Session> s;
               if (StoreError(store.Get(id, &s), id, res)) return;
               std::string format = req.has_param("format")
                                        ? req.get_param_value("format")
                                        : "structured";
               if (format == "structured") return Send(res, 200, AfToJson(*s));
               if (format == "dot") {
                 res.status = 200;
                 res.set_content(ExportAF(*s, "dot"), "text/vnd.graphviz");
                 return;
               }
               SendError(res, 400, "bad_request",
                         "unknown format '" + format +
                             "' (expected structured or dot)");
             });

  server.Get(R"(/v1/sessions/([0-9a-f]+)/properties)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               std::shared_ptr<const Session> s;
               if (StoreError(store.Get(id, &s), id, res)) return;
               Send(res, 200, ToJson(CheckProperties(*s)));
             });

  server.Post(R"(/v1/sessions/([0-9a-f]+)/complete)",
              [this](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                std::shared_ptr<const Session> s;
                auto status = store.Mutate(
                    id, config.lock_wait,
                    [](Session& session) { session.MarkComplete(); }, &s);
                if (StoreError(status, id, res)) return;
                Send(res, 200, {{"sessionId", id}, {"complete", true}});
              });

  server.Delete(R"(/v1/sessions/([0-9a-f]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  if (StoreError(store.Erase(id), id, res)) return;
                  res.status = 204;
                });
}

Service::Service(ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {
  ValidateConfig(impl_->config);
  impl_->Routes();
}

Service::~Service() { Stop(); }

int Service::Bind() {
  if (impl_->config.port == 0) {
    return impl_->server.bind_to_any_port(impl_->config.host);
  }
  return impl_->server.bind_to_port(impl_->config.host, impl_->config.port)
             ? impl_->config.port
             : -1;
}

bool Service::Run() { return impl_->server.listen_after_bind(); }

void Service::Stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void Service::WaitUntilReady() const { impl_->server.wait_until_ready(); }

SessionStore& Service::store() { return impl_->store; }

int ServeHttp(const ServiceConfig& config) {
  Service service(config);
  const int port = service.Bind();
  if (port < 0) {
    std::cerr << "error: cannot bind " << config.host << ":" << config.port << "\n";
    return 2;
  }
  std::cout << "xplain listening on http://" << config.host << ":" << port << "\n"
            << std::flush;
  return service.Run() ? 0 : 2;
}

}  // namespace xplain
