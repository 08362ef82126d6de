#ifndef XPLAIN_SERVICE_H_
#define XPLAIN_SERVICE_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "xplain/commands.h"
#include "xplain/dialogue.h"

namespace xplain {

// HTTP session service. There is no authentication: session ids are random
// 128-bit tokens and the service is meant for a single desk user.
//
//   POST   /v1/sessions                          {domain, problem, plan}
//   GET    /v1/sessions/{id}
//   GET    /v1/sessions/{id}/arguments/{aid}
//   GET    /v1/sessions/{id}/arguments/{aid}/cqs
//   POST   /v1/sessions/{id}/cqs/{cqid}/ask
//   POST   /v1/sessions/{id}/cqs/{cqid}/answer
//   GET    /v1/sessions/{id}/af?format=structured|dot
//   GET    /v1/sessions/{id}/properties
//   POST   /v1/sessions/{id}/complete
//   DELETE /v1/sessions/{id}
//
// Errors: 400 bad input (with positions or the verdict), 404 unknown id,
// 410 evicted or deleted session, 409 session busy, 422 no explanation.

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::chrono::seconds ttl{3600};
  std::size_t feasibility_bound = 10;
  Limits limits;
  /// How long a mutation waits for another one on the same session.
  std::chrono::milliseconds lock_wait{2000};
  std::size_t max_body_bytes = 4u << 20;
};

/// XPLAIN_PORT overrides the port when set.
ServiceConfig ApplyEnvironment(ServiceConfig config);
/// Throws PreconditionError unless every bound is positive.
void ValidateConfig(const ServiceConfig& config);

class SessionStore {
 public:
  using Clock = std::chrono::steady_clock;
  enum class Status { kOk, kNotFound, kGone, kBusy };

  explicit SessionStore(std::chrono::seconds ttl,
                        std::function<Clock::time_point()> now = Clock::now);

  std::string Insert(Session session);

  /// Immutable snapshot of the session; refreshes its last access time.
  Status Get(const std::string& id, std::shared_ptr<const Session>* out);

  /// Runs `fn` on a private copy while holding the session's write lock and
  /// publishes the copy if `fn` returns normally. Returns kBusy when the lock
  /// is not obtained within `wait`. Exceptions from `fn` propagate and leave
  /// the session unchanged.
  Status Mutate(const std::string& id, std::chrono::milliseconds wait,
                const std::function<void(Session&)>& fn,
                std::shared_ptr<const Session>* out = nullptr);

  Status Erase(const std::string& id);

  /// Evicts sessions idle for longer than the TTL.
  void Sweep();
  std::size_t size() const;

 private:
  struct Entry {
    std::timed_mutex write;
    std::shared_ptr<const Session> snapshot;
    Clock::time_point last_access;
    bool erased = false;
  };

  Status Find(const std::string& id, std::shared_ptr<Entry>* out);
  void SweepLocked(Clock::time_point now);

  std::chrono::seconds ttl_;
  std::function<Clock::time_point()> now_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
  std::set<std::string> gone_;
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds config.port (or any free port when it is 0) and returns the port,
  /// or -1 on failure.
  int Bind();
  /// Serves until Stop(). Call after Bind().
  bool Run();
  void Stop();
  void WaitUntilReady() const;

  SessionStore& store();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds, prints the address and serves until the process is stopped.
int ServeHttp(const ServiceConfig& config);

}  // namespace xplain

#endif  // XPLAIN_SERVICE_H_
