#include <doctest.h>
#include <httplib.h>

#include <cstdlib>
#include <future>
#include <sstream>
#include <thread>

#include "support.h"
#include "xplain/service.h"
#include "xplain/wire.h"

using namespace xplain;
using xplain::testing::LoadBlocks;

namespace {

class Server {
 public:
  explicit Server(ServiceConfig config = Config()) : service_(config) {
    port_ = service_.Bind();
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { service_.Run(); });
    service_.WaitUntilReady();
  }
  ~Server() {
    service_.Stop();
    thread_.join();
  }

  static ServiceConfig Config() {
    ServiceConfig c;
    c.port = 0;
    c.lock_wait = std::chrono::milliseconds(100);
    return c;
  }

  httplib::Client Client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(10, 0);
    return c;
  }
  Service& service() { return service_; }

 private:
  Service service_;
  int port_ = 0;
  std::thread thread_;
};

Json BlocksBody(const std::string& plan = LoadBlocks().plan_text) {
  const auto& b = LoadBlocks();
  return {{"domain", b.domain_text}, {"problem", b.problem_text}, {"plan", plan}};
}

Json Parse(const httplib::Result& r) {
  REQUIRE(r);
  return Json::parse(r->body);
}

std::string NewSession(httplib::Client& c) {
  auto r = c.Post("/v1/sessions", BlocksBody().dump(), "application/json");
  REQUIRE(r);
  REQUIRE(r->status == 201);
  return Parse(r)["sessionId"].get<std::string>();
}

}  // namespace

TEST_CASE("creating a session returns the summary argument") {
  Server server;
  auto c = server.Client();
  auto r = c.Post("/v1/sessions", BlocksBody().dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
  Json body = Parse(r);
  const std::string id = body["sessionId"];
  CHECK(id.size() == 32);
  CHECK(body["verdict"]["isSolution"] == true);
  CHECK(body["summaryArgument"]["id"] == "pi");
  CHECK(body["summaryArgument"]["conclusion"]["kind"] == "Solution");
  CHECK(body["summaryArgument"]["premises"].size() == 3);
  CHECK(body["cqs"].size() == 16);

  // Same text as the CLI renders for the plan.
  std::ostringstream out, err;
  const std::string dir = xplain::testing::DataPath("blocks/");
  CHECK(CmdExplain({dir + "domain.pddl", dir + "problem.pddl", dir + "plan.txt"},
                   {}, 10, out, err) == 0);
  std::string cli = out.str();
  while (!cli.empty() && cli.back() == '\n') cli.pop_back();
  std::string served = body["summaryArgument"]["text"];
  while (!served.empty() && served.back() == '\n') served.pop_back();
  CHECK(served == cli);

  auto overview = c.Get("/v1/sessions/" + id);
  REQUIRE(overview);
  CHECK(overview->status == 200);
  CHECK(Parse(overview)["arguments"] == Json::array({"pi"}));
}

TEST_CASE("bad session requests") {
  Server server;
  auto c = server.Client();

  auto not_json = c.Post("/v1/sessions", "{", "application/json");
  REQUIRE(not_json);
  CHECK(not_json->status == 400);
  CHECK(Parse(not_json)["error"]["code"] == "bad_request");

  Json missing = BlocksBody();
  missing.erase("plan");
  auto m = c.Post("/v1/sessions", missing.dump(), "application/json");
  CHECK(m->status == 400);

  auto swapped = c.Post("/v1/sessions",
                        BlocksBody("(unstack b c)\n(unstack a b)\n(unstack c d)\n"
                                   "{(stack c a) (stack d b)}\n")
                            .dump(),
                        "application/json");
  REQUIRE(swapped);
  CHECK(swapped->status == 400);
  Json e = Parse(swapped)["error"];
  CHECK(e["code"] == "not_a_solution");
  CHECK(e["verdict"]["isSolution"] == false);
  CHECK(e["verdict"]["failures"][0]["condition"] == 2);
  CHECK(e["verdict"]["failures"][0]["step"] == 0);

  Json broken = BlocksBody();
  broken["domain"] = "(define (domain d)\n  (:requirements :adl))";
  auto p = c.Post("/v1/sessions", broken.dump(), "application/json");
  REQUIRE(p);
  CHECK(p->status == 400);
  Json pe = Parse(p)["error"];
  CHECK(pe["code"] == "parse_error");
  CHECK(pe["input"] == "domain");
  CHECK(pe["line"] == 2);
  CHECK(pe["column"] == 18);

  Json bad_plan = BlocksBody("(unstack a a)\n");
  auto bp = c.Post("/v1/sessions", bad_plan.dump(), "application/json");
  CHECK(Parse(bp)["error"]["input"] == "plan");
  CHECK(Parse(bp)["error"]["line"] == 1);
}

TEST_CASE("arguments, CQs and answers") {
  Server server;
  auto c = server.Client();
  const std::string id = NewSession(c);
  const std::string base = "/v1/sessions/" + id;

  auto pi = c.Get(base + "/arguments/pi");
  CHECK(pi->status == 200);
  CHECK(Parse(pi)["scheme"] == "Arg_pi");
  CHECK(c.Get(base + "/arguments/a0")->status == 404);

  auto cqs = c.Get(base + "/arguments/pi/cqs");
  Json list = Parse(cqs)["cqs"];
  CHECK(list.size() == 16);
  CHECK(list[0]["id"] == "cq1");
  CHECK(list[0]["target"].is_null());
  CHECK(list[0]["asked"] == false);

  auto asked = c.Post(base + "/cqs/pi-cq2-step0/ask", "", "application/json");
  CHECK(asked->status == 200);
  CHECK(Parse(asked)["asked"] == true);
  CHECK(Parse(asked)["answeredBy"].is_null());

  auto answered = c.Post(base + "/cqs/pi-cq2-step0/answer", "", "application/json");
  REQUIRE(answered);
  CHECK(answered->status == 200);
  Json a0 = Parse(answered);
  CHECK(a0["id"] == "a0");
  CHECK(a0["answers"] == "pi-cq2-step0");
  CHECK(a0["cqs"].size() == 1);
  CHECK(a0["premises"][0]["holds"][0]["atoms"] == Json::array({"CLEAR(A)", "ON(A,B)"}));

  // Answering again returns the same argument.
  auto again = c.Post(base + "/cqs/pi-cq2-step0/answer", "", "application/json");
  CHECK(Parse(again)["id"] == "a0");

  CHECK(c.Post(base + "/cqs/pi-cq7-step0/answer", "", "application/json")->status == 404);
  CHECK(c.Get(base + "/arguments/a0")->status == 200);
}

TEST_CASE("framework export and properties") {
  Server server;
  auto c = server.Client();
  const std::string id = NewSession(c);
  const std::string base = "/v1/sessions/" + id;

  Json af = Parse(c.Get(base + "/af"));
  CHECK(af["nodes"].size() == 1);
  CHECK(af["labels"]["pi"] == "in");

  auto props = c.Get(base + "/properties");
  Json p = Parse(props);
  CHECK(p["p1"] == true);
  CHECK(p["p2"] == true);
  CHECK(p["p3"] == true);
  CHECK(p["p4"] == false);
  CHECK(p["p4IsProxy"] == true);
  CHECK(p["witnesses"]["missingGoalArguments"].size() == 6);

  c.Post(base + "/cqs/pi-cq5-goal-on-d-b/ask", "", "application/json");
  Json af2 = Parse(c.Get(base + "/af?format=structured"));
  CHECK(af2["labels"]["pi"] == "out");
  CHECK(af2["attacks"] == Json::array({{{"from", "pi-cq5-goal-on-d-b"}, {"to", "pi"}}}));

  auto dot = c.Get(base + "/af?format=dot");
  CHECK(dot->status == 200);
  CHECK(dot->get_header_value("Content-Type") == "text/vnd.graphviz");
  CHECK(dot->body.rfind("digraph af {", 0) == 0);
  CHECK(c.Get(base + "/af?format=png")->status == 400);

  auto done = c.Post(base + "/complete", "", "application/json");
  CHECK(done->status == 200);
  c.Post(base + "/cqs/pi-cq5-goal-on-d-b/answer", "", "application/json");
  CHECK(Parse(c.Get(base + "/properties"))["p4"] == true);
}

TEST_CASE("deleted and unknown sessions") {
  Server server;
  auto c = server.Client();
  const std::string id = NewSession(c);
  CHECK(c.Delete("/v1/sessions/" + id)->status == 204);
  CHECK(c.Get("/v1/sessions/" + id)->status == 410);
  CHECK(c.Get("/v1/sessions/" + id + "/properties")->status == 410);
  CHECK(c.Delete("/v1/sessions/" + id)->status == 410);
  auto unknown = c.Get("/v1/sessions/0123456789abcdef0123456789abcdef/af");
  CHECK(unknown->status == 404);
  CHECK(Parse(unknown)["error"]["code"] == "not_found");

  auto pre = c.Options("/v1/sessions");
  CHECK(pre->status == 204);
  CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

TEST_CASE("a busy session answers 409") {
  Server server;
  auto c = server.Client();
  const std::string id = NewSession(c);

  std::promise<void> entered;
  std::promise<void> release;
  std::thread holder([&] {
    server.service().store().Mutate(id, std::chrono::seconds(5), [&](Session&) {
      entered.set_value();
      release.get_future().wait();
    });
  });
  entered.get_future().wait();
  auto r = c.Post("/v1/sessions/" + id + "/cqs/cq1/answer", "", "application/json");
  release.set_value();
  holder.join();
  REQUIRE(r);
  CHECK(r->status == 409);
  CHECK(Parse(r)["error"]["code"] == "busy");
  // Reads never block on writers.
  CHECK(c.Get("/v1/sessions/" + id)->status == 200);
}

TEST_CASE("concurrent answers on one session serialize") {
  ServiceConfig config = Server::Config();
  config.lock_wait = std::chrono::seconds(10);
  Server server(config);
  auto c = server.Client();
  const std::string id = NewSession(c);
  const std::vector<std::string> cqs = {"pi-cq2-step0", "pi-cq2-step1", "pi-cq2-step2",
                                        "pi-cq3-step3", "pi-cq4-state2", "pi-cq5-goal-clear-c"};
  std::vector<std::thread> threads;
  std::vector<int> status(cqs.size());
  for (std::size_t i = 0; i < cqs.size(); ++i) {
    threads.emplace_back([&, i] {
      auto client = server.Client();
      auto r = client.Post("/v1/sessions/" + id + "/cqs/" + cqs[i] + "/answer", "",
                           "application/json");
      status[i] = r ? r->status : -1;
    });
  }
  for (auto& t : threads) t.join();
  for (int s : status) CHECK(s == 200);
  Json overview = Parse(c.Get("/v1/sessions/" + id));
  CHECK(overview["arguments"].size() == 7);
  CHECK(overview["asked"].size() == cqs.size());
}

TEST_CASE("session store eviction") {
  auto now = SessionStore::Clock::now();
  SessionStore store(std::chrono::seconds(60), [&] { return now; });
  const auto& b = LoadBlocks();
  const std::string id = store.Insert(Session::Create(b.problem, b.plan));
  const std::string other = store.Insert(Session::Create(b.problem, b.plan));
  CHECK(id != other);
  CHECK(store.size() == 2);

  std::shared_ptr<const Session> s;
  now += std::chrono::seconds(50);
  CHECK(store.Get(id, &s) == SessionStore::Status::kOk);
  now += std::chrono::seconds(20);
  // `other` idled 70 s, `id` only 20 s.
  CHECK(store.Get(other, &s) == SessionStore::Status::kGone);
  CHECK(store.Get(id, &s) == SessionStore::Status::kOk);
  now += std::chrono::seconds(61);
  store.Sweep();
  CHECK(store.size() == 0);
  CHECK(store.Get(id, &s) == SessionStore::Status::kGone);
  CHECK(store.Get("ffff", &s) == SessionStore::Status::kNotFound);

  // A failed mutation leaves the snapshot untouched.
  const std::string third = store.Insert(Session::Create(b.problem, b.plan));
  CHECK_THROWS(store.Mutate(third, std::chrono::milliseconds(10), [](Session& session) {
    session.Ask("cq1");
    throw std::runtime_error("boom");
  }));
  REQUIRE(store.Get(third, &s) == SessionStore::Status::kOk);
  CHECK(s->asked().empty());
}

TEST_CASE("configuration") {
  ServiceConfig c;
  ::setenv("XPLAIN_PORT", "9123", 1);
  CHECK(ApplyEnvironment(c).port == 9123);
  ::setenv("XPLAIN_PORT", "abc", 1);
  CHECK_THROWS_AS(ApplyEnvironment(c), PreconditionError);
  ::setenv("XPLAIN_PORT", "80x", 1);
  CHECK_THROWS_AS(ApplyEnvironment(c), PreconditionError);
  ::unsetenv("XPLAIN_PORT");
  CHECK(ApplyEnvironment(c).port == 8080);

  ServiceConfig bad;
  bad.ttl = std::chrono::seconds(0);
  CHECK_THROWS_AS(ValidateConfig(bad), PreconditionError);
  bad = {};
  bad.limits.max_objects = 0;
  CHECK_THROWS_AS(ValidateConfig(bad), PreconditionError);
  CHECK_NOTHROW(ValidateConfig(ServiceConfig{}));
}

TEST_CASE("input limits reject oversized problems") {
  ServiceConfig config = Server::Config();
  config.limits.max_objects = 3;
  Server server(config);
  auto c = server.Client();
  auto r = c.Post("/v1/sessions", BlocksBody().dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 400);
  CHECK(Parse(r)["error"]["input"] == "problem");
}
