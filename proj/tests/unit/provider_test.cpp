#include "perturbench/harness/provider.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <thread>

#include "perturbench/error.hpp"

namespace perturbench {
namespace {

// A completions endpoint on an ephemeral local port.
class LocalServer {
 public:
  explicit LocalServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/v1/completions", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  [[nodiscard]] std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/completions";
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

ProviderConfig config_for(const std::string& url) {
  ProviderConfig c;
  c.endpoint = url;
  c.model = "toy-model";
  c.timeout_secs = 5;
  return c;
}

CompletionRequest request(int n = 1) {
  CompletionRequest r;
  r.task_name = "t0";
  r.model = "toy-model";
  r.prompt = "def f():\n";
  r.stop = {"\ndef"};
  r.sampling.n = n;
  r.sampling.max_tokens = 64;
  return r;
}

TEST(ProviderConfig, Validation) {
  ProviderConfig c = config_for("http://localhost:1/x");
  EXPECT_NO_THROW(c.validate());
  c.sampling.n = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.sampling.n = 1;
  c.timeout_secs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(HttpCompletionProvider(config_for("https://example.com/x")), ConfigError);
}

TEST(HttpProvider, RequestBodyKeysInOrder) {
  const auto body = HttpCompletionProvider::request_body(request(2));
  std::vector<std::string> keys;
  for (const auto& [k, v] : body.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"model", "prompt", "max_tokens", "temperature", "n",
                                            "stop"}));
  EXPECT_EQ(body["n"], 2);
  EXPECT_EQ(body["stop"][0], "\ndef");
}

TEST(HttpProvider, ParsesBothResponseShapes) {
  EXPECT_EQ(HttpCompletionProvider::parse_response(R"({"choices":[{"text":"a"},{"text":"b"}]})"),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(HttpCompletionProvider::parse_response(R"({"completions":["x"]})"),
            std::vector<std::string>{"x"});
  EXPECT_THROW(HttpCompletionProvider::parse_response(R"({"error":"bad"})"), CompletionError);
  EXPECT_THROW(HttpCompletionProvider::parse_response("not json"), CompletionError);
}

TEST(HttpProvider, RoundTripAgainstLocalServer) {
  nlohmann::json seen;
  LocalServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    res.set_content(R"({"choices":[{"text":"    return 1\ndef g(): pass"}]})", "application/json");
  });
  HttpCompletionProvider provider(config_for(server.url()));
  const auto outcome = complete(provider, request(), 0);
  ASSERT_FALSE(outcome.error);
  EXPECT_EQ(outcome.completions, std::vector<std::string>{"    return 1"});
  EXPECT_EQ(seen["model"], "toy-model");
  EXPECT_EQ(seen["prompt"], "def f():\n");
  EXPECT_EQ(seen["max_tokens"], 64);
}

TEST(HttpProvider, RetriesTransportErrors) {
  std::atomic<int> calls{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"completions":["ok"]})", "application/json");
  });
  HttpCompletionProvider provider(config_for(server.url()));
  const auto outcome = complete(provider, request(), 2);
  ASSERT_FALSE(outcome.error) << *outcome.error;
  EXPECT_EQ(outcome.attempts, 3);
  EXPECT_EQ(outcome.completions, std::vector<std::string>{"ok"});

  calls = 0;
  const auto exhausted = complete(provider, request(), 1);
  EXPECT_TRUE(exhausted.error);
  EXPECT_EQ(exhausted.attempts, 2);
}

TEST(HttpProvider, ClientErrorsAreNotRetried) {
  std::atomic<int> calls{0};
  LocalServer server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
    res.set_content("bad request", "text/plain");
  });
  HttpCompletionProvider provider(config_for(server.url()));
  try {
    provider.fetch(request());
    FAIL();
  } catch (const CompletionError& e) {
    EXPECT_EQ(e.kind(), CompletionError::Kind::kModel);
    EXPECT_EQ(e.status(), "400");
  }
  calls = 0;
  const auto outcome = complete(provider, request(), 3);
  EXPECT_TRUE(outcome.error);
  EXPECT_EQ(calls.load(), 1);
}

TEST(HttpProvider, UnreachableEndpointWithZeroBudget) {
  // Bind then release a port so nothing listens on it.
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  auto c = config_for("http://127.0.0.1:" + std::to_string(port) + "/v1/completions");
  c.timeout_secs = 1;
  HttpCompletionProvider provider(c);
  const auto outcome = complete(provider, request(), 0);
  EXPECT_TRUE(outcome.error);
  EXPECT_TRUE(outcome.completions.empty());
  EXPECT_EQ(outcome.attempts, 1);
}

TEST(ReplayProvider, ReturnsRecordedText) {
  auto replay = ReplayProvider::from_json(R"({"t0": ["    return 1\ndef x", "    return 2"]})");
  const auto one = complete(replay, request(1), 0);
  EXPECT_EQ(one.completions, std::vector<std::string>{"    return 1"});
  const auto two = complete(replay, request(2), 0);
  EXPECT_EQ(two.completions, (std::vector<std::string>{"    return 1", "    return 2"}));
  const auto three = complete(replay, request(3), 5);
  EXPECT_TRUE(three.error);
  EXPECT_EQ(three.attempts, 1);
  EXPECT_THROW(ReplayProvider::from_json("[1,2]"), ParseError);
}

TEST(EchoProvider, CannedText) {
  EchoProvider echo("    pass\n");
  const auto outcome = complete(echo, request(3), 0);
  EXPECT_EQ(outcome.completions, std::vector<std::string>(3, "    pass\n"));
}

}  // namespace
}  // namespace perturbench
