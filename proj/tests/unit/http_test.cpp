// Wire-format and retry behaviour against a local HTTP server.

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <mutex>
#include <thread>

#include "verifact/chat_backend.hpp"
#include "verifact/errors.hpp"
#include "verifact/retriever.hpp"

using namespace verifact;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url(const std::string& prefix = "") const {
    return "http://127.0.0.1:" + std::to_string(port_) + prefix;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

struct SleepLog {
  std::mutex m;
  std::vector<std::chrono::milliseconds> sleeps;
  RetryPolicy policy() {
    RetryPolicy p;
    p.sleep = [this](std::chrono::milliseconds d) {
      std::lock_guard l(m);
      sleeps.push_back(d);
    };
    return p;
  }
};

json reply(const std::string& content) {
  return json{{"choices", json::array({json{{"message", {{"role", "assistant"}, {"content", content}}}}})}};
}

}  // namespace

TEST(HttpChat, SendsOpenAiStyleRequest) {
  LocalServer srv;
  json seen;
  std::string auth;
  srv.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(reply("- A.").dump(), "application/json");
  });
  EndpointConfig ep{srv.url("/v1"), "gpt-test", "secret", 0.0, 5s};
  HttpChatBackend b(ep, RetryPolicy::none());
  EXPECT_EQ(b.complete("hello", GenerationParams{}), "- A.");
  EXPECT_EQ(auth, "Bearer secret");
  EXPECT_EQ(seen.at("model"), "gpt-test");
  ASSERT_EQ(seen.at("messages").size(), 1u);
  EXPECT_EQ(seen.at("messages")[0].at("role"), "user");
  EXPECT_EQ(seen.at("messages")[0].at("content"), "hello");
  EXPECT_EQ(seen.at("temperature"), 0.0);
  EXPECT_EQ(seen.at("max_tokens"), 1024);
  EXPECT_EQ(b.call_count(), 1u);
  EXPECT_EQ(b.id(), "gpt-test");
}

TEST(HttpChat, RetriesServerErrorsWithBackoff) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = 503;
      return;
    }
    res.set_content(reply("ok").dump(), "application/json");
  });
  SleepLog log;
  HttpChatBackend b(EndpointConfig{srv.url(), "m", "", 0.0, 5s}, log.policy());
  EXPECT_EQ(b.complete("x", {}), "ok");
  EXPECT_EQ(hits.load(), 3);
  EXPECT_EQ(log.sleeps, (std::vector<std::chrono::milliseconds>{1s, 2s}));
}

TEST(HttpChat, RetriesRateLimit) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits == 1) {
      res.status = 429;
      return;
    }
    res.set_content(reply("ok").dump(), "application/json");
  });
  SleepLog log;
  HttpChatBackend b(EndpointConfig{srv.url(), "m", "", 0.0, 5s}, log.policy());
  EXPECT_EQ(b.complete("x", {}), "ok");
  EXPECT_EQ(hits.load(), 2);
}

TEST(HttpChat, GivesUpAfterThreeRetries) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 500;
  });
  SleepLog log;
  HttpChatBackend b(EndpointConfig{srv.url(), "m", "", 0.0, 5s}, log.policy());
  EXPECT_THROW(b.complete("x", {}), BackendError);
  EXPECT_EQ(hits.load(), 4);
  EXPECT_EQ(log.sleeps, (std::vector<std::chrono::milliseconds>{1s, 2s, 4s}));
}

TEST(HttpChat, ClientErrorsAreNotRetried) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 401;
    res.set_content("{\"error\":\"bad key\"}", "application/json");
  });
  SleepLog log;
  HttpChatBackend b(EndpointConfig{srv.url(), "m", "", 0.0, 5s}, log.policy());
  try {
    b.complete("x", {});
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_FALSE(e.retryable());
    EXPECT_NE(std::string(e.what()).find("401"), std::string::npos) << e.what();
  }
  EXPECT_EQ(hits.load(), 1);
  EXPECT_TRUE(log.sleeps.empty());
}

TEST(HttpChat, MalformedBodyIsNotRetried) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.set_content("{\"choices\": []}", "application/json");
  });
  HttpChatBackend b(EndpointConfig{srv.url(), "m", "", 0.0, 5s}, SleepLog().policy());
  EXPECT_THROW(b.complete("x", {}), BackendError);
  EXPECT_EQ(hits.load(), 1);
}

TEST(HttpChat, ConnectionFailureIsRetried) {
  int port = 0;
  {
    LocalServer srv;  // grab a free port, then close it
    port = std::stoi(srv.url().substr(std::string("http://127.0.0.1:").size()));
  }
  SleepLog log;
  HttpChatBackend b(EndpointConfig{"http://127.0.0.1:" + std::to_string(port), "m", "", 0.0, 2s},
                    log.policy());
  EXPECT_THROW(b.complete("x", {}), BackendError);
  EXPECT_EQ(log.sleeps.size(), 3u);
  EXPECT_EQ(b.call_count(), 4u);
}

TEST(HttpSearch, SerperStyleRequest) {
  LocalServer srv;
  json seen;
  std::string key;
  srv.server().Post("/search", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    key = req.get_header_value("X-API-KEY");
    res.set_content(R"({"organic":[{"title":"T","snippet":"S","link":"https://x"}]})",
                    "application/json");
  });
  HttpSearchClient c(EndpointConfig{srv.url(), "", "sk", 0.0, 5s}, RetryPolicy::none());
  const auto body = c.search("Is water wet?", 10);
  EXPECT_EQ(seen, (json{{"q", "Is water wet?"}, {"num", 10}}));
  EXPECT_EQ(key, "sk");
  EXPECT_EQ(parse_organic_results(body, 10).size(), 1u);
}

TEST(HttpSearch, RetriesServerErrors) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server().Post("/search", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits == 1) {
      res.status = 502;
      return;
    }
    res.set_content(R"({"organic":[]})", "application/json");
  });
  SleepLog log;
  HttpSearchClient c(EndpointConfig{srv.url(), "", "sk", 0.0, 5s}, log.policy());
  EXPECT_NO_THROW(c.search("q", 10));
  EXPECT_EQ(hits.load(), 2);
  EXPECT_EQ(log.sleeps.size(), 1u);
}

TEST(WireFormat, ChatBodyAndParse) {
  const auto body = json::parse(chat_request_body("m", "p", GenerationParams{0.0, 1024}));
  EXPECT_EQ(body.at("messages")[0].at("content"), "p");
  EXPECT_EQ(parse_chat_response(reply("hi").dump()), "hi");
  EXPECT_THROW(parse_chat_response("not json"), BackendError);
  EXPECT_EQ(json::parse(search_request_body("q", 7)), (json{{"q", "q"}, {"num", 7}}));
}
