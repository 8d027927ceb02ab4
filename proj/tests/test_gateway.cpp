#include "scratch_dir.hpp"

#include "tsprompt/extract.hpp"
#include "tsprompt/gateway.hpp"
#include "tsprompt/oracle.hpp"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

using namespace tsprompt;
using namespace tsprompt::gateway;

namespace {

prompt::RenderedPrompt make_prompt(std::string text, int horizon = 1, std::string id = "s-0",
                                   MethodKind method = MethodKind::ZeroShotCoT) {
    prompt::RenderedPrompt p;
    p.text = std::move(text);
    p.horizon = horizon;
    p.sample_id = std::move(id);
    p.method = method;
    p.max_output_tokens = prompt::max_output_tokens_for(method);
    return p;
}

const std::string kRamp = "Q: From a to b, the values of series 1 were 1, 2, 3, 4, 5, 6, 7, 8 units on each step. Next?";

/// Local chat-completions stub. `fail_first` requests get a 500.
class StubServer {
public:
    explicit StubServer(int fail_first = 0, int status = 200) : fail_first_(fail_first), status_(status) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            last_body_ = req.body;
            last_auth_ = req.get_header_value("Authorization");
            if (calls_++ < fail_first_) {
                res.status = 500;
                res.set_content("overloaded", "text/plain");
                return;
            }
            res.status = status_;
            const nlohmann::json body{{"choices", {{{"message", {{"role", "assistant"}, {"content", "****Final Answer**** 5"}}}}}}};
            res.set_content(body.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
    int calls() const { return calls_; }
    const std::string& last_body() const { return last_body_; }
    const std::string& last_auth() const { return last_auth_; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    int fail_first_;
    int status_;
    std::atomic<int> calls_{0};
    std::string last_body_;
    std::string last_auth_;
};

BackendConfig http_config(const std::string& url) {
    HttpSettings http;
    http.endpoint_url = url;
    http.api_key_env = "";
    http.rate_limit_rpm = 0;
    http.initial_backoff = std::chrono::milliseconds(1);
    http.request_timeout = std::chrono::milliseconds(5000);
    return BackendConfig{http};
}

} // namespace

TEST_CASE("oracle answers a ramp with its continuation") {
    const auto text = oracle_respond(make_prompt(kRamp), OracleFaults{});
    CHECK(text.find("****Final Answer****") != std::string::npos);
    const auto parsed = extract::extract_forecast(text, 1);
    CHECK(parsed.extractor_used == extract::Extractor::Marker);
    REQUIRE(parsed.complete());
    CHECK(*parsed.steps[0] == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(text == oracle_respond(make_prompt(kRamp), OracleFaults{}));
}

TEST_CASE("oracle final values read back exactly") {
    const std::string q = "Q: the values were 3.1, 4.7, 2.2, 5.9, 3.3, 4.8, 2.5, 6.1, 3.0, 4.4 in each hour. Next 3 hours?";
    const auto values = series_from_prompt(q);
    REQUIRE(values.size() == 10);
    const auto expected = oracle_forecast(values, 3, period_hint_from_prompt(q));
    const auto parsed = extract::extract_forecast(oracle_respond(make_prompt(q, 3), OracleFaults{}), 3);
    REQUIRE(parsed.complete());
    for (std::size_t i = 0; i < 3; ++i) CHECK(*parsed.steps[i] == expected[i]);
}

TEST_CASE("fault draws are deterministic and keyed by sample and method") {
    const auto faults = OracleFaults::uniform(0.3, 5);
    int differing = 0;
    for (int i = 0; i < 200; ++i) {
        const auto id = "s-" + std::to_string(i);
        const auto a = draw_faults(faults, id, MethodKind::Baseline);
        const auto b = draw_faults(faults, id, MethodKind::Baseline);
        const auto c = draw_faults(faults, id, MethodKind::ZeroShotLST);
        REQUIRE(a.omit_marker == b.omit_marker);
        REQUIRE(a.split_answer == b.split_answer);
        REQUIRE(a.slip_sign == b.slip_sign);
        differing += (a.omit_marker != c.omit_marker) || (a.short_horizon != c.short_horizon);
    }
    CHECK(differing > 0);
    const auto none = draw_faults(OracleFaults::uniform(0.0, 5), "x", MethodKind::Baseline);
    CHECK_FALSE(none.omit_marker);
    CHECK_FALSE(none.causes_missing());
    const auto all = draw_faults(OracleFaults::uniform(1.0, 5), "x", MethodKind::Baseline);
    CHECK(all.split_answer);
    CHECK(all.arith_slip);
}

TEST_CASE("oracle fault layouts") {
    const std::string q = "Q: values 1, 2, 3, 4, 5, 6, 7, 8, 9, 10 units. Next 6 steps?";
    OracleFaults only_short{.p_short_horizon = 1.0};
    const auto short_text = oracle_respond(make_prompt(q, 6), only_short);
    const auto p = extract::extract_forecast(short_text, 6);
    CHECK(p.extractor_used == extract::Extractor::Marker);
    CHECK(p.parsed_steps() == 5);
    CHECK_FALSE(p.steps[5].has_value());

    OracleFaults only_omit{.p_omit_marker = 1.0};
    const auto omit_text = oracle_respond(make_prompt(q, 6), only_omit);
    CHECK(omit_text.find("Final Answer") == std::string::npos);
    CHECK(extract::extract_forecast(omit_text, 6).complete());

    OracleFaults only_split{.p_split_answer = 1.0};
    const auto split_text = oracle_respond(make_prompt(q, 6), only_split);
    CHECK(split_text.find("Long-term forecast (remaining 3 steps)") != std::string::npos);
    CHECK_FALSE(extract::extract_forecast(split_text, 6).complete());
    const auto split_one = oracle_respond(make_prompt(q, 1), only_split);
    CHECK_FALSE(extract::extract_forecast(split_one, 1).complete());

    OracleFaults only_slip{.p_arith_slip = 1.0};
    const auto slipped = extract::extract_forecast(oracle_respond(make_prompt(q, 6), only_slip), 6);
    const auto clean = extract::extract_forecast(oracle_respond(make_prompt(q, 6), OracleFaults{}), 6);
    REQUIRE(slipped.complete());
    CHECK(*slipped.steps[0] != doctest::Approx(*clean.steps[0]));

    CHECK_THROWS_AS(oracle_respond(make_prompt("Q: no numbers here"), OracleFaults{}), OracleParseError);
    CHECK_THROWS_AS((OracleFaults{.p_omit_marker = 1.5}.validate()), ConfigError);
}

TEST_CASE("short histories repeat the last value") {
    const auto text = oracle_respond(make_prompt("Q: values 4, 7 units. Next?"), OracleFaults{});
    CHECK(*extract::extract_forecast(text, 1).steps[0] == 7.0);
}

TEST_CASE("exact decimal round trips") {
    for (const double v : {0.1, 1.0 / 3.0, -2.5, 1e-7, 12345.678, 0.0}) {
        CHECK(std::stod(exact_decimal(v)) == v);
    }
    CHECK(exact_decimal(9.0) == "9");
}

TEST_CASE("oracle gateway logs before returning") {
    testing::ScratchDir dir("gw");
    ExchangeLog log(dir.str("ex.jsonl"));
    Gateway gw(BackendConfig{}, log);
    const auto ex = gw.complete(make_prompt(kRamp));
    CHECK(ex.ok());
    CHECK(ex.backend == BackendKind::Oracle);
    CHECK(ex.attempt_count == 1);
    const auto bad = gw.complete(make_prompt("Q: nothing numeric"));
    CHECK_FALSE(bad.ok());
    const auto back = ExchangeLog::read(dir.str("ex.jsonl"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].raw_response == ex.raw_response);
    CHECK(back[0].prompt_text == kRamp);
    CHECK(back[0].method == MethodKind::ZeroShotCoT);
    CHECK(back[1].error.has_value());
}

TEST_CASE("replay serves stored responses and reports gaps") {
    testing::ScratchDir dir("replay");
    {
        ExchangeLog log(dir.str("first.jsonl"));
        Gateway gw(BackendConfig{}, log);
        gw.complete(make_prompt(kRamp, 1, "a"));
        gw.complete(make_prompt(kRamp, 1, "b", MethodKind::Baseline));
    }
    const auto first = ExchangeLog::read(dir.str("first.jsonl"));
    ExchangeLog log(dir.str("second.jsonl"));
    Gateway gw(BackendConfig{ReplaySettings{dir.str("first.jsonl")}}, log);
    const auto ex = gw.complete(make_prompt(kRamp, 1, "a"));
    CHECK(ex.backend == BackendKind::Replay);
    CHECK(ex.raw_response == first[0].raw_response);
    CHECK_THROWS_AS(gw.complete(make_prompt(kRamp, 1, "a", MethodKind::OneShotCoT)), ReplayGapError);
    const auto second = ExchangeLog::read(dir.str("second.jsonl"));
    REQUIRE(second.size() == 2);
    CHECK_FALSE(second[1].ok());

    CHECK_THROWS_AS(Gateway(BackendConfig{ReplaySettings{dir.str("missing.jsonl")}}, log), ConfigError);
}

TEST_CASE("log reader tolerates a truncated last line") {
    testing::ScratchDir dir("trunc");
    const auto path = dir.str("ex.jsonl");
    {
        ExchangeLog log(path);
        ModelExchange ex;
        ex.sample_id = "a";
        ex.raw_response = "****Final Answer**** 1";
        log.append(ex);
        ex.sample_id = "b";
        log.append(ex);
    }
    std::ofstream(path, std::ios::app) << R"({"sample_id":"c","meth)";
    const auto back = ExchangeLog::read(path);
    REQUIRE(back.size() == 2);
    CHECK(back[1].sample_id == "b");
    CHECK(ExchangeLog::read(dir.str("none.jsonl")).empty());

    std::ofstream(dir.str("bad.jsonl")) << "not json\n{\"sample_id\":\"a\"}\n";
    CHECK_THROWS_AS(ExchangeLog::read(dir.str("bad.jsonl")), LogError);
}

TEST_CASE("exchange json round trip") {
    ModelExchange ex;
    ex.sample_id = "x";
    ex.method = MethodKind::OneShotSARIMA;
    ex.horizon = 6;
    ex.max_output_tokens = 1024;
    ex.prompt_text = "Q: 1, 2";
    ex.raw_response = "r";
    ex.backend = BackendKind::Http;
    ex.latency_ms = 12.5;
    ex.attempt_count = 2;
    ex.created_at = "2026-01-01T00:00:00.000Z";
    ex.error = "http-status-400: bad";
    const auto back = exchange_from_json(exchange_to_json(ex));
    CHECK(back.method == ex.method);
    CHECK(back.horizon == 6);
    CHECK(back.backend == BackendKind::Http);
    CHECK(back.attempt_count == 2);
    CHECK(back.error == ex.error);
    CHECK(exchange_to_json(back) == exchange_to_json(ex));
}

TEST_CASE("http backend against a local stub") {
    StubServer stub;
    testing::ScratchDir dir("http");
    ExchangeLog log(dir.str("ex.jsonl"));
    Gateway gw(http_config(stub.url()), log);
    const auto ex = gw.complete(make_prompt(kRamp, 1, "s", MethodKind::ZeroShotLST));
    REQUIRE(ex.ok());
    CHECK(ex.raw_response == "****Final Answer**** 5");
    CHECK(ex.attempt_count == 1);
    CHECK(stub.last_auth().empty());
    const auto body = nlohmann::json::parse(stub.last_body());
    CHECK(body.at("max_tokens") == 1280);
    CHECK(body.at("temperature") == 0.0);
    CHECK(body.at("model") == "gpt-4o-mini-2024-07-18");
    REQUIRE(body.at("messages").size() == 1);
    CHECK(body.at("messages")[0].at("role") == "user");
    CHECK(body.at("messages")[0].at("content") == kRamp);
    CHECK(*extract::extract_forecast(ex.raw_response, 1).steps[0] == 5.0);
}

TEST_CASE("http retries transient failures") {
    StubServer stub(2);
    testing::ScratchDir dir("retry");
    ExchangeLog log(dir.str("ex.jsonl"));
    Gateway gw(http_config(stub.url()), log);
    const auto ex = gw.complete(make_prompt(kRamp));
    CHECK(ex.ok());
    CHECK(ex.attempt_count == 3);

    StubServer down(10);
    Gateway gw2(http_config(down.url()), log);
    const auto failed = gw2.complete(make_prompt(kRamp));
    CHECK_FALSE(failed.ok());
    CHECK(failed.attempt_count == 3);
    CHECK(failed.error->find("http-exhausted") == 0);
}

TEST_CASE("http client errors are not retried") {
    StubServer stub(0, 400);
    testing::ScratchDir dir("400");
    ExchangeLog log(dir.str("ex.jsonl"));
    Gateway gw(http_config(stub.url()), log);
    const auto ex = gw.complete(make_prompt(kRamp));
    CHECK_FALSE(ex.ok());
    CHECK(ex.attempt_count == 1);
    CHECK(stub.calls() == 1);
    CHECK(ex.error->find("http-status-400") == 0);
}

TEST_CASE("backend config parsing and validation") {
    const auto cfg = BackendConfig::from_json(nlohmann::json::parse(
        R"({"backend":"http","http":{"endpoint_url":"http://localhost:1/v1","model_name":"m","api_key_env":"","max_retries":2}})"));
    CHECK(cfg.kind() == BackendKind::Http);
    CHECK(std::get<HttpSettings>(cfg.settings).max_retries == 2);
    CHECK(BackendConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());

    CHECK_THROWS_AS(BackendConfig::from_json(nlohmann::json::parse(R"({"backend":"carrier-pigeon"})")), ConfigError);
    CHECK_THROWS_AS(BackendConfig::from_json(nlohmann::json::parse(R"({"backend":"http","http":{"endpont_url":"x"}})")),
                    ConfigError);

    HttpSettings http;
    http.api_key_env = "TSPROMPT_TEST_SURELY_UNSET_KEY";
    ::unsetenv("TSPROMPT_TEST_SURELY_UNSET_KEY");
    CHECK_THROWS_AS(BackendConfig{http}.validate(), ConfigError);
    http.api_key_env = "";
    http.max_retries = 0;
    CHECK_THROWS_AS(BackendConfig{http}.validate(), ConfigError);
    http.max_retries = 3;
    http.endpoint_url = "ftp://example.com";
    CHECK_THROWS_AS(BackendConfig{http}.validate(), ConfigError);
    CHECK(backend_kind_from_string("replay") == BackendKind::Replay);
}

TEST_CASE("chat response parsing") {
    CHECK(chat_response_text(nlohmann::json::parse(R"({"choices":[{"message":{"content":"hi"}}]})")) == "hi");
    CHECK_THROWS_AS(chat_response_text(nlohmann::json::parse(R"({"choices":[]})")), GatewayError);
}
