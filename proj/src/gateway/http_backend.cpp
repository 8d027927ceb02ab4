#include "tsprompt/gateway.hpp"
#include "tsprompt/rng.hpp"

#include <httplib.h>

#include <cstdlib>
#include <regex>
#include <thread>

namespace tsprompt::gateway {

namespace {

struct Endpoint {
    std::string base; // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, pattern)) throw ConfigError("cannot parse endpoint_url '" + url + "'");
    return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

bool retryable(int status) { return status == 408 || status == 429 || status >= 500; }

std::string snippet(const std::string& body) { return body.size() > 200 ? body.substr(0, 200) + "..." : body; }

} // namespace

nlohmann::json chat_request_body(const prompt::RenderedPrompt& prompt, const HttpSettings& http) {
    return {{"model", http.model_name},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt.text}}})},
            {"max_tokens", prompt.max_output_tokens},
            {"temperature", http.temperature}};
}

std::string chat_response_text(const nlohmann::json& response) {
    try {
        const auto& content = response.at("choices").at(0).at("message").at("content");
        return content.is_null() ? std::string() : content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw GatewayError(std::string("unexpected chat response shape: ") + e.what());
    }
}

ModelExchange Gateway::call_http(const prompt::RenderedPrompt& prompt, const HttpSettings& http) {
    const auto endpoint = split_url(http.endpoint_url);
    httplib::Headers headers;
    if (!http.api_key_env.empty()) {
        const char* key = std::getenv(http.api_key_env.c_str());
        headers.emplace("Authorization", std::string("Bearer ") + (key ? key : ""));
    }
    const std::string body = chat_request_body(prompt, http).dump();
    Rng jitter(mix_seed(stable_hash(prompt.sample_id), static_cast<std::uint64_t>(prompt.method)));

    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(http.request_timeout);
    const auto sec = static_cast<time_t>(timeout.count() / 1000000);
    const auto usec = static_cast<time_t>(timeout.count() % 1000000);

    ModelExchange result;
    std::string last_error;
    for (int attempt = 1; attempt <= http.max_retries; ++attempt) {
        result.attempt_count = attempt;
        limiter_->acquire();

        httplib::Client client(endpoint.base);
        client.set_connection_timeout(sec, usec);
        client.set_read_timeout(sec, usec);
        client.set_write_timeout(sec, usec);
        const auto res = client.Post(endpoint.path, headers, body, "application/json");

        if (!res) {
            last_error = "network: " + httplib::to_string(res.error());
        } else if (res->status >= 200 && res->status < 300) {
            try {
                result.raw_response = chat_response_text(nlohmann::json::parse(res->body));
                return result;
            } catch (const std::exception& e) {
                result.error = "bad-response: " + std::string(e.what());
                return result;
            }
        } else if (retryable(res->status)) {
            last_error = "http-status-" + std::to_string(res->status);
        } else {
            result.error = "http-status-" + std::to_string(res->status) + ": " + snippet(res->body);
            return result;
        }

        if (attempt < http.max_retries) {
            const double factor = static_cast<double>(1 << (attempt - 1)) * (0.5 + jitter.uniform());
            std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(
                static_cast<double>(http.initial_backoff.count()) * factor));
        }
    }
    result.error = "http-exhausted after " + std::to_string(http.max_retries) + " attempts: " + last_error;
    return result;
}

} // namespace tsprompt::gateway
