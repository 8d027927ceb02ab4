#pragma once

#include "tsprompt/method.hpp"
#include "tsprompt/prompt.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tsprompt::gateway {

class GatewayError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or incomplete backend settings; raised before any request is made.
class ConfigError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

/// The replay store holds no successful response for a (sample, method) key.
class ReplayGapError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

/// The oracle found no numeric sequence in the prompt.
class OracleParseError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

/// Malformed exchange log.
class LogError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

enum class BackendKind { Http, Replay, Oracle };

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> backend_kind_from_string(std::string_view name);

struct OracleFaults {
    double p_omit_marker = 0.0;   // no "****Final Answer****" marker; value only in prose
    double p_short_horizon = 0.0; // one value fewer than the horizon
    double p_split_answer = 0.0;  // separate short- and long-term answers, never merged
    double p_arith_slip = 0.0;    // one intermediate sum perturbed
    std::uint64_t seed = 0;

    /// All four probabilities set to `rate`.
    static OracleFaults uniform(double rate, std::uint64_t seed);
    void validate() const;
};

struct HttpSettings {
    std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
    std::string model_name = "gpt-4o-mini-2024-07-18";
    std::string api_key_env = "OPENAI_API_KEY"; // empty: no Authorization header
    double temperature = 0.0;
    std::chrono::milliseconds request_timeout{60000};
    int max_retries = 3; // total attempts per request
    double rate_limit_rpm = 60.0; // 0 disables the limiter
    std::chrono::milliseconds initial_backoff{1000};
};

struct ReplaySettings {
    std::string path;
};

struct OracleSettings {
    OracleFaults faults;
};

struct BackendConfig {
    std::variant<HttpSettings, ReplaySettings, OracleSettings> settings = OracleSettings{};

    BackendKind kind() const;

    /// Checks the active settings, including that the API key variable is set.
    void validate() const;

    /// {"backend": "http"|"replay"|"oracle", "http": {...}, "replay": {...}, "oracle": {...}};
    /// only the section of the selected backend is read.
    static BackendConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ModelExchange {
    std::string sample_id;
    MethodKind method = MethodKind::Baseline;
    int horizon = 1;
    int max_output_tokens = prompt::kDefaultMaxOutputTokens;
    std::string prompt_text;
    std::string raw_response; // verbatim; empty on failure
    BackendKind backend = BackendKind::Oracle;
    double latency_ms = 0.0;
    int attempt_count = 0;
    std::string created_at; // UTC, ISO 8601
    std::optional<std::string> error;

    bool ok() const { return !error.has_value(); }
};

nlohmann::json exchange_to_json(const ModelExchange& exchange);
ModelExchange exchange_from_json(const nlohmann::json& record);

/// Append-only JSONL exchange log. Appends are serialized and flushed one
/// record at a time, so a killed process leaves at most a truncated last line.
class ExchangeLog {
public:
    explicit ExchangeLog(std::string path);

    void append(const ModelExchange& exchange);
    const std::string& path() const noexcept { return path_; }

    /// Reads every record; a truncated final line is ignored. Missing file → empty.
    static std::vector<ModelExchange> read(const std::string& path);

private:
    std::string path_;
    std::ofstream out_;
    std::mutex mutex_;
};

/// Successful responses of a previous run keyed by (sample_id, method); the
/// last record wins.
class ReplayStore {
public:
    static ReplayStore load(const std::string& path);

    const ModelExchange* find(const std::string& sample_id, MethodKind method) const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::pair<std::string, MethodKind>, ModelExchange> entries_;
};

/// Token bucket over requests per minute with a burst of one.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_minute);
    void acquire();

private:
    std::chrono::steady_clock::duration interval_{};
    std::chrono::steady_clock::time_point next_{};
    std::mutex mutex_;
};

class Gateway {
public:
    /// Validates the config and, for Replay, loads the store.
    Gateway(BackendConfig config, ExchangeLog& log);

    /// Sends one prompt and persists the exchange before returning. Backend
    /// failures come back as an exchange with `error` set; a replay miss is
    /// persisted and then raised as ReplayGapError. Safe to call concurrently.
    ModelExchange complete(const prompt::RenderedPrompt& prompt);

    const BackendConfig& config() const noexcept { return config_; }

private:
    ModelExchange call_http(const prompt::RenderedPrompt& prompt, const HttpSettings& http);

    BackendConfig config_;
    ExchangeLog& log_;
    std::optional<ReplayStore> replay_;
    std::unique_ptr<RateLimiter> limiter_;
};

/// Chat-completions request body: one user message, no system message.
nlohmann::json chat_request_body(const prompt::RenderedPrompt& prompt, const HttpSettings& http);

/// Text of the first choice in a chat-completions response. Throws GatewayError
/// on any other shape.
std::string chat_response_text(const nlohmann::json& response);

} // namespace tsprompt::gateway
