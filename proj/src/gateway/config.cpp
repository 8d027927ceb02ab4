#include "tsprompt/gateway.hpp"

#include <cstdlib>
#include <filesystem>
#include <set>

namespace tsprompt::gateway {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_keys(const json& section, std::string_view name, const std::set<std::string>& allowed) {
    if (!section.is_object()) throw ConfigError("backend section '" + std::string(name) + "' must be an object");
    for (const auto& [key, value] : section.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in backend section '" + std::string(name) + "'");
        }
    }
}

template <class T>
void read_key(const json& section, const char* key, T& out) {
    if (!section.contains(key)) return;
    try {
        out = section.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

void read_ms(const json& section, const char* key, std::chrono::milliseconds& out) {
    long long ms = out.count();
    read_key(section, key, ms);
    out = std::chrono::milliseconds(ms);
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must be in [0, 1]");
}

OracleFaults faults_from_json(const json& j) {
    check_keys(j, "oracle", {"p_omit_marker", "p_short_horizon", "p_split_answer", "p_arith_slip", "seed"});
    OracleFaults f;
    read_key(j, "p_omit_marker", f.p_omit_marker);
    read_key(j, "p_short_horizon", f.p_short_horizon);
    read_key(j, "p_split_answer", f.p_split_answer);
    read_key(j, "p_arith_slip", f.p_arith_slip);
    read_key(j, "seed", f.seed);
    return f;
}

json faults_to_json(const OracleFaults& f) {
    return {{"p_omit_marker", f.p_omit_marker},   {"p_short_horizon", f.p_short_horizon},
            {"p_split_answer", f.p_split_answer}, {"p_arith_slip", f.p_arith_slip},
            {"seed", f.seed}};
}

} // namespace

std::string_view to_string(BackendKind kind) {
    switch (kind) {
    case BackendKind::Http: return "http";
    case BackendKind::Replay: return "replay";
    case BackendKind::Oracle: return "oracle";
    }
    return "oracle";
}

std::optional<BackendKind> backend_kind_from_string(std::string_view name) {
    for (const auto kind : {BackendKind::Http, BackendKind::Replay, BackendKind::Oracle}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

OracleFaults OracleFaults::uniform(double rate, std::uint64_t seed) { return {rate, rate, rate, rate, seed}; }

void OracleFaults::validate() const {
    check_probability(p_omit_marker, "p_omit_marker");
    check_probability(p_short_horizon, "p_short_horizon");
    check_probability(p_split_answer, "p_split_answer");
    check_probability(p_arith_slip, "p_arith_slip");
}

BackendKind BackendConfig::kind() const {
    return std::visit(overloaded{
                          [](const HttpSettings&) { return BackendKind::Http; },
                          [](const ReplaySettings&) { return BackendKind::Replay; },
                          [](const OracleSettings&) { return BackendKind::Oracle; },
                      },
                      settings);
}

void BackendConfig::validate() const {
    std::visit(overloaded{
                   [](const HttpSettings& h) {
                       const bool http = h.endpoint_url.starts_with("http://");
                       const bool https = h.endpoint_url.starts_with("https://");
                       if (!http && !https) throw ConfigError("endpoint_url must start with http:// or https://");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
                       if (https) throw ConfigError("this build has no TLS support; use an http:// endpoint");
#endif
                       if (h.model_name.empty()) throw ConfigError("model_name must not be empty");
                       if (!(h.temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
                       if (h.request_timeout.count() <= 0) throw ConfigError("request_timeout_ms must be positive");
                       if (h.max_retries < 1 || h.max_retries > 20) throw ConfigError("max_retries must be in [1, 20]");
                       if (!(h.rate_limit_rpm >= 0.0)) throw ConfigError("rate_limit_rpm must be >= 0");
                       if (h.initial_backoff.count() < 0) throw ConfigError("initial_backoff_ms must be >= 0");
                       if (!h.api_key_env.empty()) {
                           const char* key = std::getenv(h.api_key_env.c_str());
                           if (!key || !*key) {
                               throw ConfigError("environment variable " + h.api_key_env + " (API key) is not set");
                           }
                       }
                   },
                   [](const ReplaySettings& r) {
                       if (r.path.empty()) throw ConfigError("replay backend needs a path");
                       if (!std::filesystem::exists(r.path)) {
                           throw ConfigError("replay store '" + r.path + "' does not exist");
                       }
                   },
                   [](const OracleSettings& o) { o.faults.validate(); },
               },
               settings);
}

BackendConfig BackendConfig::from_json(const json& j) {
    if (!j.is_object() || !j.contains("backend") || !j.at("backend").is_string()) {
        throw ConfigError("backend config needs a \"backend\" name (http, replay or oracle)");
    }
    const auto name = j.at("backend").get<std::string>();
    const auto kind = backend_kind_from_string(name);
    if (!kind) throw ConfigError("unknown backend '" + name + "'; valid: http, replay, oracle");

    const auto section = [&](const char* key) { return j.contains(key) ? j.at(key) : json::object(); };
    BackendConfig config;
    switch (*kind) {
    case BackendKind::Http: {
        const auto s = section("http");
        check_keys(s, "http",
                   {"endpoint_url", "model_name", "api_key_env", "temperature", "request_timeout_ms", "max_retries",
                    "rate_limit_rpm", "initial_backoff_ms"});
        HttpSettings h;
        read_key(s, "endpoint_url", h.endpoint_url);
        read_key(s, "model_name", h.model_name);
        read_key(s, "api_key_env", h.api_key_env);
        read_key(s, "temperature", h.temperature);
        read_ms(s, "request_timeout_ms", h.request_timeout);
        read_key(s, "max_retries", h.max_retries);
        read_key(s, "rate_limit_rpm", h.rate_limit_rpm);
        read_ms(s, "initial_backoff_ms", h.initial_backoff);
        config.settings = h;
        break;
    }
    case BackendKind::Replay: {
        const auto s = section("replay");
        check_keys(s, "replay", {"path"});
        ReplaySettings r;
        read_key(s, "path", r.path);
        config.settings = r;
        break;
    }
    case BackendKind::Oracle: config.settings = OracleSettings{faults_from_json(section("oracle"))}; break;
    }
    return config;
}

json BackendConfig::to_json() const {
    json j{{"backend", std::string(to_string(kind()))}};
    std::visit(overloaded{
                   [&](const HttpSettings& h) {
                       j["http"] = {{"endpoint_url", h.endpoint_url},
                                    {"model_name", h.model_name},
                                    {"api_key_env", h.api_key_env},
                                    {"temperature", h.temperature},
                                    {"request_timeout_ms", h.request_timeout.count()},
                                    {"max_retries", h.max_retries},
                                    {"rate_limit_rpm", h.rate_limit_rpm},
                                    {"initial_backoff_ms", h.initial_backoff.count()}};
                   },
                   [&](const ReplaySettings& r) { j["replay"] = {{"path", r.path}}; },
                   [&](const OracleSettings& o) { j["oracle"] = faults_to_json(o.faults); },
               },
               settings);
    return j;
}

} // namespace tsprompt::gateway
