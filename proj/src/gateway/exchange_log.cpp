#include "tsprompt/gateway.hpp"

#include <filesystem>

namespace tsprompt::gateway {

using nlohmann::json;

nlohmann::json exchange_to_json(const ModelExchange& e) {
    json j{{"sample_id", e.sample_id},
           {"method", std::string(method_name(e.method))},
           {"horizon", e.horizon},
           {"max_output_tokens", e.max_output_tokens},
           {"prompt_text", e.prompt_text},
           {"raw_response", e.raw_response},
           {"backend", std::string(to_string(e.backend))},
           {"latency_ms", e.latency_ms},
           {"attempt_count", e.attempt_count},
           {"created_at", e.created_at}};
    j["error"] = e.error ? json(*e.error) : json(nullptr);
    return j;
}

ModelExchange exchange_from_json(const nlohmann::json& j) {
    try {
        ModelExchange e;
        e.sample_id = j.at("sample_id").get<std::string>();
        const auto method = j.at("method").get<std::string>();
        const auto kind = find_method(method);
        if (!kind) throw LogError("unknown method '" + method + "'");
        e.method = *kind;
        e.horizon = j.value("horizon", 1);
        e.max_output_tokens = j.value("max_output_tokens", prompt::max_output_tokens_for(e.method));
        e.prompt_text = j.value("prompt_text", "");
        e.raw_response = j.at("raw_response").get<std::string>();
        const auto backend = backend_kind_from_string(j.value("backend", "oracle"));
        if (!backend) throw LogError("unknown backend '" + j.value("backend", "") + "'");
        e.backend = *backend;
        e.latency_ms = j.value("latency_ms", 0.0);
        e.attempt_count = j.value("attempt_count", 1);
        e.created_at = j.value("created_at", "");
        if (j.contains("error") && !j.at("error").is_null()) e.error = j.at("error").get<std::string>();
        return e;
    } catch (const json::exception& ex) {
        throw LogError(std::string("malformed exchange record: ") + ex.what());
    }
}

ExchangeLog::ExchangeLog(std::string path) : path_(std::move(path)) {
    const auto parent = std::filesystem::path(path_).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    out_.open(path_, std::ios::binary | std::ios::app);
    if (!out_) throw LogError("cannot open exchange log '" + path_ + "' for appending");
}

void ExchangeLog::append(const ModelExchange& exchange) {
    const std::string line = exchange_to_json(exchange).dump() + "\n";
    std::lock_guard lock(mutex_);
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    if (!out_) throw LogError("write to exchange log '" + path_ + "' failed");
}

std::vector<ModelExchange> ExchangeLog::read(const std::string& path) {
    std::vector<ModelExchange> out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const bool last = in.peek() == std::ifstream::traits_type::eof();
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            if (last) break; // interrupted write
            throw LogError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        try {
            out.push_back(exchange_from_json(j));
        } catch (const LogError& e) {
            throw LogError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

ReplayStore ReplayStore::load(const std::string& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("replay store '" + path + "' does not exist");
    ReplayStore store;
    for (auto& e : ExchangeLog::read(path)) {
        if (!e.ok()) continue;
        auto key = std::make_pair(e.sample_id, e.method);
        store.entries_.insert_or_assign(std::move(key), std::move(e));
    }
    return store;
}

const ModelExchange* ReplayStore::find(const std::string& sample_id, MethodKind method) const {
    const auto it = entries_.find({sample_id, method});
    return it == entries_.end() ? nullptr : &it->second;
}

} // namespace tsprompt::gateway
