#include "tsprompt/bench.hpp"

#include <fstream>
#include <set>

namespace tsprompt::bench {

namespace {

using nlohmann::json;

void check_keys(const json& section, std::string_view name, const std::set<std::string>& allowed) {
    if (!section.is_object()) throw UsageError("config section '" + std::string(name) + "' must be an object");
    for (const auto& [key, value] : section.items()) {
        if (!allowed.contains(key)) throw UsageError("unknown key '" + key + "' in config section '" + std::string(name) + "'");
    }
}

template <class T>
std::optional<T> get(const json& section, const char* key) {
    if (!section.contains(key) || section.at(key).is_null()) return std::nullopt;
    try {
        return section.at(key).get<T>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad value for config key '") + key + "': " + e.what());
    }
}

std::string methods_csv(const std::vector<MethodKind>& methods) {
    std::string out;
    for (const auto m : methods) {
        if (!out.empty()) out += ",";
        out += method_name(m);
    }
    return out;
}

} // namespace

RunConfig RunConfig::from_json(const json& j) {
    check_keys(j, "top level", {"dataset", "methods", "backend", "faults", "prompts", "run"});
    RunConfig c;
    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        check_keys(d, "dataset", {"name", "file", "horizon", "max_windows", "synthetic_count"});
        if (const auto name = get<std::string>(d, "name")) c.dataset = parse_dataset(*name);
        if (const auto file = get<std::string>(d, "file")) c.dataset_file = *file;
        c.horizon = get<int>(d, "horizon");
        c.max_windows = get<std::size_t>(d, "max_windows");
        if (const auto n = get<std::size_t>(d, "synthetic_count")) c.synthetic_count = *n;
    }
    if (j.contains("methods")) {
        const auto& m = j.at("methods");
        if (m.is_string()) {
            c.methods = parse_methods(m.get<std::string>());
        } else if (m.is_array()) {
            std::string csv;
            for (const auto& name : m) {
                if (!name.is_string()) throw UsageError("config 'methods' entries must be strings");
                if (!csv.empty()) csv += ",";
                csv += name.get<std::string>();
            }
            c.methods = parse_methods(csv);
        } else {
            throw UsageError("config 'methods' must be a list of names or \"all\"");
        }
    }
    if (j.contains("backend")) {
        try {
            c.backend = gateway::BackendConfig::from_json(j.at("backend"));
        } catch (const gateway::ConfigError& e) {
            throw UsageError(e.what());
        }
    }
    if (j.contains("faults")) {
        const auto& f = j.at("faults");
        check_keys(f, "faults", {"p_omit_marker", "p_short_horizon", "p_split_answer", "p_arith_slip", "rate", "seed"});
        auto* oracle = std::get_if<gateway::OracleSettings>(&c.backend.settings);
        if (!oracle) throw UsageError("config section 'faults' applies to the oracle backend only");
        auto& faults = oracle->faults;
        if (const auto rate = get<double>(f, "rate")) faults = gateway::OracleFaults::uniform(*rate, faults.seed);
        if (const auto p = get<double>(f, "p_omit_marker")) faults.p_omit_marker = *p;
        if (const auto p = get<double>(f, "p_short_horizon")) faults.p_short_horizon = *p;
        if (const auto p = get<double>(f, "p_split_answer")) faults.p_split_answer = *p;
        if (const auto p = get<double>(f, "p_arith_slip")) faults.p_arith_slip = *p;
        c.fault_seed = get<std::uint64_t>(f, "seed");
    }
    if (j.contains("prompts")) {
        const auto& p = j.at("prompts");
        check_keys(p, "prompts", {"dir", "lst_prompt_file"});
        if (const auto dir = get<std::string>(p, "dir")) c.prompt_dir = *dir;
        if (const auto lst = get<std::string>(p, "lst_prompt_file")) c.lst_prompt_file = *lst;
    }
    if (j.contains("run")) {
        const auto& r = j.at("run");
        check_keys(r, "run", {"seed", "workers", "out_dir", "run_id", "retry_failed"});
        if (const auto seed = get<std::uint64_t>(r, "seed")) c.seed = *seed;
        if (const auto workers = get<int>(r, "workers")) c.workers = *workers;
        if (const auto out = get<std::string>(r, "out_dir")) c.out_dir = *out;
        c.run_id = get<std::string>(r, "run_id");
        if (const auto retry = get<bool>(r, "retry_failed")) c.retry_failed = *retry;
    }
    return c;
}

json RunConfig::to_json() const {
    json dataset{{"name", std::string(to_string(this->dataset))}, {"horizon", effective_horizon()},
                 {"synthetic_count", synthetic_count}};
    if (!dataset_file.empty()) dataset["file"] = dataset_file;
    if (max_windows) dataset["max_windows"] = *max_windows;
    json j{{"dataset", dataset},
           {"methods", methods_csv(methods)},
           {"backend", backend.to_json()},
           {"prompts", {{"dir", prompt_dir}, {"lst_prompt_file", lst_prompt_file}}},
           {"run", {{"seed", seed}, {"workers", workers}, {"out_dir", out_dir}, {"retry_failed", retry_failed}}}};
    if (fault_seed) j["faults"] = {{"seed", *fault_seed}};
    return j;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    try {
        return RunConfig::from_json(json::parse(in, nullptr, true, true));
    } catch (const json::parse_error& e) {
        throw UsageError("config file '" + path + "': " + e.what());
    }
}

std::string_view to_string(TaskStatus status) {
    switch (status) {
    case TaskStatus::Pending: return "pending";
    case TaskStatus::Done: return "done";
    case TaskStatus::Failed: return "failed";
    }
    return "pending";
}

json RunManifest::to_json() const {
    json methods_json = json::array();
    for (const auto m : methods) methods_json.push_back(std::string(method_name(m)));
    return {{"run_id", run_id},
            {"created_at", created_at},
            {"dataset_id", dataset_id},
            {"horizon", horizon},
            {"methods", methods_json},
            {"backend", backend},
            {"prompt_dir", prompt_dir},
            {"lst_prompt_file", lst_prompt_file},
            {"sample_count", sample_ids.size()},
            {"sample_ids", sample_ids}};
}

RunManifest RunManifest::from_json(const json& j) {
    try {
        RunManifest m;
        m.run_id = j.at("run_id").get<std::string>();
        m.created_at = j.value("created_at", "");
        m.dataset_id = j.at("dataset_id").get<std::string>();
        m.horizon = j.at("horizon").get<int>();
        for (const auto& name : j.at("methods")) {
            const auto kind = find_method(name.get<std::string>());
            if (!kind) throw BenchError("manifest lists unknown method '" + name.get<std::string>() + "'");
            m.methods.push_back(*kind);
        }
        m.backend = j.at("backend");
        m.prompt_dir = j.value("prompt_dir", "");
        m.lst_prompt_file = j.value("lst_prompt_file", "");
        m.sample_ids = j.at("sample_ids").get<std::vector<std::string>>();
        return m;
    } catch (const json::exception& e) {
        throw BenchError(std::string("malformed manifest: ") + e.what());
    }
}

} // namespace tsprompt::bench
