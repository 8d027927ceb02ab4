#include "tsprompt/bench.hpp"
#include "tsprompt/rng.hpp"

#include <atomic>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace tsprompt::bench {

namespace fs = std::filesystem;

namespace {

std::string utc_stamp(const char* format) {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[40];
    const std::size_t len = std::strftime(buf, sizeof buf, format, &tm);
    return std::string(buf, len);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BenchError("cannot write '" + path.string() + "'");
    out << content;
}

std::vector<series::Sample> load_samples(const RunConfig& c) {
    std::vector<series::Sample> samples;
    if (c.dataset == Dataset::Synthetic && c.dataset_file.empty()) {
        samples = synthetic_samples(c.synthetic_count, 96, c.effective_horizon(), c.seed);
    } else {
        if (c.dataset_file.empty()) {
            throw UsageError("dataset " + std::string(to_string(c.dataset)) +
                             " needs --dataset-file (a samples file written by prepare-data)");
        }
        samples = series::read_samples(c.dataset_file);
    }
    if (c.max_windows && samples.size() > *c.max_windows) {
        samples.erase(samples.begin() + static_cast<std::ptrdiff_t>(*c.max_windows), samples.end());
    }
    if (samples.empty()) throw UsageError("dataset holds no samples");
    return samples;
}

prompt::PromptLibrary load_library(const std::string& prompt_dir, const std::string& lst_file,
                                   const std::vector<MethodKind>& methods) {
    auto lib = prompt_dir.empty() ? prompt::PromptLibrary::builtin() : prompt::PromptLibrary::with_overrides(prompt_dir);
    if (!lst_file.empty()) lib.load_lst_file(lst_file);
    for (const auto m : methods) lib.method(m);
    return lib;
}

} // namespace

std::map<TaskKey, TaskStatus> derive_status(const RunManifest& manifest,
                                            const std::vector<gateway::ModelExchange>& exchanges) {
    std::map<TaskKey, TaskStatus> status;
    for (const auto& id : manifest.sample_ids) {
        for (const auto m : manifest.methods) status[{id, m}] = TaskStatus::Pending;
    }
    for (const auto& e : exchanges) {
        const auto it = status.find({e.sample_id, e.method});
        if (it == status.end()) continue;
        if (e.ok()) {
            it->second = TaskStatus::Done;
        } else if (it->second != TaskStatus::Done) {
            it->second = TaskStatus::Failed;
        }
    }
    return status;
}

RunSummary run_benchmark(const RunConfig& c) {
    if (c.workers < 1) throw UsageError("--workers must be at least 1");

    fs::path run_dir;
    RunManifest manifest;
    std::vector<series::Sample> samples;
    gateway::BackendConfig backend;

    if (c.resume) {
        run_dir = fs::path(c.out_dir) / *c.resume;
        const auto manifest_path = run_dir / kManifestFile;
        if (!fs::exists(manifest_path)) throw UsageError("no run '" + *c.resume + "' under " + c.out_dir);
        std::ifstream in(manifest_path);
        manifest = RunManifest::from_json(nlohmann::json::parse(in));
        samples = series::read_samples((run_dir / kSamplesFile).string());
        backend = gateway::BackendConfig::from_json(manifest.backend);
        if (!c.lst_prompt_file.empty()) manifest.lst_prompt_file = c.lst_prompt_file;
    } else {
        samples = load_samples(c);
        backend = c.backend;
        if (auto* oracle = std::get_if<gateway::OracleSettings>(&backend.settings)) {
            oracle->faults.seed = c.fault_seed.value_or(c.seed);
        }
        manifest.created_at = utc_stamp("%Y-%m-%dT%H:%M:%SZ");
        manifest.dataset_id = std::string(to_string(c.dataset));
        manifest.horizon = c.effective_horizon();
        manifest.methods = c.methods;
        manifest.backend = backend.to_json();
        manifest.prompt_dir = c.prompt_dir;
        manifest.lst_prompt_file = c.lst_prompt_file;
        for (const auto& s : samples) manifest.sample_ids.push_back(s.sample_id);
        if (c.run_id) {
            manifest.run_id = *c.run_id;
        } else {
            char suffix[16];
            std::snprintf(suffix, sizeof suffix, "%06llx",
                          static_cast<unsigned long long>(
                              stable_hash(c.to_json().dump() + manifest.created_at + std::to_string(std::clock())) &
                              0xffffffULL));
            manifest.run_id = "run-" + utc_stamp("%Y%m%d-%H%M%S") + "-" + suffix;
        }
        run_dir = fs::path(c.out_dir) / manifest.run_id;
    }
    if (manifest.horizon < 1) throw UsageError("horizon must be positive");
    if (manifest.methods.empty()) throw UsageError("no methods selected");

    // Everything that can be wrong with the configuration fails here, before any request.
    try {
        backend.validate();
    } catch (const gateway::ConfigError& e) {
        throw UsageError(std::string("backend configuration: ") + e.what());
    }
    prompt::PromptLibrary lib;
    try {
        lib = load_library(manifest.prompt_dir, manifest.lst_prompt_file, manifest.methods);
    } catch (const prompt::PromptError& e) {
        throw UsageError(e.what());
    }

    if (!c.resume) {
        if (fs::exists(run_dir / kManifestFile)) {
            throw UsageError("run '" + manifest.run_id + "' already exists; pass --resume " + manifest.run_id);
        }
        fs::create_directories(run_dir);
        series::write_samples((run_dir / kSamplesFile).string(), samples);
        write_file(run_dir / kManifestFile, manifest.to_json().dump(2) + "\n");
    }

    const auto log_path = (run_dir / kExchangesFile).string();
    const auto status = derive_status(manifest, gateway::ExchangeLog::read(log_path));

    std::vector<prompt::RenderedPrompt> tasks;
    for (const auto& sample : samples) {
        for (const auto m : manifest.methods) {
            const auto st = status.at({sample.sample_id, m});
            if (st == TaskStatus::Done || (st == TaskStatus::Failed && !c.retry_failed)) continue;
            try {
                tasks.push_back(lib.render(sample, m, manifest.horizon));
            } catch (const std::exception& e) {
                throw UsageError("cannot render prompt for sample '" + sample.sample_id + "': " + e.what());
            }
        }
    }

    gateway::ExchangeLog log(log_path);
    std::optional<gateway::Gateway> gw;
    try {
        gw.emplace(backend, log);
    } catch (const gateway::ConfigError& e) {
        throw UsageError(std::string("backend configuration: ") + e.what());
    }

    const std::size_t limit = c.stop_after ? std::min(*c.stop_after, tasks.size()) : tasks.size();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> gaps{0};
    std::atomic<bool> abort{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        while (!abort) {
            const std::size_t i = next.fetch_add(1);
            if (i >= limit) return;
            try {
                gw->complete(tasks[i]);
            } catch (const gateway::ReplayGapError&) {
                ++gaps;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                abort = true;
            }
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(c.workers), std::max<std::size_t>(limit, 1));
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);

    RunSummary summary;
    summary.run_id = manifest.run_id;
    summary.run_dir = run_dir.string();
    summary.issued = std::min(next.load(), limit);
    summary.replay_gaps = gaps;
    for (const auto& [key, st] : derive_status(manifest, gateway::ExchangeLog::read(log_path))) {
        ++summary.total;
        if (st == TaskStatus::Done) ++summary.done;
        if (st == TaskStatus::Failed) ++summary.failed;
        if (st == TaskStatus::Pending) ++summary.pending;
    }
    return summary;
}

} // namespace tsprompt::bench
