#include "tsprompt/gateway.hpp"
#include "tsprompt/oracle.hpp"

#include <ctime>
#include <thread>

namespace tsprompt::gateway {

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t secs = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    const std::size_t len = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char frac[8];
    std::snprintf(frac, sizeof frac, ".%03dZ", static_cast<int>(ms));
    return std::string(buf, len) + frac;
}

} // namespace

RateLimiter::RateLimiter(double requests_per_minute) {
    if (requests_per_minute > 0.0) {
        interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(60.0 / requests_per_minute));
    }
}

void RateLimiter::acquire() {
    if (interval_.count() == 0) return;
    std::chrono::steady_clock::time_point slot;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        slot = std::max(now, next_);
        next_ = slot + interval_;
    }
    std::this_thread::sleep_until(slot);
}

Gateway::Gateway(BackendConfig config, ExchangeLog& log) : config_(std::move(config)), log_(log) {
    config_.validate();
    if (const auto* r = std::get_if<ReplaySettings>(&config_.settings)) replay_ = ReplayStore::load(r->path);
    if (const auto* h = std::get_if<HttpSettings>(&config_.settings)) {
        limiter_ = std::make_unique<RateLimiter>(h->rate_limit_rpm);
    }
}

ModelExchange Gateway::complete(const prompt::RenderedPrompt& prompt) {
    if (prompt.text.empty()) throw GatewayError("prompt text is empty for sample '" + prompt.sample_id + "'");
    const auto started = std::chrono::steady_clock::now();

    ModelExchange ex;
    ex.sample_id = prompt.sample_id;
    ex.method = prompt.method;
    ex.horizon = prompt.horizon;
    ex.max_output_tokens = prompt.max_output_tokens;
    ex.prompt_text = prompt.text;
    ex.backend = config_.kind();
    ex.attempt_count = 1;

    bool replay_gap = false;
    if (const auto* h = std::get_if<HttpSettings>(&config_.settings)) {
        auto result = call_http(prompt, *h);
        ex.raw_response = std::move(result.raw_response);
        ex.attempt_count = result.attempt_count;
        ex.error = std::move(result.error);
    } else if (std::holds_alternative<ReplaySettings>(config_.settings)) {
        if (const auto* hit = replay_->find(prompt.sample_id, prompt.method)) {
            ex.raw_response = hit->raw_response;
        } else {
            replay_gap = true;
            ex.error = "replay-gap";
        }
    } else {
        const auto& faults = std::get<OracleSettings>(config_.settings).faults;
        try {
            ex.raw_response = oracle_respond(prompt, faults);
        } catch (const GatewayError& e) {
            ex.error = std::string("oracle-error: ") + e.what();
        }
    }

    ex.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    ex.created_at = utc_now();
    log_.append(ex);
    if (replay_gap) {
        throw ReplayGapError("replay store has no response for sample '" + prompt.sample_id + "', method " +
                             std::string(method_name(prompt.method)));
    }
    return ex;
}

} // namespace tsprompt::gateway
