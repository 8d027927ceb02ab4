// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// nonzero when any criterion fails.

#include "metric_scenarios.hpp"
#include "oracles.hpp"
#include "scratch_dir.hpp"

#include "tsprompt/bench.hpp"
#include "tsprompt/calendar.hpp"
#include "tsprompt/classical.hpp"
#include "tsprompt/oracle.hpp"
#include "tsprompt/prompt.hpp"
#include "tsprompt/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace tsprompt;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kMetricTol = 1e-9;
constexpr double kForecastTol = 1e-6;
constexpr double kReconstructTol = 1e-9;
constexpr double kGoldenSeconds = 1.0;
constexpr double kDemoSeconds = 60.0;
constexpr double kSmokeMissingRate = 0.20;

enum class Outcome { Pass, Fail, Skip };

struct Result {
    Outcome outcome = Outcome::Pass;
    std::string detail;
};

Result pass(std::string detail) { return {Outcome::Pass, std::move(detail)}; }
Result fail(std::string detail) { return {Outcome::Fail, std::move(detail)}; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string golden(const std::string& name) {
    return prompt::read_text_file(testing::source_path("tests/golden/" + name));
}

series::TimeSeries daily(std::vector<double> values, int y, unsigned m, unsigned d, series::DomainKind kind,
                         std::string entity) {
    return series::TimeSeries(std::move(values), series::make_timestamp(y, m, d), series::kDaily,
                              series::SeriesContext::defaults_for(kind, std::move(entity)));
}

Result golden_prompts() {
    const auto t0 = Clock::now();
    const auto ct = daily({44, 51, 59, 52, 51, 58, 64, 58, 60, 63, 60, 54, 53, 63, 66}, 2020, 4, 15,
                          series::DomainKind::Temperature, "110");
    const auto sg = daily({19, 17, 20, 17, 23, 14, 13, 18, 20, 14, 10, 17, 16, 18, 5}, 2021, 8, 21,
                          series::DomainKind::Visitors, "324");
    if (prompt::render_context_query(ct, 1) != golden("ct_query.txt")) return fail("temperature query differs");
    if (prompt::render_context_query(sg, 1) != golden("sg_query.txt")) return fail("visitor query differs");
    if (prompt::method_prompt_text(prompt::PromptMethod::make(MethodKind::ZeroShotSARIMA)) != golden("sarima_prompt.txt")) {
        return fail("SARIMA method text differs");
    }
    const auto pas = prompt::method_prompt_text(prompt::PromptMethod::make(MethodKind::ZeroShotPaSPlus));
    if (pas != golden("pas_plus_prompt.txt") || pas.find("****Final Answer****") == std::string::npos) {
        return fail("PaS+ method text differs");
    }
    const double s = seconds_since(t0);
    if (s >= kGoldenSeconds) return fail("took " + fmt("%.3f", s) + " s");
    return pass("4 golden texts byte-identical in " + fmt("%.4f", s) + " s");
}

Result token_budget() {
    auto library = prompt::PromptLibrary::builtin();
    library.set_lst_text("A: lst");
    const auto samples = bench::synthetic_samples(5, 48, 6, 1);
    std::size_t checked = 0;
    for (const auto& s : samples) {
        for (const auto kind : kAllMethods) {
            for (const int h : {1, 6}) {
                const auto r = library.render(s, kind, h);
                const int want = kind == MethodKind::ZeroShotLST ? 1280 : 1024;
                if (r.max_output_tokens != want || prompt::max_output_tokens_for(kind) != want) {
                    return fail(std::string(method_name(kind)) + " carries " + std::to_string(r.max_output_tokens));
                }
                ++checked;
            }
        }
    }
    return pass(std::to_string(checked) + " prompts: 1024 for six methods, 1280 for LST");
}

Result metrics_oracle() {
    Rng rng(2025);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + rng.below(100);
        std::vector<double> p(n), a(n);
        for (std::size_t k = 0; k < n; ++k) {
            p[k] = rng.uniform(-500, 500);
            a[k] = rng.uniform(-500, 500);
        }
        const double r = metrics::rmse(p, a), m = metrics::mae(p, a);
        if (std::abs(r - static_cast<double>(oracle::brute_rmse(p, a))) > kMetricTol ||
            std::abs(m - static_cast<double>(oracle::brute_mae(p, a))) > kMetricTol) {
            return fail("vector " + std::to_string(i) + " disagrees with the reference");
        }
        if (r < m) return fail("rmse < mae on vector " + std::to_string(i));
    }
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto s = testing::make_mask_scenario(1000 + seed);
        const auto report = metrics::score_run("x", s.horizon, s.parsed, s.actuals);
        const auto problem = testing::check_star_metrics(s, report, kMetricTol);
        if (!problem.empty()) return fail("mask scenario " + std::to_string(seed) + ": " + problem);
    }
    return pass("1000 vectors within 1e-9, rmse >= mae; 200 mask scenarios match");
}

Result windowing() {
    series::SynthParams p;
    p.step = series::kHourly;
    p.slope = 0.001;
    const auto ts = series::synth_series(series::SynthKind::Linear, p, 34300, 0);
    const auto capped = series::build_windows(ts, {96, 10, 3000}).windows.size();
    const auto uncapped = series::build_windows(ts, {96, 10, std::nullopt}).windows.size();
    const auto expected = (34300 - 96) / 10 + 1;
    if (capped != 3000) return fail("capped count " + std::to_string(capped));
    if (uncapped != static_cast<std::size_t>(expected) || uncapped != 3421) return fail("uncapped count " + std::to_string(uncapped));
    return pass("3000 capped, 3421 uncapped");
}

Result decomposition() {
    Rng rng(55);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        series::SynthParams p;
        p.intercept = rng.uniform(-50, 50);
        p.slope = rng.uniform(-2, 2);
        p.amplitude = rng.uniform(0.1, 20);
        p.period = 24;
        p.phase = rng.uniform(0, 6.3);
        const auto truth = series::synth_series(series::SynthKind::LinearPlusSeasonal, p, 102, 0).values();
        const std::vector<double> history(truth.begin(), truth.begin() + 96);
        const auto f = classical::forecast(history, 6, classical::Decomposed{24});
        for (std::size_t h = 0; h < 6; ++h) worst = std::max(worst, std::abs(f[h] - truth[96 + h]));
    }
    if (worst >= kForecastTol) return fail("forecast error " + fmt("%.3g", worst));
    double worst_rec = 0.0;
    for (int i = 0; i < 500; ++i) {
        std::vector<double> v(96);
        for (auto& x : v) x = rng.uniform(-100, 100);
        const std::optional<std::size_t> period = i % 3 == 0 ? std::nullopt : std::optional<std::size_t>(2 + rng.below(47));
        const auto d = classical::decompose_additive(v, period);
        for (std::size_t t = 0; t < v.size(); ++t) worst_rec = std::max(worst_rec, std::abs(d.reconstruct(t) - v[t]));
    }
    if (worst_rec >= kReconstructTol) return fail("reconstruction error " + fmt("%.3g", worst_rec));
    return pass("max forecast error " + fmt("%.2g", worst) + ", max reconstruction error " + fmt("%.2g", worst_rec));
}

Result parser_corpus() {
    std::ifstream in(testing::source_path("tests/data/parser_corpus.jsonl"));
    if (!in) return fail("corpus file missing");
    std::string line;
    std::size_t cases = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = nlohmann::json::parse(line);
        ++cases;
        const int h = c.at("horizon").get<int>();
        const auto parsed = extract::extract_forecast(c.at("text").get<std::string>(), h);
        const auto name = c.at("name").get<std::string>();
        if (extract::to_string(parsed.extractor_used) != c.at("extractor").get<std::string>()) {
            return fail(name + ": extractor " + std::string(extract::to_string(parsed.extractor_used)));
        }
        for (int i = 0; i < h; ++i) {
            const auto& want = c.at("expected").at(static_cast<std::size_t>(i));
            const auto& got = parsed.steps.at(static_cast<std::size_t>(i));
            if (want.is_null() != !got.has_value() || (got && std::abs(*got - want.get<double>()) > 1e-12)) {
                return fail(name + ": step " + std::to_string(i + 1) + " differs");
            }
        }
    }
    if (cases < 30) return fail("only " + std::to_string(cases) + " corpus cases");

    const std::string alphabet = "0123456789.-,;:*| \n\tanswerFINALpredict()[]/+\xe2\x88\x92";
    const std::vector<std::string> fragments{"****Final Answer****", "Prediction:", "Hour 2:", "1.", "\n\n", "May", "2021"};
    Rng rng(4242);
    for (int i = 0; i < 10000; ++i) {
        std::string text;
        const auto pieces = rng.below(50);
        for (std::uint64_t k = 0; k < pieces; ++k) {
            text += rng.below(4) == 0 ? fragments[rng.below(fragments.size())] : std::string(1, alphabet[rng.below(alphabet.size())]);
        }
        const int h = 1 + static_cast<int>(rng.below(7));
        try {
            const auto p = extract::extract_forecast(text, h);
            if (p.steps.size() != static_cast<std::size_t>(h)) return fail("fuzz input " + std::to_string(i) + ": wrong step count");
        } catch (...) {
            return fail("fuzz input " + std::to_string(i) + " threw");
        }
    }
    return pass(std::to_string(cases) + " corpus cases match; 10000 fuzz inputs parsed without throwing");
}

Result token_split() {
    const auto join = [](const std::vector<std::string>& parts) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "|" : "") + parts[i];
        return out;
    };
    if (join(extract::numeric_token_split("13245")) != "132|45") return fail("13245 splits as " + join(extract::numeric_token_split("13245")));
    if (join(extract::numeric_token_split("12.992")) != "12|.|992") return fail("12.992 splits as " + join(extract::numeric_token_split("12.992")));
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        std::string s = rng.below(4) == 0 ? "-" : "";
        const auto digits = 1 + rng.below(15);
        for (std::uint64_t k = 0; k < digits; ++k) s += static_cast<char>('0' + rng.below(10));
        if (rng.below(2) == 0) {
            s += '.';
            const auto frac = 1 + rng.below(8);
            for (std::uint64_t k = 0; k < frac; ++k) s += static_cast<char>('0' + rng.below(10));
        }
        std::string joined;
        for (const auto& part : extract::numeric_token_split(s)) joined += part;
        if (joined != s) return fail("concatenation differs for " + s);
    }
    return pass("132|45, 12|.|992, identity on 1000 fuzzed numerals");
}

Result oracle_determinism() {
    testing::ScratchDir a("accept-a"), b("accept-b");
    bench::DemoOptions o;
    o.out_dir = a.str();
    const auto t0 = Clock::now();
    const auto first = bench::oracle_demo(o);
    const double s = seconds_since(t0);
    o.out_dir = b.str();
    o.workers = 3;
    const auto second = bench::oracle_demo(o);
    if (s >= kDemoSeconds) return fail("demo took " + fmt("%.1f", s) + " s");
    if (first.size() != 2 || second.size() != 2) return fail("expected two fault rates");

    for (std::size_t r = 0; r < first.size(); ++r) {
        if (first[r].markdown != second[r].markdown || first[r].csv != second[r].csv ||
            metrics::report_to_json(first[r].report) != metrics::report_to_json(second[r].report)) {
            return fail("reports differ between repeated runs at rate " + fmt("%g", first[r].fault_rate));
        }
    }

    const auto& clean = first[0].report;
    for (const auto& m : clean.methods) {
        for (const auto& step : m.steps) {
            if (!step.rmse || *step.rmse != 0.0) return fail(m.key + " has nonzero RMSE at fault rate 0");
        }
        if (m.missing_rate != 0.0) return fail(m.key + " has missing values at fault rate 0");
    }

    const auto samples = bench::demo_samples(o.samples, o.length, o.horizon, o.seed);
    const auto faults = gateway::OracleFaults::uniform(0.1, o.seed);
    const auto& noisy = first[1].report;
    for (const auto& m : noisy.methods) {
        std::size_t expected = 0;
        for (const auto& sample : samples) expected += gateway::draw_faults(faults, sample.sample_id, *m.method).causes_missing();
        if (m.n_missing != expected) {
            return fail(m.key + ": " + std::to_string(m.n_missing) + " missing, fault draws give " + std::to_string(expected));
        }
    }
    return pass("200 x 7 x 2 rates in " + fmt("%.2f", s) + " s, identical reports, missing rates equal the fault draws, zero RMSE without faults");
}

Result live_smoke() {
    const char* key = std::getenv("OPENAI_API_KEY");
    if (!key || !*key) return {Outcome::Skip, "OPENAI_API_KEY not set"};

    testing::ScratchDir dir("accept-live");
    std::vector<series::Sample> samples;
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> values(16);
        const double level = rng.uniform(40, 70);
        for (auto& v : values) v = std::round(level + rng.uniform(-6, 6));
        const double target = values.back();
        values.pop_back();
        samples.push_back({"ct-" + std::to_string(i),
                           daily(values, 2020, 4, 1 + static_cast<unsigned>(i % 10), series::DomainKind::Temperature,
                                 std::to_string(100 + i)),
                           {target}});
    }
    const auto file = dir.str("short.jsonl");
    series::write_samples(file, samples);

    bench::RunConfig c;
    c.dataset = bench::Dataset::CT;
    c.dataset_file = file;
    c.methods = {MethodKind::Baseline, MethodKind::ZeroShotCoT};
    c.backend.settings = gateway::HttpSettings{};
    c.out_dir = dir.str("runs");
    c.run_id = "live";
    c.workers = 2;
    const auto summary = bench::run_benchmark(c);
    const auto report = bench::score_run_dir(summary.run_dir);
    for (const auto& m : report.methods) {
        if (m.missing_rate >= kSmokeMissingRate) return fail(m.key + " missing rate " + fmt("%.2f", m.missing_rate));
        for (const auto& step : m.steps) {
            if (!step.rmse || !std::isfinite(*step.rmse) || !step.mae || !std::isfinite(*step.mae)) {
                return fail(m.key + " has non-finite metrics");
            }
        }
    }
    c.run_id = "replayed";
    c.backend.settings = gateway::ReplaySettings{summary.run_dir + "/exchanges.jsonl"};
    const auto replayed = bench::run_benchmark(c);
    if (metrics::report_to_json(bench::score_run_dir(replayed.run_dir)) != metrics::report_to_json(report)) {
        return fail("replayed report differs");
    }
    if (metrics::report_to_json(bench::score_run_dir(summary.run_dir)) != metrics::report_to_json(report)) {
        return fail("rescoring is not stable");
    }
    return pass("50 samples x 2 methods, missing rates below 20%, replay and rescore stable");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"golden prompts", golden_prompts},
        {"token budget", token_budget},
        {"metrics oracle", metrics_oracle},
        {"windowing arithmetic", windowing},
        {"decomposition exactness", decomposition},
        {"parser corpus and fuzz", parser_corpus},
        {"token splitter", token_split},
        {"end-to-end determinism", oracle_determinism},
        {"live smoke", live_smoke},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = fail(std::string("exception: ") + e.what());
        }
        const char* tag = r.outcome == Outcome::Pass ? "PASS" : (r.outcome == Outcome::Skip ? "SKIP" : "FAIL");
        failures += r.outcome == Outcome::Fail;
        std::cout << "[" << tag << "] criterion " << i + 1 << " " << criteria[i].first << ": " << r.detail << std::endl;
    }
    std::cout << (failures == 0 ? "acceptance: all criteria met" : "acceptance: " + std::to_string(failures) + " failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
