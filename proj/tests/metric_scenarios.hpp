#pragma once

#include "oracles.hpp"

#include "tsprompt/metrics.hpp"
#include "tsprompt/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace testing {

/// Random parsed run with a random missing mask, plus actuals.
struct MaskScenario {
    int horizon = 1;
    std::vector<std::string> ids;
    tsprompt::metrics::ParsedRun parsed;
    tsprompt::metrics::Actuals actuals;
};

inline MaskScenario make_mask_scenario(std::uint64_t seed) {
    using namespace tsprompt;
    Rng rng(seed);
    MaskScenario s;
    s.horizon = 1 + static_cast<int>(rng.below(6));
    const std::size_t n = 1 + rng.below(40);
    const std::size_t methods = 1 + rng.below(kAllMethods.size());
    const double p_missing = rng.uniform(0.0, 0.4);
    for (std::size_t i = 0; i < n; ++i) {
        s.ids.push_back("m" + std::to_string(seed) + "-" + std::to_string(i));
        std::vector<double> a(static_cast<std::size_t>(s.horizon));
        for (auto& v : a) v = rng.uniform(-100, 100);
        s.actuals[s.ids.back()] = a;
    }
    for (std::size_t m = 0; m < methods; ++m) {
        auto& list = s.parsed[kAllMethods[m]];
        for (const auto& id : s.ids) {
            extract::ParsedForecast f;
            f.sample_id = id;
            f.method = kAllMethods[m];
            f.horizon = s.horizon;
            for (int j = 0; j < s.horizon; ++j) {
                if (rng.uniform() < p_missing) {
                    f.steps.push_back(std::nullopt);
                } else {
                    f.steps.push_back(rng.uniform(-100, 100));
                }
            }
            list.push_back(f);
        }
    }
    return s;
}

/// Recomputes every star metric from scratch and compares. Returns the first
/// mismatch description, or an empty string.
inline std::string check_star_metrics(const MaskScenario& s, const tsprompt::metrics::EvalReport& report, double tol) {
    std::vector<std::set<std::string>> complete_sets;
    for (const auto& [method, list] : s.parsed) {
        std::set<std::string> ok;
        for (const auto& f : list) {
            bool all = true;
            for (const auto& step : f.steps) all = all && step.has_value();
            if (all) ok.insert(f.sample_id);
        }
        complete_sets.push_back(ok);
    }
    const auto common = oracle::brute_intersection(complete_sets, s.ids);
    if (report.n_common != common.size()) return "n_common differs";
    std::size_t mi = 0;
    for (const auto& [method, list] : s.parsed) {
        const auto& score = report.methods.at(mi++);
        for (int j = 0; j < s.horizon; ++j) {
            std::vector<double> p, a;
            for (const auto& f : list) {
                if (!common.contains(f.sample_id)) continue;
                p.push_back(*f.steps[static_cast<std::size_t>(j)]);
                a.push_back(s.actuals.at(f.sample_id)[static_cast<std::size_t>(j)]);
            }
            const auto& step = score.steps[static_cast<std::size_t>(j)];
            if (p.empty()) {
                if (step.rmse_star || step.mae_star) return "star metric present on an empty common subset";
                continue;
            }
            if (!step.rmse_star || !step.mae_star) return "star metric absent";
            if (std::abs(*step.rmse_star - static_cast<double>(oracle::brute_rmse(p, a))) > tol) return "rmse* differs";
            if (std::abs(*step.mae_star - static_cast<double>(oracle::brute_mae(p, a))) > tol) return "mae* differs";
        }
    }
    return {};
}

} // namespace testing
