#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace tsprompt {

/// Prompting methods, declared in report row order.
enum class MethodKind { Baseline, ZeroShotCoT, OneShotCoT, ZeroShotPaSPlus, ZeroShotSARIMA, OneShotSARIMA, ZeroShotLST };

inline constexpr std::array<MethodKind, 7> kAllMethods{
    MethodKind::Baseline,       MethodKind::ZeroShotCoT,   MethodKind::OneShotCoT,  MethodKind::ZeroShotPaSPlus,
    MethodKind::ZeroShotSARIMA, MethodKind::OneShotSARIMA, MethodKind::ZeroShotLST,
};

/// Machine name used on the command line and in logs.
constexpr std::string_view method_name(MethodKind kind) {
    switch (kind) {
    case MethodKind::Baseline: return "baseline";
    case MethodKind::ZeroShotCoT: return "zero-shot-cot";
    case MethodKind::OneShotCoT: return "one-shot-cot";
    case MethodKind::ZeroShotPaSPlus: return "zero-shot-pas-plus";
    case MethodKind::ZeroShotSARIMA: return "zero-shot-sarima";
    case MethodKind::OneShotSARIMA: return "one-shot-sarima";
    case MethodKind::ZeroShotLST: return "zero-shot-lst";
    }
    return "baseline";
}

/// Row label used in reports.
constexpr std::string_view method_label(MethodKind kind) {
    switch (kind) {
    case MethodKind::Baseline: return "Baseline";
    case MethodKind::ZeroShotCoT: return "Zero-shot CoT";
    case MethodKind::OneShotCoT: return "One-shot CoT";
    case MethodKind::ZeroShotPaSPlus: return "Zero-shot PaS+";
    case MethodKind::ZeroShotSARIMA: return "Zero-shot SARIMA";
    case MethodKind::OneShotSARIMA: return "One-shot SARIMA";
    case MethodKind::ZeroShotLST: return "Zero-shot LST";
    }
    return "Baseline";
}

constexpr std::optional<MethodKind> find_method(std::string_view name) {
    for (const auto kind : kAllMethods) {
        if (method_name(kind) == name) return kind;
    }
    return std::nullopt;
}

inline std::string valid_method_names() {
    std::string out;
    for (const auto kind : kAllMethods) {
        if (!out.empty()) out += ", ";
        out += method_name(kind);
    }
    return out;
}

constexpr bool is_one_shot(MethodKind kind) {
    return kind == MethodKind::OneShotCoT || kind == MethodKind::OneShotSARIMA;
}

/// Zero-shot method whose query a one-shot method appends after its example.
constexpr MethodKind zero_shot_counterpart(MethodKind kind) {
    switch (kind) {
    case MethodKind::OneShotCoT: return MethodKind::ZeroShotCoT;
    case MethodKind::OneShotSARIMA: return MethodKind::ZeroShotSARIMA;
    default: return kind;
    }
}

} // namespace tsprompt
