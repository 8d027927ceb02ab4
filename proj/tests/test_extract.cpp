#include "scratch_dir.hpp"

#include "tsprompt/extract.hpp"
#include "tsprompt/rng.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>

using namespace tsprompt;
using namespace tsprompt::extract;

namespace {

std::string join_tokens(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "|" : "") + parts[i];
    return out;
}

} // namespace

TEST_CASE("parser corpus") {
    std::ifstream in(testing::source_path("tests/data/parser_corpus.jsonl"));
    REQUIRE(in);
    std::string line;
    std::size_t cases = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = nlohmann::json::parse(line);
        ++cases;
        const int h = c.at("horizon").get<int>();
        const auto parsed = extract_forecast(c.at("text").get<std::string>(), h);
        INFO("case " << c.at("name").get<std::string>());
        REQUIRE(parsed.steps.size() == static_cast<std::size_t>(h));
        CHECK(to_string(parsed.extractor_used) == c.at("extractor").get<std::string>());
        for (int i = 0; i < h; ++i) {
            const auto& want = c.at("expected").at(static_cast<std::size_t>(i));
            if (want.is_null()) {
                CHECK_FALSE(parsed.steps[static_cast<std::size_t>(i)].has_value());
            } else {
                REQUIRE(parsed.steps[static_cast<std::size_t>(i)].has_value());
                CHECK(*parsed.steps[static_cast<std::size_t>(i)] == doctest::Approx(want.get<double>()).epsilon(1e-12));
            }
        }
    }
    CHECK(cases >= 30);
}

TEST_CASE("metadata is carried through") {
    const auto p = extract_forecast("****Final Answer**** 1, 2", 2, "s-1", MethodKind::ZeroShotLST);
    CHECK(p.sample_id == "s-1");
    CHECK(p.method == MethodKind::ZeroShotLST);
    CHECK(p.complete());
    CHECK(p.parsed_steps() == 2);
    const auto empty = extract_forecast("nothing", 0);
    CHECK(empty.steps.empty());
    CHECK_FALSE(empty.complete());
    CHECK(extractor_from_string("labeled-line") == Extractor::LabeledLine);
    CHECK_FALSE(extractor_from_string("regex").has_value());
}

TEST_CASE("scanner roles") {
    const auto tokens = scan_numbers("1. On 2020-04-15 at 17:00 we saw 5th place, -2.5 and April 30, 2020.");
    std::vector<double> values;
    for (const auto& t : tokens) {
        if (t.role == TokenRole::Value) values.push_back(t.value);
    }
    CHECK(values == std::vector<double>{-2.5});
    CHECK(scan_value_sequence("Q: values 1, 2, 3 and then 4, 5, 6, 7 degree") == std::vector<double>{4, 5, 6, 7});
}

TEST_CASE("extraction never throws on fuzzed input") {
    const std::string alphabet = "0123456789.-,;:*| \n\tabcdefghijklmnopqrstuvwxyzFAINLSWER()[]/+\xe2\x88\x92";
    const std::vector<std::string> fragments{"****Final Answer****", "Final Answer", "**", "Prediction:", "answer",
                                             "Hour 3:", "t+1:", "1.", "\n\n", "April", "2020", "-", "\xe2\x88", "..."};
    Rng rng(2024);
    for (int i = 0; i < 10000; ++i) {
        std::string text;
        const auto pieces = rng.below(40);
        for (std::uint64_t k = 0; k < pieces; ++k) {
            if (rng.below(4) == 0) {
                text += fragments[rng.below(fragments.size())];
            } else {
                text += alphabet[rng.below(alphabet.size())];
            }
        }
        const int h = static_cast<int>(rng.below(8));
        ParsedForecast p;
        REQUIRE_NOTHROW(p = extract_forecast(text, h));
        REQUIRE(p.steps.size() == static_cast<std::size_t>(h));
    }
}

TEST_CASE("numeric token split") {
    CHECK(join_tokens(numeric_token_split("13245")) == "132|45");
    CHECK(join_tokens(numeric_token_split("12.992")) == "12|.|992");
    CHECK(join_tokens(numeric_token_split("-1234567.5")) == "-|123|456|7|.|5");
    CHECK(join_tokens(numeric_token_split("999")) == "999");
    CHECK_THROWS_AS(numeric_token_split(""), TokenSplitError);
    CHECK_THROWS_AS(numeric_token_split("1e5"), TokenSplitError);
    CHECK_THROWS_AS(numeric_token_split("1,234"), TokenSplitError);
    CHECK_THROWS_AS(numeric_token_split("."), TokenSplitError);
}

TEST_CASE("token split properties on fuzzed numerals") {
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        std::string s;
        if (rng.below(3) == 0) s += '-';
        const auto int_digits = 1 + rng.below(12);
        for (std::uint64_t k = 0; k < int_digits; ++k) s += static_cast<char>('0' + rng.below(10));
        std::uint64_t frac_digits = 0;
        if (rng.below(2) == 0) {
            s += '.';
            frac_digits = 1 + rng.below(9);
            for (std::uint64_t k = 0; k < frac_digits; ++k) s += static_cast<char>('0' + rng.below(10));
        }
        const auto parts = numeric_token_split(s);
        std::string joined;
        std::size_t chunks = 0;
        for (const auto& p : parts) {
            joined += p;
            if (p != "-" && p != ".") {
                REQUIRE(p.size() <= 3);
                ++chunks;
            }
        }
        REQUIRE(joined == s);
        REQUIRE(chunks == (int_digits + 2) / 3 + (frac_digits + 2) / 3);
    }
}
