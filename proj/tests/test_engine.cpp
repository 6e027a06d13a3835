#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "pmcast/engine.hpp"
#include "pmcast/error.hpp"
#include "pmcast/simulator.hpp"
#include "support/oracles.hpp"

using namespace pmcast;
namespace pt = pmcast::testing;

namespace {
const Alphabet kAb({"a", "b"});

RunResult run_words(const std::string& pattern, const SymbolModel& model, std::string_view words,
                    double theta, std::size_t horizon = 500) {
    const auto dfa = compile(parse_pattern(pattern, model.alphabet()), model.alphabet());
    const auto pmc = build_pmc(dfa, model);
    const auto wtt = waiting_times(pmc, horizon);
    return run(EventStream::from_words(model.alphabet(), words), dfa, pmc, wtt, theta);
}
} // namespace

TEST(Run, DetectsBackToBackMatches) {
    for (const auto& model : pt::corpus_models(kAb)) {
        const auto r = run_words("a;b;b;b", model, "a b b b a b b b", 0.5);
        ASSERT_EQ(r.matches.size(), 2u);
        EXPECT_EQ(r.matches[0].index, 3u);
        EXPECT_EQ(r.matches[1].index, 7u);
    }
}

TEST(Run, NoMatchAllForecastsFromStateZero) {
    const auto r = run_words("a;b;b;b", pt::make_model(kAb, 0, {{0.5, 0.5}}), "b b b b", 0.5);
    EXPECT_TRUE(r.matches.empty());
    ASSERT_EQ(r.forecasts.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(r.forecasts[i].state, 0u);
        EXPECT_EQ(r.forecasts[i].emitted_at, i);
    }
}

TEST(Run, DeterministicAlternationAlwaysHits) {
    const auto model = pt::make_model(kAb, 1, {{0.0, 1.0}, {1.0, 0.0}});
    const auto stream = EventStream::from_words(kAb, "a b a b");
    const auto r = run_words("a;b", model, "a b a b", 0.9);
    EXPECT_EQ(r.matches.size(), 2u);
    ASSERT_FALSE(r.forecasts.empty());
    for (const auto& f : r.forecasts) {
        ASSERT_EQ(stream[f.emitted_at].type, 0u);
        EXPECT_EQ(f.interval.start, 1u);
        EXPECT_EQ(f.interval.end, 1u);
        EXPECT_EQ(f.outcome, Outcome::Hit);
    }
}

TEST(Run, WarmupEmitsNoForecastsButReportsMatches) {
    const Alphabet a({"a"});
    const auto model = pt::make_model(a, 2, {{1.0}});
    const auto dfa = compile(parse_pattern("a", a), a);
    const auto pmc = build_pmc(dfa, model);
    const auto r = run(EventStream::from_words(a, "a a a"), dfa, pmc, waiting_times(pmc, 5), 0.5);
    EXPECT_EQ(r.matches.size(), 3u);
    EXPECT_TRUE(r.forecasts.empty());

    const auto model2 = pt::make_model(kAb, 2, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
    const auto r2 = run_words("a;b;b;b", model2, "b b b b b", 0.5);
    ASSERT_EQ(r2.forecasts.size(), 3u);
    EXPECT_EQ(r2.forecasts.front().emitted_at, 2u);
}

TEST(Run, MatchesAgreeWithAcceptsOnEveryPrefix) {
    std::mt19937_64 rng(99);
    for (const auto& entry : pt::corpus()) {
        const auto dfa = compile(parse_pattern(entry.pattern, entry.alphabet), entry.alphabet);
        for (const auto& model : pt::corpus_models(entry.alphabet)) {
            const auto pmc = build_pmc(dfa, model);
            const auto wtt = waiting_times(pmc, 50);
            for (int trial = 0; trial < 20; ++trial) {
                const auto stream = generate({model, 1 + rng() % 12, rng(), {}});
                const auto r = run(stream, dfa, pmc, wtt, 0.5);
                std::vector<Symbol> prefix;
                std::vector<std::size_t> expected;
                for (const auto& e : stream.events()) {
                    prefix.push_back(e.type);
                    if (dfa.accepts(prefix)) expected.push_back(e.index);
                }
                std::vector<std::size_t> got;
                for (const auto& m : r.matches) got.push_back(m.index);
                ASSERT_EQ(got, expected) << entry.pattern;
            }
        }
    }
}

TEST(Run, ForecastIntervalsComeFromTheTable) {
    const auto model = pt::make_model(kAb, 1, {{0.3, 0.7}, {0.6, 0.4}});
    const auto dfa = compile(parse_pattern("a;b;b;b", kAb), kAb);
    const auto pmc = build_pmc(dfa, model);
    const auto wtt = waiting_times(pmc, 500);
    const auto stream = generate({model, 2000, 1, {}});
    const auto r1 = run(stream, dfa, pmc, wtt, 0.6);
    const auto r2 = run(stream, dfa, pmc, wtt, 0.6);
    EXPECT_EQ(r1.matches, r2.matches);
    EXPECT_EQ(r1.forecasts, r2.forecasts);
    for (const auto& f : r1.forecasts) EXPECT_EQ(f.interval, forecast_interval(wtt.row(f.state), 0.6));
}

TEST(Run, HorizonInsufficientReportedOncePerState) {
    const auto r = run_words("a;b;b;b", pt::make_model(kAb, 0, {{0.5, 0.5}}), "b b a b b b b", 0.5, 3);
    // Only state 3 (after "a b b") reaches 0.5 within 3 steps; the visits
    // at indices 0, 1, 2, 3 and 6 are skipped.
    ASSERT_EQ(r.insufficient.size(), 3u);
    EXPECT_EQ(r.insufficient[0].state, 0u);
    EXPECT_EQ(r.insufficient[1].state, 1u);
    EXPECT_EQ(r.insufficient[2].state, 2u);
    EXPECT_NEAR(r.insufficient[2].achievable, 0.25, 1e-15);
    EXPECT_EQ(r.skipped_forecasts, 5u);
    ASSERT_EQ(r.forecasts.size(), 1u);
    EXPECT_EQ(r.forecasts[0].emitted_at, 4u);
}

TEST(Run, RejectsBadTheta) {
    EXPECT_THROW(run_words("a;b", pt::make_model(kAb, 0, {{0.5, 0.5}}), "a b", 1.5), DomainError);
}

TEST(ResolveForecasts, Examples) {
    auto make = [](std::size_t t, std::size_t s, std::size_t e) {
        return ForecastRecord{t, 0, ForecastInterval{s, e, 0.5}, Outcome::Pending};
    };
    const std::vector<MatchRecord> at3{{3, 3}};
    EXPECT_EQ(resolve_forecasts({make(0, 3, 3)}, at3, 12)[0].outcome, Outcome::Hit);
    EXPECT_EQ(resolve_forecasts({make(0, 1, 2)}, at3, 12)[0].outcome, Outcome::Miss);
    EXPECT_EQ(resolve_forecasts({make(10, 1, 5)}, {}, 12)[0].outcome, Outcome::Unresolved);
    EXPECT_EQ(resolve_forecasts({make(2, 1, 5)}, {}, 12)[0].outcome, Outcome::Miss);
    // A match at the emission index itself is not a future completion.
    EXPECT_EQ(resolve_forecasts({make(3, 1, 1)}, at3, 12)[0].outcome, Outcome::Miss);
    EXPECT_EQ(resolve_forecasts({make(3, 1, 1)}, at3, 4)[0].outcome, Outcome::Unresolved);
}

TEST(Records, JsonLinesLayoutAndRoundTrip) {
    const auto model = pt::make_model(kAb, 0, {{0.5, 0.5}});
    const auto r = run_words("a;b;b;b", model, "a b b b", 0.5);
    std::stringstream io;
    write_records(r, io);
    EXPECT_EQ(io.str(),
              "{\"kind\":\"forecast\",\"emitted_at\":0,\"state\":1,\"start\":3,\"end\":10,\"mass\":0.5078125,"
              "\"outcome\":\"hit\"}\n"
              "{\"kind\":\"forecast\",\"emitted_at\":1,\"state\":2,\"start\":2,\"end\":8,\"mass\":0.51171875,"
              "\"outcome\":\"hit\"}\n"
              "{\"kind\":\"forecast\",\"emitted_at\":2,\"state\":3,\"start\":1,\"end\":1,\"mass\":0.5,"
              "\"outcome\":\"hit\"}\n"
              "{\"kind\":\"match\",\"index\":3,\"timestamp\":3}\n");
    EXPECT_EQ(read_forecast_records(io), r.forecasts);
}

TEST(Records, MalformedLineIsReported) {
    std::istringstream in("{\"kind\":\"match\",\"index\":0,\"timestamp\":0}\n{\"kind\":\"forecast\"}\n");
    try {
        read_forecast_records(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}
