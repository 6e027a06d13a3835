#include <gtest/gtest.h>

#include <cmath>

#include "pmcast/error.hpp"
#include "pmcast/markov.hpp"
#include "pmcast/simulator.hpp"
#include "support/oracles.hpp"

using namespace pmcast;
namespace pt = pmcast::testing;

namespace {
const Alphabet kAb({"a", "b"});
}

TEST(Train, OrderZeroSymmetric) {
    const auto m = train(EventStream::from_words(kAb, "a b a b a b"), 0, 0.0);
    EXPECT_DOUBLE_EQ(m.probability(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(m.probability(0, 1), 0.5);
}

TEST(Train, OrderOneAlternation) {
    const auto m = train(EventStream::from_words(kAb, "a b a b a b a"), 1, 0.0);
    EXPECT_DOUBLE_EQ(m.probability(0, 1), 1.0);  // P(b|a)
    EXPECT_DOUBLE_EQ(m.probability(1, 0), 1.0);  // P(a|b)
}

TEST(Train, AdditiveSmoothing) {
    const auto m = train(EventStream::from_words(kAb, "a a a a a a a a a b"), 0, 1.0);
    EXPECT_NEAR(m.probability(0, 0), 10.0 / 12.0, 1e-15);
    EXPECT_NEAR(m.probability(0, 1), 2.0 / 12.0, 1e-15);
}

TEST(Train, UnobservedContextUniformWithSmoothing) {
    const auto m = train(EventStream::from_words(kAb, "a a a"), 1, 0.5);
    EXPECT_DOUBLE_EQ(m.probability(1, 0), 0.5);
    EXPECT_DOUBLE_EQ(m.probability(1, 1), 0.5);
}

TEST(Train, UnobservedContextWithoutSmoothingFailsAtBuild) {
    const auto m = train(EventStream::from_words(kAb, "a a a"), 1, 0.0);
    EXPECT_FALSE(m.defined(1));
    const auto dfa = compile(parse_pattern("a;b", kAb), kAb);
    try {
        build_pmc(dfa, m);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("context 'b'"), std::string::npos) << e.what();
    }
}

TEST(Train, RefusesHugeContextTables) {
    const Alphabet ten({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"});
    EXPECT_NO_THROW(ContextCodec(10, 6));
    EXPECT_THROW(train(EventStream(ten), 7, 1.0), DomainError);
}

TEST(Train, EveryRowSumsToOne) {
    const auto s = generate({pt::make_model(kAb, 2, {{0.1, 0.9}, {0.5, 0.5}, {0.7, 0.3}, {0.2, 0.8}}), 5000, 3, {}});
    for (double alpha : {0.0, 0.5, 1.0}) {
        const auto m = train(s, 2, alpha);
        for (ContextId c = 0; c < m.contexts().count(); ++c) {
            double sum = 0.0;
            for (double p : m.distribution(c)) sum += p;
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

TEST(Train, RecoversGeneratorProbabilities) {
    const auto truth = pt::make_model(kAb, 1, {{0.3, 0.7}, {0.6, 0.4}});
    const auto s = generate({truth, 100'000, 11, {}});
    const auto est = train(s, 1, 0.0);
    for (ContextId c = 0; c < 2; ++c)
        for (Symbol a = 0; a < 2; ++a) EXPECT_NEAR(est.probability(c, a), truth.probability(c, a), 0.02);
}

TEST(ContextCodec, ShiftEncodeDecode) {
    const ContextCodec codec(3, 2);
    EXPECT_EQ(codec.count(), 9u);
    const std::vector<Symbol> ab{0, 1};
    const auto c = codec.encode(ab);
    EXPECT_EQ(codec.decode(codec.shift(c, 2)), (std::vector<Symbol>{1, 2}));
    const Alphabet abc({"a", "b", "c"});
    EXPECT_EQ(codec.to_string(c, abc), "a,b");
    EXPECT_EQ(codec.parse("a,b", abc), c);
}

TEST(ModelJson, RoundTripIsLossless) {
    const auto s = generate({pt::make_model(kAb, 1, {{0.3, 0.7}, {0.6, 0.4}}), 1000, 5, {}});
    const auto m = train(s, 1, 1.0);
    const auto text = model_to_json(m);
    EXPECT_EQ(model_from_json(text), m);
    EXPECT_EQ(model_to_json(model_from_json(text)), text);

    const auto undefined = train(EventStream::from_words(kAb, "a a"), 1, 0.0);
    EXPECT_NE(model_to_json(undefined).find("\"b\":null"), std::string::npos);
    EXPECT_EQ(model_from_json(model_to_json(undefined)), undefined);
}

TEST(ModelJson, Validation) {
    EXPECT_THROW(model_from_json(R"({"alphabet":["a","b"],"order":0,"smoothing":1,"table":{"":[0.5,0.6]}})"),
                 DomainError);
    EXPECT_THROW(model_from_json(R"({"alphabet":["a","b"],"order":1,"smoothing":1,"table":{"a":[0.5,0.5]}})"),
                 DomainError);
    EXPECT_THROW(model_from_json(R"({"alphabet":["a","b"],"order":0})"), ParseError);
}

TEST(BuildPmc, OrderZeroAbbb) {
    const auto dfa = compile(parse_pattern("a;b;b;b", kAb), kAb);
    const auto pmc = build_pmc(dfa, pt::make_model(kAb, 0, {{0.5, 0.5}}));
    ASSERT_EQ(pmc.size(), 5u);
    for (PmcState s = 0; s < 5; ++s) {
        EXPECT_EQ(pmc.state(s).dfa_state, s);
        EXPECT_EQ(pmc.is_absorbing(s), s == 4);
    }
    const auto row1 = pmc.row(1);
    ASSERT_EQ(row1.size(), 2u);
    EXPECT_EQ(row1[0].target, 1u);
    EXPECT_DOUBLE_EQ(row1[0].probability, 0.5);
    EXPECT_EQ(row1[1].target, 2u);
    EXPECT_DOUBLE_EQ(row1[1].probability, 0.5);
    EXPECT_DOUBLE_EQ(pmc.absorption_mass(3), 0.5);
    EXPECT_DOUBLE_EQ(pmc.absorption_mass(1), 0.0);
}

TEST(BuildPmc, UnaryDeterministic) {
    const Alphabet a({"a"});
    const auto dfa = compile(parse_pattern("a", a), a);
    const auto pmc = build_pmc(dfa, pt::make_model(a, 0, {{1.0}}));
    ASSERT_EQ(pmc.row(0).size(), 1u);
    EXPECT_EQ(pmc.row(0)[0].target, 1u);
    EXPECT_DOUBLE_EQ(pmc.row(0)[0].probability, 1.0);
    EXPECT_TRUE(pmc.is_absorbing(1));
}

TEST(BuildPmc, OrderOneProductStates) {
    const auto dfa = compile(parse_pattern("a;b;b;b", kAb), kAb);
    const auto pmc = build_pmc(dfa, pt::make_model(kAb, 1, {{0.3, 0.7}, {0.6, 0.4}}));
    // Seeds (0,a),(0,b), then (1,a),(2,b),(3,b),(4,b).
    ASSERT_EQ(pmc.size(), 6u);
    EXPECT_EQ(pmc.label(0), "0|a");
    EXPECT_EQ(pmc.label(1), "0|b");
    EXPECT_EQ(pmc.label(2), "1|a");
    EXPECT_EQ(pmc.label(5), "4|b");
    for (PmcState s = 0; s < pmc.size(); ++s) {
        double sum = 0.0;
        for (const auto& t : pmc.row(s)) sum += t.probability;
        EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(BuildPmc, AlphabetMismatch) {
    const auto dfa = compile(parse_pattern("a;b", kAb), kAb);
    EXPECT_THROW(build_pmc(dfa, pt::make_model(Alphabet({"a", "c"}), 0, {{0.5, 0.5}})), DomainError);
}

TEST(BuildPmc, TracksJointStateExactly) {
    // Stepping (DFA state, context) by hand and stepping PMC ids agree.
    for (const auto& entry : pt::corpus()) {
        const auto dfa = compile(parse_pattern(entry.pattern, entry.alphabet), entry.alphabet);
        for (const auto& model : pt::corpus_models(entry.alphabet)) {
            const auto pmc = build_pmc(dfa, model);
            const auto stream = generate({model, 400, 17, {}});
            const auto& codec = model.contexts();
            DfaState q = dfa.start();
            std::vector<Symbol> window;
            std::optional<PmcState> s;
            if (model.order() == 0) s = static_cast<PmcState>(dfa.start());
            for (const auto& e : stream.events()) {
                q = dfa.step(q, e.type);
                if (window.size() == model.order() && !window.empty()) window.erase(window.begin());
                if (model.order() > 0) window.push_back(e.type);
                if (s) {
                    s = pmc.successor(*s, e.type);
                } else if (window.size() == model.order()) {
                    s = pmc.find(q, codec.encode(window));
                    ASSERT_TRUE(s);
                }
                if (s) {
                    ASSERT_EQ(pmc.state(*s).dfa_state, q);
                    ASSERT_EQ(pmc.state(*s).context, codec.encode(window));
                }
            }
        }
    }
}
