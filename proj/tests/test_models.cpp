#include <doctest.h>

#include <cmath>

#include "cofix/generate.hpp"
#include "cofix/model.hpp"

#include "fixtures.hpp"

using namespace cofix;

TEST_CASE("loadModel: fixtures come out with the declared shape") {
    Model m1 = fixtures::m1();
    auto& k = std::get<KripkeModel>(m1);
    CHECK(k.states == std::vector<std::string>{"s0", "s1", "s2"});
    CHECK(k.props.at("p").members() == std::vector<int>{2});
    CHECK(k.succ[0].members() == std::vector<int>{1});
    CHECK(k.succ[2].members() == std::vector<int>{2});

    Model mq = fixtures::mq();
    auto& p = std::get<ProbModel>(mq);
    CHECK(p.mass(0) == doctest::Approx(1.0));  // boundary mass accepted
    CHECK(p.mass(1) == 0.0);
    CHECK(p.payout.at("p")[1] == 1.0);
}

TEST_CASE("loadModel error paths") {
    CHECK_THROWS_AS(loadModel("{"), UserError);
    CHECK_THROWS_AS(loadModel(R"({"kind":"kripke"})"), UserError);
    CHECK_THROWS_AS(loadModel(R"({"kind":"foo","states":["a"]})"), UserError);
    // dangling state reference
    CHECK_THROWS_AS(loadModel(R"({"kind":"kripke","states":["a"],"succ":{"a":["ghost"]}})"),
                    UserError);
    // subdistribution mass above 1
    CHECK_THROWS_AS(loadModel(R"({"kind":"prob","states":["a"],"step":{"a":{"a":1.2}}})"),
                    UserError);
    CHECK_THROWS_AS(
        loadModel(R"({"kind":"prob","states":["a","b"],"step":{"a":{"a":0.6,"b":0.6}}})"),
        UserError);
    // payout out of range
    CHECK_THROWS_AS(
        loadModel(R"({"kind":"prob","states":["a"],"payoutLabels":["p"],"payout":{"p":{"a":2.0}}})"),
        UserError);
    CHECK_THROWS_AS(loadModel(R"({"kind":"labeled","states":["a"],"labels":["l"],
                                  "succ":{"ghost":{"a":["a"]}}})"),
                    UserError);
}

TEST_CASE("serialize round trip") {
    for (const char* doc : {fixtures::kM1, fixtures::kM2, fixtures::kMQ, fixtures::kMQ2}) {
        Model m = loadModel(doc);
        Model back = loadModel(serializeModel(m));
        CHECK(kindOf(back) == kindOf(m));
        CHECK(statesOf(back) == statesOf(m));
        CHECK(serializeModel(back) == serializeModel(m));
    }
    // Weights survive within 1e-15.
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        ProbModel p = randomProb(rng);
        Model back = loadModel(serializeModel(p));
        auto& q = std::get<ProbModel>(back);
        for (std::size_t s = 0; s < p.states.size(); ++s) {
            auto a = p.stepRow(static_cast<int>(s));
            auto b = q.stepRow(static_cast<int>(s));
            for (std::size_t y = 0; y < a.size(); ++y)
                CHECK(std::fabs(a[y] - b[y]) <= 1e-15);
        }
    }
}

TEST_CASE("checkMorphism: identity is a morphism") {
    Model m1 = fixtures::m1();
    CHECK(checkMorphism(m1, m1, identityMap(m1)).ok);
}

TEST_CASE("checkMorphism: s1 -> s2 breaks a proposition") {
    Model m1 = fixtures::m1();
    StateMap f = identityMap(m1);
    f.map[1] = 2;
    MorphismVerdict v = checkMorphism(m1, m1, f);
    CHECK(!v.ok);
    CHECK(v.state == 1);
    CHECK(v.reason == "prop");
}

TEST_CASE("checkMorphism: folding identical self-loop states works") {
    const char* two = R"({"kind":"kripke","states":["a","b"],
                          "props":{"p":["a","b"]},
                          "succ":{"a":["a"],"b":["b"]}})";
    Model m = loadModel(two);
    StateMap f;
    f.map = {0, 0};
    CHECK(checkMorphism(m, m, f).ok);
}

TEST_CASE("checkMorphism rejects mismatched signatures") {
    Model m1 = fixtures::m1();
    Model m2 = fixtures::m2();
    CHECK_THROWS_AS(checkMorphism(m1, m2, identityMap(m1)), UserError);
}

TEST_CASE("quotientByKernel: discrete partition is an isomorphic copy") {
    Model m1 = fixtures::m1();
    auto out = quotientByKernel(m1, {{0}, {1}, {2}});
    REQUIRE(out.ok);
    CHECK(stateCount(*out.quotient) == 3);
    CHECK(checkMorphism(m1, *out.quotient, out.projection).ok);
}

TEST_CASE("quotientByKernel: bisimilar loop states collapse") {
    const char* two = R"({"kind":"kripke","states":["a","b"],
                          "props":{"p":["a","b"]},
                          "succ":{"a":["a"],"b":["b"]}})";
    Model m = loadModel(two);
    auto out = quotientByKernel(m, {{0, 1}});
    REQUIRE(out.ok);
    CHECK(stateCount(*out.quotient) == 1);
    CHECK(checkMorphism(m, *out.quotient, out.projection).ok);
}

TEST_CASE("quotientByKernel: p distinguishes s1 and s2 in M1") {
    Model m1 = fixtures::m1();
    auto out = quotientByKernel(m1, {{0}, {1, 2}});
    CHECK(!out.ok);
    CHECK(out.violatingBlock == "s1+s2");
}

TEST_CASE("quotientByKernel rejects malformed partitions") {
    Model m1 = fixtures::m1();
    CHECK_THROWS_AS(quotientByKernel(m1, {{0, 1}}), UserError);          // not covering
    CHECK_THROWS_AS(quotientByKernel(m1, {{0, 1}, {1, 2}}), UserError);  // overlapping
}

TEST_CASE("generated congruent partitions always quotient and pushforward preserves mass") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        ModelKind kind = trial % 3 == 0   ? ModelKind::Kripke
                         : trial % 3 == 1 ? ModelKind::Labeled
                                          : ModelKind::Prob;
        CongruentPair pair = randomCongruentPair(rng, kind);
        auto out = quotientByKernel(pair.model, pair.partition);
        REQUIRE(out.ok);
        CHECK(checkMorphism(pair.model, *out.quotient, out.projection).ok);
        if (kind == ModelKind::Prob) {
            const auto& src = std::get<ProbModel>(pair.model);
            const auto& qt = std::get<ProbModel>(*out.quotient);
            for (int s = 0; s < stateCount(pair.model); ++s) {
                double pushed = qt.mass(out.projection.apply(s));
                CHECK(std::fabs(src.mass(s) - pushed) <= 1e-12);
            }
        }
    }
}

TEST_CASE("parseStateMap validates totality and targets") {
    Model m1 = fixtures::m1();
    StateMap f = parseStateMap(m1, m1, R"({"map":{"s0":"s0","s1":"s1","s2":"s2"}})");
    CHECK(f.map == std::vector<int>{0, 1, 2});
    CHECK_THROWS_AS(parseStateMap(m1, m1, R"({"map":{"s0":"s0"}})"), UserError);
    CHECK_THROWS_AS(parseStateMap(m1, m1, R"({"map":{"s0":"nope","s1":"s1","s2":"s2"}})"),
                    UserError);
}
