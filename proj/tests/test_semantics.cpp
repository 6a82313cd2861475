#include <doctest.h>

#include <future>

#include "cofix/generate.hpp"
#include "cofix/oracles.hpp"
#include "cofix/parser.hpp"
#include "cofix/printer.hpp"
#include "cofix/semantics.hpp"

#include "fixtures.hpp"

using namespace cofix;

namespace {

const LogicInstance kStar = LogicInstance::diamondStar();
const LogicInstance kPdl = LogicInstance::pdl({"a", "b", "c"});
const LogicInstance kQuant = LogicInstance::quant();
const LogicInstance kCfl = LogicInstance::cfl();

Predicate setOf(int width, std::initializer_list<int> members) {
    return Predicate::fromIndices(width, std::vector<int>(members));
}

} // namespace

TEST_CASE("unfold: dia* p -> p \\/ dia(dia* p)") {
    FormulaPtr f = parseFormula("dia* p", kStar);
    GuardedTerm g = unfold(*f);
    REQUIRE(g.kind == GuardedTerm::Kind::Or);
    CHECK(equal(g.children[0].leaf, fAtom("p")));
    REQUIRE(g.children[1].kind == GuardedTerm::Kind::Modal);
    CHECK(g.children[1].modality == "dia");
    CHECK(equal(g.children[1].children[0].leaf, f));
}

TEST_CASE("unfold: <a*>p -> <a>(<a*>p) \\/ p") {
    FormulaPtr f = parseFormula("<a*>p", kPdl);
    GuardedTerm g = unfold(*f);
    REQUIRE(g.kind == GuardedTerm::Kind::Or);
    REQUIRE(g.children[0].kind == GuardedTerm::Kind::Modal);
    CHECK(g.children[0].modality == "a");
    CHECK(equal(g.children[0].children[0].leaf, f));  // tail a* closes back on itself
    CHECK(equal(g.children[1].leaf, fAtom("p")));     // eps branch
}

TEST_CASE("unfold: sigma[0.5] p -> 0.5*p + 0.5*dia(sigma[0.5] p)") {
    FormulaPtr f = parseFormula("sigma[0.5] p", kQuant);
    GuardedTerm g = unfold(*f);
    REQUIRE(g.kind == GuardedTerm::Kind::Convex);
    CHECK(g.coeffs == std::vector<double>{0.5, 0.5});
    CHECK(equal(g.children[0].leaf, fAtom("p")));
    REQUIRE(g.children[1].kind == GuardedTerm::Kind::Modal);
    CHECK(equal(g.children[1].children[0].leaf, f));
}

TEST_CASE("unfold rejects non-fixpoint heads") {
    CHECK_THROWS_AS(unfold(*parseFormula("p \\/ q", kStar)), UserError);
}

TEST_CASE("closure: dia* p has exactly {dia* p, p}") {
    Closure c = Closure::compute(parseFormula("dia* p", kStar));
    CHECK(c.keys() == std::vector<std::string>{"dia* p", "p"});
}

TEST_CASE("closure: <(a;b)*>p runs through the derivative tail") {
    Closure c = Closure::compute(parseFormula("<(a;b)*>p", kPdl));
    CHECK(c.keys() == std::vector<std::string>{"<(a;b)*>p", "p", "<b;(a;b)*>p"});
}

TEST_CASE("closure: an atom is just itself") {
    Closure c = Closure::compute(parseFormula("p", kStar));
    CHECK(c.keys() == std::vector<std::string>{"p"});
}

TEST_CASE("closure respects its cap") {
    CHECK_THROWS_WITH_AS(Closure::compute(parseFormula("<(a;b)*>(p \\/ <c*>q)", kPdl), 2),
                         doctest::Contains("closure cap"), UserError);
}

TEST_CASE("interpretModal on the fixtures") {
    Model m1 = fixtures::m1();
    // s2 has the self loop, s1 steps into s2.
    CHECK(interpretModal(m1, "dia", {setOf(3, {2})}) == setOf(3, {1, 2}));
    CHECK(interpretModal(m1, "dia", {Predicate::emptySet(3)}) == Predicate::emptySet(3));
    CHECK(interpretModal(m1, "box", {setOf(3, {2})}) == setOf(3, {1, 2}));
    CHECK(interpretModal(m1, "box", {Predicate::emptySet(3)}) == Predicate::emptySet(3));

    Model mq = fixtures::mq();
    Predicate arg = Predicate::fromValues({0.0, 1.0});
    Predicate out = interpretModal(mq, "dia", {arg});
    CHECK(out.value(0) == doctest::Approx(1.0));  // x steps to y with mass 1
    CHECK(out.value(1) == doctest::Approx(0.0));  // y has no mass

    Model m2 = fixtures::m2();
    CHECK(interpretModal(m2, "a", {setOf(3, {1})}) == setOf(3, {0}));
    CHECK_THROWS_AS(interpretModal(m1, "nope", {setOf(3, {})}), UserError);
}

TEST_CASE("evalLeast: dia* p on M1 is full reachability") {
    Model m1 = fixtures::m1();
    SemanticResult r = evalLeast(m1, parseFormula("dia* p", kStar));
    CHECK(r.root() == setOf(3, {0, 1, 2}));
    CHECK(r.root() == reachOracle(std::get<KripkeModel>(m1), setOf(3, {2})));
}

TEST_CASE("evalLeast: dia* F is empty") {
    Model m1 = fixtures::m1();
    CHECK(evalLeast(m1, parseFormula("dia* F", kStar)).root() == Predicate::emptySet(3));
}

TEST_CASE("evalLeast: dia* p on MQ2 is the optimal stopping value") {
    Model mq2 = fixtures::mq2();
    SemanticResult r = evalLeast(mq2, parseFormula("dia* p", kQuant), {1e-9, 1000000, 10000});
    Predicate oracle = optStopOracle(std::get<ProbModel>(mq2), "p");
    CHECK(r.root().supDistance(oracle) < 1e-6);
    CHECK(r.root().value(0) == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(r.root().value(1) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("evalLeast: sigma[0.5] p on MQ reproduces (0.25, 0.5)") {
    Model mq = fixtures::mq();
    SemanticResult r = evalLeast(mq, parseFormula("sigma[0.5] p", kQuant));
    CHECK(r.root().value(0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(r.root().value(1) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.residual < 1e-9);
}

TEST_CASE("evalInitial: agrees with evalLeast and the oracles on fixtures") {
    Model m1 = fixtures::m1();
    CHECK(evalInitial(m1, parseFormula("dia* p", kStar)).root() == setOf(3, {0, 1, 2}));

    Model m2 = fixtures::m2();
    SemanticResult r = evalInitial(m2, parseFormula("<a;b>p", kPdl));
    CHECK(r.root() == setOf(3, {0}));
    CHECK(r.root() == pdlOracle(std::get<LabeledModel>(m2), parseFormula("<a;b>p", kPdl)));

    CHECK(evalInitial(m1, parseFormula("~dia* p", kStar)).root() == Predicate::emptySet(3));
}

TEST_CASE("evalLeast handles stratified negation, rejects it on prob models") {
    Model m1 = fixtures::m1();
    // ~p holds at s0, s1; dia*(~p) reaches them from s0 and s1 but not s2.
    SemanticResult r = evalLeast(m1, parseFormula("dia* ~p", kStar));
    CHECK(r.root() == setOf(3, {0, 1}));
    CHECK(evalLeast(m1, parseFormula("~dia* p", kStar)).root() == Predicate::emptySet(3));

    Model mq = fixtures::mq();
    FormulaPtr hand = fNeg(fAtom("p"));
    CHECK_THROWS_AS(evalLeast(mq, hand), UserError);
}

TEST_CASE("semantics equivalence: least = initial on random negation-free inputs") {
    Rng rng(7001);
    for (int trial = 0; trial < 80; ++trial) {
        FormulaGenOptions opts;
        opts.allowNeg = false;
        opts.allowFlat = false;
        if (trial % 3 == 0) {
            Model m = randomKripke(rng, 6, 3);
            FormulaPtr f = randomFormula(rng, kStar, opts);
            CHECK(evalLeast(m, f).table == evalInitial(m, f).table);
        } else if (trial % 3 == 1) {
            LabeledModel lm = randomLabeled(rng, 6, 3, 3);
            Model m = lm;
            FormulaPtr f = randomFormula(rng, LogicInstance::pdl(lm.labels), opts);
            CHECK(evalLeast(m, f).table == evalInitial(m, f).table);
        } else {
            Model m = randomKripke(rng, 6, 3);
            FormulaPtr f = randomFormula(rng, kCfl, opts);
            if (!validate(f, kCfl).empty()) continue;
            CHECK(evalLeast(m, f).table == evalInitial(m, f).table);
        }
    }
}

TEST_CASE("stratified negation and greatest fixpoints agree across evaluators") {
    Rng rng(7002);
    for (int trial = 0; trial < 60; ++trial) {
        Model m = randomKripke(rng, 6, 3);
        FormulaGenOptions opts;  // negation and flat allowed
        FormulaPtr f = trial % 2 == 0 ? randomFormula(rng, kStar, opts)
                                      : randomFormula(rng, kCfl, opts);
        if (!validate(f, trial % 2 == 0 ? kStar : kCfl).empty()) continue;
        SemanticResult least = evalLeast(m, f);
        SemanticResult initial = evalInitial(m, f);
        CHECK(least.table == initial.table);
        if (!(least.table == initial.table)) CAPTURE(printFormula(f));
    }
}

TEST_CASE("closed opposite-polarity nesting evaluates through strata") {
    FormulaPtr f = parseFormula("lfp{dia X \\/ dia gfp{box X}()}()", kCfl);
    Model m1 = fixtures::m1();
    // gfp{box X}() on M1 is the whole carrier (every state keeps stepping),
    // so one dia step reaches it from everywhere.
    Predicate viaLeast = evalLeast(m1, f).root();
    Predicate viaInitial = evalInitial(m1, f).root();
    CHECK(viaLeast == viaInitial);
    CHECK(viaLeast == setOf(3, {0, 1, 2}));

    Rng rng(7015);
    for (int trial = 0; trial < 30; ++trial) {
        Model m = randomKripke(rng, 6, 3);
        CHECK(evalLeast(m, f).root() == evalInitial(m, f).root());
        CHECK(evalInitial(m, f).root() == cflOracle(std::get<KripkeModel>(m), f));
    }
}

TEST_CASE("negated fixpoint argument to a scheme keeps both evaluators aligned") {
    // The argument ~lfp{dia X}() is a closed stratum below the outer loop.
    FormulaPtr f = parseFormula("lfp{v /\\ dia X \\/ p}(~lfp{dia X}()/v)", kCfl);
    Rng rng(7017);
    for (int trial = 0; trial < 30; ++trial) {
        Model m = randomKripke(rng, 5, 3);
        Predicate a = evalLeast(m, f).root();
        Predicate b = evalInitial(m, f).root();
        CHECK(a == b);
        CHECK(a == cflOracle(std::get<KripkeModel>(m), f));
    }
}

TEST_CASE("semantics equivalence: quantitative within 2x comparison tolerance") {
    Rng rng(7003);
    FormulaGenOptions opts;
    opts.allowNeg = false;
    for (int trial = 0; trial < 40; ++trial) {
        Model m = randomProb(rng, 6, 2);
        FormulaPtr f = randomFormula(rng, kQuant, opts);
        SemanticResult least = evalLeast(m, f);
        SemanticResult initial = evalInitial(m, f);
        CHECK(least.table.supDistance(initial.table) <= 2 * kInvarianceTol);
    }
}

TEST_CASE("least-solution minimality: any fixpoint dominates the least table") {
    Rng rng(7005);
    Model m1 = fixtures::m1();
    FormulaPtr f = parseFormula("dia* (p \\/ q)", kStar);
    SemanticResult least = evalLeast(m1, f);
    Closure closure = Closure::compute(f);

    // The evaluation operator, rebuilt over the closure for probing.
    auto op = [&](Table t) {
        Table next;
        for (std::size_t i = 0; i < closure.members().size(); ++i) {
            const FormulaPtr& mem = closure.members()[i];
            const std::string& key = closure.keys()[i];
            if (mem->kind == FormulaKind::Atom)
                next.put(key, atomPredicate(m1, mem->atom));
            else if (mem->kind == FormulaKind::Or)
                next.put(key, t.at(formulaKey(mem->children[0]))
                                  .join(t.at(formulaKey(mem->children[1]))));
            else {
                const GuardedTerm& g = closure.unfoldingOf(key);
                Predicate exit = t.at(formulaKey(g.children[0].leaf));
                Predicate cont = interpretModal(
                    m1, "dia", {t.at(formulaKey(g.children[1].children[0].leaf))});
                next.put(key, exit.join(cont));
            }
        }
        return next;
    };

    // Seed iteration from random post-fixpoints: wherever it stabilizes, the
    // least table is below it.
    for (int trial = 0; trial < 40; ++trial) {
        Table t = Table::bottom(LatticeContext::set(3), closure.keys());
        for (const auto& key : closure.keys()) {
            Predicate p = Predicate::emptySet(3);
            for (int s = 0; s < 3; ++s)
                if (rng() % 2) p.set(s);
            t.put(key, p);
        }
        for (int i = 0; i < 8; ++i) t = op(t);
        if (op(t) == t) CHECK(least.table.leq(t));
    }
}

TEST_CASE("fixpoint property: reapplying the operator is the identity") {
    Model m1 = fixtures::m1();
    FormulaPtr f = parseFormula("dia* (p \\/ q)", kStar);
    SemanticResult r = evalLeast(m1, f);
    // One more sweep through each member's definition must not move anything.
    const Closure& closure = r.closure;
    for (std::size_t i = 0; i < closure.members().size(); ++i) {
        const FormulaPtr& mem = closure.members()[i];
        if (mem->kind != FormulaKind::Fix) continue;
        const GuardedTerm& g = closure.unfoldingOf(closure.keys()[i]);
        Predicate exit = r.table.at(formulaKey(g.children[0].leaf));
        Predicate cont =
            interpretModal(m1, "dia", {r.table.at(formulaKey(g.children[1].children[0].leaf))});
        CHECK(exit.join(cont) == r.table.at(closure.keys()[i]));
    }
}

TEST_CASE("monotone liftings: args below give outputs below") {
    Rng rng(7007);
    for (int trial = 0; trial < 60; ++trial) {
        Model m = randomKripke(rng, 6, 2);
        int n = stateCount(m);
        Predicate lo = Predicate::emptySet(n);
        for (int s = 0; s < n; ++s)
            if (rng() % 2) lo.set(s);
        Predicate hi = lo;
        for (int s = 0; s < n; ++s)
            if (rng() % 2) hi.set(s);
        for (const char* modality : {"dia", "box"})
            CHECK(interpretModal(m, modality, {lo}).leq(interpretModal(m, modality, {hi})));

        Model mp = randomProb(rng, 6, 1);
        int np = stateCount(mp);
        std::vector<double> a(static_cast<std::size_t>(np)), b(static_cast<std::size_t>(np));
        for (int s = 0; s < np; ++s) {
            a[static_cast<std::size_t>(s)] = std::uniform_real_distribution<double>(0, 1)(rng);
            b[static_cast<std::size_t>(s)] = std::uniform_real_distribution<double>(
                a[static_cast<std::size_t>(s)], 1.0)(rng);
        }
        CHECK(interpretModal(mp, "dia", {Predicate::fromValues(a)})
                  .leq(interpretModal(mp, "dia", {Predicate::fromValues(b)})));
    }
}

TEST_CASE("semantic operators from negation-free formulas are monotone") {
    Rng rng(7009);
    FormulaGenOptions opts;
    opts.allowNeg = false;
    opts.allowFlat = false;
    for (int trial = 0; trial < 40; ++trial) {
        Model m = randomKripke(rng, 5, 3);
        FormulaPtr f = randomFormula(rng, kStar, opts);
        Closure closure = Closure::compute(f);
        int n = stateCount(m);

        // Apply one evaluation sweep at two comparable tables and compare.
        auto sweep = [&](const Table& t) {
            Table next;
            for (std::size_t i = 0; i < closure.members().size(); ++i) {
                const FormulaPtr& mem = closure.members()[i];
                std::function<Predicate(const GuardedTerm&)> goG = [&](const GuardedTerm& g) {
                    switch (g.kind) {
                    case GuardedTerm::Kind::Leaf: return t.at(formulaKey(g.leaf));
                    case GuardedTerm::Kind::Top: return Predicate::fullSet(n);
                    case GuardedTerm::Kind::Bot: return Predicate::emptySet(n);
                    case GuardedTerm::Kind::And: {
                        Predicate acc = Predicate::fullSet(n);
                        for (const auto& c : g.children) acc = acc.meet(goG(c));
                        return acc;
                    }
                    case GuardedTerm::Kind::Or: {
                        Predicate acc = Predicate::emptySet(n);
                        for (const auto& c : g.children) acc = acc.join(goG(c));
                        return acc;
                    }
                    case GuardedTerm::Kind::Modal:
                        return interpretModal(m, g.modality, {goG(g.children.front())});
                    default: throw InternalError("unexpected guarded node");
                    }
                };
                switch (mem->kind) {
                case FormulaKind::Top: next.put(closure.keys()[i], Predicate::fullSet(n)); break;
                case FormulaKind::Bot: next.put(closure.keys()[i], Predicate::emptySet(n)); break;
                case FormulaKind::Atom:
                    next.put(closure.keys()[i], atomPredicate(m, mem->atom));
                    break;
                case FormulaKind::And: {
                    Predicate acc = Predicate::fullSet(n);
                    for (const auto& c : mem->children) acc = acc.meet(t.at(formulaKey(c)));
                    next.put(closure.keys()[i], acc);
                    break;
                }
                case FormulaKind::Or: {
                    Predicate acc = Predicate::emptySet(n);
                    for (const auto& c : mem->children) acc = acc.join(t.at(formulaKey(c)));
                    next.put(closure.keys()[i], acc);
                    break;
                }
                case FormulaKind::Modal:
                    next.put(closure.keys()[i],
                             interpretModal(m, mem->modality, {t.at(formulaKey(mem->children[0]))}));
                    break;
                case FormulaKind::Fix:
                    next.put(closure.keys()[i], goG(closure.unfoldingOf(closure.keys()[i])));
                    break;
                default: throw InternalError("unexpected member");
                }
            }
            return next;
        };

        Table lo = Table::bottom(LatticeContext::set(n), closure.keys());
        Table hi = lo;
        for (const auto& key : closure.keys()) {
            Predicate p = Predicate::emptySet(n);
            Predicate q = Predicate::emptySet(n);
            for (int s = 0; s < n; ++s) {
                bool bit = rng() % 2;
                if (bit) p.set(s);
                if (bit || rng() % 2) q.set(s);
            }
            lo.put(key, p);
            hi.put(key, q);
        }
        CHECK(sweep(lo).leq(sweep(hi)));
    }
}

TEST_CASE("flat coherence: descending iteration equals the dual rewrite") {
    Rng rng(7011);
    for (int trial = 0; trial < 100; ++trial) {
        Model m = randomKripke(rng, 6, 3);
        SchemePtr s = randomGuardedScheme(rng, trial % 2, 2);
        std::vector<FormulaPtr> args;
        for (std::size_t i = 0; i < s->params.size(); ++i)
            args.push_back(randomFormula(rng, kCfl, {2, 0, false, false}));
        FormulaPtr flat = fFlat(s, args);
        EvalOptions descend;
        EvalOptions dual;
        dual.flatViaDual = true;
        CHECK(evalInitial(m, flat, descend).root() == evalInitial(m, flat, dual).root());
        // evalLeast stratifies through the dual rewrite; same answer.
        CHECK(evalLeast(m, flat).root() == evalInitial(m, flat, descend).root());
    }
}

TEST_CASE("checkInvariance: identity morphism is invariant") {
    Model m1 = fixtures::m1();
    CHECK(checkInvariance(m1, m1, identityMap(m1), parseFormula("dia* p", kStar)).ok);
}

TEST_CASE("checkInvariance: duplicate-state quotient stays invariant") {
    const char* two = R"({"kind":"kripke","states":["a","b"],
                          "props":{"p":["a","b"]},
                          "succ":{"a":["a"],"b":["b"]}})";
    Model m = loadModel(two);
    auto out = quotientByKernel(m, {{0, 1}});
    REQUIRE(out.ok);
    CHECK(checkInvariance(m, *out.quotient, out.projection, parseFormula("dia* p", kStar)).ok);
}

TEST_CASE("checkInvariance: random congruent quotients, random formulas") {
    Rng rng(7013);
    FormulaGenOptions opts;
    opts.allowNeg = false;
    opts.allowFlat = false;
    for (int trial = 0; trial < 60; ++trial) {
        ModelKind kind = trial % 3 == 0   ? ModelKind::Kripke
                         : trial % 3 == 1 ? ModelKind::Labeled
                                          : ModelKind::Prob;
        CongruentPair pair = randomCongruentPair(rng, kind);
        auto out = quotientByKernel(pair.model, pair.partition);
        REQUIRE(out.ok);
        FormulaPtr f;
        if (kind == ModelKind::Kripke) {
            f = randomFormula(rng, kStar, opts);
        } else if (kind == ModelKind::Labeled) {
            f = randomFormula(rng, LogicInstance::pdl(std::get<LabeledModel>(pair.model).labels),
                              opts);
        } else {
            f = randomFormula(rng, kQuant, opts);
        }
        InvarianceVerdict v = checkInvariance(pair.model, *out.quotient, out.projection, f);
        CHECK(v.ok);
        if (!v.ok) {
            CAPTURE(printFormula(f));
            CAPTURE(serializeModel(pair.model));
        }
    }
}

TEST_CASE("checkInvariance refuses non-morphisms") {
    Model m1 = fixtures::m1();
    StateMap f = identityMap(m1);
    f.map[1] = 2;
    CHECK_THROWS_AS(checkInvariance(m1, m1, f, parseFormula("p", kStar)), UserError);
}

TEST_CASE("distinct evaluations run concurrently") {
    Model m1 = fixtures::m1();
    Model mq2 = fixtures::mq2();
    FormulaPtr star = parseFormula("dia* (p \\/ q)", kStar);
    FormulaPtr sigma = parseFormula("sigma[0.5] p", kQuant);
    std::vector<std::future<Predicate>> futures;
    for (int i = 0; i < 16; ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
            return i % 2 == 0 ? evalLeast(m1, star).root() : evalInitial(mq2, sigma).root();
        }));
    }
    Predicate expectedStar = evalLeast(m1, star).root();
    Predicate expectedSigma = evalInitial(mq2, sigma).root();
    for (int i = 0; i < 16; ++i) {
        Predicate got = futures[static_cast<std::size_t>(i)].get();
        CHECK(got == (i % 2 == 0 ? expectedStar : expectedSigma));
    }
}
