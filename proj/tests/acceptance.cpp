// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "cofix/generate.hpp"
#include "cofix/oracles.hpp"
#include "cofix/parser.hpp"
#include "cofix/printer.hpp"
#include "cofix/run.hpp"
#include "cofix/schemes.hpp"
#include "cofix/semantics.hpp"

using namespace cofix;

namespace {

const LogicInstance kStar = LogicInstance::diamondStar();
const LogicInstance kQuant = LogicInstance::quant();
const LogicInstance kCfl = LogicInstance::cfl();

const char* kM1 = R"({"kind":"kripke","states":["s0","s1","s2"],
                      "props":{"p":["s2"],"q":["s1"]},
                      "succ":{"s0":["s1"],"s1":["s2"],"s2":["s2"]}})";
const char* kMQ = R"({"kind":"prob","states":["x","y"],"payoutLabels":["p"],
                      "payout":{"p":{"x":0.0,"y":1.0}},
                      "step":{"x":{"y":1.0},"y":{}}})";
const char* kMQ2 = R"({"kind":"prob","states":["u","w"],"payoutLabels":["p"],
                       "payout":{"p":{"u":0.0,"w":0.8}},
                       "step":{"u":{"u":0.5,"w":0.25},"w":{}}})";

int failures = 0;

void report(int number, const std::string& name, const std::string& detail) {
    if (detail.empty()) {
        std::printf("PASS  %d. %s\n", number, name.c_str());
    } else {
        std::printf("FAIL  %d. %s: %s\n", number, name.c_str(), detail.c_str());
        ++failures;
    }
}

FormulaGenOptions negationFree() {
    FormulaGenOptions opts;
    opts.allowNeg = false;
    opts.allowFlat = false;
    opts.maxFixNodes = 4;
    return opts;
}

// 1. evalLeast = evalInitial, exact set equality, 200 models, < 60 s.
std::string criterionEquivalence() {
    auto start = std::chrono::steady_clock::now();
    Rng rng(100);
    for (int trial = 0; trial < 200; ++trial) {
        Model model;
        FormulaPtr formula;
        if (trial % 3 == 0) {
            model = randomKripke(rng, 8, 3);
            formula = randomFormula(rng, kStar, negationFree());
        } else if (trial % 3 == 1) {
            LabeledModel lm = randomLabeled(rng, 8, 3, 3);
            model = lm;
            formula = randomFormula(rng, LogicInstance::pdl(lm.labels), negationFree());
        } else {
            model = randomKripke(rng, 8, 3);
            formula = randomFormula(rng, kCfl, negationFree());
        }
        SemanticResult least = evalLeast(model, formula);
        SemanticResult initial = evalInitial(model, formula);
        if (!(least.table == initial.table))
            return "trial " + std::to_string(trial) + ", formula " + printFormula(formula);
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= 60.0) return "took " + std::to_string(seconds) + " s (budget 60 s)";
    return "";
}

// 2. evalLeast(dia* phi) = reachOracle over the independent formula oracle.
std::string criterionDiamondStar() {
    Model m1 = loadModel(kM1);
    Predicate fixture = evalLeast(m1, parseFormula("dia* p", kStar)).root();
    if (fixture != Predicate::fromIndices(3, {0, 1, 2})) return "fixture M1 dia* p";

    Rng rng(200);
    for (int trial = 0; trial < 200; ++trial) {
        KripkeModel km = randomKripke(rng, 8, 3);
        FormulaPtr phi = randomFormula(rng, kStar, negationFree());
        Predicate expected = reachOracle(km, diamondStarOracle(km, phi));
        Predicate actual = evalLeast(km, fDiamondStar(phi)).root();
        if (actual != expected)
            return "trial " + std::to_string(trial) + ", formula dia* (" + printFormula(phi) + ")";
    }
    return "";
}

// 3. PDL against the relational oracle, 500 random programs; g(a*) text.
std::string criterionPdl() {
    if (runNormalize("a*")["normalForm"] != "a;a* + eps") return "g(a*) text";

    Rng rng(300);
    for (int trial = 0; trial < 500; ++trial) {
        LabeledModel lm = randomLabeled(rng, 6, 3, 2);
        Model model = lm;
        Program alpha = randomProgram(rng, 8, static_cast<int>(lm.labels.size()));
        FormulaPtr phi = randomFormula(rng, LogicInstance::pdl(lm.labels), negationFree());
        FormulaPtr full = fProgramDiamond(alpha, phi);

        Predicate expected =
            relationApply(pdlRelation(lm, alpha), pdlOracle(lm, phi));
        if (evalLeast(model, full).root() != expected)
            return "evaluation differs, trial " + std::to_string(trial) + ", " + printFormula(full);

        // g expansion is relationally equal to alpha.
        NormalForm nf = normalForm(alpha);
        std::vector<Program> parts;
        for (const auto& [atom, tail] : nf.summands)
            parts.push_back(Program::makeSeq({Program::atomic(atom), tail}));
        if (nf.epsFlag) parts.push_back(Program::eps());
        if (pdlRelation(lm, alpha).at != pdlRelation(lm, Program::makeUnion(parts)).at)
            return "normal form differs, trial " + std::to_string(trial) + ", " +
                   printProgram(alpha);
    }
    return "";
}

// 4. Invariance along generated congruent quotients.
std::string criterionInvariance() {
    Rng rng(400);
    for (int trial = 0; trial < 100; ++trial) {
        ModelKind kind = trial % 3 == 0   ? ModelKind::Kripke
                         : trial % 3 == 1 ? ModelKind::Labeled
                                          : ModelKind::Prob;
        CongruentPair pair = randomCongruentPair(rng, kind);
        auto out = quotientByKernel(pair.model, pair.partition);
        if (!out.ok) return "generated partition not congruent, trial " + std::to_string(trial);
        FormulaPtr formula;
        if (kind == ModelKind::Kripke)
            formula = randomFormula(rng, kStar, negationFree());
        else if (kind == ModelKind::Labeled)
            formula = randomFormula(
                rng, LogicInstance::pdl(std::get<LabeledModel>(pair.model).labels), negationFree());
        else
            formula = randomFormula(rng, kQuant, negationFree());
        InvarianceVerdict v = checkInvariance(pair.model, *out.quotient, out.projection, formula);
        if (!v.ok)
            return "trial " + std::to_string(trial) + ", formula " + printFormula(formula) +
                   ", state " + std::to_string(v.state) + ", diff " + std::to_string(v.discrepancy);
    }
    return "";
}

// 5. Quantitative: sigma_q against the linear solve, dia* against policy
//    iteration, fixtures pinned.
std::string criterionQuantitative() {
    Model mq = loadModel(kMQ);
    Predicate v = evalLeast(mq, parseFormula("sigma[0.5] p", kQuant)).root();
    if (std::fabs(v.value(0) - 0.25) > 1e-6 || std::fabs(v.value(1) - 0.5) > 1e-6)
        return "MQ sigma[0.5] fixture";

    Model mq2 = loadModel(kMQ2);
    Predicate w = evalLeast(mq2, parseFormula("dia* p", kQuant)).root();
    if (std::fabs(w.value(0) - 0.4) > 1e-6 || std::fabs(w.value(1) - 0.8) > 1e-6)
        return "MQ2 dia* fixture";

    Rng rng(500);
    for (int trial = 0; trial < 100; ++trial) {
        ProbModel pm = randomProb(rng, 10, 1);
        Model model = pm;
        for (double q : {0.1, 0.5, 0.9, 1.0}) {
            Predicate oracle = sigmaLinearOracle(pm, q, "p");
            Predicate actual = evalLeast(model, fSigmaQ(q, fAtom("p"))).root();
            if (actual.supDistance(oracle) > 1e-6)
                return "sigma, trial " + std::to_string(trial) + ", q " + std::to_string(q);
        }
        Predicate stopOracle = optStopOracle(pm, "p");
        Predicate stopActual = evalLeast(model, fDiamondStar(fAtom("p"))).root();
        if (stopActual.supDistance(stopOracle) > 1e-6)
            return "optimal stopping, trial " + std::to_string(trial);
    }
    return "";
}

// 6. CFL against the mutual-recursion oracle; translateMu reproduces the
//    printed schemes.
std::string criterionCfl() {
    const std::string single = "lfp{p \\/ dia X}()";
    // Canonical spelling of the hoisted nested-loop scheme pair.
    const std::string nested =
        "lfp{p /\\ (q /\\ dia lfp{q /\\ dia X \\/ r /\\ box v}(X/v) \\/ r /\\ box X)}()";

    if (printFormula(translateMu(parseMuFormula("mu X. p \\/ dia X"), kCfl)) != single)
        return "translateMu text, single loop";
    if (printFormula(translateMu(
            parseMuFormula("mu X. p /\\ mu Y. ((q /\\ dia Y) \\/ (r /\\ box X))"), kCfl)) != nested)
        return "translateMu text, nested loops";

    Rng rng(600);
    FormulaPtr fSingle = parseFormula(single, kCfl);
    FormulaPtr fNested = parseFormula(nested, kCfl);
    MuPtr muSingle = parseMuFormula("mu X. p \\/ dia X");
    MuPtr muNested = parseMuFormula("mu X. p /\\ mu Y. ((q /\\ dia Y) \\/ (r /\\ box X))");
    for (int trial = 0; trial < 100; ++trial) {
        KripkeModel km = randomKripke(rng, 6, 3);
        Model model = km;
        if (cflOracle(km, fSingle) != evalInitial(model, fSingle).root())
            return "single-loop disagreement";
        if (cflOracle(km, fNested) != evalInitial(model, fNested).root())
            return "nested-loop disagreement";
        if (muOracle(km, muSingle) != evalInitial(model, translateMu(muSingle, kCfl)).root())
            return "mu oracle, single loop";
        if (muOracle(km, muNested) != evalInitial(model, translateMu(muNested, kCfl)).root())
            return "mu oracle, nested loops";

        SchemePtr scheme = randomGuardedScheme(rng, trial % 3, 3);
        std::vector<FormulaPtr> args;
        for (std::size_t i = 0; i < scheme->params.size(); ++i)
            args.push_back(randomFormula(rng, kCfl, {2, 0, false, false}));
        FormulaPtr app = fSharp(scheme, args);
        if (cflOracle(km, app) != evalInitial(model, app).root())
            return "random scheme, trial " + std::to_string(trial) + ", " + printFormula(app);
    }
    return "";
}

// 7. Greatest fixpoints: dual rewrite equals descending iteration; nu X. dia X.
std::string criterionFlat() {
    Model m1 = loadModel(kM1);
    FormulaPtr nuDia = translateMu(parseMuFormula("nu X. dia X"), kCfl);
    if (evalInitial(m1, nuDia).root() != Predicate::fromIndices(3, {0, 1, 2}))
        return "nu X. dia X on M1";

    Rng rng(700);
    for (int trial = 0; trial < 100; ++trial) {
        Model model = randomKripke(rng, 6, 3);
        SchemePtr scheme = randomGuardedScheme(rng, trial % 2, 2);
        std::vector<FormulaPtr> args;
        for (std::size_t i = 0; i < scheme->params.size(); ++i)
            args.push_back(randomFormula(rng, kCfl, {2, 0, false, false}));
        FormulaPtr flat = fFlat(scheme, args);
        EvalOptions viaDual;
        viaDual.flatViaDual = true;
        if (evalInitial(model, flat).root() != evalInitial(model, flat, viaDual).root())
            return "trial " + std::to_string(trial) + ", " + printFormula(flat);
    }
    return "";
}

// 8. Engine hygiene: ascent checks armed throughout the corpus runs above;
//    here the bound and the parse/print round trips.
std::string criterionHygiene() {
    Rng rng(800);
    // lfpFinite within its bound on corpus inputs (the engine throws if the
    // bound or the ascent is violated).
    for (int trial = 0; trial < 100; ++trial) {
        Model model = randomKripke(rng, 8, 3);
        FormulaPtr f = randomFormula(rng, kStar, negationFree());
        SemanticResult r = evalLeast(model, f);
        int bound = stateCount(model) * static_cast<int>(r.closure.keys().size()) + 1;
        if (r.iterations > bound) return "iteration bound exceeded";
    }

    auto roundTrips = [&](const LogicInstance& instance, FormulaGenOptions opts) -> bool {
        for (int trial = 0; trial < 1000; ++trial) {
            FormulaPtr f = randomFormula(rng, instance, opts);
            if (!validate(f, instance).empty()) continue;
            if (!equal(f, parseFormula(printFormula(f), instance))) return false;
        }
        return true;
    };
    if (!roundTrips(kStar, {})) return "diamondstar round trip";
    if (!roundTrips(LogicInstance::pdl({"a", "b", "c"}), {})) return "pdl round trip";
    FormulaGenOptions quantOpts;
    quantOpts.allowNeg = false;
    if (!roundTrips(kQuant, quantOpts)) return "quant round trip";
    if (!roundTrips(kCfl, {})) return "cfl round trip";
    return "";
}

} // namespace

int main() {
    try {
        report(1, "semantics equivalence (least = initial, exact, < 60 s)", criterionEquivalence());
        report(2, "dia* matches the reachability oracle", criterionDiamondStar());
        report(3, "pdl matches the relational oracle; g(a*) = a;a* + eps", criterionPdl());
        report(4, "invariance along congruent quotients", criterionInvariance());
        report(5, "quantitative fixpoints match the exact solvers", criterionQuantitative());
        report(6, "cfl matches the mutual-recursion oracle; translateMu exact", criterionCfl());
        report(7, "greatest fixpoints: dual rewrite = descending iteration", criterionFlat());
        report(8, "engine hygiene: ascent, bounds, parse/print round trips", criterionHygiene());
    } catch (const std::exception& e) {
        std::printf("FAIL  acceptance suite aborted: %s\n", e.what());
        return 1;
    }
    if (failures == 0) {
        std::printf("acceptance: all 8 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", failures);
    return 1;
}
