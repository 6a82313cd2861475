#include "cofix/generate.hpp"

#include <algorithm>
#include <cmath>

namespace cofix {

namespace {

int pick(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double pickReal(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return pickReal(rng, 0.0, 1.0) < p; }

// Coefficients and weights are rounded so they survive print/parse cycles
// and textual model round trips without noise.
double roundWeight(Rng& rng, double lo, double hi) {
    return std::round(pickReal(rng, lo, hi) * 1000.0) / 1000.0;
}

std::vector<std::string> stateNames(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

const char* kPropNames[] = {"p", "q", "r", "t1", "t2"};
const char* kLabelNames[] = {"a", "b", "c"};

std::map<std::string, Predicate> randomProps(Rng& rng, int n, int numProps) {
    std::map<std::string, Predicate> props;
    for (int i = 0; i < numProps; ++i) {
        Predicate v = Predicate::emptySet(n);
        for (int s = 0; s < n; ++s)
            if (chance(rng, 0.4)) v.set(s);
        props.emplace(kPropNames[i], v);
    }
    return props;
}

Predicate randomSubset(Rng& rng, int n, double density) {
    Predicate out = Predicate::emptySet(n);
    for (int s = 0; s < n; ++s)
        if (chance(rng, density)) out.set(s);
    return out;
}

} // namespace

KripkeModel randomKripke(Rng& rng, int maxStates, int numProps) {
    KripkeModel m;
    int n = pick(rng, 1, maxStates);
    m.states = stateNames("s", n);
    m.props = randomProps(rng, n, numProps);
    for (int s = 0; s < n; ++s) m.succ.push_back(randomSubset(rng, n, 0.35));
    return m;
}

LabeledModel randomLabeled(Rng& rng, int maxStates, int numLabels, int numProps) {
    LabeledModel m;
    int n = pick(rng, 1, maxStates);
    m.states = stateNames("t", n);
    m.props = randomProps(rng, n, numProps);
    int labels = pick(rng, 1, numLabels);
    for (int l = 0; l < labels; ++l) m.labels.push_back(kLabelNames[l]);
    for (int l = 0; l < labels; ++l) {
        std::vector<Predicate> succ;
        for (int s = 0; s < n; ++s) succ.push_back(randomSubset(rng, n, 0.3));
        m.succ.push_back(std::move(succ));
    }
    return m;
}

ProbModel randomProb(Rng& rng, int maxStates, int numPayouts) {
    ProbModel m;
    int n = pick(rng, 1, maxStates);
    m.states = stateNames("x", n);
    for (int i = 0; i < numPayouts; ++i) m.payoutLabels.push_back(kPropNames[i]);
    for (const auto& label : m.payoutLabels) {
        std::vector<double> payout(static_cast<std::size_t>(n), 0.0);
        for (int s = 0; s < n; ++s) payout[static_cast<std::size_t>(s)] = roundWeight(rng, 0.0, 1.0);
        m.payout.emplace(label, std::move(payout));
    }
    m.step.assign(static_cast<std::size_t>(n), {});
    for (int s = 0; s < n; ++s) {
        int support = pick(rng, 0, std::min(3, n));
        if (support == 0) continue;
        // Occasionally commit the full mass; mostly leave a failure deficit.
        double mass = chance(rng, 0.25) ? 1.0 : roundWeight(rng, 0.05, 0.95);
        std::vector<int> targets;
        for (int k = 0; k < support; ++k) targets.push_back(pick(rng, 0, n - 1));
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
        std::vector<double> parts(targets.size());
        double total = 0.0;
        for (auto& part : parts) {
            part = pickReal(rng, 0.1, 1.0);
            total += part;
        }
        double used = 0.0;
        for (std::size_t i = 0; i + 1 < targets.size(); ++i) {
            double w = std::round(mass * parts[i] / total * 1000.0) / 1000.0;
            m.step[static_cast<std::size_t>(s)].emplace_back(targets[i], w);
            used += w;
        }
        double last = mass - used;
        if (last > 0.0)
            m.step[static_cast<std::size_t>(s)].emplace_back(targets.back(), last);
    }
    return m;
}

Model randomModel(Rng& rng, ModelKind kind) {
    switch (kind) {
    case ModelKind::Kripke: return randomKripke(rng);
    case ModelKind::Labeled: return randomLabeled(rng);
    case ModelKind::Prob: return randomProb(rng);
    }
    throw InternalError("unreachable model kind");
}

Program randomProgram(Rng& rng, int maxOperators, int numAtomics) {
    int budget = pick(rng, 0, maxOperators);
    // Grown bottom-up so the operator count stays within budget even after
    // canonicalization collapses parts.
    std::function<Program(int)> gen = [&](int ops) -> Program {
        if (ops <= 0) {
            if (chance(rng, 0.1)) return Program::eps();
            return Program::atomic(kLabelNames[pick(rng, 0, numAtomics - 1)]);
        }
        switch (pick(rng, 0, 2)) {
        case 0: {
            int left = pick(rng, 0, ops - 1);
            return Program::makeUnion({gen(left), gen(ops - 1 - left)});
        }
        case 1: {
            int left = pick(rng, 0, ops - 1);
            return Program::makeSeq({gen(left), gen(ops - 1 - left)});
        }
        default: return Program::makeStar(gen(ops - 1));
        }
    };
    return gen(budget);
}

namespace {

struct FormulaGen {
    Rng& rng;
    const LogicInstance& instance;
    FormulaGenOptions opts;
    int fixBudget;

    FormulaPtr atom() {
        if (instance.id == LogicId::Quant) return fAtom(kPropNames[pick(rng, 0, 1)]);
        return fAtom(kPropNames[pick(rng, 0, 2)]);
    }

    FormulaPtr leaf() {
        int r = pick(rng, 0, 9);
        if (r == 0) return fTop();
        if (r == 1) return fBot();
        return atom();
    }

    FormulaPtr gen(int depth) {
        if (depth <= 0) return leaf();
        int r = pick(rng, 0, 9);
        if (r <= 2) return leaf();
        if (r <= 4) {
            auto mk = chance(rng, 0.5) ? fAnd : fOr;
            return mk({gen(depth - 1), gen(depth - 1)});
        }
        if (r == 5 && opts.allowNeg && instance.id != LogicId::Quant)
            return fNeg(gen(depth - 1));
        if (r == 6 && instance.id != LogicId::Pdl) {
            if (instance.id == LogicId::Quant) return fModal("dia", gen(depth - 1));
            return fModal(chance(rng, 0.5) ? "dia" : "box", gen(depth - 1));
        }
        if (instance.id == LogicId::Quant && r == 7) {
            double c1 = roundWeight(rng, 0.0, 0.6);
            double c2 = std::min(1.0 - c1, roundWeight(rng, 0.0, 0.6));
            return fConvex({c1, c2}, {gen(depth - 1), gen(depth - 1)});
        }
        return genFix(depth);
    }

    FormulaPtr genFix(int depth) {
        if (fixBudget <= 0) return leaf();
        --fixBudget;
        switch (instance.id) {
        case LogicId::DiamondStar:
            return fDiamondStar(gen(depth - 1));
        case LogicId::Pdl:
            return fProgramDiamond(randomProgram(rng, 6, static_cast<int>(instance.programAlphabet.size())),
                                   gen(depth - 1));
        case LogicId::Quant:
            if (chance(rng, 0.5)) return fDiamondStar(gen(depth - 1));
            return fSigmaQ(roundWeight(rng, 0.0, 1.0), gen(depth - 1));
        case LogicId::Cfl: {
            int params = pick(rng, 0, 2);
            SchemePtr scheme = randomGuardedScheme(rng, params, 2);
            std::vector<FormulaPtr> args;
            for (int i = 0; i < params; ++i) args.push_back(gen(std::min(depth - 1, 2)));
            bool flat = opts.allowFlat && chance(rng, 0.3);
            return flat ? fFlat(std::move(scheme), std::move(args))
                        : fSharp(std::move(scheme), std::move(args));
        }
        }
        throw InternalError("unreachable logic id");
    }
};

struct SchemeGen {
    Rng& rng;
    std::vector<std::string> params;

    SchemeTerm var() {
        SchemeTerm t;
        t.kind = SchemeTermKind::Var;
        t.var = params[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(params.size()) - 1))];
        return t;
    }

    SchemeTerm leaf(bool guarded) {
        int r = pick(rng, 0, 9);
        SchemeTerm t;
        if (guarded && r <= 4) {
            t.kind = SchemeTermKind::FixVar;
            return t;
        }
        if (!params.empty() && r <= 6) return var();
        if (r == 7) {
            t.kind = chance(rng, 0.5) ? SchemeTermKind::Top : SchemeTermKind::Bot;
            return t;
        }
        t.kind = SchemeTermKind::Leaf;
        t.leaf = fAtom(kPropNames[pick(rng, 0, 2)]);
        return t;
    }

    // guarded: a modality already sits above this position.
    SchemeTerm gen(int depth, bool guarded) {
        if (depth <= 0) return leaf(guarded);
        int r = pick(rng, 0, 9);
        if (r <= 2) return leaf(guarded);
        if (r <= 5) {
            SchemeTerm t;
            t.kind = chance(rng, 0.5) ? SchemeTermKind::And : SchemeTermKind::Or;
            t.children = {gen(depth - 1, guarded), gen(depth - 1, guarded)};
            return t;
        }
        SchemeTerm t;
        t.kind = SchemeTermKind::Modal;
        t.modality = chance(rng, 0.5) ? "dia" : "box";
        t.children = {gen(depth - 1, true)};
        return t;
    }
};

} // namespace

SchemePtr randomGuardedScheme(Rng& rng, int numParams, int maxDepth) {
    auto scheme = std::make_shared<FixpointScheme>();
    const char* names[] = {"v", "w", "u"};
    for (int i = 0; i < numParams; ++i) scheme->params.push_back(names[i]);
    SchemeGen gen{rng, scheme->params};
    // A modality over the fixpoint variable keeps the scheme's loop alive;
    // the rest of the body is random guarded structure.
    SchemeTerm fixVar;
    fixVar.kind = SchemeTermKind::FixVar;
    SchemeTerm modal;
    modal.kind = SchemeTermKind::Modal;
    modal.modality = chance(rng, 0.5) ? "dia" : "box";
    modal.children = {fixVar};
    SchemeTerm body;
    body.kind = chance(rng, 0.5) ? SchemeTermKind::Or : SchemeTermKind::And;
    body.children = {gen.gen(maxDepth, false), std::move(modal)};
    scheme->body = std::move(body);
    return scheme;
}

FormulaPtr randomFormula(Rng& rng, const LogicInstance& instance, const FormulaGenOptions& opts) {
    FormulaGen gen{rng, instance, opts, opts.maxFixNodes};
    return gen.gen(opts.maxDepth);
}

namespace {

std::vector<std::vector<int>> makeBlocks(Rng& rng, int quotientStates, int maxBlockSize,
                                         int& total) {
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(quotientStates));
    total = 0;
    for (int q = 0; q < quotientStates; ++q) {
        int size = pick(rng, 1, maxBlockSize);
        for (int i = 0; i < size; ++i) blocks[static_cast<std::size_t>(q)].push_back(total++);
    }
    return blocks;
}

Predicate liftProp(const Predicate& quotientVal, const std::vector<std::vector<int>>& blocks,
                   int total) {
    Predicate out = Predicate::emptySet(total);
    for (std::size_t q = 0; q < blocks.size(); ++q)
        if (quotientVal.test(static_cast<int>(q)))
            for (int s : blocks[q]) out.set(s);
    return out;
}

// A successor set hitting every block in `image` and nothing outside.
Predicate liftSucc(Rng& rng, const Predicate& image, const std::vector<std::vector<int>>& blocks,
                   int total) {
    Predicate out = Predicate::emptySet(total);
    for (int q : image.members()) {
        const auto& block = blocks[static_cast<std::size_t>(q)];
        bool any = false;
        for (int s : block)
            if (chance(rng, 0.5)) {
                out.set(s);
                any = true;
            }
        if (!any) out.set(block[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(block.size()) - 1))]);
    }
    return out;
}

} // namespace

CongruentPair randomCongruentPair(Rng& rng, ModelKind kind) {
    CongruentPair out;
    int total = 0;
    if (kind == ModelKind::Kripke) {
        KripkeModel q = randomKripke(rng, 4, 2);
        int nq = static_cast<int>(q.states.size());
        auto blocks = makeBlocks(rng, nq, 3, total);
        KripkeModel m;
        m.states = stateNames("s", total);
        for (const auto& [name, val] : q.props) m.props.emplace(name, liftProp(val, blocks, total));
        m.succ.assign(static_cast<std::size_t>(total), Predicate::emptySet(total));
        for (int b = 0; b < nq; ++b)
            for (int s : blocks[static_cast<std::size_t>(b)])
                m.succ[static_cast<std::size_t>(s)] =
                    liftSucc(rng, q.succ[static_cast<std::size_t>(b)], blocks, total);
        out.model = m;
        out.partition = blocks;
        return out;
    }
    if (kind == ModelKind::Labeled) {
        LabeledModel q = randomLabeled(rng, 4, 2, 2);
        int nq = static_cast<int>(q.states.size());
        auto blocks = makeBlocks(rng, nq, 3, total);
        LabeledModel m;
        m.states = stateNames("t", total);
        m.labels = q.labels;
        for (const auto& [name, val] : q.props) m.props.emplace(name, liftProp(val, blocks, total));
        m.succ.assign(q.labels.size(),
                      std::vector<Predicate>(static_cast<std::size_t>(total), Predicate::emptySet(total)));
        for (std::size_t l = 0; l < q.labels.size(); ++l)
            for (int b = 0; b < nq; ++b)
                for (int s : blocks[static_cast<std::size_t>(b)])
                    m.succ[l][static_cast<std::size_t>(s)] =
                        liftSucc(rng, q.succ[l][static_cast<std::size_t>(b)], blocks, total);
        out.model = m;
        out.partition = blocks;
        return out;
    }

    ProbModel q = randomProb(rng, 4, 1);
    int nq = static_cast<int>(q.states.size());
    auto blocks = makeBlocks(rng, nq, 3, total);
    ProbModel m;
    m.states = stateNames("x", total);
    m.payoutLabels = q.payoutLabels;
    for (const auto& [label, vals] : q.payout) {
        std::vector<double> lifted(static_cast<std::size_t>(total), 0.0);
        for (int b = 0; b < nq; ++b)
            for (int s : blocks[static_cast<std::size_t>(b)])
                lifted[static_cast<std::size_t>(s)] = vals[static_cast<std::size_t>(b)];
        m.payout.emplace(label, std::move(lifted));
    }
    m.step.assign(static_cast<std::size_t>(total), {});
    for (int b = 0; b < nq; ++b)
        for (int s : blocks[static_cast<std::size_t>(b)]) {
            // Split each quotient weight across the target block, last member
            // taking the exact remainder.
            for (const auto& [qt, w] : q.step[static_cast<std::size_t>(b)]) {
                const auto& targetBlock = blocks[static_cast<std::size_t>(qt)];
                int k = static_cast<int>(targetBlock.size());
                std::vector<double> parts(static_cast<std::size_t>(k));
                double totalParts = 0.0;
                for (auto& part : parts) {
                    part = pickReal(rng, 0.1, 1.0);
                    totalParts += part;
                }
                double used = 0.0;
                for (int i = 0; i + 1 < k; ++i) {
                    double share = w * parts[static_cast<std::size_t>(i)] / totalParts;
                    m.step[static_cast<std::size_t>(s)].emplace_back(targetBlock[static_cast<std::size_t>(i)], share);
                    used += share;
                }
                double last = w - used;
                if (last > 0.0)
                    m.step[static_cast<std::size_t>(s)].emplace_back(targetBlock[static_cast<std::size_t>(k - 1)], last);
            }
        }
    out.model = m;
    out.partition = blocks;
    return out;
}

} // namespace cofix
