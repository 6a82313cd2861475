#include "cofix/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace cofix {

Predicate reachOracle(const KripkeModel& model, const Predicate& target) {
    int n = static_cast<int>(model.states.size());
    if (target.width() != n || target.kind() != LatticeKind::Set)
        throw UserError("reach oracle needs a set predicate over the model's states");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> queue;
    for (int x = 0; x < n; ++x)
        if (target.test(x)) {
            seen[static_cast<std::size_t>(x)] = 1;
            queue.push_back(x);
        }
    while (!queue.empty()) {
        int y = queue.front();
        queue.pop_front();
        for (int x = 0; x < n; ++x) {
            if (seen[static_cast<std::size_t>(x)]) continue;
            if (model.succ[static_cast<std::size_t>(x)].test(y)) {
                seen[static_cast<std::size_t>(x)] = 1;
                queue.push_back(x);
            }
        }
    }
    Predicate out = Predicate::emptySet(n);
    for (int x = 0; x < n; ++x)
        if (seen[static_cast<std::size_t>(x)]) out.set(x);
    return out;
}

namespace {

Relation composeRel(const Relation& a, const Relation& b) {
    Relation out(a.n);
    for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < a.n; ++y) {
            if (!a.get(x, y)) continue;
            for (int z = 0; z < a.n; ++z)
                if (b.get(y, z)) out.set(x, z);
        }
    return out;
}

Relation closureRel(const Relation& r) {
    // Reflexive-transitive closure, Warshall style.
    Relation out = r;
    for (int x = 0; x < out.n; ++x) out.set(x, x);
    for (int k = 0; k < out.n; ++k)
        for (int x = 0; x < out.n; ++x) {
            if (!out.get(x, k)) continue;
            for (int y = 0; y < out.n; ++y)
                if (out.get(k, y)) out.set(x, y);
        }
    return out;
}

} // namespace

Relation pdlRelation(const LabeledModel& model, const Program& program) {
    int n = static_cast<int>(model.states.size());
    switch (program.kind()) {
    case Program::Kind::Atomic: {
        auto it = std::find(model.labels.begin(), model.labels.end(), program.atom());
        if (it == model.labels.end()) throw UserError("unknown label '" + program.atom() + "'");
        const auto& succ = model.succ[static_cast<std::size_t>(it - model.labels.begin())];
        Relation out(n);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (succ[static_cast<std::size_t>(x)].test(y)) out.set(x, y);
        return out;
    }
    case Program::Kind::Eps: {
        Relation out(n);
        for (int x = 0; x < n; ++x) out.set(x, x);
        return out;
    }
    case Program::Kind::Empty:
        return Relation(n);
    case Program::Kind::Union: {
        Relation out(n);
        for (const auto& c : program.children()) {
            Relation part = pdlRelation(model, c);
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if (part.get(x, y)) out.set(x, y);
        }
        return out;
    }
    case Program::Kind::Seq: {
        Relation out = pdlRelation(model, program.children().front());
        for (std::size_t i = 1; i < program.children().size(); ++i)
            out = composeRel(out, pdlRelation(model, program.children()[i]));
        return out;
    }
    case Program::Kind::Star:
        return closureRel(pdlRelation(model, program.children().front()));
    }
    throw InternalError("unreachable program kind");
}

Predicate relationApply(const Relation& r, const Predicate& arg) {
    Predicate out = Predicate::emptySet(r.n);
    for (int x = 0; x < r.n; ++x)
        for (int y = 0; y < r.n; ++y)
            if (r.get(x, y) && arg.test(y)) {
                out.set(x);
                break;
            }
    return out;
}

namespace {

Predicate muModal(const KripkeModel& model, const std::string& modality, const Predicate& arg) {
    int n = static_cast<int>(model.states.size());
    Predicate out = Predicate::emptySet(n);
    for (int x = 0; x < n; ++x) {
        bool any = false, all = true;
        for (int y = 0; y < n; ++y) {
            if (!model.succ[static_cast<std::size_t>(x)].test(y)) continue;
            if (arg.test(y))
                any = true;
            else
                all = false;
        }
        if (modality == "dia" ? any : all) out.set(x);
    }
    if (modality != "dia" && modality != "box")
        throw UserError("unknown modality '" + modality + "'");
    return out;
}

Predicate muAtom(const KripkeModel& model, const std::string& name) {
    auto it = model.props.find(name);
    if (it != model.props.end()) return it->second;
    return Predicate::emptySet(static_cast<int>(model.states.size()));
}

Predicate muEval(const KripkeModel& model, const MuPtr& f,
                 std::map<std::string, Predicate>& env) {
    int n = static_cast<int>(model.states.size());
    switch (f->kind) {
    case MuFormula::Kind::Top: return Predicate::fullSet(n);
    case MuFormula::Kind::Bot: return Predicate::emptySet(n);
    case MuFormula::Kind::Atom: return muAtom(model, f->name);
    case MuFormula::Kind::Var: {
        auto it = env.find(f->name);
        if (it == env.end()) throw UserError("unbound variable '" + f->name + "'");
        return it->second;
    }
    case MuFormula::Kind::And: {
        Predicate acc = Predicate::fullSet(n);
        for (const auto& c : f->children) acc = acc.meet(muEval(model, c, env));
        return acc;
    }
    case MuFormula::Kind::Or: {
        Predicate acc = Predicate::emptySet(n);
        for (const auto& c : f->children) acc = acc.join(muEval(model, c, env));
        return acc;
    }
    case MuFormula::Kind::Neg: return muEval(model, f->children.front(), env).complement();
    case MuFormula::Kind::Modal: return muModal(model, f->modality, muEval(model, f->children.front(), env));
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu: {
        bool isMu = f->kind == MuFormula::Kind::Mu;
        Predicate cur = isMu ? Predicate::emptySet(n) : Predicate::fullSet(n);
        for (int round = 0; round <= n + 1; ++round) {
            auto saved = env.find(f->name);
            std::optional<Predicate> old;
            if (saved != env.end()) old = saved->second;
            env.insert_or_assign(f->name, cur);
            Predicate next = muEval(model, f->children.front(), env);
            if (old)
                env.insert_or_assign(f->name, *old);
            else
                env.erase(f->name);
            if (next == cur) return cur;
            cur = std::move(next);
        }
        throw InternalError("fixpoint iteration did not stabilize (non-monotone body?)");
    }
    }
    throw InternalError("unreachable mu formula kind");
}

} // namespace

Predicate muOracle(const KripkeModel& model, const MuPtr& formula,
                   const std::map<std::string, Predicate>& valuation) {
    std::map<std::string, Predicate> env = valuation;
    return muEval(model, formula, env);
}

namespace {

Predicate cflFormula(const KripkeModel& model, const Formula& f);

// Scheme semantics with a parametric valuation and the fixpoint value.
Predicate cflScheme(const KripkeModel& model, const SchemeTerm& t,
                    const std::map<std::string, Predicate>& p, const Predicate& xi) {
    int n = static_cast<int>(model.states.size());
    switch (t.kind) {
    case SchemeTermKind::Var: {
        auto it = p.find(t.var);
        if (it == p.end()) throw UserError("unbound parametric variable '" + t.var + "'");
        return it->second;
    }
    case SchemeTermKind::FixVar: return xi;
    case SchemeTermKind::Leaf: return cflFormula(model, *t.leaf);
    case SchemeTermKind::Top: return Predicate::fullSet(n);
    case SchemeTermKind::Bot: return Predicate::emptySet(n);
    case SchemeTermKind::And: {
        Predicate acc = Predicate::fullSet(n);
        for (const auto& c : t.children) acc = acc.meet(cflScheme(model, c, p, xi));
        return acc;
    }
    case SchemeTermKind::Or: {
        Predicate acc = Predicate::emptySet(n);
        for (const auto& c : t.children) acc = acc.join(cflScheme(model, c, p, xi));
        return acc;
    }
    case SchemeTermKind::Modal:
        return muModal(model, t.modality, cflScheme(model, t.children.front(), p, xi));
    case SchemeTermKind::Apply: {
        std::map<std::string, Predicate> inner;
        for (std::size_t i = 0; i < t.children.size(); ++i)
            inner.emplace(t.scheme->params[i], cflScheme(model, t.children[i], p, xi));
        bool isMu = !t.applyFlat;
        Predicate cur = isMu ? Predicate::emptySet(n) : Predicate::fullSet(n);
        for (int round = 0; round <= n + 1; ++round) {
            Predicate next = cflScheme(model, t.scheme->body, inner, cur);
            if (next == cur) return cur;
            cur = std::move(next);
        }
        throw InternalError("scheme fixpoint iteration did not stabilize");
    }
    }
    throw InternalError("unreachable scheme term kind");
}

Predicate cflFormula(const KripkeModel& model, const Formula& f) {
    int n = static_cast<int>(model.states.size());
    switch (f.kind) {
    case FormulaKind::Top: return Predicate::fullSet(n);
    case FormulaKind::Bot: return Predicate::emptySet(n);
    case FormulaKind::Atom: return muAtom(model, f.atom);
    case FormulaKind::And: {
        Predicate acc = Predicate::fullSet(n);
        for (const auto& c : f.children) acc = acc.meet(cflFormula(model, *c));
        return acc;
    }
    case FormulaKind::Or: {
        Predicate acc = Predicate::emptySet(n);
        for (const auto& c : f.children) acc = acc.join(cflFormula(model, *c));
        return acc;
    }
    case FormulaKind::Neg: return cflFormula(model, *f.children.front()).complement();
    case FormulaKind::Modal: return muModal(model, f.modality, cflFormula(model, *f.children.front()));
    case FormulaKind::Fix: {
        if (f.fix->kind != FixKind::Sharp && f.fix->kind != FixKind::Flat)
            throw UserError("the cfl oracle covers scheme applications only");
        std::map<std::string, Predicate> p;
        for (std::size_t i = 0; i < f.children.size(); ++i)
            p.emplace(f.fix->scheme->params[i], cflFormula(model, *f.children[i]));
        bool isMu = f.fix->kind == FixKind::Sharp;
        Predicate cur = isMu ? Predicate::emptySet(n) : Predicate::fullSet(n);
        for (int round = 0; round <= n + 1; ++round) {
            Predicate next = cflScheme(model, f.fix->scheme->body, p, cur);
            if (next == cur) return cur;
            cur = std::move(next);
        }
        throw InternalError("scheme fixpoint iteration did not stabilize");
    }
    case FormulaKind::Convex:
        throw UserError("subconvex sums are not part of the cfl instance");
    }
    throw InternalError("unreachable formula kind");
}

} // namespace

Predicate cflOracle(const KripkeModel& model, const FormulaPtr& root) {
    if (!root) throw UserError("null formula");
    return cflFormula(model, *root);
}

namespace {

// Gaussian elimination with partial pivoting; returns false on a (near)
// singular system.
bool solveLinear(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& out) {
    int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
        if (std::fabs(a[pivot][col]) < 1e-14) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (int row = col + 1; row < n; ++row) {
            double factor = a[row][col] / a[col][col];
            if (factor == 0.0) continue;
            for (int k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    out.assign(static_cast<std::size_t>(n), 0.0);
    for (int row = n - 1; row >= 0; --row) {
        double sum = b[row];
        for (int k = row + 1; k < n; ++k) sum -= a[row][k] * out[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(row)] = sum / a[row][row];
    }
    return true;
}

std::vector<double> payoutVector(const ProbModel& model, const std::string& atom) {
    auto it = model.payout.find(atom);
    if (it != model.payout.end()) return it->second;
    return std::vector<double>(model.states.size(), 0.0);
}

std::vector<std::vector<double>> stepMatrix(const ProbModel& model) {
    int n = static_cast<int>(model.states.size());
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int x = 0; x < n; ++x)
        for (const auto& [y, w] : model.step[static_cast<std::size_t>(x)])
            m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] += w;
    return m;
}

Predicate iterateAffine(const ProbModel& model, double q, const std::vector<double>& a) {
    int n = static_cast<int>(model.states.size());
    auto m = stepMatrix(model);
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int round = 0; round < 10000000; ++round) {
        std::vector<double> next(static_cast<std::size_t>(n), 0.0);
        double res = 0.0;
        for (int x = 0; x < n; ++x) {
            double e = 0.0;
            for (int y = 0; y < n; ++y) e += m[x][y] * v[static_cast<std::size_t>(y)];
            next[static_cast<std::size_t>(x)] = q * a[static_cast<std::size_t>(x)] + (1.0 - q) * e;
            res = std::max(res, std::fabs(next[static_cast<std::size_t>(x)] - v[static_cast<std::size_t>(x)]));
        }
        v = std::move(next);
        if (res < 1e-13) break;
    }
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    return Predicate::fromValues(v);
}

} // namespace

Predicate sigmaLinearOracle(const ProbModel& model, double q, const std::string& payoutAtom) {
    if (!(q >= 0.0 && q <= 1.0)) throw UserError("sigma probability outside [0,1]");
    int n = static_cast<int>(model.states.size());
    std::vector<double> a = payoutVector(model, payoutAtom);
    if (q == 0.0) return iterateAffine(model, q, a);

    auto m = stepMatrix(model);
    std::vector<std::vector<double>> sys(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y)
            sys[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                (x == y ? 1.0 : 0.0) - (1.0 - q) * m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        rhs[static_cast<std::size_t>(x)] = q * a[static_cast<std::size_t>(x)];
    }
    std::vector<double> v;
    if (!solveLinear(sys, rhs, v)) return iterateAffine(model, q, a);

    for (int x = 0; x < n; ++x) {
        double lhs = 0.0;
        for (int y = 0; y < n; ++y)
            lhs += sys[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] * v[static_cast<std::size_t>(y)];
        if (std::fabs(lhs - rhs[static_cast<std::size_t>(x)]) > 1e-12)
            throw InternalError("linear solve residual above 1e-12");
    }
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    return Predicate::fromValues(v);
}

namespace {

// Least value of a fixed stop/continue policy: stopped states pay out now,
// continue states that cannot reach a stopped state are worth 0, and the rest
// solve a nonsingular linear system.
std::vector<double> evaluatePolicy(const std::vector<char>& stop, const std::vector<double>& a,
                                   const std::vector<std::vector<double>>& m) {
    int n = static_cast<int>(a.size());
    std::vector<char> reaches = stop;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < n; ++x) {
            if (reaches[static_cast<std::size_t>(x)]) continue;
            for (int y = 0; y < n; ++y)
                if (m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] > 0.0 &&
                    reaches[static_cast<std::size_t>(y)]) {
                    reaches[static_cast<std::size_t>(x)] = 1;
                    changed = true;
                    break;
                }
        }
    }
    std::vector<int> live;  // continue states with a route to a stop state
    for (int x = 0; x < n; ++x)
        if (!stop[static_cast<std::size_t>(x)] && reaches[static_cast<std::size_t>(x)])
            live.push_back(x);

    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int x = 0; x < n; ++x)
        if (stop[static_cast<std::size_t>(x)]) v[static_cast<std::size_t>(x)] = a[static_cast<std::size_t>(x)];

    if (!live.empty()) {
        int k = static_cast<int>(live.size());
        std::vector<std::vector<double>> sys(static_cast<std::size_t>(k),
                                             std::vector<double>(static_cast<std::size_t>(k), 0.0));
        std::vector<double> rhs(static_cast<std::size_t>(k), 0.0);
        for (int i = 0; i < k; ++i) {
            int x = live[static_cast<std::size_t>(i)];
            for (int j = 0; j < k; ++j)
                sys[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    (i == j ? 1.0 : 0.0) -
                    m[static_cast<std::size_t>(x)][static_cast<std::size_t>(live[static_cast<std::size_t>(j)])];
            double b = 0.0;
            for (int y = 0; y < n; ++y)
                if (stop[static_cast<std::size_t>(y)])
                    b += m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] *
                         a[static_cast<std::size_t>(y)];
            rhs[static_cast<std::size_t>(i)] = b;
        }
        std::vector<double> sol;
        if (!solveLinear(sys, rhs, sol))
            throw InternalError("policy evaluation system is singular");
        for (int i = 0; i < k; ++i)
            v[static_cast<std::size_t>(live[static_cast<std::size_t>(i)])] =
                std::clamp(sol[static_cast<std::size_t>(i)], 0.0, 1.0);
    }
    return v;
}

} // namespace

Predicate diamondStarOracle(const KripkeModel& model, const FormulaPtr& root) {
    int n = static_cast<int>(model.states.size());
    const Formula& f = *root;
    switch (f.kind) {
    case FormulaKind::Top: return Predicate::fullSet(n);
    case FormulaKind::Bot: return Predicate::emptySet(n);
    case FormulaKind::Atom: return muAtom(model, f.atom);
    case FormulaKind::And: {
        Predicate acc = Predicate::fullSet(n);
        for (const auto& c : f.children) acc = acc.meet(diamondStarOracle(model, c));
        return acc;
    }
    case FormulaKind::Or: {
        Predicate acc = Predicate::emptySet(n);
        for (const auto& c : f.children) acc = acc.join(diamondStarOracle(model, c));
        return acc;
    }
    case FormulaKind::Neg: return diamondStarOracle(model, f.children.front()).complement();
    case FormulaKind::Modal:
        return muModal(model, f.modality, diamondStarOracle(model, f.children.front()));
    case FormulaKind::Fix:
        if (f.fix->kind == FixKind::DiamondStar)
            return reachOracle(model, diamondStarOracle(model, f.children.front()));
        throw UserError("the diamondstar oracle covers dia* only");
    case FormulaKind::Convex:
        break;
    }
    throw UserError("no diamondstar oracle for this formula shape");
}

Predicate pdlOracle(const LabeledModel& model, const FormulaPtr& root) {
    int n = static_cast<int>(model.states.size());
    const Formula& f = *root;
    switch (f.kind) {
    case FormulaKind::Top: return Predicate::fullSet(n);
    case FormulaKind::Bot: return Predicate::emptySet(n);
    case FormulaKind::Atom: {
        auto it = model.props.find(f.atom);
        return it != model.props.end() ? it->second : Predicate::emptySet(n);
    }
    case FormulaKind::And: {
        Predicate acc = Predicate::fullSet(n);
        for (const auto& c : f.children) acc = acc.meet(pdlOracle(model, c));
        return acc;
    }
    case FormulaKind::Or: {
        Predicate acc = Predicate::emptySet(n);
        for (const auto& c : f.children) acc = acc.join(pdlOracle(model, c));
        return acc;
    }
    case FormulaKind::Neg: return pdlOracle(model, f.children.front()).complement();
    case FormulaKind::Fix:
        if (f.fix->kind == FixKind::ProgramDiamond)
            return relationApply(pdlRelation(model, *f.fix->program),
                                 pdlOracle(model, f.children.front()));
        throw UserError("the pdl oracle covers <program> only");
    default:
        break;
    }
    throw UserError("no pdl oracle for this formula shape");
}

Predicate optStopOracle(const ProbModel& model, const std::string& payoutAtom) {
    int n = static_cast<int>(model.states.size());
    std::vector<double> a = payoutVector(model, payoutAtom);
    auto m = stepMatrix(model);
    std::vector<char> stop(static_cast<std::size_t>(n), 1);
    std::vector<double> v = evaluatePolicy(stop, a, m);
    for (int round = 0; round < 1 << 16; ++round) {
        bool changed = false;
        for (int x = 0; x < n; ++x) {
            double cont = 0.0;
            for (int y = 0; y < n; ++y)
                cont += m[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] *
                        v[static_cast<std::size_t>(y)];
            double best = std::max(a[static_cast<std::size_t>(x)], cont);
            if (best > v[static_cast<std::size_t>(x)] + 1e-12) {
                stop[static_cast<std::size_t>(x)] = a[static_cast<std::size_t>(x)] >= cont ? 1 : 0;
                changed = true;
            }
        }
        if (!changed) break;
        v = evaluatePolicy(stop, a, m);
    }
    for (double& x : v) x = std::clamp(x, 0.0, 1.0);
    return Predicate::fromValues(v);
}

} // namespace cofix
