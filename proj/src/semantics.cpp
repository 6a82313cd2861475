#include "cofix/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cofix/printer.hpp"
#include "cofix/schemes.hpp"

namespace cofix {

GuardedTerm unfold(const Formula& f) {
    if (f.kind != FormulaKind::Fix) throw UserError("unfold expects a fixpoint-headed formula");
    auto self = std::make_shared<const Formula>(f);
    const FixHead& head = *f.fix;
    switch (head.kind) {
    case FixKind::DiamondStar: {
        // dia* a -> a \/ dia(dia* a)
        return GuardedTerm::mkOr({GuardedTerm::mkLeaf(f.children.front()),
                                  GuardedTerm::mkModal("dia", {GuardedTerm::mkLeaf(self)})});
    }
    case FixKind::SigmaQ: {
        // sigma[q] a -> q*a + (1-q)*dia(sigma[q] a)
        return GuardedTerm::mkConvex(
            {head.q, 1.0 - head.q},
            {GuardedTerm::mkLeaf(f.children.front()),
             GuardedTerm::mkModal("dia", {GuardedTerm::mkLeaf(self)})});
    }
    case FixKind::ProgramDiamond: {
        // <alpha> a -> \/_i <pi_i><alpha_i> a, plus the exit leaf a iff
        // g(alpha) carries the eps branch.
        NormalForm nf = normalForm(*head.program);
        std::vector<GuardedTerm> parts;
        for (const auto& [atom, tail] : nf.summands)
            parts.push_back(GuardedTerm::mkModal(
                atom, {GuardedTerm::mkLeaf(fProgramDiamond(tail, f.children.front()))}));
        if (nf.epsFlag) parts.push_back(GuardedTerm::mkLeaf(f.children.front()));
        return GuardedTerm::mkOr(std::move(parts));
    }
    case FixKind::Sharp:
    case FixKind::Flat:
        return substitute(*head.scheme, f.children, self);
    }
    throw InternalError("unreachable fixpoint kind");
}

Closure Closure::compute(const FormulaPtr& root, int cap) {
    Closure cl;
    cl.root_ = root;
    std::deque<FormulaPtr> queue;
    auto add = [&](const FormulaPtr& f) {
        std::string key = formulaKey(f);
        if (cl.index_.count(key)) return;
        if (static_cast<int>(cl.members_.size()) >= cap)
            throw UserError("closure cap of " + std::to_string(cap) +
                            " exceeded while adding '" + key +
                            "' (non-regular scheme or missing canonicalization)");
        cl.index_.emplace(key, cl.members_.size());
        cl.members_.push_back(f);
        cl.keys_.push_back(std::move(key));
        queue.push_back(f);
    };
    add(root);
    while (!queue.empty()) {
        FormulaPtr f = queue.front();
        queue.pop_front();
        for (const auto& c : f->children) add(c);
        if (f->kind == FormulaKind::Fix) {
            std::string key = formulaKey(f);
            GuardedTerm gt = unfold(*f);
            std::vector<FormulaPtr> leaves;
            collectLeaves(gt, leaves);
            for (const auto& leaf : leaves) add(leaf);
            cl.unfoldings_.emplace(std::move(key), std::move(gt));
        }
    }
    return cl;
}

const GuardedTerm& Closure::unfoldingOf(const std::string& key) const {
    auto it = unfoldings_.find(key);
    if (it == unfoldings_.end()) throw InternalError("no unfolding cached for '" + key + "'");
    return it->second;
}

Predicate interpretModal(const Model& model, const std::string& modality,
                         const std::vector<Predicate>& args) {
    if (args.size() != 1) throw UserError("modalities are unary");
    const Predicate& arg = args.front();
    int n = stateCount(model);
    if (arg.width() != n) throw UserError("predicate width does not match the model");

    if (const auto* k = std::get_if<KripkeModel>(&model)) {
        if (arg.kind() != LatticeKind::Set) throw UserError("set predicate expected");
        Predicate out = Predicate::emptySet(n);
        if (modality == "dia") {
            for (int x = 0; x < n; ++x)
                if (k->succ[static_cast<std::size_t>(x)].meet(arg).count() > 0) out.set(x);
            return out;
        }
        if (modality == "box") {
            for (int x = 0; x < n; ++x)
                if (k->succ[static_cast<std::size_t>(x)].leq(arg)) out.set(x);
            return out;
        }
        throw UserError("unknown modality '" + modality + "' on a kripke model");
    }

    if (const auto* l = std::get_if<LabeledModel>(&model)) {
        if (arg.kind() != LatticeKind::Set) throw UserError("set predicate expected");
        bool box = modality.size() > 2 && modality.front() == '[' && modality.back() == ']';
        std::string label = box ? modality.substr(1, modality.size() - 2) : modality;
        auto it = std::find(l->labels.begin(), l->labels.end(), label);
        if (it == l->labels.end())
            throw UserError("unknown modality '" + modality + "' on a labeled model");
        const auto& succ = l->succ[static_cast<std::size_t>(it - l->labels.begin())];
        Predicate out = Predicate::emptySet(n);
        for (int x = 0; x < n; ++x) {
            if (box ? succ[static_cast<std::size_t>(x)].leq(arg)
                    : succ[static_cast<std::size_t>(x)].meet(arg).count() > 0)
                out.set(x);
        }
        return out;
    }

    const auto& p = std::get<ProbModel>(model);
    if (modality != "dia") throw UserError("unknown modality '" + modality + "' on a prob model");
    if (arg.kind() != LatticeKind::Value) throw UserError("value predicate expected");
    Predicate out = Predicate::zeros(n);
    for (int x = 0; x < n; ++x) {
        double e = 0.0;
        for (const auto& [y, w] : p.step[static_cast<std::size_t>(x)]) e += w * arg.value(y);
        out.setValue(x, std::min(e, 1.0));
    }
    return out;
}

const Predicate& SemanticResult::at(const FormulaPtr& f) const { return table.at(formulaKey(f)); }

namespace {

bool isFlatHead(const Formula& f) {
    return f.kind == FormulaKind::Fix && f.fix->kind == FixKind::Flat;
}

// Stratified recursion never goes deeper than the polarity-switch depth of
// the input syntax; this guard turns a would-be runaway into a diagnosis.
constexpr int kMaxStrataDepth = 64;

// ---- least-solution evaluation -------------------------------------------

class LeastEvaluator {
public:
    LeastEvaluator(const Model& model, const EvalOptions& opts)
        : model_(model), ctx_(latticeContextOf(model)), opts_(opts) {}

    SemanticResult run(const FormulaPtr& root) {
        Closure closure = Closure::compute(root, opts_.closureCap);

        // Stratify: negated and greatest-fixpoint members are constants
        // computed by recursive runs.
        std::unordered_map<std::string, Predicate> constants;
        for (std::size_t i = 0; i < closure.members().size(); ++i) {
            const FormulaPtr& m = closure.members()[i];
            const std::string& key = closure.keys()[i];
            if (m->kind == FormulaKind::Neg) {
                constants.emplace(key, stratumValue(m->children.front()).complement());
            } else if (isFlatHead(*m)) {
                // bot_gamma(args) = ~ sharp_{gamma-dual}(~args); the schemes
                // with greatest fixpoints live in the cfl instance.
                FormulaPtr rewritten = dualRewrite(*m, LogicInstance::cfl());
                constants.emplace(key, stratumValue(rewritten->children.front()).complement());
            }
        }

        auto op = [&](const Table& t) {
            Table next;
            for (std::size_t i = 0; i < closure.members().size(); ++i) {
                const std::string& key = closure.keys()[i];
                auto cit = constants.find(key);
                next.put(key, cit != constants.end()
                                  ? cit->second
                                  : evalMember(*closure.members()[i], key, closure, t));
            }
            return next;
        };

        SemanticResult out;
        if (ctx_.kind == LatticeKind::Set) {
            FiniteFixpoint fp = lfpFinite(op, ctx_, closure.keys());
            out.table = std::move(fp.table);
            out.iterations = fp.iterations;
        } else {
            ApproxFixpoint fp = lfpApprox(op, ctx_, closure.keys(), opts_.tol, opts_.maxIter);
            out.table = std::move(fp.table);
            out.iterations = fp.iterations;
            out.residual = fp.residual;
        }
        out.closure = std::move(closure);
        return out;
    }

private:
    const Model& model_;
    LatticeContext ctx_;
    EvalOptions opts_;
    std::unordered_map<std::string, Predicate> strata_;
    int depth_ = 0;

    // Root value of a recursively evaluated stratum, memoized per run.
    Predicate stratumValue(const FormulaPtr& f) {
        if (ctx_.kind != LatticeKind::Set)
            throw UserError("negation and greatest fixpoints need a set-based model");
        std::string key = formulaKey(f);
        auto it = strata_.find(key);
        if (it != strata_.end()) return it->second;
        if (++depth_ > kMaxStrataDepth) throw InternalError("stratified recursion too deep");
        Predicate value = run(f).root();
        --depth_;
        strata_.emplace(std::move(key), value);
        return strata_.at(formulaKey(f));
    }

    Predicate evalMember(const Formula& m, const std::string& key, const Closure& closure,
                         const Table& t) {
        switch (m.kind) {
        case FormulaKind::Top: return ctx_.top();
        case FormulaKind::Bot: return ctx_.bottom();
        case FormulaKind::Atom: return atomPredicate(model_, m.atom);
        case FormulaKind::And: {
            Predicate acc = ctx_.top();
            for (const auto& c : m.children) acc = acc.meet(t.at(formulaKey(c)));
            return acc;
        }
        case FormulaKind::Or: {
            Predicate acc = ctx_.bottom();
            for (const auto& c : m.children) acc = acc.join(t.at(formulaKey(c)));
            return acc;
        }
        case FormulaKind::Convex: {
            std::vector<Predicate> parts;
            for (const auto& c : m.children) parts.push_back(t.at(formulaKey(c)));
            return Predicate::convexCombine(m.coeffs, parts);
        }
        case FormulaKind::Modal:
            return interpretModal(model_, m.modality, {t.at(formulaKey(m.children.front()))});
        case FormulaKind::Fix:
            return evalGuarded(closure.unfoldingOf(key), t);
        case FormulaKind::Neg:
            throw InternalError("negation should have been stratified");
        }
        throw InternalError("unreachable formula kind");
    }

    Predicate evalGuarded(const GuardedTerm& g, const Table& t) {
        using K = GuardedTerm::Kind;
        switch (g.kind) {
        case K::Leaf: return t.at(formulaKey(g.leaf));
        case K::Top: return ctx_.top();
        case K::Bot: return ctx_.bottom();
        case K::And: {
            Predicate acc = ctx_.top();
            for (const auto& c : g.children) acc = acc.meet(evalGuarded(c, t));
            return acc;
        }
        case K::Or: {
            Predicate acc = ctx_.bottom();
            for (const auto& c : g.children) acc = acc.join(evalGuarded(c, t));
            return acc;
        }
        case K::Convex: {
            std::vector<Predicate> parts;
            for (const auto& c : g.children) parts.push_back(evalGuarded(c, t));
            return Predicate::convexCombine(g.coeffs, parts);
        }
        case K::Modal: {
            std::vector<Predicate> parts;
            for (const auto& c : g.children) parts.push_back(evalGuarded(c, t));
            return interpretModal(model_, g.modality, parts);
        }
        }
        throw InternalError("unreachable guarded term kind");
    }
};

// ---- initial-algebra evaluation --------------------------------------------

class InitialEvaluator {
public:
    InitialEvaluator(const Model& model, const EvalOptions& opts)
        : model_(model), ctx_(latticeContextOf(model)), opts_(opts) {}

    Predicate fold(const FormulaPtr& f) {
        std::string key = formulaKey(f);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Predicate value = compute(*f);
        memo_.emplace(std::move(key), std::move(value));
        return memo_.at(formulaKey(f));
    }

    int iterations = 0;
    double residual = 0.0;

private:
    const Model& model_;
    LatticeContext ctx_;
    EvalOptions opts_;
    std::unordered_map<std::string, Predicate> memo_;
    int depth_ = 0;

    Predicate compute(const Formula& f) {
        switch (f.kind) {
        case FormulaKind::Top: return ctx_.top();
        case FormulaKind::Bot: return ctx_.bottom();
        case FormulaKind::Atom: return atomPredicate(model_, f.atom);
        case FormulaKind::And: {
            Predicate acc = ctx_.top();
            for (const auto& c : f.children) acc = acc.meet(fold(c));
            return acc;
        }
        case FormulaKind::Or: {
            Predicate acc = ctx_.bottom();
            for (const auto& c : f.children) acc = acc.join(fold(c));
            return acc;
        }
        case FormulaKind::Convex: {
            std::vector<Predicate> parts;
            for (const auto& c : f.children) parts.push_back(fold(c));
            return Predicate::convexCombine(f.coeffs, parts);
        }
        case FormulaKind::Neg: {
            if (ctx_.kind != LatticeKind::Set)
                throw UserError("negation needs a set-based model");
            return fold(f.children.front()).complement();
        }
        case FormulaKind::Modal:
            return interpretModal(model_, f.modality, {fold(f.children.front())});
        case FormulaKind::Fix:
            return evalFix(f);
        }
        throw InternalError("unreachable formula kind");
    }

    Predicate evalFix(const Formula& f) {
        bool nu = isFlatHead(f);
        if (nu && opts_.flatViaDual)
            return fold(dualRewrite(f, LogicInstance::cfl()));
        if (nu && ctx_.kind != LatticeKind::Set)
            throw UserError("greatest fixpoints need a set-based model");

        if (++depth_ > kMaxStrataDepth) throw InternalError("fixpoint nesting too deep");

        // The family of fixpoint formulas of the same polarity that the
        // unfoldings reach; their joint inner fixpoint is this node's value.
        std::vector<FormulaPtr> family;
        std::vector<std::string> keys;
        std::unordered_map<std::string, GuardedTerm> unfoldings;
        std::unordered_map<std::string, std::size_t> index;
        std::deque<FormulaPtr> queue;
        auto addMember = [&](const FormulaPtr& g) {
            std::string key = formulaKey(g);
            if (index.count(key)) return;
            if (static_cast<int>(family.size()) >= opts_.closureCap)
                throw UserError("fixpoint family cap exceeded at '" + key + "'");
            index.emplace(key, family.size());
            family.push_back(g);
            keys.push_back(std::move(key));
            queue.push_back(g);
        };
        auto selfPtr = std::make_shared<const Formula>(f);
        addMember(selfPtr);
        while (!queue.empty()) {
            FormulaPtr m = queue.front();
            queue.pop_front();
            GuardedTerm gt = unfold(*m);
            std::vector<FormulaPtr> leaves;
            collectLeaves(gt, leaves);
            for (const auto& leaf : leaves) scanForFamily(leaf, nu, addMember);
            unfoldings.emplace(formulaKey(m), std::move(gt));
        }

        auto op = [&](const Table& t) {
            Table next;
            for (std::size_t i = 0; i < family.size(); ++i)
                next.put(keys[i], evalGuarded(unfoldings.at(keys[i]), t, index));
            return next;
        };

        Table result;
        if (!nu && ctx_.kind == LatticeKind::Value) {
            ApproxFixpoint fp = lfpApprox(op, ctx_, keys, opts_.tol, opts_.maxIter);
            result = std::move(fp.table);
            iterations += fp.iterations;
            residual = std::max(residual, fp.residual);
        } else if (!nu) {
            FiniteFixpoint fp = lfpFinite(op, ctx_, keys);
            result = std::move(fp.table);
            iterations += fp.iterations;
        } else {
            result = descendingFixpoint(op, keys);
        }

        --depth_;
        // The joint fixpoint pins down every family member, not only f.
        for (std::size_t i = 0; i < family.size(); ++i)
            memo_.emplace(keys[i], result.at(keys[i]));
        return result.at(keys.front());
    }

    // Collect maximal Fix-headed subformulas of the same polarity into the
    // family; anything else is evaluated by the fold when the iteration
    // reads it.
    void scanForFamily(const FormulaPtr& f, bool nu, const std::function<void(const FormulaPtr&)>& add) {
        if (f->kind == FormulaKind::Fix) {
            if (isFlatHead(*f) == nu) add(f);
            return;  // opposite polarity: closed and independent, folded later
        }
        if (f->kind == FormulaKind::Neg) return;  // closed, folded later
        for (const auto& c : f->children) scanForFamily(c, nu, add);
    }

    // Greatest fixpoint by descending iteration from the top table.
    Table descendingFixpoint(const TableOperator& op, const std::vector<std::string>& keys) {
        Table cur = Table::top(ctx_, keys);
        const int bound = ctx_.stateCount * static_cast<int>(keys.size()) + 1;
        for (int applications = 1; applications <= bound; ++applications) {
            Table next = op(cur);
            if (auto bad = next.firstDecrease(cur))
                throw NotMonotoneError(bad->first, bad->second);
            iterations += 1;
            if (next == cur) return cur;
            cur = std::move(next);
        }
        throw InternalError("descending iteration exceeded its bound");
    }

    Predicate evalGuarded(const GuardedTerm& g, const Table& t,
                          const std::unordered_map<std::string, std::size_t>& familyIndex) {
        using K = GuardedTerm::Kind;
        switch (g.kind) {
        case K::Leaf: return evalLeafIn(g.leaf, t, familyIndex);
        case K::Top: return ctx_.top();
        case K::Bot: return ctx_.bottom();
        case K::And: {
            Predicate acc = ctx_.top();
            for (const auto& c : g.children) acc = acc.meet(evalGuarded(c, t, familyIndex));
            return acc;
        }
        case K::Or: {
            Predicate acc = ctx_.bottom();
            for (const auto& c : g.children) acc = acc.join(evalGuarded(c, t, familyIndex));
            return acc;
        }
        case K::Convex: {
            std::vector<Predicate> parts;
            for (const auto& c : g.children) parts.push_back(evalGuarded(c, t, familyIndex));
            return Predicate::convexCombine(g.coeffs, parts);
        }
        case K::Modal: {
            std::vector<Predicate> parts;
            for (const auto& c : g.children) parts.push_back(evalGuarded(c, t, familyIndex));
            return interpretModal(model_, g.modality, parts);
        }
        }
        throw InternalError("unreachable guarded term kind");
    }

    // A leaf formula evaluated against the current family table: family
    // members read the iterate, everything else folds compositionally.
    Predicate evalLeafIn(const FormulaPtr& f, const Table& t,
                         const std::unordered_map<std::string, std::size_t>& familyIndex) {
        std::string key = formulaKey(f);
        if (familyIndex.count(key)) return t.at(key);
        switch (f->kind) {
        case FormulaKind::And: {
            Predicate acc = ctx_.top();
            for (const auto& c : f->children) acc = acc.meet(evalLeafIn(c, t, familyIndex));
            return acc;
        }
        case FormulaKind::Or: {
            Predicate acc = ctx_.bottom();
            for (const auto& c : f->children) acc = acc.join(evalLeafIn(c, t, familyIndex));
            return acc;
        }
        case FormulaKind::Convex: {
            std::vector<Predicate> parts;
            for (const auto& c : f->children) parts.push_back(evalLeafIn(c, t, familyIndex));
            return Predicate::convexCombine(f->coeffs, parts);
        }
        case FormulaKind::Modal:
            return interpretModal(model_, f->modality,
                                  {evalLeafIn(f->children.front(), t, familyIndex)});
        default:
            // Atoms, constants, negations and off-family fixpoints are all
            // independent of the running iteration.
            return fold(f);
        }
    }
};

} // namespace

SemanticResult evalLeast(const Model& model, const FormulaPtr& root, const EvalOptions& opts) {
    if (!root) throw UserError("null formula");
    LeastEvaluator ev(model, opts);
    return ev.run(root);
}

SemanticResult evalInitial(const Model& model, const FormulaPtr& root, const EvalOptions& opts) {
    if (!root) throw UserError("null formula");
    InitialEvaluator ev(model, opts);
    ev.fold(root);
    // Assemble the result over the same closure the least-solution run uses,
    // so the two semantics can be compared key by key.
    SemanticResult out;
    out.closure = Closure::compute(root, opts.closureCap);
    for (std::size_t i = 0; i < out.closure.members().size(); ++i)
        out.table.put(out.closure.keys()[i], ev.fold(out.closure.members()[i]));
    out.iterations = ev.iterations;
    out.residual = ev.residual;
    return out;
}

InvarianceVerdict checkInvariance(const Model& source, const Model& target, const StateMap& f,
                                  const FormulaPtr& root, const EvalOptions& opts) {
    MorphismVerdict mv = checkMorphism(source, target, f);
    if (!mv.ok)
        throw UserError("the state map is not a coalgebra morphism (state index " +
                        std::to_string(mv.state) + ", " + mv.reason + ")");
    SemanticResult r1 = evalLeast(source, root, opts);
    SemanticResult r2 = evalLeast(target, root, opts);
    int n1 = stateCount(source);
    for (std::size_t i = 0; i < r1.closure.keys().size(); ++i) {
        const std::string& key = r1.closure.keys()[i];
        const Predicate& p1 = r1.table.at(key);
        const Predicate& p2 = r2.table.at(key);
        if (p1.kind() == LatticeKind::Set) {
            Predicate pull = f.preimage(p2, n1);
            if (p1 != pull) {
                for (int s = 0; s < n1; ++s)
                    if (p1.test(s) != pull.test(s)) return {false, key, s, 1.0};
            }
        } else {
            for (int s = 0; s < n1; ++s) {
                double d = std::fabs(p1.value(s) - p2.value(f.apply(s)));
                if (d > kInvarianceTol) return {false, key, s, d};
            }
        }
    }
    return {};
}

} // namespace cofix
