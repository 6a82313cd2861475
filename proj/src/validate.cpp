#include <algorithm>
#include <set>

#include "cofix/formula.hpp"
#include "cofix/schemes.hpp"

namespace cofix {

namespace {

struct Validator {
    const LogicInstance& instance;
    std::vector<Diagnostic> diags;
    std::vector<int> path;

    void report(const std::string& msg) { diags.push_back({path, msg}); }

    void child(int i, auto&& body) {
        path.push_back(i);
        body();
        path.pop_back();
    }

    bool is(LogicId id) const { return instance.id == id; }

    void formula(const Formula& f) {
        switch (f.kind) {
        case FormulaKind::Top:
        case FormulaKind::Bot:
        case FormulaKind::Atom:
            return;
        case FormulaKind::And:
        case FormulaKind::Or:
            break;
        case FormulaKind::Neg:
            if (is(LogicId::Quant)) report("negation is not part of the quantitative instance");
            break;
        case FormulaKind::Convex: {
            if (!is(LogicId::Quant)) report("subconvex sums are only part of the quantitative instance");
            double total = 0.0;
            for (double c : f.coeffs) {
                if (!(c >= 0.0 && c <= 1.0)) report("subconvex coefficient outside [0,1]");
                total += c;
            }
            if (total > 1.0 + 1e-9) report("subconvex coefficients sum to more than 1");
            break;
        }
        case FormulaKind::Modal:
            if (is(LogicId::Pdl))
                report("pdl formulas use <program> modalities");
            else if (!instance.hasModality(f.modality))
                report("unknown modality '" + f.modality + "' in the " + logicIdName(instance.id) +
                       " instance");
            break;
        case FormulaKind::Fix:
            fixHead(f);
            break;
        }
        for (std::size_t i = 0; i < f.children.size(); ++i)
            child(static_cast<int>(i), [&] { formula(*f.children[i]); });
    }

    void fixHead(const Formula& f) {
        const FixHead& head = *f.fix;
        switch (head.kind) {
        case FixKind::DiamondStar:
            if (!is(LogicId::DiamondStar) && !is(LogicId::Quant))
                report("dia* is only part of the diamondstar and quantitative instances");
            return;
        case FixKind::SigmaQ:
            if (!is(LogicId::Quant)) report("sigma[q] is only part of the quantitative instance");
            if (!(head.q >= 0.0 && head.q <= 1.0)) report("sigma probability outside [0,1]");
            return;
        case FixKind::ProgramDiamond: {
            if (!is(LogicId::Pdl)) report("<program> modalities are only part of the pdl instance");
            if (programHasEmpty(*head.program)) report("programs may not contain the empty program");
            for (const auto& atom : head.program->alphabet())
                if (std::find(instance.programAlphabet.begin(), instance.programAlphabet.end(),
                              atom) == instance.programAlphabet.end())
                    report("unknown atomic program '" + atom + "'");
            return;
        }
        case FixKind::Sharp:
        case FixKind::Flat: {
            if (!is(LogicId::Cfl)) report("fixpoint schemes are only part of the cfl instance");
            if (!head.scheme) {
                report("application without a scheme");
                return;
            }
            bool flat = head.kind == FixKind::Flat;
            if (f.children.size() != head.scheme->params.size())
                report("application arity " + std::to_string(f.children.size()) +
                       " does not match the scheme's " +
                       std::to_string(head.scheme->params.size()) + " variables");
            scheme(*head.scheme, flat);
            std::map<std::string, Taint> env;
            for (const auto& p : head.scheme->params) env[p] = Taint{};
            taintWalk(head.scheme->body, env, flat);
            return;
        }
        }
    }

    // Alternation-freeness: a fixpoint variable may not flow, through nested
    // application arguments, into an application of the opposite polarity.
    struct Taint {
        bool mu = false;
        bool nu = false;
        Taint operator|(const Taint& o) const { return {mu || o.mu, nu || o.nu}; }
    };

    Taint taintWalk(const SchemeTerm& t, const std::map<std::string, Taint>& env, bool flat) {
        switch (t.kind) {
        case SchemeTermKind::Var: {
            auto it = env.find(t.var);
            return it == env.end() ? Taint{} : it->second;
        }
        case SchemeTermKind::FixVar:
            return flat ? Taint{false, true} : Taint{true, false};
        case SchemeTermKind::Leaf:
        case SchemeTermKind::Top:
        case SchemeTermKind::Bot:
            return {};
        case SchemeTermKind::And:
        case SchemeTermKind::Or:
        case SchemeTermKind::Modal: {
            Taint acc;
            for (const auto& c : t.children) acc = acc | taintWalk(c, env, flat);
            return acc;
        }
        case SchemeTermKind::Apply: {
            Taint acc;
            std::map<std::string, Taint> inner;
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                Taint arg = taintWalk(t.children[i], env, flat);
                if (i < t.scheme->params.size()) inner[t.scheme->params[i]] = arg;
                acc = acc | arg;
            }
            if (t.applyFlat ? acc.mu : acc.nu)
                report(std::string("alternation: a ") + (t.applyFlat ? "greatest" : "least") +
                       "-fixpoint application depends on a fixpoint variable of the opposite kind");
            // Walk the applied scheme's body to track the arguments further,
            // but do not leak its own fixpoint variable outward.
            taintWalk(t.scheme->body, inner, t.applyFlat);
            return acc;
        }
        }
        throw InternalError("unreachable scheme term kind");
    }

    static bool programHasEmpty(const Program& p) {
        if (p.isEmpty()) return true;
        return std::any_of(p.children().begin(), p.children().end(), programHasEmpty);
    }

    void scheme(const FixpointScheme& s, bool flat) {
        std::set<std::string> seen;
        for (const auto& v : s.params)
            if (!seen.insert(v).second) report("duplicate parametric variable '" + v + "'");
        auto guard = checkGuarded(s);
        if (!guard.ok) report("unguarded scheme: " + guard.reason);
        schemeTerm(s.body, s.params, flat);
    }

    void schemeTerm(const SchemeTerm& t, const std::vector<std::string>& params, bool flat) {
        switch (t.kind) {
        case SchemeTermKind::Var:
            if (std::find(params.begin(), params.end(), t.var) == params.end())
                report("unbound parametric variable '" + t.var + "'");
            return;
        case SchemeTermKind::FixVar:
        case SchemeTermKind::Top:
        case SchemeTermKind::Bot:
            return;
        case SchemeTermKind::Leaf:
            formula(*t.leaf);
            return;
        case SchemeTermKind::And:
        case SchemeTermKind::Or:
            for (std::size_t i = 0; i < t.children.size(); ++i)
                child(static_cast<int>(i), [&] { schemeTerm(t.children[i], params, flat); });
            return;
        case SchemeTermKind::Modal:
            if (!instance.hasModality(t.modality))
                report("unknown modality '" + t.modality + "'");
            else if (flat && instance.modalities.at(t.modality).dual.empty())
                report("modality '" + t.modality + "' used under a greatest fixpoint has no dual");
            if (t.children.size() != 1) report("modalities are unary");
            for (std::size_t i = 0; i < t.children.size(); ++i)
                child(static_cast<int>(i), [&] { schemeTerm(t.children[i], params, flat); });
            return;
        case SchemeTermKind::Apply: {
            if (!t.scheme) {
                report("application without a scheme");
                return;
            }
            if (t.children.size() != t.scheme->params.size())
                report("nested application arity does not match the scheme");
            scheme(*t.scheme, t.applyFlat);
            for (std::size_t i = 0; i < t.children.size(); ++i)
                child(static_cast<int>(i), [&] { schemeTerm(t.children[i], params, flat); });
            return;
        }
        }
    }
};

} // namespace

std::vector<Diagnostic> validate(const FormulaPtr& formula, const LogicInstance& instance) {
    if (!formula) return {{{}, "null formula"}};
    Validator v{instance, {}, {}};
    v.formula(*formula);
    return v.diags;
}

} // namespace cofix
