#include "cofix/lattice_term.hpp"

namespace cofix {

Predicate evalLatticeTerm(const LatticeTerm& term, const LatticeContext& ctx, const LeafEnv& env) {
    using K = LatticeTerm::Kind;
    switch (term.kind) {
    case K::Top: return ctx.top();
    case K::Bot: return ctx.bottom();
    case K::Leaf: {
        auto it = env.find(term.leaf);
        if (it == env.end()) throw UserError("unbound leaf '" + term.leaf + "'");
        return it->second;
    }
    case K::And: {
        Predicate acc = ctx.top();
        for (const auto& c : term.children) acc = acc.meet(evalLatticeTerm(c, ctx, env));
        return acc;
    }
    case K::Or: {
        Predicate acc = ctx.bottom();
        for (const auto& c : term.children) acc = acc.join(evalLatticeTerm(c, ctx, env));
        return acc;
    }
    case K::Not:
        if (ctx.kind != LatticeKind::Set)
            throw UserError("negation on quantitative predicate");
        if (term.children.size() != 1) throw InternalError("Not expects one child");
        return evalLatticeTerm(term.children.front(), ctx, env).complement();
    case K::Convex: {
        if (ctx.kind != LatticeKind::Value)
            throw UserError("subconvex combination on set predicate");
        std::vector<Predicate> parts;
        parts.reserve(term.children.size());
        for (const auto& c : term.children) parts.push_back(evalLatticeTerm(c, ctx, env));
        return Predicate::convexCombine(term.coeffs, parts);
    }
    }
    throw InternalError("unreachable lattice term kind");
}

} // namespace cofix
