#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cofix/predicate.hpp"

namespace cofix {

// A propositional expression over named leaves: the lattice layer shared by
// every logic instance. Not/Convex are legal only in the matching variant.
struct LatticeTerm {
    enum class Kind { Top, Bot, Leaf, And, Or, Not, Convex };

    Kind kind = Kind::Top;
    std::string leaf;                   // Leaf
    std::vector<LatticeTerm> children;  // And/Or/Not/Convex
    std::vector<double> coeffs;         // Convex, aligned with children

    static LatticeTerm top() { return {Kind::Top, {}, {}, {}}; }
    static LatticeTerm bot() { return {Kind::Bot, {}, {}, {}}; }
    static LatticeTerm mkLeaf(std::string name) { return {Kind::Leaf, std::move(name), {}, {}}; }
    static LatticeTerm mkAnd(std::vector<LatticeTerm> cs) { return {Kind::And, {}, std::move(cs), {}}; }
    static LatticeTerm mkOr(std::vector<LatticeTerm> cs) { return {Kind::Or, {}, std::move(cs), {}}; }
    static LatticeTerm mkNot(LatticeTerm c) { return {Kind::Not, {}, {std::move(c)}, {}}; }
    static LatticeTerm mkConvex(std::vector<double> cf, std::vector<LatticeTerm> cs) {
        return {Kind::Convex, {}, std::move(cs), std::move(cf)};
    }
};

using LeafEnv = std::map<std::string, Predicate>;

// Pointwise evaluation. Throws UserError on unbound leaves, Not over the
// quantitative variant, Convex over the set variant, or coefficient sum > 1.
Predicate evalLatticeTerm(const LatticeTerm& term, const LatticeContext& ctx, const LeafEnv& env);

} // namespace cofix
