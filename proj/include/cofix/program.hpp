#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cofix/errors.hpp"

namespace cofix {

// Test-free PDL program terms. User-facing programs never contain Empty; it
// exists for intermediate derivative results only. Union lists are sorted,
// deduplicated and flattened; Seq lists are flattened with eps units removed;
// star collapses on itself. Constructors canonicalize, so equal programs are
// structurally equal.
class Program {
public:
    enum class Kind { Atomic, Eps, Empty, Union, Seq, Star };

    static Program atomic(std::string name);
    static Program eps();
    static Program empty();
    static Program makeUnion(std::vector<Program> parts);
    static Program makeSeq(std::vector<Program> parts);
    static Program makeStar(Program inner);

    Kind kind() const { return kind_; }
    const std::string& atom() const { return atom_; }
    const std::vector<Program>& children() const { return children_; }
    bool isEmpty() const { return kind_ == Kind::Empty; }

    bool operator==(const Program& other) const;
    bool operator!=(const Program& other) const { return !(*this == other); }
    // Total structural order used for canonical sorting.
    std::strong_ordering operator<=>(const Program& other) const;

    // Atomic program names occurring in the term, sorted.
    std::set<std::string> alphabet() const;
    int operatorCount() const;

private:
    Program(Kind kind, std::string atom, std::vector<Program> children)
        : kind_(kind), atom_(std::move(atom)), children_(std::move(children)) {}

    Kind kind_;
    std::string atom_;
    std::vector<Program> children_;
};

// Identity on already-canonical trees; exposed for re-canonicalizing programs
// assembled by hand.
Program canonicalize(const Program& p);

// True iff the empty word is in the program's language.
bool nullable(const Program& p);

// Brzozowski derivative by one atomic step; output canonical, may be Empty.
Program derivative(const std::string& atom, const Program& p);

// g(alpha): sum of atomic-headed summands pi;alpha_i, plus an eps branch iff
// alpha is nullable. Summands with Empty tails are dropped.
struct NormalForm {
    std::vector<std::pair<std::string, Program>> summands;
    bool epsFlag = false;
};

NormalForm normalForm(const Program& p);

// All programs reachable from p by iterated canonical derivatives (p itself
// included, Empty excluded). Throws InternalError past the cap.
std::vector<Program> derivativeClosure(const Program& p, int cap = 10000);

} // namespace cofix
