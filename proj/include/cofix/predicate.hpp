#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cofix/errors.hpp"

namespace cofix {

enum class LatticeKind { Set, Value };

// An element of PX over a finite state range: either a subset of the states
// (dense bit vector) or a [0,1]-valued vector, index-aligned with the model's
// state list. Two predicates are comparable only when kind and width match.
class Predicate {
public:
    static Predicate emptySet(int width);
    static Predicate fullSet(int width);
    static Predicate zeros(int width);
    static Predicate ones(int width);
    static Predicate fromIndices(int width, const std::vector<int>& members);
    static Predicate fromValues(std::vector<double> values);

    LatticeKind kind() const { return kind_; }
    int width() const { return width_; }
    bool isSet() const { return kind_ == LatticeKind::Set; }

    bool test(int i) const;
    void set(int i, bool b = true);
    double value(int i) const;
    void setValue(int i, double v);
    int count() const;
    std::vector<int> members() const;
    std::vector<double> values() const;

    Predicate join(const Predicate& other) const;  // union / pointwise max
    Predicate meet(const Predicate& other) const;  // intersection / pointwise min
    Predicate complement() const;                  // set variant only

    bool leq(const Predicate& other) const;        // subset / pointwise <=
    bool operator==(const Predicate& other) const;
    bool operator!=(const Predicate& other) const { return !(*this == other); }

    // Sup-norm distance; for sets, 0 if equal and 1 otherwise.
    double supDistance(const Predicate& other) const;

    // First index where this exceeds `other` (used for monotonicity
    // diagnostics), or -1 if this <= other everywhere.
    int firstDecrease(const Predicate& other) const;

    // sum_i coeffs[i] * parts[i], value variant; coefficients in [0,1] with
    // sum at most 1 (a hair of slack for parsed decimals).
    static Predicate convexCombine(const std::vector<double>& coeffs,
                                   const std::vector<Predicate>& parts);

    std::string toString(const std::vector<std::string>& stateNames = {}) const;

private:
    Predicate(LatticeKind kind, int width);
    void checkComparable(const Predicate& other) const;
    void maskTail();

    LatticeKind kind_;
    int width_;
    std::vector<std::uint64_t> bits_;
    std::vector<double> vals_;
};

// Variant tag + state count for one model's predicate lattice. epsCmp is the
// comparison tolerance used by convergence tests on value predicates; the
// order itself is exact.
struct LatticeContext {
    LatticeKind kind = LatticeKind::Set;
    int stateCount = 0;
    double epsCmp = 0.0;

    static LatticeContext set(int states) { return {LatticeKind::Set, states, 0.0}; }
    static LatticeContext quantitative(int states, double eps = 0.0) {
        return {LatticeKind::Value, states, eps};
    }

    Predicate bottom() const;
    Predicate top() const;
    bool operator==(const LatticeContext&) const = default;
};

} // namespace cofix
