#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cofix/predicate.hpp"

namespace cofix {

// A closure-indexed map key -> Predicate, all of one lattice context.
// Keys keep their construction order; the order is pointwise.
class Table {
public:
    Table() = default;
    static Table bottom(const LatticeContext& ctx, const std::vector<std::string>& keys);
    static Table top(const LatticeContext& ctx, const std::vector<std::string>& keys);

    const LatticeContext& context() const { return ctx_; }
    const std::vector<std::string>& keys() const { return keys_; }
    bool has(const std::string& key) const { return index_.count(key) > 0; }
    const Predicate& at(const std::string& key) const;
    void put(const std::string& key, Predicate value);

    bool leq(const Table& other) const;
    bool operator==(const Table& other) const;
    bool operator!=(const Table& other) const { return !(*this == other); }
    double supDistance(const Table& other) const;

    // First coordinate where this exceeds other: (key, state), or nullopt.
    std::optional<std::pair<std::string, int>> firstDecrease(const Table& other) const;

private:
    LatticeContext ctx_;
    std::vector<std::string> keys_;
    std::vector<Predicate> values_;
    std::unordered_map<std::string, std::size_t> index_;
    void checkSameKeys(const Table& other) const;
};

using TableOperator = std::function<Table(const Table&)>;

struct FiniteFixpoint {
    Table table;
    int iterations = 0;
};

struct ApproxFixpoint {
    Table table;
    int iterations = 0;
    double residual = 0.0;
};

// Kleene iteration from the bottom table, set variant. Verifies the chain is
// ascending at every step (NotMonotoneError otherwise) and that the fixpoint
// is reached within stateCount*keyCount + 1 applications (InternalError
// otherwise: a non-monotone or mis-keyed operator).
FiniteFixpoint lfpFinite(const TableOperator& op, const LatticeContext& ctx,
                         const std::vector<std::string>& keys);

// Kleene iteration from the all-zeros table, value variant, stopping at the
// first iterate whose successive sup-norm residual is below tol.
constexpr double kDefaultTolerance = 1e-9;
constexpr int kDefaultMaxIterations = 1000000;

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(Table lastIterate, double residual, int iterations)
        : std::runtime_error("lfpApprox did not converge: residual " + std::to_string(residual) +
                             " after " + std::to_string(iterations) + " iterations"),
          lastIterate(std::move(lastIterate)),
          residual(residual),
          iterations(iterations) {}
    Table lastIterate;
    double residual;
    int iterations;
};

ApproxFixpoint lfpApprox(const TableOperator& op, const LatticeContext& ctx,
                         const std::vector<std::string>& keys,
                         double tol = kDefaultTolerance, int maxIter = kDefaultMaxIterations);

} // namespace cofix
