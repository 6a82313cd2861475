#include "cofix/fixpoint.hpp"

namespace cofix {

Table Table::bottom(const LatticeContext& ctx, const std::vector<std::string>& keys) {
    Table t;
    t.ctx_ = ctx;
    for (const auto& k : keys) t.put(k, ctx.bottom());
    return t;
}

Table Table::top(const LatticeContext& ctx, const std::vector<std::string>& keys) {
    Table t;
    t.ctx_ = ctx;
    for (const auto& k : keys) t.put(k, ctx.top());
    return t;
}

const Predicate& Table::at(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw InternalError("table has no key '" + key + "'");
    return values_[it->second];
}

void Table::put(const std::string& key, Predicate value) {
    auto it = index_.find(key);
    if (it != index_.end()) {
        values_[it->second] = std::move(value);
        return;
    }
    index_.emplace(key, keys_.size());
    keys_.push_back(key);
    values_.push_back(std::move(value));
}

void Table::checkSameKeys(const Table& other) const {
    if (keys_ != other.keys_) throw InternalError("table key sets differ");
}

bool Table::leq(const Table& other) const {
    checkSameKeys(other);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!values_[i].leq(other.values_[i])) return false;
    return true;
}

bool Table::operator==(const Table& other) const {
    if (keys_ != other.keys_) return false;
    return values_ == other.values_;
}

double Table::supDistance(const Table& other) const {
    checkSameKeys(other);
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        d = std::max(d, values_[i].supDistance(other.values_[i]));
    return d;
}

std::optional<std::pair<std::string, int>> Table::firstDecrease(const Table& other) const {
    checkSameKeys(other);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        int s = values_[i].firstDecrease(other.values_[i]);
        if (s >= 0) return std::make_pair(keys_[i], s);
    }
    return std::nullopt;
}

FiniteFixpoint lfpFinite(const TableOperator& op, const LatticeContext& ctx,
                         const std::vector<std::string>& keys) {
    if (ctx.kind != LatticeKind::Set)
        throw UserError("lfpFinite is restricted to the set variant");
    Table cur = Table::bottom(ctx, keys);
    const int bound = ctx.stateCount * static_cast<int>(keys.size()) + 1;
    for (int applications = 1; applications <= bound; ++applications) {
        Table next = op(cur);
        if (next.keys() != cur.keys()) throw InternalError("operator changed the key set");
        if (auto bad = cur.firstDecrease(next))
            throw NotMonotoneError(bad->first, bad->second);
        if (next == cur) return {cur, applications};
        cur = std::move(next);
    }
    throw InternalError("lfpFinite exceeded its iteration bound of " + std::to_string(bound) +
                        " (non-monotone or mis-keyed operator)");
}

ApproxFixpoint lfpApprox(const TableOperator& op, const LatticeContext& ctx,
                         const std::vector<std::string>& keys, double tol, int maxIter) {
    if (ctx.kind != LatticeKind::Value)
        throw UserError("lfpApprox is restricted to the value variant");
    if (!(tol > 0.0)) throw UserError("lfpApprox tolerance must be positive");
    Table cur = Table::bottom(ctx, keys);
    double residual = 0.0;
    for (int iter = 1; iter <= maxIter; ++iter) {
        Table next = op(cur);
        if (next.keys() != cur.keys()) throw InternalError("operator changed the key set");
        if (auto bad = cur.firstDecrease(next))
            throw NotMonotoneError(bad->first, bad->second);
        residual = next.supDistance(cur);
        if (residual < tol) return {next, iter, residual};
        cur = std::move(next);
    }
    throw ConvergenceError(cur, residual, maxIter);
}

} // namespace cofix
