#include "cofix/predicate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace cofix {

namespace {
constexpr int kWordBits = 64;
int wordCount(int width) { return (width + kWordBits - 1) / kWordBits; }
} // namespace

Predicate::Predicate(LatticeKind kind, int width) : kind_(kind), width_(width) {
    if (width < 0) throw UserError("predicate width must be non-negative");
    if (kind == LatticeKind::Set)
        bits_.assign(wordCount(width), 0);
    else
        vals_.assign(width, 0.0);
}

Predicate Predicate::emptySet(int width) { return Predicate(LatticeKind::Set, width); }

Predicate Predicate::fullSet(int width) {
    Predicate p(LatticeKind::Set, width);
    std::fill(p.bits_.begin(), p.bits_.end(), ~std::uint64_t{0});
    p.maskTail();
    return p;
}

Predicate Predicate::zeros(int width) { return Predicate(LatticeKind::Value, width); }

Predicate Predicate::ones(int width) {
    Predicate p(LatticeKind::Value, width);
    std::fill(p.vals_.begin(), p.vals_.end(), 1.0);
    return p;
}

Predicate Predicate::fromIndices(int width, const std::vector<int>& members) {
    Predicate p(LatticeKind::Set, width);
    for (int i : members) p.set(i);
    return p;
}

Predicate Predicate::fromValues(std::vector<double> values) {
    Predicate p(LatticeKind::Value, static_cast<int>(values.size()));
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw UserError("value predicate entry " + std::to_string(v) + " outside [0,1]");
    p.vals_ = std::move(values);
    return p;
}

void Predicate::maskTail() {
    int rem = width_ % kWordBits;
    if (rem != 0 && !bits_.empty()) bits_.back() &= (std::uint64_t{1} << rem) - 1;
}

bool Predicate::test(int i) const {
    if (i < 0 || i >= width_) throw InternalError("predicate index out of range");
    if (!isSet()) throw UserError("test on value predicate");
    return (bits_[i / kWordBits] >> (i % kWordBits)) & 1;
}

void Predicate::set(int i, bool b) {
    if (i < 0 || i >= width_) throw InternalError("predicate index out of range");
    if (!isSet()) throw UserError("set on value predicate");
    std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (b)
        bits_[i / kWordBits] |= mask;
    else
        bits_[i / kWordBits] &= ~mask;
}

double Predicate::value(int i) const {
    if (i < 0 || i >= width_) throw InternalError("predicate index out of range");
    if (isSet()) return test(i) ? 1.0 : 0.0;
    return vals_[i];
}

void Predicate::setValue(int i, double v) {
    if (i < 0 || i >= width_) throw InternalError("predicate index out of range");
    if (isSet()) throw UserError("setValue on set predicate");
    if (!(v >= 0.0 && v <= 1.0)) throw UserError("predicate value outside [0,1]");
    vals_[i] = v;
}

int Predicate::count() const {
    if (!isSet()) throw UserError("count on value predicate");
    int n = 0;
    for (std::uint64_t w : bits_) n += std::popcount(w);
    return n;
}

std::vector<int> Predicate::members() const {
    std::vector<int> out;
    for (int i = 0; i < width_; ++i)
        if (test(i)) out.push_back(i);
    return out;
}

std::vector<double> Predicate::values() const {
    std::vector<double> out(width_);
    for (int i = 0; i < width_; ++i) out[i] = value(i);
    return out;
}

void Predicate::checkComparable(const Predicate& other) const {
    if (kind_ != other.kind_) throw UserError("predicate variant mismatch");
    if (width_ != other.width_) throw UserError("predicate width mismatch");
}

Predicate Predicate::join(const Predicate& other) const {
    checkComparable(other);
    Predicate out = *this;
    if (isSet()) {
        for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] |= other.bits_[i];
    } else {
        for (int i = 0; i < width_; ++i) out.vals_[i] = std::max(vals_[i], other.vals_[i]);
    }
    return out;
}

Predicate Predicate::meet(const Predicate& other) const {
    checkComparable(other);
    Predicate out = *this;
    if (isSet()) {
        for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] &= other.bits_[i];
    } else {
        for (int i = 0; i < width_; ++i) out.vals_[i] = std::min(vals_[i], other.vals_[i]);
    }
    return out;
}

Predicate Predicate::complement() const {
    if (!isSet()) throw UserError("complement is only defined on set predicates");
    Predicate out = *this;
    for (auto& w : out.bits_) w = ~w;
    out.maskTail();
    return out;
}

bool Predicate::leq(const Predicate& other) const {
    checkComparable(other);
    if (isSet()) {
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i] & ~other.bits_[i]) return false;
        return true;
    }
    for (int i = 0; i < width_; ++i)
        if (vals_[i] > other.vals_[i]) return false;
    return true;
}

bool Predicate::operator==(const Predicate& other) const {
    if (kind_ != other.kind_ || width_ != other.width_) return false;
    return isSet() ? bits_ == other.bits_ : vals_ == other.vals_;
}

double Predicate::supDistance(const Predicate& other) const {
    checkComparable(other);
    double d = 0.0;
    for (int i = 0; i < width_; ++i) d = std::max(d, std::fabs(value(i) - other.value(i)));
    return d;
}

int Predicate::firstDecrease(const Predicate& other) const {
    checkComparable(other);
    for (int i = 0; i < width_; ++i)
        if (value(i) > other.value(i)) return i;
    return -1;
}

Predicate Predicate::convexCombine(const std::vector<double>& coeffs,
                                   const std::vector<Predicate>& parts) {
    if (coeffs.size() != parts.size() || parts.empty())
        throw UserError("subconvex combination needs matching, non-empty coefficient list");
    double total = 0.0;
    for (double c : coeffs) {
        if (!(c >= 0.0 && c <= 1.0))
            throw UserError("subconvex coefficient " + std::to_string(c) + " outside [0,1]");
        total += c;
    }
    if (total > 1.0 + 1e-9) throw UserError("subconvex coefficients sum to more than 1");
    int width = parts.front().width();
    Predicate out = Predicate::zeros(width);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].isSet()) throw UserError("subconvex combination on set predicate");
        if (parts[k].width() != width) throw UserError("predicate width mismatch");
        for (int i = 0; i < width; ++i)
            out.vals_[i] += coeffs[k] * parts[k].vals_[i];
    }
    for (double& v : out.vals_) v = std::clamp(v, 0.0, 1.0);
    return out;
}

std::string Predicate::toString(const std::vector<std::string>& stateNames) const {
    std::ostringstream os;
    if (isSet()) {
        os << '{';
        bool first = true;
        for (int i : members()) {
            if (!first) os << ',';
            first = false;
            if (i < static_cast<int>(stateNames.size()))
                os << stateNames[i];
            else
                os << 's' << i;
        }
        os << '}';
    } else {
        os << '(';
        for (int i = 0; i < width_; ++i) {
            if (i) os << ", ";
            os << vals_[i];
        }
        os << ')';
    }
    return os.str();
}

Predicate LatticeContext::bottom() const {
    return kind == LatticeKind::Set ? Predicate::emptySet(stateCount)
                                    : Predicate::zeros(stateCount);
}

Predicate LatticeContext::top() const {
    return kind == LatticeKind::Set ? Predicate::fullSet(stateCount)
                                    : Predicate::ones(stateCount);
}

} // namespace cofix
