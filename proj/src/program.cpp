#include "cofix/program.hpp"

#include <algorithm>

namespace cofix {

Program Program::atomic(std::string name) {
    if (name.empty()) throw UserError("atomic program needs a name");
    return Program(Kind::Atomic, std::move(name), {});
}

Program Program::eps() { return Program(Kind::Eps, {}, {}); }
Program Program::empty() { return Program(Kind::Empty, {}, {}); }

Program Program::makeUnion(std::vector<Program> parts) {
    std::vector<Program> flat;
    for (auto& p : parts) {
        if (p.kind_ == Kind::Union) {
            for (auto& c : p.children_) flat.push_back(std::move(c));
        } else if (p.kind_ != Kind::Empty) {
            flat.push_back(std::move(p));
        }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return empty();
    if (flat.size() == 1) return std::move(flat.front());
    return Program(Kind::Union, {}, std::move(flat));
}

Program Program::makeSeq(std::vector<Program> parts) {
    std::vector<Program> flat;
    for (auto& p : parts) {
        if (p.kind_ == Kind::Empty) return empty();
        if (p.kind_ == Kind::Seq) {
            for (auto& c : p.children_) flat.push_back(std::move(c));
        } else if (p.kind_ != Kind::Eps) {
            flat.push_back(std::move(p));
        }
    }
    if (flat.empty()) return eps();
    if (flat.size() == 1) return std::move(flat.front());
    return Program(Kind::Seq, {}, std::move(flat));
}

Program Program::makeStar(Program inner) {
    if (inner.kind_ == Kind::Empty || inner.kind_ == Kind::Eps) return eps();
    if (inner.kind_ == Kind::Star) return inner;
    return Program(Kind::Star, {}, {std::move(inner)});
}

bool Program::operator==(const Program& other) const {
    return kind_ == other.kind_ && atom_ == other.atom_ && children_ == other.children_;
}

std::strong_ordering Program::operator<=>(const Program& other) const {
    if (auto c = kind_ <=> other.kind_; c != 0) return c;
    if (auto c = atom_ <=> other.atom_; c != 0) return c;
    if (auto c = children_.size() <=> other.children_.size(); c != 0) return c;
    for (std::size_t i = 0; i < children_.size(); ++i)
        if (auto c = children_[i] <=> other.children_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

std::set<std::string> Program::alphabet() const {
    std::set<std::string> out;
    if (kind_ == Kind::Atomic) out.insert(atom_);
    for (const auto& c : children_) {
        auto sub = c.alphabet();
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

int Program::operatorCount() const {
    int n = (kind_ == Kind::Union || kind_ == Kind::Seq)
                ? static_cast<int>(children_.size()) - 1
                : (kind_ == Kind::Star ? 1 : 0);
    for (const auto& c : children_) n += c.operatorCount();
    return n;
}

Program canonicalize(const Program& p) {
    switch (p.kind()) {
    case Program::Kind::Atomic:
    case Program::Kind::Eps:
    case Program::Kind::Empty:
        return p;
    case Program::Kind::Union: {
        std::vector<Program> parts;
        for (const auto& c : p.children()) parts.push_back(canonicalize(c));
        return Program::makeUnion(std::move(parts));
    }
    case Program::Kind::Seq: {
        std::vector<Program> parts;
        for (const auto& c : p.children()) parts.push_back(canonicalize(c));
        return Program::makeSeq(std::move(parts));
    }
    case Program::Kind::Star:
        return Program::makeStar(canonicalize(p.children().front()));
    }
    throw InternalError("unreachable program kind");
}

bool nullable(const Program& p) {
    switch (p.kind()) {
    case Program::Kind::Atomic: return false;
    case Program::Kind::Eps: return true;
    case Program::Kind::Empty: return false;
    case Program::Kind::Star: return true;
    case Program::Kind::Union:
        return std::any_of(p.children().begin(), p.children().end(),
                           [](const Program& c) { return nullable(c); });
    case Program::Kind::Seq:
        return std::all_of(p.children().begin(), p.children().end(),
                           [](const Program& c) { return nullable(c); });
    }
    throw InternalError("unreachable program kind");
}

Program derivative(const std::string& atom, const Program& p) {
    switch (p.kind()) {
    case Program::Kind::Atomic:
        return p.atom() == atom ? Program::eps() : Program::empty();
    case Program::Kind::Eps:
    case Program::Kind::Empty:
        return Program::empty();
    case Program::Kind::Union: {
        std::vector<Program> parts;
        for (const auto& c : p.children()) parts.push_back(derivative(atom, c));
        return Program::makeUnion(std::move(parts));
    }
    case Program::Kind::Seq: {
        // d(a1;rest) = d(a1);rest  u  [a1 nullable] d(rest)
        const auto& cs = p.children();
        std::vector<Program> rest(cs.begin() + 1, cs.end());
        Program restProg = Program::makeSeq(rest);
        Program headPart = Program::makeSeq({derivative(atom, cs.front()), restProg});
        if (!nullable(cs.front())) return headPart;
        return Program::makeUnion({std::move(headPart), derivative(atom, restProg)});
    }
    case Program::Kind::Star:
        return Program::makeSeq({derivative(atom, p.children().front()), p});
    }
    throw InternalError("unreachable program kind");
}

NormalForm normalForm(const Program& p) {
    NormalForm nf;
    nf.epsFlag = nullable(p);
    for (const auto& atom : p.alphabet()) {
        Program d = derivative(atom, p);
        if (!d.isEmpty()) nf.summands.emplace_back(atom, std::move(d));
    }
    // alphabet() is sorted and derivatives are canonical, so summands are
    // already ordered and duplicate-free.
    return nf;
}

std::vector<Program> derivativeClosure(const Program& p, int cap) {
    std::vector<Program> found;
    std::vector<Program> work;
    auto push = [&](const Program& q) {
        if (q.isEmpty()) return;
        if (std::find(found.begin(), found.end(), q) != found.end()) return;
        found.push_back(q);
        work.push_back(q);
        if (static_cast<int>(found.size()) > cap)
            throw InternalError("derivative closure exceeded cap of " + std::to_string(cap));
    };
    push(canonicalize(p));
    auto sigma = p.alphabet();
    while (!work.empty()) {
        Program cur = work.back();
        work.pop_back();
        for (const auto& atom : sigma) push(derivative(atom, cur));
    }
    return found;
}

} // namespace cofix
