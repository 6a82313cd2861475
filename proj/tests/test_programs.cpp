#include <doctest.h>

#include "cofix/generate.hpp"
#include "cofix/model.hpp"
#include "cofix/oracles.hpp"
#include "cofix/parser.hpp"
#include "cofix/printer.hpp"

#include "fixtures.hpp"

using namespace cofix;

namespace {

// Independent word-membership oracle by structural recursion; the derivative
// implementation is checked against it, never the other way around.
bool wordIn(const std::vector<std::string>& w, std::size_t lo, std::size_t hi, const Program& p) {
    switch (p.kind()) {
    case Program::Kind::Atomic: return hi - lo == 1 && w[lo] == p.atom();
    case Program::Kind::Eps: return lo == hi;
    case Program::Kind::Empty: return false;
    case Program::Kind::Union:
        for (const auto& c : p.children())
            if (wordIn(w, lo, hi, c)) return true;
        return false;
    case Program::Kind::Seq: {
        const auto& cs = p.children();
        std::vector<Program> rest(cs.begin() + 1, cs.end());
        Program restProg = Program::makeSeq(rest);
        for (std::size_t mid = lo; mid <= hi; ++mid)
            if (wordIn(w, lo, mid, cs.front()) && wordIn(w, mid, hi, restProg)) return true;
        return false;
    }
    case Program::Kind::Star: {
        if (lo == hi) return true;
        for (std::size_t mid = lo + 1; mid <= hi; ++mid)
            if (wordIn(w, lo, mid, p.children().front()) && wordIn(w, mid, hi, p)) return true;
        return false;
    }
    }
    return false;
}

bool wordIn(const std::vector<std::string>& w, const Program& p) {
    return wordIn(w, 0, w.size(), p);
}

std::vector<std::vector<std::string>> allWords(const std::vector<std::string>& sigma, int maxLen) {
    std::vector<std::vector<std::string>> out{{}};
    std::vector<std::vector<std::string>> frontier{{}};
    for (int len = 1; len <= maxLen; ++len) {
        std::vector<std::vector<std::string>> next;
        for (const auto& w : frontier)
            for (const auto& a : sigma) {
                auto w2 = w;
                w2.push_back(a);
                next.push_back(w2);
                out.push_back(w2);
            }
        frontier = std::move(next);
    }
    return out;
}

Program parseP(const std::string& text) { return parseProgram(text); }

} // namespace

TEST_CASE("canonicalize: ACI, units, star collapse") {
    CHECK(parseP("a+a") == parseP("a"));
    CHECK(parseP("(a+b)+a") == parseP("a+b"));
    CHECK(printProgram(parseP("(b+a)+a")) == "a+b");
    CHECK(parseP("eps;a") == parseP("a"));
    CHECK(parseP("a;eps") == parseP("a"));
    CHECK(parseP("eps*") == Program::eps());
    CHECK(parseP("a**") == parseP("a*"));
    CHECK(Program::makeSeq({Program::empty(), Program::atomic("a")}) == Program::empty());
    CHECK(Program::makeUnion({Program::empty(), Program::atomic("a")}) == Program::atomic("a"));
    CHECK(Program::makeStar(Program::empty()) == Program::eps());
}

TEST_CASE("canonicalize is idempotent and semantics-preserving") {
    Rng rng(31);
    Model m2 = fixtures::m2();
    const auto& lm = std::get<LabeledModel>(m2);
    for (int trial = 0; trial < 200; ++trial) {
        Program p = randomProgram(rng, 8, 2);
        CHECK(canonicalize(p) == p);
        // The relational oracle agrees before and after re-canonicalization.
        Relation r1 = pdlRelation(lm, p);
        Relation r2 = pdlRelation(lm, canonicalize(p));
        CHECK(r1.at == r2.at);
    }
}

TEST_CASE("nullable") {
    CHECK(nullable(Program::eps()));
    CHECK(!nullable(parseP("a")));
    CHECK(nullable(parseP("(a;b*)*")));
    CHECK(!nullable(parseP("a;b*")));
    CHECK(nullable(parseP("b*;a*")));
    CHECK(nullable(parseP("a+eps")));
}

TEST_CASE("derivative: pinned examples") {
    CHECK(derivative("a", parseP("a;b")) == parseP("b"));
    CHECK(derivative("a", parseP("a*")) == parseP("a*"));
    CHECK(derivative("b", parseP("a")).isEmpty());
    CHECK(derivative("a", parseP("a+b;a")) == Program::eps());
    CHECK(derivative("b", parseP("a+b;a")) == parseP("a"));
}

TEST_CASE("derivative: word property over all short words") {
    Rng rng(47);
    std::vector<std::string> sigma{"a", "b", "c"};
    auto words = allWords(sigma, 4);
    for (int trial = 0; trial < 120; ++trial) {
        Program p = randomProgram(rng, 8, 3);
        for (const auto& w : words) {
            Program d = p;
            for (const auto& letter : w) d = derivative(letter, d);
            CHECK(wordIn(w, p) == nullable(d));
        }
    }
}

TEST_CASE("normal form: g(a*) = a;a* + eps") {
    NormalForm nf = normalForm(parseP("a*"));
    REQUIRE(nf.summands.size() == 1);
    CHECK(nf.summands[0].first == "a");
    CHECK(nf.summands[0].second == parseP("a*"));
    CHECK(nf.epsFlag);
    CHECK(printNormalForm(nf) == "a;a* + eps");
}

TEST_CASE("normal form: g(a+b) and g(eps)") {
    NormalForm ab = normalForm(parseP("a+b"));
    REQUIRE(ab.summands.size() == 2);
    CHECK(ab.summands[0].first == "a");
    CHECK(ab.summands[0].second == Program::eps());
    CHECK(ab.summands[1].first == "b");
    CHECK(!ab.epsFlag);
    CHECK(printNormalForm(ab) == "a + b");

    NormalForm eps = normalForm(Program::eps());
    CHECK(eps.summands.empty());
    CHECK(eps.epsFlag);
    CHECK(printNormalForm(eps) == "eps");
}

TEST_CASE("normal form: nullable flag always matches, tails never empty") {
    Rng rng(53);
    for (int trial = 0; trial < 300; ++trial) {
        Program p = randomProgram(rng, 8, 3);
        NormalForm nf = normalForm(p);
        CHECK(nf.epsFlag == nullable(p));
        for (const auto& [atom, tail] : nf.summands) CHECK(!tail.isEmpty());
    }
}

TEST_CASE("normal form expansion is relationally equivalent to the program") {
    Rng rng(59);
    for (int trial = 0; trial < 150; ++trial) {
        LabeledModel lm = randomLabeled(rng, 5, 3, 1);
        Program p = randomProgram(rng, 8, static_cast<int>(lm.labels.size()));
        NormalForm nf = normalForm(p);
        // Rebuild sum_i pi_i ; alpha_i (+ eps) and compare relations exactly.
        std::vector<Program> parts;
        for (const auto& [atom, tail] : nf.summands)
            parts.push_back(Program::makeSeq({Program::atomic(atom), tail}));
        if (nf.epsFlag) parts.push_back(Program::eps());
        Program expansion = Program::makeUnion(std::move(parts));
        CHECK(pdlRelation(lm, p).at == pdlRelation(lm, expansion).at);
    }
}

TEST_CASE("derivative closures stay finite and within the size bound") {
    Rng rng(61);
    for (int trial = 0; trial < 150; ++trial) {
        Program p = randomProgram(rng, 8, 3);
        auto closure = derivativeClosure(p);
        CHECK(!closure.empty());
        // Brzozowski similarity bound for ACI-canonical derivatives.
        CHECK(static_cast<int>(closure.size()) <= 1 << std::max(1, p.operatorCount() + 1));
        for (const auto& q : closure) CHECK(canonicalize(q) == q);
    }
}

TEST_CASE("program printing round-trips") {
    Rng rng(67);
    for (int trial = 0; trial < 300; ++trial) {
        Program p = randomProgram(rng, 8, 3);
        CHECK(parseP(printProgram(p)) == p);
    }
    CHECK(printProgram(parseP("(a;b)*")) == "(a;b)*");
    CHECK(printProgram(parseP("a;(b+c);a")) == "a;(b+c);a");
}
