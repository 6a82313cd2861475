#include "cofix/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "cofix/printer.hpp"

namespace cofix {

namespace {

enum class Tok {
    Ident, Number, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Lt, Gt, Tilde, Star, Plus, Semi, Comma, Slash, Dot, AndOp, OrOp, End
};

struct Token {
    Tok kind;
    std::string text;
    double num = 0.0;
    std::size_t pos = 0;
};

const std::set<std::string> kReserved = {"T", "F", "dia", "box", "sigma", "lfp",
                                         "gfp", "eps", "mu", "nu", "X"};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto fail = [&](const std::string& msg) {
        throw UserError("lex error at position " + std::to_string(i) + ": " + msg);
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, text.substr(i, j - i), 0.0, start});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.') {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            double value = 0.0;
            auto res = std::from_chars(text.data() + i, text.data() + j, value);
            if (res.ec != std::errc{}) fail("bad number");
            out.push_back({Tok::Number, text.substr(i, j - i), value, start});
            i = j;
            continue;
        }
        auto push = [&](Tok k, std::size_t len) {
            out.push_back({k, text.substr(i, len), 0.0, start});
            i += len;
        };
        switch (c) {
        case '(': push(Tok::LParen, 1); break;
        case ')': push(Tok::RParen, 1); break;
        case '{': push(Tok::LBrace, 1); break;
        case '}': push(Tok::RBrace, 1); break;
        case '[': push(Tok::LBracket, 1); break;
        case ']': push(Tok::RBracket, 1); break;
        case '<': push(Tok::Lt, 1); break;
        case '>': push(Tok::Gt, 1); break;
        case '~': push(Tok::Tilde, 1); break;
        case '*': push(Tok::Star, 1); break;
        case '+': push(Tok::Plus, 1); break;
        case ';': push(Tok::Semi, 1); break;
        case ',': push(Tok::Comma, 1); break;
        case '.': push(Tok::Dot, 1); break;
        case '/':
            if (i + 1 < text.size() && text[i + 1] == '\\')
                push(Tok::AndOp, 2);
            else
                push(Tok::Slash, 1);
            break;
        case '\\':
            if (i + 1 < text.size() && text[i + 1] == '/')
                push(Tok::OrOp, 2);
            else
                fail("stray backslash");
            break;
        default:
            fail(std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", 0.0, text.size()});
    return out;
}

class Parser {
public:
    Parser(const std::string& text, const LogicInstance* instance)
        : instance_(instance), tokens_(lex(text)) {}

    FormulaPtr parseFormulaTop() {
        FormulaPtr f = parseSum();
        expectEnd();
        return f;
    }

    Program parseProgramTop(const std::vector<std::string>* alphabet) {
        alphabet_ = alphabet;
        Program p = parseProgUnion();
        expectEnd();
        return p;
    }

    MuPtr parseMuTop() {
        MuPtr f = parseMuOr();
        expectEnd();
        return f;
    }

private:
    const LogicInstance* instance_;
    const std::vector<std::string>* alphabet_ = nullptr;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool atIdent(const char* word) const { return at(Tok::Ident) && peek().text == word; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw UserError("parse error at position " + std::to_string(peek().pos) + ": " + msg +
                        (peek().kind == Tok::End ? " (at end of input)"
                                                 : " (found '" + peek().text + "')"));
    }

    void expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        advance();
    }

    void expectEnd() {
        if (!at(Tok::End)) fail("trailing input");
    }

    std::string expectIdent(const char* what) {
        if (!at(Tok::Ident)) fail(std::string("expected ") + what);
        return advance().text;
    }

    LogicId logic() const { return instance_->id; }

    // ---- formulas ------------------------------------------------------

    FormulaPtr parseSum() {
        FormulaPtr first = parseOr();
        if (!at(Tok::Plus)) return first;
        std::vector<double> coeffs;
        std::vector<FormulaPtr> children;
        auto absorb = [&](const FormulaPtr& f) {
            if (f->kind != FormulaKind::Convex)
                fail("subconvex sum operands need explicit coefficients (q*phi)");
            coeffs.insert(coeffs.end(), f->coeffs.begin(), f->coeffs.end());
            children.insert(children.end(), f->children.begin(), f->children.end());
        };
        absorb(first);
        while (at(Tok::Plus)) {
            advance();
            absorb(parseOr());
        }
        return fConvex(std::move(coeffs), std::move(children));
    }

    FormulaPtr parseOr() {
        FormulaPtr first = parseAnd();
        if (!at(Tok::OrOp)) return first;
        std::vector<FormulaPtr> parts{first};
        while (at(Tok::OrOp)) {
            advance();
            parts.push_back(parseAnd());
        }
        return fOr(std::move(parts));
    }

    FormulaPtr parseAnd() {
        FormulaPtr first = parseUnary();
        if (!at(Tok::AndOp)) return first;
        std::vector<FormulaPtr> parts{first};
        while (at(Tok::AndOp)) {
            advance();
            parts.push_back(parseUnary());
        }
        return fAnd(std::move(parts));
    }

    FormulaPtr parseUnary() {
        if (at(Tok::Tilde)) {
            advance();
            return fNeg(parseUnary());
        }
        if (atIdent("dia")) {
            advance();
            if (at(Tok::Star)) {
                advance();
                return fDiamondStar(parseUnary());
            }
            return fModal("dia", parseUnary());
        }
        if (atIdent("box")) {
            advance();
            return fModal("box", parseUnary());
        }
        if (atIdent("sigma")) {
            advance();
            expect(Tok::LBracket, "'[' after sigma");
            if (!at(Tok::Number)) fail("expected probability in sigma[...]");
            double q = advance().num;
            expect(Tok::RBracket, "']'");
            return fSigmaQ(q, parseUnary());
        }
        if (at(Tok::Lt)) {
            if (logic() != LogicId::Pdl)
                fail("program modalities <...> are only part of the pdl instance");
            advance();
            alphabet_ = &instance_->programAlphabet;
            Program prog = parseProgUnion();
            expect(Tok::Gt, "'>' closing the program");
            return fProgramDiamond(std::move(prog), parseUnary());
        }
        if (at(Tok::Number)) {
            double coeff = advance().num;
            expect(Tok::Star, "'*' after coefficient");
            return fConvex({coeff}, {parseUnary()});
        }
        if (atIdent("lfp") || atIdent("gfp")) {
            bool flat = peek().text == "gfp";
            advance();
            auto [scheme, args] = parseApplicationFormula();
            return flat ? fFlat(std::move(scheme), std::move(args))
                        : fSharp(std::move(scheme), std::move(args));
        }
        return parsePrimary();
    }

    FormulaPtr parsePrimary() {
        if (at(Tok::LParen)) {
            advance();
            FormulaPtr f = parseSum();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Ident)) {
            const std::string& name = peek().text;
            if (name == "T") {
                advance();
                return fTop();
            }
            if (name == "F") {
                advance();
                return fBot();
            }
            if (kReserved.count(name)) fail("reserved word '" + name + "' cannot be an atom");
            return fAtom(advance().text);
        }
        fail("expected a formula");
    }

    // ---- fixpoint schemes ----------------------------------------------

    std::pair<SchemePtr, std::vector<FormulaPtr>> parseApplicationFormula() {
        if (logic() != LogicId::Cfl) fail("fixpoint schemes are only part of the cfl instance");
        SchemeTerm body = parseBody();
        std::vector<std::string> params;
        std::vector<FormulaPtr> args;
        expect(Tok::LParen, "'(' opening the argument list");
        if (!at(Tok::RParen)) {
            while (true) {
                args.push_back(parseOr());
                expect(Tok::Slash, "'/' between argument and variable");
                params.push_back(paramName());
                if (!at(Tok::Comma)) break;
                advance();
            }
        }
        expect(Tok::RParen, "')' closing the argument list");
        auto scheme = std::make_shared<FixpointScheme>();
        scheme->params = params;
        scheme->body = std::move(body);
        resolveVars(scheme->body, params);
        return {scheme, std::move(args)};
    }

    SchemeTerm parseApplicationTerm(bool flat) {
        SchemeTerm body = parseBody();
        std::vector<std::string> params;
        std::vector<SchemeTerm> args;
        expect(Tok::LParen, "'(' opening the argument list");
        if (!at(Tok::RParen)) {
            while (true) {
                args.push_back(parseBodyOr());
                expect(Tok::Slash, "'/' between argument and variable");
                params.push_back(paramName());
                if (!at(Tok::Comma)) break;
                advance();
            }
        }
        expect(Tok::RParen, "')' closing the argument list");
        auto scheme = std::make_shared<FixpointScheme>();
        scheme->params = params;
        scheme->body = std::move(body);
        resolveVars(scheme->body, params);
        SchemeTerm t;
        t.kind = SchemeTermKind::Apply;
        t.scheme = std::move(scheme);
        t.children = std::move(args);
        t.applyFlat = flat;
        return t;
    }

    std::string paramName() {
        std::string name = expectIdent("parametric variable name");
        if (kReserved.count(name)) fail("reserved word '" + name + "' cannot be a variable");
        return name;
    }

    SchemeTerm parseBody() {
        expect(Tok::LBrace, "'{' opening the scheme body");
        SchemeTerm body = parseBodyOr();
        expect(Tok::RBrace, "'}' closing the scheme body");
        return body;
    }

    SchemeTerm parseBodyOr() {
        SchemeTerm first = parseBodyAnd();
        if (!at(Tok::OrOp)) return first;
        SchemeTerm t;
        t.kind = SchemeTermKind::Or;
        t.children.push_back(std::move(first));
        while (at(Tok::OrOp)) {
            advance();
            t.children.push_back(parseBodyAnd());
        }
        return t;
    }

    SchemeTerm parseBodyAnd() {
        SchemeTerm first = parseBodyUnary();
        if (!at(Tok::AndOp)) return first;
        SchemeTerm t;
        t.kind = SchemeTermKind::And;
        t.children.push_back(std::move(first));
        while (at(Tok::AndOp)) {
            advance();
            t.children.push_back(parseBodyUnary());
        }
        return t;
    }

    SchemeTerm parseBodyUnary() {
        if (at(Tok::Tilde)) {
            // Negation in a scheme body must close off a formula; captures of
            // the scheme's variables are rejected during resolution.
            advance();
            SchemeTerm t;
            t.kind = SchemeTermKind::Leaf;
            t.leaf = fNeg(parseUnary());
            return t;
        }
        if (atIdent("dia") || atIdent("box")) {
            std::string m = advance().text;
            if (at(Tok::Star)) fail("dia* is not available inside fixpoint schemes");
            SchemeTerm t;
            t.kind = SchemeTermKind::Modal;
            t.modality = m;
            t.children.push_back(parseBodyUnary());
            return t;
        }
        if (atIdent("lfp") || atIdent("gfp")) {
            bool flat = peek().text == "gfp";
            advance();
            return parseApplicationTerm(flat);
        }
        if (at(Tok::Number)) fail("subconvex sums are not available inside fixpoint schemes");
        return parseBodyPrimary();
    }

    SchemeTerm parseBodyPrimary() {
        if (at(Tok::LParen)) {
            advance();
            SchemeTerm t = parseBodyOr();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (at(Tok::Ident)) {
            const std::string& name = peek().text;
            SchemeTerm t;
            if (name == "T") {
                advance();
                t.kind = SchemeTermKind::Top;
                return t;
            }
            if (name == "F") {
                advance();
                t.kind = SchemeTermKind::Bot;
                return t;
            }
            if (name == "X") {
                advance();
                t.kind = SchemeTermKind::FixVar;
                return t;
            }
            if (kReserved.count(name)) fail("reserved word '" + name + "' cannot be an atom");
            t.kind = SchemeTermKind::Leaf;
            t.leaf = fAtom(advance().text);
            return t;
        }
        fail("expected a scheme term");
    }

    void resolveVars(SchemeTerm& t, const std::vector<std::string>& params) {
        switch (t.kind) {
        case SchemeTermKind::Leaf: {
            if (t.leaf->kind == FormulaKind::Atom &&
                std::find(params.begin(), params.end(), t.leaf->atom) != params.end()) {
                t.kind = SchemeTermKind::Var;
                t.var = t.leaf->atom;
                t.leaf = nullptr;
                return;
            }
            for (const auto& v : params)
                if (formulaMentionsAtom(*t.leaf, v))
                    fail("scheme variable '" + v + "' may not occur under negation");
            return;
        }
        case SchemeTermKind::Apply:
            // Argument terms live in the enclosing scope; the applied
            // scheme's body was already resolved against its own variables.
            for (auto& arg : t.children) resolveVars(arg, params);
            return;
        case SchemeTermKind::And:
        case SchemeTermKind::Or:
        case SchemeTermKind::Modal:
            for (auto& c : t.children) resolveVars(c, params);
            return;
        default:
            return;
        }
    }

    static bool formulaMentionsAtom(const Formula& f, const std::string& name) {
        if (f.kind == FormulaKind::Atom) return f.atom == name;
        for (const auto& c : f.children)
            if (formulaMentionsAtom(*c, name)) return true;
        return false;
    }

    // ---- programs --------------------------------------------------------

    Program parseProgUnion() {
        std::vector<Program> parts{parseProgSeq()};
        while (at(Tok::Plus)) {
            advance();
            parts.push_back(parseProgSeq());
        }
        return Program::makeUnion(std::move(parts));
    }

    Program parseProgSeq() {
        std::vector<Program> parts{parseProgStar()};
        while (at(Tok::Semi)) {
            advance();
            parts.push_back(parseProgStar());
        }
        return Program::makeSeq(std::move(parts));
    }

    Program parseProgStar() {
        Program p = parseProgPrimary();
        while (at(Tok::Star)) {
            advance();
            p = Program::makeStar(std::move(p));
        }
        return p;
    }

    Program parseProgPrimary() {
        if (at(Tok::LParen)) {
            advance();
            Program p = parseProgUnion();
            expect(Tok::RParen, "')'");
            return p;
        }
        if (at(Tok::Ident)) {
            const std::string& name = peek().text;
            if (name == "eps") {
                advance();
                return Program::eps();
            }
            if (kReserved.count(name))
                fail("reserved word '" + name + "' cannot be an atomic program");
            if (alphabet_ && std::find(alphabet_->begin(), alphabet_->end(), name) == alphabet_->end())
                fail("unknown atomic program '" + name + "'");
            return Program::atomic(advance().text);
        }
        fail("expected a program");
    }

    // ---- mu-calculus -----------------------------------------------------

    MuPtr parseMuOr() {
        std::vector<MuPtr> parts{parseMuAnd()};
        while (at(Tok::OrOp)) {
            advance();
            parts.push_back(parseMuAnd());
        }
        return parts.size() == 1 ? parts.front() : MuFormula::mkOr(std::move(parts));
    }

    MuPtr parseMuAnd() {
        std::vector<MuPtr> parts{parseMuUnary()};
        while (at(Tok::AndOp)) {
            advance();
            parts.push_back(parseMuUnary());
        }
        return parts.size() == 1 ? parts.front() : MuFormula::mkAnd(std::move(parts));
    }

    MuPtr parseMuUnary() {
        if (at(Tok::Tilde)) {
            advance();
            return MuFormula::neg(parseMuUnary());
        }
        if (atIdent("dia") || atIdent("box")) {
            std::string modality = advance().text;
            return MuFormula::modal(std::move(modality), parseMuUnary());
        }
        if (atIdent("mu") || atIdent("nu")) {
            bool isMu = peek().text == "mu";
            advance();
            std::string v = expectIdent("bound variable");
            if (!std::isupper(static_cast<unsigned char>(v[0])))
                fail("bound variables must be capitalized identifiers");
            expect(Tok::Dot, "'.' after the bound variable");
            MuPtr body = parseMuOr();
            return isMu ? MuFormula::mu(v, std::move(body)) : MuFormula::nu(v, std::move(body));
        }
        return parseMuPrimary();
    }

    MuPtr parseMuPrimary() {
        if (at(Tok::LParen)) {
            advance();
            MuPtr f = parseMuOr();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::Ident)) {
            const std::string& name = peek().text;
            if (name == "T") {
                advance();
                return MuFormula::top();
            }
            if (name == "F") {
                advance();
                return MuFormula::bot();
            }
            if (std::isupper(static_cast<unsigned char>(name[0]))) return MuFormula::var(advance().text);
            if (kReserved.count(name)) fail("reserved word '" + name + "' cannot be an atom");
            return MuFormula::atom(advance().text);
        }
        fail("expected a formula");
    }
};

} // namespace

FormulaPtr parseFormula(const std::string& text, const LogicInstance& instance) {
    Parser parser(text, &instance);
    FormulaPtr f = parser.parseFormulaTop();
    auto diags = validate(f, instance);
    if (!diags.empty()) {
        std::string where;
        for (int step : diags.front().path) where += "." + std::to_string(step);
        throw UserError("invalid formula: " + diags.front().message +
                        (where.empty() ? "" : " (at path " + where + ")"));
    }
    return f;
}

Program parseProgram(const std::string& text) {
    Parser parser(text, nullptr);
    return parser.parseProgramTop(nullptr);
}

Program parseProgram(const std::string& text, const std::vector<std::string>& alphabet) {
    Parser parser(text, nullptr);
    return parser.parseProgramTop(&alphabet);
}

MuPtr parseMuFormula(const std::string& text) {
    Parser parser(text, nullptr);
    return parser.parseMuTop();
}

} // namespace cofix
