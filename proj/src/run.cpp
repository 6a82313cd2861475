#include "cofix/run.hpp"

#include <cmath>
#include <sstream>

#include "cofix/oracles.hpp"
#include "cofix/parser.hpp"
#include "cofix/printer.hpp"

namespace cofix {

using nlohmann::json;

LogicInstance instanceFor(LogicId id, const Model& model) {
    switch (id) {
    case LogicId::DiamondStar: return LogicInstance::diamondStar();
    case LogicId::Quant: return LogicInstance::quant();
    case LogicId::Cfl: return LogicInstance::cfl();
    case LogicId::Pdl: {
        if (const auto* l = std::get_if<LabeledModel>(&model))
            return LogicInstance::pdl(l->labels);
        throw UserError("the pdl instance needs a labeled model");
    }
    }
    throw InternalError("unreachable logic id");
}

LogicId defaultLogicFor(const Model& model) {
    switch (kindOf(model)) {
    case ModelKind::Kripke: return LogicId::DiamondStar;
    case ModelKind::Labeled: return LogicId::Pdl;
    case ModelKind::Prob: return LogicId::Quant;
    }
    throw InternalError("unreachable model kind");
}

namespace {

json predicateJson(const Predicate& p, const std::vector<std::string>& states) {
    if (p.kind() == LatticeKind::Set) {
        json arr = json::array();
        for (int s : p.members()) arr.push_back(states[static_cast<std::size_t>(s)]);
        return json{{"states", arr}};
    }
    json values = json::object();
    for (int s = 0; s < p.width(); ++s) values[states[static_cast<std::size_t>(s)]] = p.value(s);
    return json{{"values", values}};
}

double agreementTolerance(const EvalOptions& opts) {
    return std::max(kInvarianceTol, 2.0 * opts.tol);
}

} // namespace

json runCheck(const Model& model, LogicId logic, const std::string& formulaText,
              const std::string& mode, const EvalOptions& opts) {
    if (mode != "least" && mode != "initial" && mode != "both")
        throw UserError("semantics mode must be least, initial or both");
    LogicInstance instance = instanceFor(logic, model);
    FormulaPtr formula = parseFormula(formulaText, instance);
    const auto& states = statesOf(model);

    json report;
    report["command"] = "check";
    report["logic"] = logicIdName(logic);
    report["formula"] = printFormula(formula);
    report["mode"] = mode;
    json results = json::object();
    json diagnostics = json::object();
    bool ok = true;

    std::optional<SemanticResult> least, initial;
    if (mode == "least" || mode == "both") least = evalLeast(model, formula, opts);
    if (mode == "initial" || mode == "both") initial = evalInitial(model, formula, opts);

    if (least) {
        results["least"] = predicateJson(least->root(), states);
        diagnostics["iterations"] = least->iterations;
        diagnostics["residual"] = least->residual;
    }
    if (initial) {
        results["initial"] = predicateJson(initial->root(), states);
        if (!least) {
            diagnostics["iterations"] = initial->iterations;
            diagnostics["residual"] = initial->residual;
        }
    }
    if (mode == "both") {
        double worst = 0.0;
        json diff = json::array();
        for (std::size_t i = 0; i < least->closure.keys().size(); ++i) {
            const std::string& key = least->closure.keys()[i];
            const Predicate& a = least->table.at(key);
            const Predicate& b = initial->table.at(key);
            double d = a.supDistance(b);
            worst = std::max(worst, d);
            if ((a.kind() == LatticeKind::Set && a != b) || d > agreementTolerance(opts))
                diff.push_back(json{{"formula", key},
                                    {"least", predicateJson(a, states)},
                                    {"initial", predicateJson(b, states)}});
        }
        report["agreement"] = diff.empty();
        report["maxDiscrepancy"] = worst;
        if (!diff.empty()) {
            report["disagreements"] = diff;
            ok = false;
        }
    }
    report["results"] = results;
    report["diagnostics"] = diagnostics;
    report["ok"] = ok;
    return report;
}

json runNormalize(const std::string& programText) {
    Program p = parseProgram(programText);
    NormalForm nf = normalForm(p);
    json report;
    report["command"] = "normalize";
    report["program"] = printProgram(p);
    report["normalForm"] = printNormalForm(nf);
    report["derivativeClosureSize"] = derivativeClosure(p).size();
    report["ok"] = true;
    return report;
}

json runInvariance(const Model& source, const Model& target, const StateMap& f, LogicId logic,
                   const std::string& formulaText, const EvalOptions& opts) {
    LogicInstance instance = instanceFor(logic, source);
    FormulaPtr formula = parseFormula(formulaText, instance);

    json report;
    report["command"] = "invariance";
    report["logic"] = logicIdName(logic);
    report["formula"] = printFormula(formula);

    MorphismVerdict mv = checkMorphism(source, target, f);
    report["morphism"] = mv.ok;
    if (!mv.ok) {
        report["witness"] = json{{"state", statesOf(source)[static_cast<std::size_t>(mv.state)]},
                                 {"reason", mv.reason},
                                 {"detail", mv.detail}};
        report["ok"] = false;
        return report;
    }

    InvarianceVerdict verdict = checkInvariance(source, target, f, formula, opts);
    SemanticResult r1 = evalLeast(source, formula, opts);
    SemanticResult r2 = evalLeast(target, formula, opts);
    json flags = json::object();
    for (std::size_t i = 0; i < r1.closure.keys().size(); ++i) {
        const std::string& key = r1.closure.keys()[i];
        const Predicate& p1 = r1.table.at(key);
        const Predicate& p2 = r2.table.at(key);
        bool agree;
        if (p1.kind() == LatticeKind::Set) {
            agree = p1 == f.preimage(p2, stateCount(source));
        } else {
            agree = true;
            for (int s = 0; s < stateCount(source); ++s)
                if (std::fabs(p1.value(s) - p2.value(f.apply(s))) > kInvarianceTol) agree = false;
        }
        flags[key] = agree;
    }
    report["formulas"] = flags;
    report["ok"] = verdict.ok;
    if (!verdict.ok)
        report["violation"] = json{{"formula", verdict.formulaKey},
                                   {"state", statesOf(source)[static_cast<std::size_t>(verdict.state)]},
                                   {"discrepancy", verdict.discrepancy}};
    return report;
}

json runOracleCompare(const Model& model, LogicId logic, const std::string& formulaText,
                      const EvalOptions& opts) {
    LogicInstance instance = instanceFor(logic, model);
    FormulaPtr formula = parseFormula(formulaText, instance);
    const auto& states = statesOf(model);

    Predicate oracle = [&]() -> Predicate {
        switch (logic) {
        case LogicId::DiamondStar: {
            const auto* k = std::get_if<KripkeModel>(&model);
            if (!k) throw UserError("the diamondstar oracle needs a kripke model");
            return diamondStarOracle(*k, formula);
        }
        case LogicId::Pdl: {
            const auto* l = std::get_if<LabeledModel>(&model);
            if (!l) throw UserError("the pdl oracle needs a labeled model");
            return pdlOracle(*l, formula);
        }
        case LogicId::Cfl: {
            const auto* k = std::get_if<KripkeModel>(&model);
            if (!k) throw UserError("the cfl oracle needs a kripke model");
            return cflOracle(*k, formula);
        }
        case LogicId::Quant: {
            const auto* p = std::get_if<ProbModel>(&model);
            if (!p) throw UserError("the quantitative oracles need a prob model");
            if (formula->kind == FormulaKind::Fix &&
                formula->children.front()->kind == FormulaKind::Atom) {
                if (formula->fix->kind == FixKind::SigmaQ)
                    return sigmaLinearOracle(*p, formula->fix->q, formula->children.front()->atom);
                if (formula->fix->kind == FixKind::DiamondStar)
                    return optStopOracle(*p, formula->children.front()->atom);
            }
            throw UserError("no oracle for this formula shape (expected sigma[q] atom or dia* atom)");
        }
        }
        throw InternalError("unreachable logic id");
    }();

    SemanticResult least = evalLeast(model, formula, opts);
    SemanticResult initial = evalInitial(model, formula, opts);
    double dLeast = oracle.supDistance(least.root());
    double dInitial = oracle.supDistance(initial.root());
    double tol = oracle.kind() == LatticeKind::Set ? 0.0 : kInvarianceTol;

    json report;
    report["command"] = "oracle-compare";
    report["logic"] = logicIdName(logic);
    report["formula"] = printFormula(formula);
    report["results"] = json{{"oracle", predicateJson(oracle, states)},
                             {"least", predicateJson(least.root(), states)},
                             {"initial", predicateJson(initial.root(), states)}};
    report["maxDiscrepancy"] = std::max(dLeast, dInitial);
    report["agreement"] = dLeast <= tol && dInitial <= tol;
    report["ok"] = report["agreement"].get<bool>();
    return report;
}

std::string prettyReport(const json& report) {
    std::ostringstream os;
    std::string command = report.value("command", "?");
    os << "== " << command << " ==\n";
    if (report.contains("formula")) os << "formula:   " << report["formula"].get<std::string>() << "\n";
    if (report.contains("logic")) os << "logic:     " << report["logic"].get<std::string>() << "\n";
    if (report.contains("program")) os << "program:   " << report["program"].get<std::string>() << "\n";
    if (report.contains("normalForm"))
        os << "g(alpha):  " << report["normalForm"].get<std::string>() << "\n"
           << "closure:   " << report["derivativeClosureSize"].get<int>() << " programs\n";
    if (report.contains("results")) {
        for (const auto& [name, value] : report["results"].items()) {
            os << name << ":\t";
            if (value.contains("states")) {
                os << "{";
                bool first = true;
                for (const auto& s : value["states"]) {
                    os << (first ? "" : ", ") << s.get<std::string>();
                    first = false;
                }
                os << "}";
            } else if (value.contains("values")) {
                bool first = true;
                for (const auto& [state, v] : value["values"].items()) {
                    os << (first ? "" : ", ") << state << "=" << v.get<double>();
                    first = false;
                }
            }
            os << "\n";
        }
    }
    if (report.contains("morphism"))
        os << "morphism:  " << (report["morphism"].get<bool>() ? "yes" : "NO") << "\n";
    if (report.contains("formulas")) {
        for (const auto& [key, flag] : report["formulas"].items())
            os << (flag.get<bool>() ? "  agree   " : "  DIFFER  ") << key << "\n";
    }
    if (report.contains("agreement"))
        os << "agreement: " << (report["agreement"].get<bool>() ? "yes" : "NO") << "\n";
    if (report.contains("maxDiscrepancy"))
        os << "max diff:  " << report["maxDiscrepancy"].get<double>() << "\n";
    if (report.contains("diagnostics")) {
        const auto& d = report["diagnostics"];
        if (d.contains("iterations")) os << "iters:     " << d["iterations"].get<int>() << "\n";
        if (d.contains("residual")) os << "residual:  " << d["residual"].get<double>() << "\n";
    }
    os << (report.value("ok", false) ? "ok" : "FAILED") << "\n";
    return os.str();
}

} // namespace cofix
