#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cofix/generate.hpp"
#include "cofix/oracles.hpp"
#include "cofix/parser.hpp"
#include "cofix/printer.hpp"
#include "cofix/run.hpp"
#include "cofix/schemes.hpp"
#include "cofix/semantics.hpp"

namespace py = pybind11;
using namespace cofix;

namespace {

LogicId logicOf(const std::string& name) { return parseLogicId(name); }

LogicInstance instanceOf(const std::string& logic, const Model& model) {
    return instanceFor(logicOf(logic), model);
}

py::object predicateToPy(const Predicate& p, const std::vector<std::string>& states) {
    if (p.kind() == LatticeKind::Set) {
        py::list out;
        for (int s : p.members()) out.append(states[static_cast<std::size_t>(s)]);
        return out;
    }
    py::dict out;
    for (int s = 0; s < p.width(); ++s) out[py::str(states[static_cast<std::size_t>(s)])] = p.value(s);
    return out;
}

py::object evalToPy(const Model& model, const std::string& logic, const std::string& formula,
                    bool initial) {
    LogicInstance instance = instanceOf(logic, model);
    FormulaPtr f = parseFormula(formula, instance);
    SemanticResult r = initial ? evalInitial(model, f) : evalLeast(model, f);
    return predicateToPy(r.root(), statesOf(model));
}

} // namespace

PYBIND11_MODULE(_cofix, m) {
    m.doc() = "model checker for alternation-free coalgebraic fixpoint logics";

    py::register_exception<UserError>(m, "UserError");

    m.def("eval_least",
          [](const std::string& modelJson, const std::string& logic, const std::string& formula) {
              return evalToPy(loadModel(modelJson), logic, formula, false);
          },
          py::arg("model_json"), py::arg("logic"), py::arg("formula"),
          "Least-solution semantics of a formula on a model; returns a state list or a value dict.");

    m.def("eval_initial",
          [](const std::string& modelJson, const std::string& logic, const std::string& formula) {
              return evalToPy(loadModel(modelJson), logic, formula, true);
          },
          py::arg("model_json"), py::arg("logic"), py::arg("formula"),
          "Initial-algebra semantics of a formula on a model.");

    m.def("check",
          [](const std::string& modelJson, const std::string& logic, const std::string& formula,
             const std::string& mode) {
              auto report = runCheck(loadModel(modelJson), logicOf(logic), formula, mode);
              return py::module_::import("json").attr("loads")(report.dump());
          },
          py::arg("model_json"), py::arg("logic"), py::arg("formula"), py::arg("mode") = "both",
          "Full check report (both semantics and their agreement) as a dict.");

    m.def("oracle_compare",
          [](const std::string& modelJson, const std::string& logic, const std::string& formula) {
              auto report = runOracleCompare(loadModel(modelJson), logicOf(logic), formula);
              return py::module_::import("json").attr("loads")(report.dump());
          },
          py::arg("model_json"), py::arg("logic"), py::arg("formula"),
          "Evaluators against the matching brute-force oracle.");

    m.def("normalize",
          [](const std::string& program) { return runNormalize(program)["normalForm"].get<std::string>(); },
          py::arg("program"), "Brzozowski normal form g(alpha) in surface syntax.");

    m.def("parse_print",
          [](const std::string& formula, const std::string& logic) {
              // Formula-only use: pdl gets a default alphabet.
              LogicInstance instance = logicOf(logic) == LogicId::Pdl
                                           ? LogicInstance::pdl({"a", "b", "c"})
                                           : instanceFor(logicOf(logic), KripkeModel{});
              return printFormula(parseFormula(formula, instance));
          },
          py::arg("formula"), py::arg("logic"), "Parse a formula and print it back canonically.");

    m.def("translate_mu",
          [](const std::string& muFormula) {
              return printFormula(translateMu(parseMuFormula(muFormula), LogicInstance::cfl()));
          },
          py::arg("mu_formula"), "Translate a mu-calculus formula into the scheme syntax.");

    m.def("check_invariance",
          [](const std::string& sourceJson, const std::string& targetJson,
             const std::string& mapJson, const std::string& logic, const std::string& formula) {
              Model source = loadModel(sourceJson);
              Model target = loadModel(targetJson);
              StateMap f = parseStateMap(source, target, mapJson);
              auto report = runInvariance(source, target, f, logicOf(logic), formula);
              return py::module_::import("json").attr("loads")(report.dump());
          },
          py::arg("source_json"), py::arg("target_json"), py::arg("map_json"), py::arg("logic"),
          py::arg("formula"), "Semantic invariance along a coalgebra morphism.");

    m.def("random_model",
          [](const std::string& kind, std::uint64_t seed) {
              Rng rng(seed);
              ModelKind k = kind == "kripke"    ? ModelKind::Kripke
                            : kind == "labeled" ? ModelKind::Labeled
                            : kind == "prob"    ? ModelKind::Prob
                                                : throw UserError("unknown model kind '" + kind + "'");
              return serializeModel(randomModel(rng, k));
          },
          py::arg("kind"), py::arg("seed"),
          "Seeded random model as a JSON document (kinds: kripke, labeled, prob).");
}
