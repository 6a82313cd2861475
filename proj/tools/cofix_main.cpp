#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cofix/generate.hpp"
#include "cofix/run.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cofix::UserError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const nlohmann::json& report, bool pretty) {
    if (pretty)
        std::cout << cofix::prettyReport(report);
    else
        std::cout << report.dump(2) << "\n";
}

cofix::ModelKind modelKindForLogic(cofix::LogicId id) {
    switch (id) {
    case cofix::LogicId::Pdl: return cofix::ModelKind::Labeled;
    case cofix::LogicId::Quant: return cofix::ModelKind::Prob;
    default: return cofix::ModelKind::Kripke;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"model checker for alternation-free coalgebraic fixpoint logics"};
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "human-readable output instead of JSON");

    auto* check = app.add_subcommand("check", "evaluate a formula on a model");
    std::string modelPath, logicName, formulaText, mode = "both";
    double tol = cofix::kDefaultTolerance;
    check->add_option("--model", modelPath, "model JSON file")->required();
    check->add_option("--logic", logicName, "diamondstar|pdl|quant|cfl")->required();
    check->add_option("--formula", formulaText, "formula text")->required();
    check->add_option("--semantics", mode, "least|initial|both");
    check->add_option("--tol", tol, "quantitative convergence tolerance");

    auto* normalize = app.add_subcommand("normalize", "Brzozowski normal form of a program");
    std::string programText;
    normalize->add_option("--program", programText, "program text")->required();

    auto* invariance = app.add_subcommand("invariance", "check invariance along a morphism");
    std::string model1Path, model2Path, mapPath, invLogicName, invFormula;
    invariance->add_option("--model1", model1Path, "source model JSON file")->required();
    invariance->add_option("--model2", model2Path, "target model JSON file")->required();
    invariance->add_option("--map", mapPath, "state map JSON file")->required();
    invariance->add_option("--formula", invFormula, "formula text")->required();
    invariance->add_option("--logic", invLogicName, "override the logic inferred from the model");

    auto* compare = app.add_subcommand("oracle-compare", "evaluators against the brute-force oracle");
    std::string cmpModelPath, cmpLogicName, cmpFormula;
    long long seed = -1;
    compare->add_option("--model", cmpModelPath, "model JSON file");
    compare->add_option("--logic", cmpLogicName, "diamondstar|pdl|quant|cfl")->required();
    compare->add_option("--formula", cmpFormula, "formula text")->required();
    compare->add_option("--seed", seed, "generate a random model from this seed instead of --model");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            cofix::Model model = cofix::loadModel(slurp(modelPath));
            cofix::EvalOptions opts;
            opts.tol = tol;
            auto report = cofix::runCheck(model, cofix::parseLogicId(logicName), formulaText, mode, opts);
            emit(report, pretty);
            return report.value("ok", false) ? 0 : 1;
        }
        if (normalize->parsed()) {
            auto report = cofix::runNormalize(programText);
            emit(report, pretty);
            return report.value("ok", false) ? 0 : 1;
        }
        if (invariance->parsed()) {
            cofix::Model source = cofix::loadModel(slurp(model1Path));
            cofix::Model target = cofix::loadModel(slurp(model2Path));
            cofix::StateMap f = cofix::parseStateMap(source, target, slurp(mapPath));
            cofix::LogicId logic = invLogicName.empty() ? cofix::defaultLogicFor(source)
                                                        : cofix::parseLogicId(invLogicName);
            auto report = cofix::runInvariance(source, target, f, logic, invFormula);
            emit(report, pretty);
            return report.value("ok", false) ? 0 : 1;
        }
        if (compare->parsed()) {
            cofix::LogicId logic = cofix::parseLogicId(cmpLogicName);
            cofix::Model model;
            if (!cmpModelPath.empty()) {
                model = cofix::loadModel(slurp(cmpModelPath));
            } else if (seed >= 0) {
                cofix::Rng rng(static_cast<std::uint64_t>(seed));
                model = cofix::randomModel(rng, modelKindForLogic(logic));
            } else {
                throw cofix::UserError("oracle-compare needs --model or --seed");
            }
            auto report = cofix::runOracleCompare(model, logic, cmpFormula);
            if (seed >= 0 && cmpModelPath.empty()) report["seed"] = seed;
            emit(report, pretty);
            return report.value("ok", false) ? 0 : 1;
        }
    } catch (const cofix::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const cofix::UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
