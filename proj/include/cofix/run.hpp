#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cofix/model.hpp"
#include "cofix/semantics.hpp"

namespace cofix {

// Command implementations behind the CLI (and the python bindings). Each
// returns a deterministic JSON report; "ok" decides the process exit code.

// Instance matching a logic id on a concrete model (pdl takes its program
// alphabet from the model's labels).
LogicInstance instanceFor(LogicId id, const Model& model);

// Default logic for a model kind when the caller names none.
LogicId defaultLogicFor(const Model& model);

nlohmann::json runCheck(const Model& model, LogicId logic, const std::string& formulaText,
                        const std::string& mode, const EvalOptions& opts = {});

nlohmann::json runNormalize(const std::string& programText);

nlohmann::json runInvariance(const Model& source, const Model& target, const StateMap& f,
                             LogicId logic, const std::string& formulaText,
                             const EvalOptions& opts = {});

nlohmann::json runOracleCompare(const Model& model, LogicId logic, const std::string& formulaText,
                                const EvalOptions& opts = {});

std::string prettyReport(const nlohmann::json& report);

} // namespace cofix
