#pragma once

#include "netsig/evaluation.hpp"
#include "netsig/preprocess.hpp"
#include "netsig/stability.hpp"
#include "netsig/synthetic.hpp"
#include "netsig/types.hpp"

#include <json.hpp>

namespace netsig {

// JSON round trips are exact: nlohmann renders doubles with shortest
// round-trip precision.

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const ExpressionDataset& v);
void from_json(const nlohmann::json& j, ExpressionDataset& v);

void to_json(nlohmann::json& j, const GeneNetwork& v);
void from_json(const nlohmann::json& j, GeneNetwork& v);

void to_json(nlohmann::json& j, const GroupStructure& v);
void from_json(const nlohmann::json& j, GroupStructure& v);

void to_json(nlohmann::json& j, const LambdaGrid& v);
void from_json(const nlohmann::json& j, LambdaGrid& v);

void to_json(nlohmann::json& j, const PathEntry& v);
void from_json(const nlohmann::json& j, PathEntry& v);

void to_json(nlohmann::json& j, const SelectionPath& v);
void from_json(const nlohmann::json& j, SelectionPath& v);

void to_json(nlohmann::json& j, const RankedUnit& v);
void from_json(const nlohmann::json& j, RankedUnit& v);

void to_json(nlohmann::json& j, const Signature& v);
void from_json(const nlohmann::json& j, Signature& v);

void to_json(nlohmann::json& j, const LogisticModel& v);
void from_json(const nlohmann::json& j, LogisticModel& v);

void to_json(nlohmann::json& j, const PreprocessModel& v);
void from_json(const nlohmann::json& j, PreprocessModel& v);

void to_json(nlohmann::json& j, const StabilityProfile& v);
void from_json(const nlohmann::json& j, StabilityProfile& v);

void to_json(nlohmann::json& j, const StabilityScores& v);
void from_json(const nlohmann::json& j, StabilityScores& v);

void to_json(nlohmann::json& j, const SizeCurve& v);
void from_json(const nlohmann::json& j, SizeCurve& v);

void to_json(nlohmann::json& j, const OverlapCurve& v);
void from_json(const nlohmann::json& j, OverlapCurve& v);

void to_json(nlohmann::json& j, const EvaluationReport& v);
void from_json(const nlohmann::json& j, EvaluationReport& v);

void to_json(nlohmann::json& j, const GroundTruth& v);
void from_json(const nlohmann::json& j, GroundTruth& v);

void to_json(nlohmann::json& j, const SyntheticSpec& v);
void from_json(const nlohmann::json& j, SyntheticSpec& v);

}  // namespace netsig
