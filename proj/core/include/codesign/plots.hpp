#pragma once

#include <string>
#include <vector>

#include "codesign/evaluation.hpp"

namespace codesign {

/// Objective-space scatter of all feasible evaluations with the Pareto front
/// overlaid. Falls back to the raw (penalized) cloud plus a warning when
/// nothing is feasible.
std::string render_archive_scatter(const std::vector<EvalRecord>& archive,
                                   const std::vector<EvalRecord>& front);

/// Same cloud, colored by centroid model id.
std::string render_model_scatter(const std::vector<EvalRecord>& archive);

/// Front members grouped per model, connected to show how weight tuning moves
/// one morphology along the trade-off curve.
std::string render_model_contributions(const std::vector<EvalRecord>& front);

}  // namespace codesign
