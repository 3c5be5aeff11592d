#pragma once

#include <string>

#include "foldcode/model.hpp"

namespace foldcode {

// SDPA sparse (.dat-s) emission of an SdpProblem.
//
// Conventions (also in README): SDPA minimizes c.x over Sum x_k F_k - F0 >= 0,
// so c = -objective and F0 = -constant; the optimum of the emitted file is the
// negated bound objective. Variables stay free (the format imposes no sign).
// Fixings are materialized as leading paired diagonal entries
// (x_v - val >= 0, val - x_v >= 0); the importer folds such pairs back into
// fixings. All coefficients are emitted exactly (integers as integers).
std::string export_sdpa(const SdpProblem& prob, const std::string& tool_version);

SdpProblem import_sdpa(const std::string& text);

}  // namespace foldcode
