// Copyright 2026 The qme Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QME_VALIDATION_HPP
#define QME_VALIDATION_HPP

#include <string>
#include <vector>

#include "qme/model.hpp"

namespace qme {

/// Child weights of one evaluation must sum to 1 within this tolerance.
inline constexpr double kWeightSumTolerance = 1e-6;

enum class FindingLevel { Error, Warning };

/// One rule violation. Errors block assessment; warnings do not.
struct Finding {
    FindingLevel level = FindingLevel::Error;
    std::string rule;  ///< E1..E6, W1..W4
    Id element;
    std::string message;
};

/// Checks a linked model against the consistency rules:
///   E1 impact endpoints must be product factor -> quality aspect
///   E2 refinement / entity hierarchies must be acyclic
///   E3 evaluation weights must be resolvable, in [0,1], summing to 1
///   E4 utility thresholds must satisfy min <= max
///   E5 normalisers must be normalisation measures, and never normalised
///   E6 evaluation form must match the owner's kind, children must be
///      refining sub-factors or impacting product factors, refinement must
///      stay within one factor kind
///   W1 unreferenced entities and measures
///   W2 product factor with impacts but no measures
///   W3 negative impact whose source is measured only by increasing
///      utility functions
///   W4 quality aspect whose entity is not a whole-product entity
std::vector<Finding> validate(const QualityModel& model);

bool has_errors(const std::vector<Finding>& findings);

std::string format_finding(const Finding& finding);

}  // namespace qme

#endif  // QME_VALIDATION_HPP
