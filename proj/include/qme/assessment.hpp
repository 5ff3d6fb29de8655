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

#ifndef QME_ASSESSMENT_HPP
#define QME_ASSESSMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qme/measurement.hpp"
#include "qme/model.hpp"

namespace qme {

/// Closed utility interval in [0, 1]. Point values have lo == hi; missing
/// leaf data widens to the full interval and propagates upward.
struct UtilityInterval {
    double lo = 0.0;
    double hi = 0.0;

    static UtilityInterval point(double u) { return {u, u}; }
    static UtilityInterval full() { return {0.0, 1.0}; }
    bool is_point() const { return lo == hi; }
};

/// School-grade interpretation of one utility value. `band` follows the
/// 2%-band table (1 best .. 6 worst); `continuous` is its clamped
/// piecewise-linear refinement so close utilities stay distinguishable.
struct GradeResult {
    double continuous = 6.0;
    int band = 6;
};

/// Evaluates a clamped linear utility function. With min == max the function
/// degenerates to a step at that threshold (values at or above it map to 0
/// for decreasing shapes, 1 for increasing ones). Throws DataError for
/// non-finite input.
double utility(const UtilityFunction& fn, double value);

/// Weighted-sum aggregation over child intervals. Weights must sum to
/// 1 +/- 1e-6 (ModelError otherwise); endpoints aggregate independently,
/// which is exact because the weighted sum is monotone in every child.
UtilityInterval aggregate(const std::vector<std::pair<UtilityInterval, double>>& children);

GradeResult interpret(double u);

/// Worst-case (lo endpoint) and best-case (hi endpoint) grades.
std::pair<GradeResult, GradeResult> interpret(const UtilityInterval& interval);

enum class ChildKind { Factor, Measure };
std::string to_string(ChildKind kind);

/// One aggregation input as recorded in the assessment trace.
struct ChildContribution {
    Id id;
    std::string name;
    ChildKind kind = ChildKind::Factor;
    double weight = 0.0;
    UtilityInterval interval;
    std::optional<double> value;     // normalised measure value (measure children)
    std::optional<double> coverage;  // binding coverage (measure children)
};

struct FactorAssessment {
    Id id;
    std::string name;
    UtilityInterval utility;
    GradeResult grade_worst;  // interpretation of the lo endpoint
    GradeResult grade_best;   // interpretation of the hi endpoint
    double weight_used = 0.0; // weight in the first aggregating parent (root: 1)
    std::vector<ChildContribution> children;
};

struct AssessmentResult {
    std::string system_id;
    Id root;
    std::map<Id, FactorAssessment> factors;  // every factor reachable from root
    std::vector<std::string> warnings;

    const FactorAssessment& root_assessment() const { return factors.at(root); }
};

/// Runs the full assessment: validates the model, normalises the dataset,
/// evaluates measure utilities, and aggregates bottom-up to the root aspect.
/// Factors without an evaluation contribute the full-uncertainty interval
/// (with a warning). Throws ModelError when validation reports errors.
AssessmentResult assess(const QualityModel& model, MeasurementDataset dataset);

}  // namespace qme

#endif  // QME_ASSESSMENT_HPP
