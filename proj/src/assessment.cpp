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

#include "qme/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qme/errors.hpp"
#include "qme/validation.hpp"
#include "qme/weights.hpp"

namespace qme {

double utility(const UtilityFunction& fn, double value) {
    if (!std::isfinite(value)) {
        throw DataError("utility input must be finite");
    }
    const bool decreasing = fn.shape == UtilityShape::LinearDecreasing;
    if (fn.min == fn.max) {
        const bool at_or_above = value >= fn.min;
        if (decreasing) {
            return at_or_above ? 0.0 : 1.0;
        }
        return at_or_above ? 1.0 : 0.0;
    }
    if (decreasing) {
        if (value <= fn.min) return 1.0;
        if (value >= fn.max) return 0.0;
        return (fn.max - value) / (fn.max - fn.min);
    }
    if (value <= fn.min) return 0.0;
    if (value >= fn.max) return 1.0;
    return (value - fn.min) / (fn.max - fn.min);
}

UtilityInterval aggregate(const std::vector<std::pair<UtilityInterval, double>>& children) {
    double weight_sum = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& [interval, weight] : children) {
        weight_sum += weight;
        lo += weight * interval.lo;
        hi += weight * interval.hi;
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
        throw ModelError("weight sum violation: child weights sum to " +
                         std::to_string(weight_sum) + ", expected 1");
    }
    UtilityInterval out;
    out.lo = std::clamp(lo, 0.0, 1.0);
    out.hi = std::clamp(hi, 0.0, 1.0);
    return out;
}

GradeResult interpret(double u) {
    GradeResult g;
    if (u >= 0.98) {
        g.band = 1;
    } else if (u >= 0.96) {
        g.band = 2;
    } else if (u >= 0.94) {
        g.band = 3;
    } else if (u >= 0.92) {
        g.band = 4;
    } else if (u >= 0.90) {
        g.band = 5;
    } else {
        g.band = 6;
    }
    g.continuous = std::clamp(1.0 + (0.98 - u) / 0.02, 1.0, 6.0);
    return g;
}

std::pair<GradeResult, GradeResult> interpret(const UtilityInterval& interval) {
    return {interpret(interval.lo), interpret(interval.hi)};
}

std::string to_string(ChildKind kind) {
    return kind == ChildKind::Factor ? "factor" : "measure";
}

namespace {

/// Bottom-up evaluator with memoisation. The evaluation child graph is
/// acyclic for validated models; the in-progress set guards against any
/// cycle that validation might not model yet.
class Assessor {
   public:
    Assessor(const QualityModel& model, const MeasurementDataset& dataset,
             AssessmentResult& result)
        : model_(model), dataset_(dataset), result_(result) {}

    void run() {
        evaluate(model_.root_aspect);
        result_.factors.at(model_.root_aspect).weight_used = 1.0;
    }

   private:
    const UtilityInterval& evaluate(const Id& factor_id) {
        auto done = result_.factors.find(factor_id);
        if (done != result_.factors.end()) {
            return done->second.utility;
        }
        if (!in_progress_.insert(factor_id).second) {
            throw ModelError("evaluation cycle involving " + factor_id);
        }

        FactorAssessment fa;
        fa.id = factor_id;
        const Factor* factor = model_.find_factor(factor_id);
        fa.name = factor != nullptr ? factor->name : factor_id;

        const EvaluationSpec* eval = model_.evaluation_of(factor_id);
        if (eval == nullptr) {
            result_.warnings.push_back("factor " + factor_id +
                                       " has no evaluation; assuming full uncertainty");
            fa.utility = UtilityInterval::full();
        } else if (eval->form == EvaluationForm::Measures) {
            fa.children = measure_children(*eval);
            fa.utility = aggregate_children(fa.children);
        } else {
            // Recurse first so child intervals exist, then aggregate.
            const std::vector<double> weights =
                resolve_weights(eval->weights, eval->children.size());
            for (size_t i = 0; i < eval->children.size(); ++i) {
                const Id& child_id = eval->children[i];
                const UtilityInterval interval = evaluate(child_id);
                ChildContribution c;
                c.id = child_id;
                const Factor* child = model_.find_factor(child_id);
                c.name = child != nullptr ? child->name : child_id;
                c.kind = ChildKind::Factor;
                c.weight = weights[i];
                c.interval = interval;
                fa.children.push_back(std::move(c));

                FactorAssessment& child_fa = result_.factors.at(child_id);
                if (claimed_.insert(child_id).second) {
                    child_fa.weight_used = weights[i];
                }
            }
            fa.utility = aggregate_children(fa.children);
        }

        auto [worst, best] = interpret(fa.utility);
        fa.grade_worst = worst;
        fa.grade_best = best;

        in_progress_.erase(factor_id);
        auto [it, inserted] = result_.factors.emplace(factor_id, std::move(fa));
        return it->second.utility;
    }

    std::vector<ChildContribution> measure_children(const EvaluationSpec& eval) {
        const std::vector<double> weights = resolve_weights(eval.weights, eval.bindings.size());
        std::vector<ChildContribution> out;
        out.reserve(eval.bindings.size());
        for (size_t i = 0; i < eval.bindings.size(); ++i) {
            const MeasureBinding& binding = eval.bindings[i];
            ChildContribution c;
            c.id = binding.measure;
            const Measure* measure = model_.find_measure(binding.measure);
            c.name = measure != nullptr ? measure->name : binding.measure;
            c.kind = ChildKind::Measure;
            c.weight = weights[i];
            c.value = dataset_.derived_value(binding.measure);
            c.coverage = binding.coverage;
            c.interval = c.value ? UtilityInterval::point(utility(binding.utility, *c.value))
                                 : UtilityInterval::full();
            out.push_back(std::move(c));
        }
        return out;
    }

    static UtilityInterval aggregate_children(const std::vector<ChildContribution>& children) {
        std::vector<std::pair<UtilityInterval, double>> weighted;
        weighted.reserve(children.size());
        for (const ChildContribution& c : children) {
            weighted.emplace_back(c.interval, c.weight);
        }
        return aggregate(weighted);
    }

    const QualityModel& model_;
    const MeasurementDataset& dataset_;
    AssessmentResult& result_;
    std::set<Id> in_progress_;
    std::set<Id> claimed_;  // factors whose weight_used is already assigned
};

}  // namespace

AssessmentResult assess(const QualityModel& model, MeasurementDataset dataset) {
    const std::vector<Finding> findings = validate(model);
    if (has_errors(findings)) {
        std::string message = "model failed validation:";
        for (const Finding& f : findings) {
            if (f.level == FindingLevel::Error) {
                message += "\n  " + format_finding(f);
            }
        }
        throw ModelError(message);
    }

    normalise(model, dataset);

    AssessmentResult result;
    result.system_id = dataset.system_id;
    result.root = model.root_aspect;
    result.warnings = dataset.warnings;

    Assessor assessor(model, dataset, result);
    assessor.run();
    return result;
}

}  // namespace qme
