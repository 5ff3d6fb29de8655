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

#include "qme/model.hpp"

#include <algorithm>
#include <set>

namespace qme {

const Factor* QualityModel::find_factor(const Id& id) const {
    auto it = factors.find(id);
    return it == factors.end() ? nullptr : &it->second;
}

const Measure* QualityModel::find_measure(const Id& id) const {
    auto it = measures.find(id);
    return it == measures.end() ? nullptr : &it->second;
}

const EvaluationSpec* QualityModel::evaluation_of(const Id& factor_id) const {
    auto it = evaluations.find(factor_id);
    return it == evaluations.end() ? nullptr : &it->second;
}

std::vector<Id> QualityModel::bound_measures() const {
    std::set<Id> ids;
    for (const auto& [owner, eval] : evaluations) {
        for (const auto& binding : eval.bindings) {
            ids.insert(binding.measure);
        }
    }
    return std::vector<Id>(ids.begin(), ids.end());
}

size_t QualityModel::element_count() const {
    size_t count = 0;
    for (const auto& [id, module] : modules) {
        count += module.element_count();
    }
    return count;
}

const char* to_string(FactorKind kind) {
    return kind == FactorKind::QualityAspect ? "quality_aspect" : "product_factor";
}

const char* to_string(Polarity polarity) {
    return polarity == Polarity::Positive ? "positive" : "negative";
}

const char* to_string(ValueKind kind) {
    return kind == ValueKind::FindingsCount ? "findings_count" : "numeric";
}

const char* to_string(InstrumentSource source) {
    return source == InstrumentSource::Tool ? "tool" : "manual";
}

const char* to_string(UtilityShape shape) {
    return shape == UtilityShape::LinearIncreasing ? "linear_increasing"
                                                   : "linear_decreasing";
}

const char* to_string(WeightMode mode) {
    return mode == WeightMode::Explicit ? "explicit" : "ranked";
}

}  // namespace qme
