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

#include "qme/measurement.hpp"

#include <set>

#include "qme/errors.hpp"

namespace qme {

std::optional<double> MeasurementDataset::raw_value(const Id& measure) const {
    auto it = raw.find(measure);
    if (it == raw.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<double> MeasurementDataset::derived_value(const Id& measure) const {
    auto it = derived.find(measure);
    if (it == derived.end()) {
        return std::nullopt;
    }
    return it->second;
}

void MeasurementDataset::merge(const MeasurementDataset& other) {
    for (const auto& [measure, value] : other.raw) {
        auto [it, inserted] = raw.emplace(measure, value);
        if (!inserted && it->second != value) {
            throw DataError("conflicting values for measure " + measure + ": " +
                            std::to_string(it->second) + " vs " + std::to_string(value));
        }
    }
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

void normalise(const QualityModel& model, MeasurementDataset& dataset) {
    std::set<Id> warned;
    auto warn_once = [&](const Id& measure, const std::string& message) {
        if (warned.insert(measure).second) {
            dataset.warnings.push_back(message);
        }
    };

    for (const auto& [owner, eval] : model.evaluations) {
        for (const MeasureBinding& binding : eval.bindings) {
            const std::optional<double> value = dataset.raw_value(binding.measure);
            if (!value) {
                warn_once(binding.measure,
                          "measure " + binding.measure + " has no value; treated as missing");
                continue;
            }
            if (!binding.normaliser) {
                dataset.derived[binding.measure] = *value;
                continue;
            }
            const std::optional<double> denom = dataset.raw_value(*binding.normaliser);
            if (!denom) {
                warn_once(binding.measure, "normaliser " + *binding.normaliser + " for measure " +
                                                binding.measure +
                                                " has no value; measure treated as missing");
                continue;
            }
            if (*denom == 0.0) {
                warn_once(binding.measure, "normaliser " + *binding.normaliser + " for measure " +
                                                binding.measure +
                                                " is zero; measure treated as missing");
                continue;
            }
            dataset.derived[binding.measure] = *value / *denom;
        }
    }
}

}  // namespace qme
