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

#ifndef QME_MEASUREMENT_HPP
#define QME_MEASUREMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qme/model.hpp"

namespace qme {

/// Raw and normalised measure values for one assessed system. A measure that
/// is absent from `raw` is missing, which downstream turns into the full
/// uncertainty interval rather than a default value.
struct MeasurementDataset {
    std::string system_id;
    std::map<Id, double> raw;
    std::map<Id, double> derived;  // filled by normalise()
    std::vector<std::string> warnings;

    std::optional<double> raw_value(const Id& measure) const;
    std::optional<double> derived_value(const Id& measure) const;

    /// Folds `other` into this dataset. The same measure appearing in both
    /// with different values is a conflict (DataError); equal values merge.
    void merge(const MeasurementDataset& other);
};

/// Divides every bound measure by its binding's normalisation measure and
/// stores the result in `derived`. Measures bound without a normaliser pass
/// through unchanged. A missing or zero denominator leaves the measure
/// missing and records a warning (one per distinct measure).
void normalise(const QualityModel& model, MeasurementDataset& dataset);

}  // namespace qme

#endif  // QME_MEASUREMENT_HPP
