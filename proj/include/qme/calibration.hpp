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

#ifndef QME_CALIBRATION_HPP
#define QME_CALIBRATION_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qme/model.hpp"

namespace qme {

/// Benchmark measurements: one already-normalised value per (system, measure).
/// Absent pairs mean the system was not measured for that measure.
struct BenchmarkCorpus {
    std::set<std::string> systems;
    std::map<Id, std::map<std::string, double>> values;  // measure -> system -> value

    /// Values for one measure in ascending system-id order.
    std::vector<double> values_for(const Id& measure) const;
};

BenchmarkCorpus load_corpus(std::istream& in, const std::string& source_name);
BenchmarkCorpus load_corpus_file(const std::filesystem::path& path);

/// Calibrated utility-threshold pair for one measure.
struct Thresholds {
    double min = 0.0;
    double max = 0.0;
};

/// Intermediate quantities behind one calibration, for the stats report.
/// Quartile fields are empty on the fallback branch (too few active systems).
struct CalibrationStats {
    size_t n = 0;              // benchmark systems with a value
    size_t nonzero_count = 0;  // of those, how many are strictly positive
    std::optional<double> q1;  // first quartile of the strictly-positive values
    std::optional<double> q3;  // third quartile of the strictly-positive values
    std::optional<double> iqr; // interquartile range of the full value vector
    std::optional<double> lower_fence;
    std::optional<double> upper_fence;
    Thresholds thresholds;
    std::string branch;  // "jump" (too few active systems) or "linear"
    std::string note;
};

/// Linearly interpolated quantile of `sorted` (ascending) at q in [0, 1],
/// using the rank p = 1 + (n - 1) * q.
double quantile(const std::vector<double>& sorted, double q);

/// Derives utility thresholds from one measure's benchmark value vector.
/// Fewer than five strictly positive values yields the fixed near-zero step
/// (0, 1e-8); otherwise the thresholds are the outermost values inside the
/// 1.5-IQR fences. Throws DataError when `values` is empty.
CalibrationStats calibrate_thresholds(std::vector<double> values);

struct CalibrationResult {
    QualityModel model;  // copy of the input with thresholds replaced
    std::map<Id, CalibrationStats> stats;
    std::vector<std::string> warnings;
};

/// Recalibrates the utility thresholds of every bound measure that has
/// benchmark data. Measures without data keep their modelled thresholds
/// (warning); corpus measures not bound in the model are reported too.
CalibrationResult calibrate_model(const QualityModel& model, const BenchmarkCorpus& corpus);

nlohmann::json stats_report_to_json(const CalibrationResult& result);

}  // namespace qme

#endif  // QME_CALIBRATION_HPP
