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

#ifndef QME_INGESTION_HPP
#define QME_INGESTION_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qme/measurement.hpp"
#include "qme/model.hpp"

namespace qme {

/// One exported static-analysis result row.
struct FindingRecord {
    std::string tool;
    std::string rule_id;
    std::string path;
    std::optional<long> line;
    std::string message;
};

/// One externally collected metric value (tool metrics or manual measures).
struct MetricRecord {
    Id measure_id;
    double value = 0.0;
};

/// Counts findings into raw measure values by matching (tool, rule_id)
/// against the model's tool instruments. Every tool seen in the stream
/// zero-fills its instrumented measures first, so "tool ran, rule silent"
/// reads as 0 while measures of tools that never ran stay missing.
/// Unmatched findings are tallied into one warning per (tool, rule) pair.
MeasurementDataset ingest_findings(const std::vector<FindingRecord>& findings,
                                   const QualityModel& model);

/// Parses a findings CSV (`tool,rule,path,line,message`). Throws DataError
/// with the row number for malformed records.
std::vector<FindingRecord> read_findings(std::istream& in, const std::string& source_name);
std::vector<FindingRecord> read_findings_file(const std::filesystem::path& path);

/// Stores metric values for known measures. A duplicate measure id is an
/// error; unknown ids are warned and skipped. Findings-count measures must
/// receive non-negative integers.
MeasurementDataset ingest_metrics(const std::vector<MetricRecord>& metrics,
                                  const QualityModel& model);

/// Parses a metrics CSV (`measure_id,value`).
std::vector<MetricRecord> read_metrics(std::istream& in, const std::string& source_name);
std::vector<MetricRecord> read_metrics_file(const std::filesystem::path& path);

}  // namespace qme

#endif  // QME_INGESTION_HPP
