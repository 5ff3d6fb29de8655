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

#include "qme/ingestion.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "qme/csv.hpp"
#include "qme/errors.hpp"

namespace qme {
namespace {

[[noreturn]] void malformed(const std::string& source, size_t line, const std::string& what) {
    throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& text, const std::string& source, size_t line) {
    size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        malformed(source, line, "invalid number \"" + text + "\"");
    }
    if (consumed != text.size()) {
        malformed(source, line, "invalid number \"" + text + "\"");
    }
    if (!std::isfinite(value)) {
        malformed(source, line, "non-finite value \"" + text + "\"");
    }
    return value;
}

}  // namespace

std::vector<FindingRecord> read_findings(std::istream& in, const std::string& source_name) {
    csv::Reader reader(in);
    auto header = reader.next();
    const std::vector<std::string> expected = {"tool", "rule", "path", "line", "message"};
    if (!header || *header != expected) {
        throw DataError(source_name + ": expected header \"tool,rule,path,line,message\"");
    }
    std::vector<FindingRecord> out;
    while (auto row = reader.next()) {
        const size_t line_no = reader.record_line();
        if (row->size() != 5) {
            malformed(source_name, line_no,
                      "expected 5 fields, got " + std::to_string(row->size()));
        }
        FindingRecord rec;
        rec.tool = (*row)[0];
        rec.rule_id = (*row)[1];
        rec.path = (*row)[2];
        rec.message = (*row)[4];
        if (rec.tool.empty() || rec.rule_id.empty()) {
            malformed(source_name, line_no, "tool and rule must be non-empty");
        }
        const std::string& line_text = (*row)[3];
        if (!line_text.empty()) {
            size_t consumed = 0;
            long value = 0;
            try {
                value = std::stol(line_text, &consumed);
            } catch (const std::exception&) {
                malformed(source_name, line_no, "invalid line number \"" + line_text + "\"");
            }
            if (consumed != line_text.size() || value < 0) {
                malformed(source_name, line_no, "invalid line number \"" + line_text + "\"");
            }
            rec.line = value;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<FindingRecord> read_findings_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    return read_findings(in, path.string());
}

MeasurementDataset ingest_findings(const std::vector<FindingRecord>& findings,
                                   const QualityModel& model) {
    // (tool, rule) -> measures incremented by a matching finding.
    std::map<std::pair<std::string, std::string>, std::set<Id>> rule_index;
    // tool -> measures that read 0 once the tool is known to have run.
    std::map<std::string, std::set<Id>> tool_measures;
    for (const auto& [id, instrument] : model.instruments) {
        if (instrument.source != InstrumentSource::Tool || instrument.rule_id.empty()) {
            continue;
        }
        rule_index[{instrument.tool_name, instrument.rule_id}].insert(instrument.measure);
        tool_measures[instrument.tool_name].insert(instrument.measure);
    }

    MeasurementDataset dataset;
    std::set<std::string> tools_seen;
    std::map<std::pair<std::string, std::string>, size_t> unmatched;
    for (const FindingRecord& finding : findings) {
        tools_seen.insert(finding.tool);
        auto it = rule_index.find({finding.tool, finding.rule_id});
        if (it == rule_index.end()) {
            ++unmatched[{finding.tool, finding.rule_id}];
            continue;
        }
        for (const Id& measure : it->second) {
            dataset.raw[measure] += 1.0;
        }
    }

    for (const std::string& tool : tools_seen) {
        auto it = tool_measures.find(tool);
        if (it == tool_measures.end()) {
            continue;
        }
        for (const Id& measure : it->second) {
            dataset.raw.emplace(measure, 0.0);  // no-op when findings counted
        }
    }

    for (const auto& [key, count] : unmatched) {
        dataset.warnings.push_back(std::to_string(count) + " finding(s) from tool \"" +
                                   key.first + "\" rule \"" + key.second +
                                   "\" match no instrument");
    }
    return dataset;
}

std::vector<MetricRecord> read_metrics(std::istream& in, const std::string& source_name) {
    csv::Reader reader(in);
    auto header = reader.next();
    const std::vector<std::string> expected = {"measure_id", "value"};
    if (!header || *header != expected) {
        throw DataError(source_name + ": expected header \"measure_id,value\"");
    }
    std::vector<MetricRecord> out;
    while (auto row = reader.next()) {
        const size_t line_no = reader.record_line();
        if (row->size() != 2) {
            malformed(source_name, line_no,
                      "expected 2 fields, got " + std::to_string(row->size()));
        }
        MetricRecord rec;
        rec.measure_id = (*row)[0];
        if (rec.measure_id.empty()) {
            malformed(source_name, line_no, "measure_id must be non-empty");
        }
        rec.value = parse_double((*row)[1], source_name, line_no);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<MetricRecord> read_metrics_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    return read_metrics(in, path.string());
}

MeasurementDataset ingest_metrics(const std::vector<MetricRecord>& metrics,
                                  const QualityModel& model) {
    MeasurementDataset dataset;
    for (const MetricRecord& metric : metrics) {
        const Measure* measure = model.find_measure(metric.measure_id);
        if (measure == nullptr) {
            dataset.warnings.push_back("metric for unknown measure " + metric.measure_id +
                                       " ignored");
            continue;
        }
        if (measure->value_kind == ValueKind::FindingsCount) {
            if (metric.value < 0.0 || metric.value != std::floor(metric.value)) {
                throw DataError("measure " + metric.measure_id +
                                " counts findings and needs a non-negative integer, got " +
                                std::to_string(metric.value));
            }
        }
        auto [it, inserted] = dataset.raw.emplace(metric.measure_id, metric.value);
        if (!inserted) {
            throw DataError("duplicate value for measure " + metric.measure_id);
        }
    }
    return dataset;
}

}  // namespace qme
