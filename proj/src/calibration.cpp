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

#include "qme/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qme/csv.hpp"
#include "qme/errors.hpp"

namespace qme {

std::vector<double> BenchmarkCorpus::values_for(const Id& measure) const {
    std::vector<double> out;
    auto it = values.find(measure);
    if (it == values.end()) {
        return out;
    }
    out.reserve(it->second.size());
    for (const auto& [system, value] : it->second) {
        out.push_back(value);
    }
    return out;
}

namespace {

double parse_value(const std::string& text, const std::string& source, size_t line) {
    size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw DataError(source + ":" + std::to_string(line) + ": invalid number \"" + text +
                        "\"");
    }
    if (consumed != text.size()) {
        throw DataError(source + ":" + std::to_string(line) + ": invalid number \"" + text +
                        "\"");
    }
    if (!std::isfinite(value)) {
        throw DataError(source + ":" + std::to_string(line) + ": non-finite value \"" + text +
                        "\"");
    }
    return value;
}

}  // namespace

BenchmarkCorpus load_corpus(std::istream& in, const std::string& source_name) {
    csv::Reader reader(in);
    auto header = reader.next();
    const std::vector<std::string> expected = {"system_id", "measure_id", "value"};
    if (!header || *header != expected) {
        throw DataError(source_name + ": expected header \"system_id,measure_id,value\"");
    }
    BenchmarkCorpus corpus;
    while (auto row = reader.next()) {
        const size_t line = reader.record_line();
        if (row->size() != 3) {
            throw DataError(source_name + ":" + std::to_string(line) + ": expected 3 fields, got " +
                            std::to_string(row->size()));
        }
        const std::string& system = (*row)[0];
        const std::string& measure = (*row)[1];
        if (system.empty() || measure.empty()) {
            throw DataError(source_name + ":" + std::to_string(line) +
                            ": system_id and measure_id must be non-empty");
        }
        const double value = parse_value((*row)[2], source_name, line);
        auto [it, inserted] = corpus.values[measure].emplace(system, value);
        if (!inserted) {
            throw DataError(source_name + ":" + std::to_string(line) + ": duplicate value for (" +
                            system + ", " + measure + ")");
        }
        corpus.systems.insert(system);
    }
    return corpus;
}

BenchmarkCorpus load_corpus_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    return load_corpus(in, path.string());
}

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        throw DataError("quantile of an empty vector is undefined");
    }
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double p = 1.0 + (static_cast<double>(sorted.size()) - 1.0) * q;
    const double floor_p = std::floor(p);
    const size_t lo = static_cast<size_t>(floor_p) - 1;  // to 0-based
    const double frac = p - floor_p;
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

CalibrationStats calibrate_thresholds(std::vector<double> values) {
    if (values.empty()) {
        throw DataError("cannot calibrate thresholds from an empty value vector");
    }
    std::sort(values.begin(), values.end());

    CalibrationStats stats;
    stats.n = values.size();

    std::vector<double> positive;
    for (double v : values) {
        if (v > 0.0) {
            positive.push_back(v);
        }
    }
    stats.nonzero_count = positive.size();

    if (positive.size() < 5) {
        // Too few systems exhibit the phenomenon at all: fall back to a jump
        // function that penalises any occurrence. The exact constants matter
        // downstream, so they are assigned verbatim rather than computed.
        stats.thresholds.min = 0.0;
        stats.thresholds.max = 1e-8;
        stats.branch = "jump";
        stats.note = "fewer than 5 benchmark systems have a positive value; "
                     "thresholds fixed at (0, 1e-8)";
        return stats;
    }

    // Quartiles come from the strictly-positive subvector while the
    // interquartile range spans the full vector (zeros included); mixing the
    // two bases is intentional and keeps zero-heavy measures from collapsing
    // the fences onto the positive cluster.
    const double q1 = quantile(positive, 0.25);
    const double q3 = quantile(positive, 0.75);
    const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
    const double lower_fence = q1 - 1.5 * iqr;
    const double upper_fence = q3 + 1.5 * iqr;

    stats.q1 = q1;
    stats.q3 = q3;
    stats.iqr = iqr;
    stats.lower_fence = lower_fence;
    stats.upper_fence = upper_fence;

    // Thresholds are the outermost observed values inside the fences, so they
    // are always actual benchmark values rather than synthetic fence points.
    double min_inside = values.back();
    double max_inside = values.front();
    for (double v : values) {
        if (v >= lower_fence) {
            min_inside = std::min(min_inside, v);
        }
        if (v <= upper_fence) {
            max_inside = std::max(max_inside, v);
        }
    }
    stats.thresholds.min = min_inside;
    stats.thresholds.max = max_inside;
    stats.branch = "linear";
    stats.note = "quartiles over strictly-positive values, interquartile range over all values";
    return stats;
}

CalibrationResult calibrate_model(const QualityModel& model, const BenchmarkCorpus& corpus) {
    CalibrationResult result;
    result.model = model;

    const std::vector<Id> bound_list = model.bound_measures();
    const std::set<Id> bound(bound_list.begin(), bound_list.end());
    for (const Id& measure : bound_list) {
        const std::vector<double> values = corpus.values_for(measure);
        if (values.empty()) {
            result.warnings.push_back("measure " + measure +
                                      " has no benchmark data; modelled thresholds kept");
            continue;
        }
        CalibrationStats stats = calibrate_thresholds(values);
        for (auto& [owner, eval] : result.model.evaluations) {
            for (MeasureBinding& binding : eval.bindings) {
                if (binding.measure == measure) {
                    binding.utility.min = stats.thresholds.min;
                    binding.utility.max = stats.thresholds.max;
                }
            }
        }
        result.stats.emplace(measure, std::move(stats));
    }

    for (const auto& [measure, per_system] : corpus.values) {
        if (bound.count(measure) == 0) {
            result.warnings.push_back("corpus measure " + measure +
                                      " is not bound in the model; ignored");
        }
    }
    return result;
}

nlohmann::json stats_report_to_json(const CalibrationResult& result) {
    nlohmann::json measures = nlohmann::json::object();
    for (const auto& [measure, stats] : result.stats) {
        nlohmann::json j;
        j["n"] = stats.n;
        j["nonzero_count"] = stats.nonzero_count;
        j["q1"] = stats.q1 ? nlohmann::json(*stats.q1) : nlohmann::json(nullptr);
        j["q3"] = stats.q3 ? nlohmann::json(*stats.q3) : nlohmann::json(nullptr);
        j["iqr"] = stats.iqr ? nlohmann::json(*stats.iqr) : nlohmann::json(nullptr);
        j["lower_fence"] =
            stats.lower_fence ? nlohmann::json(*stats.lower_fence) : nlohmann::json(nullptr);
        j["upper_fence"] =
            stats.upper_fence ? nlohmann::json(*stats.upper_fence) : nlohmann::json(nullptr);
        j["min"] = stats.thresholds.min;
        j["max"] = stats.thresholds.max;
        j["branch"] = stats.branch;
        j["note"] = stats.note;
        measures[measure] = std::move(j);
    }
    nlohmann::json report;
    report["format"] = "qme-calibration/1";
    report["measures"] = std::move(measures);
    report["warnings"] = result.warnings;
    return report;
}

}  // namespace qme
