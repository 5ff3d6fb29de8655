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

#include "qme/result_io.hpp"

#include "qme/errors.hpp"
#include "qme/model_io.hpp"

namespace qme {
namespace {

using nlohmann::json;

constexpr const char* kFormatTag = "qme-result/1";

json grade_to_json(const GradeResult& grade) {
    return {{"continuous", grade.continuous}, {"band", grade.band}};
}

GradeResult grade_from_json(const json& j) {
    GradeResult g;
    g.continuous = j.at("continuous").get<double>();
    g.band = j.at("band").get<int>();
    return g;
}

json interval_to_json(const UtilityInterval& interval) {
    return {{"lo", interval.lo}, {"hi", interval.hi}};
}

UtilityInterval interval_from_json(const json& j) {
    UtilityInterval interval;
    interval.lo = j.at("lo").get<double>();
    interval.hi = j.at("hi").get<double>();
    return interval;
}

ChildKind child_kind_from_string(const std::string& s) {
    if (s == "factor") return ChildKind::Factor;
    if (s == "measure") return ChildKind::Measure;
    throw DataError("unknown child kind \"" + s + "\" in result file");
}

}  // namespace

json result_to_json(const AssessmentResult& result) {
    json factors = json::array();
    for (const auto& [id, fa] : result.factors) {
        json children = json::array();
        for (const ChildContribution& c : fa.children) {
            json child;
            child["id"] = c.id;
            child["name"] = c.name;
            child["kind"] = to_string(c.kind);
            child["weight"] = c.weight;
            child["interval"] = interval_to_json(c.interval);
            if (c.value) child["value"] = *c.value;
            if (c.coverage) child["coverage"] = *c.coverage;
            children.push_back(std::move(child));
        }
        json factor;
        factor["id"] = fa.id;
        factor["name"] = fa.name;
        factor["utility"] = interval_to_json(fa.utility);
        factor["grade"] = {{"worst", grade_to_json(fa.grade_worst)},
                           {"best", grade_to_json(fa.grade_best)}};
        factor["weight_used"] = fa.weight_used;
        factor["children"] = std::move(children);
        factors.push_back(std::move(factor));
    }

    const FactorAssessment& root = result.root_assessment();
    json doc;
    doc["format"] = kFormatTag;
    doc["system_id"] = result.system_id;
    doc["root"] = result.root;
    doc["root_grade"] = {{"worst", grade_to_json(root.grade_worst)},
                         {"best", grade_to_json(root.grade_best)}};
    doc["factors"] = std::move(factors);
    doc["warnings"] = result.warnings;
    return doc;
}

AssessmentResult result_from_json(const json& doc) {
    try {
        if (!doc.is_object() || doc.value("format", "") != kFormatTag) {
            throw DataError(std::string("result file must declare format \"") + kFormatTag +
                            "\"");
        }
        AssessmentResult result;
        result.system_id = doc.at("system_id").get<std::string>();
        result.root = doc.at("root").get<std::string>();
        for (const json& factor : doc.at("factors")) {
            FactorAssessment fa;
            fa.id = factor.at("id").get<std::string>();
            fa.name = factor.at("name").get<std::string>();
            fa.utility = interval_from_json(factor.at("utility"));
            fa.grade_worst = grade_from_json(factor.at("grade").at("worst"));
            fa.grade_best = grade_from_json(factor.at("grade").at("best"));
            fa.weight_used = factor.at("weight_used").get<double>();
            for (const json& child : factor.at("children")) {
                ChildContribution c;
                c.id = child.at("id").get<std::string>();
                c.name = child.at("name").get<std::string>();
                c.kind = child_kind_from_string(child.at("kind").get<std::string>());
                c.weight = child.at("weight").get<double>();
                c.interval = interval_from_json(child.at("interval"));
                if (child.contains("value") && !child.at("value").is_null()) {
                    c.value = child.at("value").get<double>();
                }
                if (child.contains("coverage") && !child.at("coverage").is_null()) {
                    c.coverage = child.at("coverage").get<double>();
                }
                fa.children.push_back(std::move(c));
            }
            result.factors.emplace(fa.id, std::move(fa));
        }
        if (doc.contains("warnings")) {
            result.warnings = doc.at("warnings").get<std::vector<std::string>>();
        }
        if (result.factors.find(result.root) == result.factors.end()) {
            throw DataError("result file has no entry for its root factor " + result.root);
        }
        return result;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed result file: ") + e.what());
    }
}

void write_result_file(const AssessmentResult& result, const std::filesystem::path& path) {
    write_file_atomic(path, result_to_json(result).dump(2) + "\n");
}

AssessmentResult read_result_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": invalid JSON: " + e.what());
    }
    try {
        return result_from_json(doc);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace qme
