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

#ifndef QME_RESULT_IO_HPP
#define QME_RESULT_IO_HPP

#include <filesystem>

#include <nlohmann/json.hpp>

#include "qme/assessment.hpp"

namespace qme {

/// Serialises an assessment to the versioned "qme-result/1" document.
/// Factors are emitted in ascending id order so repeated runs are
/// byte-identical.
nlohmann::json result_to_json(const AssessmentResult& result);

AssessmentResult result_from_json(const nlohmann::json& doc);

void write_result_file(const AssessmentResult& result, const std::filesystem::path& path);
AssessmentResult read_result_file(const std::filesystem::path& path);

}  // namespace qme

#endif  // QME_RESULT_IO_HPP
