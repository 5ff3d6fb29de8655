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

#ifndef QME_MODEL_IO_HPP
#define QME_MODEL_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qme/model.hpp"

namespace qme {

/// Module file parsing options. In strict mode unknown keys are rejected
/// (ModelError); in lenient mode they are collected as warnings.
struct ParseOptions {
    bool strict = true;
};

struct LoadedModule {
    QmModule module;
    std::vector<std::string> warnings;
};

LoadedModule parse_module(const nlohmann::json& doc, const ParseOptions& options);
LoadedModule load_module(const std::filesystem::path& path, const ParseOptions& options);

/// Loads every *.json file in `dir` (sorted by filename).
std::vector<LoadedModule> load_model_dir(const std::filesystem::path& dir,
                                          const ParseOptions& options);

nlohmann::json module_to_json(const QmModule& module);

/// Writes one file per module into `dir` (<module-id>.json), atomically.
void save_model_dir(const QualityModel& model, const std::filesystem::path& dir);

/// Serialises then atomically renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace qme

#endif  // QME_MODEL_IO_HPP
