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

#ifndef QME_ADAPTATION_HPP
#define QME_ADAPTATION_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qme/model.hpp"

namespace qme {

/// Declarative tailoring goal. Quality focus entries match factor ids or
/// factor tags; context tags match factor tags and instrument context tags.
/// Artefact types and perspective are descriptive goal metadata.
struct AdaptationGoal {
    std::vector<std::string> artefact_types;
    std::string perspective;
    std::vector<std::string> quality_focus;
    std::vector<std::string> context_tags;
};

AdaptationGoal goal_from_json(const nlohmann::json& doc);
AdaptationGoal load_goal_file(const std::filesystem::path& path);

enum class TaskKind { Review, Add, Modify };
std::string to_string(TaskKind kind);

struct AdaptationTask {
    TaskKind kind = TaskKind::Review;
    std::string target;  // element id or placeholder description
    std::string reason;
    bool done = false;
};

enum class HistoryOrigin { Automatic, Manual };
std::string to_string(HistoryOrigin origin);

struct HistoryEntry {
    std::string timestamp;  // ISO 8601 UTC
    std::string action;     // e.g. "remove-factor", "modify-evaluation"
    Id element;
    std::string justification;
    HistoryOrigin origin = HistoryOrigin::Automatic;
};

struct PretailorResult {
    QualityModel model;
    std::vector<HistoryEntry> history;
    std::vector<AdaptationTask> tasks;  // conflicts and gaps noticed while pruning
};

/// Removes every element the goal marks as out of scope and cascades the
/// removal so the survivor links and validates cleanly: dangling impacts,
/// evaluations of removed factors, unreferenced measures and their
/// instruments, and unreferenced entities all go too. Context tags take
/// precedence over quality focus; a focused element in the wrong context is
/// dropped with a review task. Each removed element yields exactly one
/// history entry whose action starts with "remove-". Throws DataError when
/// the goal matches nothing or would remove the root aspect.
PretailorResult pretailor(const QualityModel& model, const AdaptationGoal& goal,
                          const std::string& timestamp);

/// Scans a linked model for adaptation work: product factors with impacts
/// but no evaluation (add), findings-count measures bound without a
/// normaliser (modify), leaf quality aspects nothing impacts (review), and
/// bound measures without instruments (add).
std::vector<AdaptationTask> generate_tasks(const QualityModel& model);

/// Merges task lists, dropping later duplicates of the same (kind, target).
std::vector<AdaptationTask> merge_tasks(const std::vector<AdaptationTask>& first,
                                        const std::vector<AdaptationTask>& second);

nlohmann::json adaptation_report_to_json(const AdaptationGoal& goal,
                                         const std::vector<AdaptationTask>& tasks,
                                         const std::vector<HistoryEntry>& history);

std::string adaptation_report_to_text(const std::vector<AdaptationTask>& tasks,
                                      const std::vector<HistoryEntry>& history);

}  // namespace qme

#endif  // QME_ADAPTATION_HPP
