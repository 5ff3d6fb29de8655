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

#include "qme/adaptation.hpp"

#include <algorithm>
#include <set>

#include "qme/errors.hpp"
#include "qme/linker.hpp"
#include "qme/model_io.hpp"
#include "qme/validation.hpp"

namespace qme {

namespace {

using nlohmann::json;

bool contains(const std::vector<std::string>& haystack, const std::string& needle) {
    return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

bool intersects(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (const std::string& x : a) {
        if (contains(b, x)) {
            return true;
        }
    }
    return false;
}

std::vector<std::string> string_array(const json& doc, const std::string& key) {
    std::vector<std::string> out;
    if (!doc.contains(key) || doc.at(key).is_null()) {
        return out;
    }
    const json& v = doc.at(key);
    if (!v.is_array()) {
        throw DataError("goal." + key + ": expected an array of strings");
    }
    for (const json& item : v) {
        if (!item.is_string()) {
            throw DataError("goal." + key + ": expected an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

}  // namespace

AdaptationGoal goal_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw DataError("goal file must contain a JSON object");
    }
    static const std::set<std::string> known = {"artefact_types", "perspective", "quality_focus",
                                               "context_tags"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (known.count(it.key()) == 0) {
            throw DataError("goal file: unknown key \"" + it.key() + "\"");
        }
    }
    AdaptationGoal goal;
    goal.artefact_types = string_array(doc, "artefact_types");
    if (doc.contains("perspective") && !doc.at("perspective").is_null()) {
        if (!doc.at("perspective").is_string()) {
            throw DataError("goal.perspective: expected a string");
        }
        goal.perspective = doc.at("perspective").get<std::string>();
    }
    goal.quality_focus = string_array(doc, "quality_focus");
    goal.context_tags = string_array(doc, "context_tags");
    if (goal.quality_focus.empty() && goal.context_tags.empty()) {
        throw DataError("goal must set at least one of quality_focus or context_tags");
    }
    return goal;
}

AdaptationGoal load_goal_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": invalid JSON: " + e.what());
    }
    try {
        return goal_from_json(doc);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::Review:
            return "review";
        case TaskKind::Add:
            return "add";
        case TaskKind::Modify:
            return "modify";
    }
    return "review";
}

std::string to_string(HistoryOrigin origin) {
    return origin == HistoryOrigin::Automatic ? "automatic" : "manual";
}

namespace {

/// Carries the mutable state of one pretailoring run.
class Pretailorer {
   public:
    Pretailorer(const QualityModel& model, const AdaptationGoal& goal, std::string timestamp)
        : model_(model), goal_(goal), timestamp_(std::move(timestamp)) {}

    PretailorResult run() {
        decide_factors();
        if (removed_factors_.count(model_.root_aspect) != 0) {
            throw DataError("adaptation goal would remove the root aspect " + model_.root_aspect);
        }
        rebuild_modules();
        link_survivor();
        return std::move(result_);
    }

   private:
    void log_removal(const std::string& kind, const Id& element, const std::string& why) {
        result_.history.push_back(
            {timestamp_, "remove-" + kind, element, why, HistoryOrigin::Automatic});
    }

    void log_modification(const Id& element, const std::string& why) {
        result_.history.push_back(
            {timestamp_, "modify-evaluation", element, why, HistoryOrigin::Automatic});
    }

    bool matches_focus(const Factor& factor) const {
        return contains(goal_.quality_focus, factor.id) ||
               intersects(factor.tags, goal_.quality_focus);
    }

    /// True when a tagged element falls outside the goal context. Untagged
    /// elements always fit.
    bool fails_context(const std::vector<std::string>& tags) const {
        return !goal_.context_tags.empty() && !tags.empty() &&
               !intersects(tags, goal_.context_tags);
    }

    void decide_factors() {
        // Context pass: tagged factors in the wrong context go first,
        // regardless of focus (a focused one earns a review task).
        for (const auto& [id, factor] : model_.factors) {
            if (fails_context(factor.tags)) {
                removed_factors_.insert(id);
                log_removal("factor", id, "tags outside the goal context");
                if (!goal_.quality_focus.empty() && matches_focus(factor)) {
                    result_.tasks.push_back(
                        {TaskKind::Review, id,
                         "matches the quality focus but not the goal context; removed", false});
                }
            }
        }

        if (goal_.quality_focus.empty()) {
            return;
        }

        // Focus pass over the factors that survived the context pass. The
        // core set starts with the direct matches and spreads downward: to
        // refinement descendants and to product factors supplying evidence
        // for core aspects. Refinement ancestors of anything kept survive
        // too, but only as skeleton up to the root -- being an ancestor does
        // not rescue its other children.
        std::set<Id> core;
        bool aspect_in_seed = false;
        for (const auto& [id, factor] : model_.factors) {
            if (removed_factors_.count(id) != 0) {
                continue;
            }
            if (matches_focus(factor)) {
                core.insert(id);
                if (factor.kind == FactorKind::QualityAspect) {
                    aspect_in_seed = true;
                }
            }
        }
        if (core.empty()) {
            throw DataError("adaptation goal quality_focus matches no factor");
        }
        std::set<Id> kept(core);

        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [id, factor] : model_.factors) {
                if (removed_factors_.count(id) != 0) {
                    continue;
                }
                for (const Id& parent : factor.refines) {
                    if (kept.count(id) != 0 && removed_factors_.count(parent) == 0) {
                        changed |= kept.insert(parent).second;  // skeleton ancestor
                    } else if (core.count(parent) != 0 && core.count(id) == 0) {
                        changed |= core.insert(id).second;  // descendant of the core
                        kept.insert(id);
                    }
                }
                if (core.count(id) != 0) {
                    continue;
                }
                if (factor.kind == FactorKind::ProductFactor) {
                    for (size_t idx : impact_indices(model_.impacts_of, id)) {
                        if (core.count(model_.impacts[idx].target) != 0) {
                            core.insert(id);
                            kept.insert(id);
                            changed = true;
                            break;
                        }
                    }
                } else if (!aspect_in_seed) {
                    // Focus named only product factors: aspects survive as
                    // skeleton when a core product factor impacts them.
                    for (size_t idx : impact_indices(model_.impacts_on, id)) {
                        if (core.count(model_.impacts[idx].source) != 0) {
                            changed |= kept.insert(id).second;
                            break;
                        }
                    }
                }
            }
        }

        for (const auto& [id, factor] : model_.factors) {
            if (removed_factors_.count(id) == 0 && kept.count(id) == 0) {
                removed_factors_.insert(id);
                log_removal("factor", id, "outside the quality focus");
            }
        }
    }

    static std::vector<size_t> impact_indices(const std::map<Id, std::vector<size_t>>& index,
                                              const Id& id) {
        auto it = index.find(id);
        return it == index.end() ? std::vector<size_t>{} : it->second;
    }

    /// Entities reachable from factor entity references (optionally only
    /// from factors surviving this run) via is_a / part_of ancestors.
    std::set<Id> entity_closure(bool surviving_only) const {
        std::set<Id> reached;
        std::vector<Id> stack;
        for (const auto& [id, factor] : model_.factors) {
            if (surviving_only && removed_factors_.count(id) != 0) {
                continue;
            }
            if (!factor.entity.empty()) {
                stack.push_back(factor.entity);
            }
        }
        while (!stack.empty()) {
            const Id current = stack.back();
            stack.pop_back();
            if (!reached.insert(current).second) {
                continue;
            }
            auto it = model_.entities.find(current);
            if (it == model_.entities.end()) {
                continue;
            }
            for (const Id& parent : it->second.is_a) {
                stack.push_back(parent);
            }
            for (const Id& parent : it->second.part_of) {
                stack.push_back(parent);
            }
        }
        return reached;
    }

    void rebuild_modules() {
        // First decide instruments (context) and collect survivors' measure
        // references, then measures, then rewrite every module in id order so
        // the history is deterministic.
        std::set<Id> removed_instruments;
        for (const auto& [id, instrument] : model_.instruments) {
            std::vector<std::string> tags;
            if (!instrument.context_tag.empty()) {
                tags.push_back(instrument.context_tag);
            }
            if (fails_context(tags)) {
                removed_instruments.insert(id);
            }
        }

        // A measure is cascade-removed only when this run deleted its last
        // referencing evaluation; pre-existing orphans stay untouched so an
        // all-matching goal is a strict no-op.
        std::set<Id> referenced_before;
        std::set<Id> referenced;
        for (const auto& [owner, eval] : model_.evaluations) {
            for (const MeasureBinding& binding : eval.bindings) {
                referenced_before.insert(binding.measure);
                if (binding.normaliser) {
                    referenced_before.insert(*binding.normaliser);
                }
                if (removed_factors_.count(owner) != 0) {
                    continue;
                }
                referenced.insert(binding.measure);
                if (binding.normaliser) {
                    referenced.insert(*binding.normaliser);
                }
            }
        }
        std::set<Id> removed_measures;
        for (const Id& id : referenced_before) {
            if (referenced.count(id) == 0) {
                removed_measures.insert(id);
            }
        }

        // An instrument of a removed measure disappears with it.
        for (const auto& [id, instrument] : model_.instruments) {
            if (removed_measures.count(instrument.measure) != 0) {
                removed_instruments.insert(id);
            }
        }

        // Entities survive through references from kept factors plus their
        // is_a / part_of ancestors; like measures, only entities that lost
        // every referencing factor in this run are removed.
        const std::set<Id> entities_before = entity_closure(/*surviving_only=*/false);
        const std::set<Id> entities_after = entity_closure(/*surviving_only=*/true);
        std::set<Id> removed_entities;
        for (const Id& id : entities_before) {
            if (entities_after.count(id) == 0) {
                removed_entities.insert(id);
            }
        }

        for (const auto& [module_id, module] : model_.modules) {
            QmModule rebuilt;
            rebuilt.id = module.id;
            rebuilt.requires_modules = module.requires_modules;

            for (const Entity& entity : module.entities) {
                if (removed_entities.count(entity.id) == 0) {
                    rebuilt.entities.push_back(entity);
                } else {
                    log_removal("entity", entity.id, "no surviving factor references it");
                }
            }
            for (const Factor& factor : module.factors) {
                if (removed_factors_.count(factor.id) == 0) {
                    rebuilt.factors.push_back(factor);
                }
                // Removal already logged in decide_factors().
            }
            for (const Measure& measure : module.measures) {
                if (removed_measures.count(measure.id) == 0) {
                    rebuilt.measures.push_back(measure);
                } else {
                    log_removal("measure", measure.id, "no surviving evaluation references it");
                }
            }
            for (const Instrument& instrument : module.instruments) {
                if (removed_instruments.count(instrument.id) == 0) {
                    rebuilt.instruments.push_back(instrument);
                } else if (removed_measures.count(instrument.measure) != 0) {
                    log_removal("instrument", instrument.id, "its measure was removed");
                } else {
                    log_removal("instrument", instrument.id,
                                "context tag outside the goal context");
                }
            }
            for (const Impact& impact : module.impacts) {
                if (removed_factors_.count(impact.source) == 0 &&
                    removed_factors_.count(impact.target) == 0) {
                    rebuilt.impacts.push_back(impact);
                } else {
                    log_removal("impact", impact.source + " -> " + impact.target,
                                "an endpoint was removed");
                }
            }
            for (const EvaluationSpec& eval : module.evaluations) {
                if (removed_factors_.count(eval.owner) != 0) {
                    log_removal("evaluation", eval.owner, "its factor was removed");
                    continue;
                }
                EvaluationSpec pruned = prune_evaluation(eval);
                if (pruned.child_count() == 0) {
                    log_removal("evaluation", eval.owner, "all of its children were removed");
                    continue;
                }
                rebuilt.evaluations.push_back(std::move(pruned));
            }
            surviving_modules_.push_back(std::move(rebuilt));
        }

        note_uninstrumented_measures(removed_instruments, removed_measures, referenced);
    }

    EvaluationSpec prune_evaluation(const EvaluationSpec& eval) {
        EvaluationSpec out = eval;
        if (eval.form != EvaluationForm::Children) {
            return out;
        }
        std::vector<Id> children;
        std::vector<double> weights;
        std::vector<int> ranks;
        for (size_t i = 0; i < eval.children.size(); ++i) {
            if (removed_factors_.count(eval.children[i]) != 0) {
                continue;
            }
            children.push_back(eval.children[i]);
            if (eval.weights.mode == WeightMode::Explicit) {
                weights.push_back(eval.weights.explicit_weights[i]);
            } else {
                ranks.push_back(eval.weights.ranks[i]);
            }
        }
        if (children.size() == eval.children.size()) {
            return out;
        }
        log_modification(eval.owner, "children pruned from " +
                                         std::to_string(eval.children.size()) + " to " +
                                         std::to_string(children.size()) +
                                         "; weights renormalised");
        out.children = std::move(children);
        if (eval.weights.mode == WeightMode::Explicit) {
            double sum = 0.0;
            for (double w : weights) {
                sum += w;
            }
            if (sum > 0.0) {
                for (double& w : weights) {
                    w /= sum;
                }
            }
            out.weights.explicit_weights = std::move(weights);
        } else {
            out.weights.ranks = std::move(ranks);
        }
        return out;
    }

    void note_uninstrumented_measures(const std::set<Id>& removed_instruments,
                                      const std::set<Id>& removed_measures,
                                      const std::set<Id>& referenced) {
        std::set<Id> instrumented;
        for (const auto& [id, instrument] : model_.instruments) {
            if (removed_instruments.count(id) == 0) {
                instrumented.insert(instrument.measure);
            }
        }
        for (const Id& measure : referenced) {
            if (removed_measures.count(measure) != 0 || instrumented.count(measure) != 0) {
                continue;
            }
            // Only flag measures that lost instruments in this run; ones that
            // never had any are generate_tasks' business.
            bool lost = false;
            for (const auto& [id, instrument] : model_.instruments) {
                if (instrument.measure == measure && removed_instruments.count(id) != 0) {
                    lost = true;
                    break;
                }
            }
            if (lost) {
                result_.tasks.push_back({TaskKind::Add, measure,
                                         "all instruments for this measure fell outside the "
                                         "goal context; add one or collect it manually",
                                         false});
            }
        }
    }

    void link_survivor() {
        result_.model = link(surviving_modules_, model_.root_aspect);
        const std::vector<Finding> findings = validate(result_.model);
        if (has_errors(findings)) {
            std::string message = "internal error: adaptation produced an invalid model:";
            for (const Finding& f : findings) {
                if (f.level == FindingLevel::Error) {
                    message += "\n  " + format_finding(f);
                }
            }
            throw ModelError(message);
        }
    }

    const QualityModel& model_;
    const AdaptationGoal& goal_;
    std::string timestamp_;
    std::set<Id> removed_factors_;
    std::vector<QmModule> surviving_modules_;
    PretailorResult result_;
};

}  // namespace

PretailorResult pretailor(const QualityModel& model, const AdaptationGoal& goal,
                          const std::string& timestamp) {
    Pretailorer tailorer(model, goal, timestamp);
    return tailorer.run();
}

std::vector<AdaptationTask> generate_tasks(const QualityModel& model) {
    std::vector<AdaptationTask> tasks;

    // Product factors that impact something but have no evaluation cannot
    // contribute evidence yet.
    for (const auto& [id, factor] : model.factors) {
        if (factor.kind != FactorKind::ProductFactor) {
            continue;
        }
        const auto impacts = model.impacts_of.find(id);
        const bool has_impacts = impacts != model.impacts_of.end() && !impacts->second.empty();
        if (has_impacts && model.evaluation_of(id) == nullptr) {
            tasks.push_back({TaskKind::Add, id,
                             "product factor impacts quality aspects but has no measures; "
                             "add a measure evaluation",
                             false});
        }
    }

    // Findings counts compare across systems only after normalisation.
    std::set<Id> flagged;
    for (const auto& [owner, eval] : model.evaluations) {
        for (const MeasureBinding& binding : eval.bindings) {
            const Measure* measure = model.find_measure(binding.measure);
            if (measure != nullptr && measure->value_kind == ValueKind::FindingsCount &&
                !binding.normaliser && flagged.insert(binding.measure).second) {
                tasks.push_back({TaskKind::Modify, binding.measure,
                                 "findings count is bound without a normaliser; results will "
                                 "not be comparable across systems",
                                 false});
            }
        }
    }

    // A leaf quality aspect nothing impacts has no way to be assessed.
    for (const auto& [id, factor] : model.factors) {
        if (factor.kind != FactorKind::QualityAspect) {
            continue;
        }
        const auto refiners = model.refined_by.find(id);
        const bool has_refiners = refiners != model.refined_by.end() && !refiners->second.empty();
        const auto impacts = model.impacts_on.find(id);
        const bool is_impacted = impacts != model.impacts_on.end() && !impacts->second.empty();
        if (!has_refiners && !is_impacted) {
            tasks.push_back({TaskKind::Review, id,
                             "leaf quality aspect with no impacting product factors", false});
        }
    }

    // Bound measures still need some way to be collected.
    std::set<Id> instrumented;
    for (const auto& [id, instrument] : model.instruments) {
        instrumented.insert(instrument.measure);
    }
    for (const Id& measure : model.bound_measures()) {
        if (instrumented.count(measure) == 0) {
            tasks.push_back({TaskKind::Add, measure,
                             "bound measure has no instrument; add a tool rule or a manual "
                             "collection instrument",
                             false});
        }
    }
    return tasks;
}

std::vector<AdaptationTask> merge_tasks(const std::vector<AdaptationTask>& first,
                                        const std::vector<AdaptationTask>& second) {
    std::vector<AdaptationTask> out = first;
    std::set<std::pair<std::string, std::string>> seen;
    for (const AdaptationTask& task : first) {
        seen.insert({to_string(task.kind), task.target});
    }
    for (const AdaptationTask& task : second) {
        if (seen.insert({to_string(task.kind), task.target}).second) {
            out.push_back(task);
        }
    }
    return out;
}

json adaptation_report_to_json(const AdaptationGoal& goal,
                               const std::vector<AdaptationTask>& tasks,
                               const std::vector<HistoryEntry>& history) {
    json goal_json;
    goal_json["artefact_types"] = goal.artefact_types;
    goal_json["perspective"] = goal.perspective;
    goal_json["quality_focus"] = goal.quality_focus;
    goal_json["context_tags"] = goal.context_tags;

    json tasks_json = json::array();
    for (const AdaptationTask& task : tasks) {
        tasks_json.push_back({{"kind", to_string(task.kind)},
                              {"target", task.target},
                              {"reason", task.reason},
                              {"done", task.done}});
    }

    json history_json = json::array();
    for (const HistoryEntry& entry : history) {
        history_json.push_back({{"timestamp", entry.timestamp},
                                {"action", entry.action},
                                {"element", entry.element},
                                {"justification", entry.justification},
                                {"origin", to_string(entry.origin)}});
    }

    json doc;
    doc["format"] = "qme-adaptation/1";
    doc["goal"] = std::move(goal_json);
    doc["tasks"] = std::move(tasks_json);
    doc["history"] = std::move(history_json);
    return doc;
}

std::string adaptation_report_to_text(const std::vector<AdaptationTask>& tasks,
                                      const std::vector<HistoryEntry>& history) {
    std::string out;
    out += "Adaptation tasks (" + std::to_string(tasks.size()) + "):\n";
    if (tasks.empty()) {
        out += "  none\n";
    }
    for (const AdaptationTask& task : tasks) {
        out += std::string("  [") + (task.done ? "x" : " ") + "] " + to_string(task.kind) + ": " +
               task.target + " - " + task.reason + "\n";
    }
    out += "Adaptation history (" + std::to_string(history.size()) + " entries):\n";
    if (history.empty()) {
        out += "  none\n";
    }
    for (const HistoryEntry& entry : history) {
        out += "  " + entry.timestamp + " " + entry.action + " " + entry.element + " (" +
               to_string(entry.origin) + "): " + entry.justification + "\n";
    }
    return out;
}

}  // namespace qme
