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

#include "qme/validation.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "qme/errors.hpp"
#include "qme/weights.hpp"

namespace qme {

namespace {

class Validator {
public:
    explicit Validator(const QualityModel& model) : model_(model) {}

    std::vector<Finding> run() {
        check_impacts();
        check_cycles();
        check_evaluations();
        check_unreferenced();
        check_plausibility();
        check_aspect_entities();
        return std::move(findings_);
    }

private:
    void add(FindingLevel level, const char* rule, const Id& element,
             const std::string& message) {
        findings_.push_back(Finding{level, rule, element, message});
    }

    void check_impacts() {
        for (const Impact& imp : model_.impacts) {
            const Factor& source = model_.factors.at(imp.source);
            const Factor& target = model_.factors.at(imp.target);
            if (source.kind != FactorKind::ProductFactor) {
                add(FindingLevel::Error, "E1", imp.source,
                    "impact source must be a product factor (impact on " + imp.target + ")");
            }
            if (target.kind != FactorKind::QualityAspect) {
                add(FindingLevel::Error, "E1", imp.target,
                    "impact target must be a quality aspect (impact from " + imp.source + ")");
            }
        }
    }

    /// Reports elements from which a cycle in the parent relation is reachable.
    void report_cycles(const std::map<Id, std::set<Id>>& graph, const char* what) {
        std::map<Id, int> state;  // 0 new, 1 on stack, 2 done
        std::function<bool(const Id&)> dfs = [&](const Id& id) -> bool {
            state[id] = 1;
            auto it = graph.find(id);
            if (it != graph.end()) {
                for (const Id& parent : it->second) {
                    int s = state.count(parent) ? state[parent] : 0;
                    if (s == 1) return true;
                    if (s == 0 && dfs(parent)) return true;
                }
            }
            state[id] = 2;
            return false;
        };
        for (const auto& [id, parents] : graph) {
            if ((state.count(id) ? state[id] : 0) == 0 && dfs(id)) {
                add(FindingLevel::Error, "E2", id,
                    std::string(what) + " hierarchy has a cycle through this element");
            }
        }
    }

    void check_cycles() {
        std::map<Id, std::set<Id>> refines;
        for (const auto& [id, f] : model_.factors) {
            auto& parents = refines[id];
            for (const Id& p : f.refines) {
                parents.insert(p);
                const Factor& parent = model_.factors.at(p);
                if (parent.kind != f.kind) {
                    add(FindingLevel::Error, "E6", id,
                        "refines " + p + " of a different factor kind");
                }
            }
        }
        report_cycles(refines, "refinement");

        std::map<Id, std::set<Id>> entity_graph;
        for (const auto& [id, e] : model_.entities) {
            auto& parents = entity_graph[id];
            parents.insert(e.is_a.begin(), e.is_a.end());
            parents.insert(e.part_of.begin(), e.part_of.end());
        }
        report_cycles(entity_graph, "entity");
    }

    void check_evaluations() {
        for (const auto& [owner, eval] : model_.evaluations) {
            const Factor& factor = model_.factors.at(owner);
            const bool is_pf = factor.kind == FactorKind::ProductFactor;
            if (is_pf && eval.form != EvaluationForm::Measures) {
                add(FindingLevel::Error, "E6", owner,
                    "product factor evaluation must list measure bindings");
            }
            if (!is_pf && eval.form != EvaluationForm::Children) {
                add(FindingLevel::Error, "E6", owner,
                    "quality aspect evaluation must list child factors");
            }

            check_weights(eval);

            for (const MeasureBinding& b : eval.bindings) {
                if (!(b.utility.min <= b.utility.max)) {
                    add(FindingLevel::Error, "E4", owner,
                        "utility thresholds for " + b.measure + " have min > max");
                }
                const Measure& measure = model_.measures.at(b.measure);
                if (b.normaliser) {
                    const Measure& norm = model_.measures.at(*b.normaliser);
                    if (!norm.is_normalisation_measure) {
                        add(FindingLevel::Error, "E5", owner,
                            *b.normaliser + " is used as normaliser but not flagged "
                            "as a normalisation measure");
                    }
                    if (measure.is_normalisation_measure) {
                        add(FindingLevel::Error, "E5", owner,
                            "normalisation measure " + b.measure + " must not itself "
                            "be normalised");
                    }
                }
            }

            for (const Id& child : eval.children) {
                if (!legitimate_child(owner, child)) {
                    add(FindingLevel::Error, "E6", owner,
                        child + " is neither a refining sub-factor nor an impacting "
                        "product factor");
                }
            }
        }
    }

    bool legitimate_child(const Id& owner, const Id& child) const {
        const Factor& child_factor = model_.factors.at(child);
        const Factor& owner_factor = model_.factors.at(owner);
        for (const Id& parent : child_factor.refines) {
            if (parent == owner && child_factor.kind == owner_factor.kind) {
                return true;
            }
        }
        auto it = model_.impacts_of.find(child);
        if (it != model_.impacts_of.end()) {
            for (size_t idx : it->second) {
                if (model_.impacts[idx].target == owner) return true;
            }
        }
        return false;
    }

    void check_weights(const EvaluationSpec& eval) {
        const size_t n = eval.child_count();
        std::vector<double> resolved;
        try {
            resolved = resolve_weights(eval.weights, n);
        } catch (const DataError& err) {
            add(FindingLevel::Error, "E3", eval.owner, err.what());
            return;
        }
        double sum = 0.0;
        for (double w : resolved) {
            if (w < 0.0 || w > 1.0) {
                add(FindingLevel::Error, "E3", eval.owner,
                    "weight " + std::to_string(w) + " outside [0,1]");
            }
            sum += w;
        }
        if (n > 0 && std::abs(sum - 1.0) > kWeightSumTolerance) {
            add(FindingLevel::Error, "E3", eval.owner,
                "weights sum to " + std::to_string(sum) + ", expected 1");
        }
    }

    void check_unreferenced() {
        std::set<Id> used_entities;
        for (const auto& [id, f] : model_.factors) used_entities.insert(f.entity);
        for (const auto& [id, e] : model_.entities) {
            if (used_entities.count(id)) continue;
            bool parent_of_used = false;
            for (const auto& [oid, other] : model_.entities) {
                if (oid == id) continue;
                for (const Id& p : other.is_a) parent_of_used |= (p == id);
                for (const Id& p : other.part_of) parent_of_used |= (p == id);
            }
            if (!parent_of_used) {
                add(FindingLevel::Warning, "W1", id, "entity is referenced nowhere");
            }
        }

        std::set<Id> used_measures;
        for (const auto& [owner, eval] : model_.evaluations) {
            for (const MeasureBinding& b : eval.bindings) {
                used_measures.insert(b.measure);
                if (b.normaliser) used_measures.insert(*b.normaliser);
            }
        }
        for (const auto& [id, m] : model_.measures) {
            if (!used_measures.count(id)) {
                add(FindingLevel::Warning, "W1", id,
                    "measure is bound to no factor and used as no normaliser");
            }
        }
    }

    void check_plausibility() {
        for (const auto& [id, f] : model_.factors) {
            if (f.kind != FactorKind::ProductFactor) continue;
            auto impacts_it = model_.impacts_of.find(id);
            const bool has_impacts =
                impacts_it != model_.impacts_of.end() && !impacts_it->second.empty();
            if (!has_impacts) continue;

            const EvaluationSpec* eval = model_.evaluation_of(id);
            if (!eval || eval->bindings.empty()) {
                add(FindingLevel::Warning, "W2", id,
                    "product factor has impacts but no measures");
                continue;
            }
            bool all_increasing = true;
            for (const MeasureBinding& b : eval->bindings) {
                all_increasing &= b.utility.shape == UtilityShape::LinearIncreasing;
            }
            if (!all_increasing) continue;
            for (size_t idx : impacts_it->second) {
                if (model_.impacts[idx].polarity == Polarity::Negative) {
                    add(FindingLevel::Warning, "W3", id,
                        "negative impact on " + model_.impacts[idx].target +
                            " but every measure uses an increasing utility function");
                }
            }
        }
    }

    void check_aspect_entities() {
        for (const auto& [id, f] : model_.factors) {
            if (f.kind != FactorKind::QualityAspect) continue;
            const Entity& entity = model_.entities.at(f.entity);
            if (!entity.is_a.empty() || !entity.part_of.empty()) {
                add(FindingLevel::Warning, "W4", id,
                    "quality aspect entity " + f.entity + " is not a whole-product entity");
            }
        }
    }

    const QualityModel& model_;
    std::vector<Finding> findings_;
};

}  // namespace

std::vector<Finding> validate(const QualityModel& model) {
    return Validator(model).run();
}

bool has_errors(const std::vector<Finding>& findings) {
    for (const Finding& f : findings) {
        if (f.level == FindingLevel::Error) return true;
    }
    return false;
}

std::string format_finding(const Finding& finding) {
    std::string out = finding.level == FindingLevel::Error ? "error " : "warning ";
    out += finding.rule;
    out += " [" + finding.element + "]: " + finding.message;
    return out;
}

}  // namespace qme
