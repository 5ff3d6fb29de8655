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

#include "qme/linker.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "qme/errors.hpp"

namespace qme {

namespace {

class LinkContext {
public:
    explicit LinkContext(const std::vector<QmModule>& modules) {
        for (const QmModule& m : modules) {
            if (!model_.modules.emplace(m.id, m).second) {
                issue(LinkIssue::Kind::DuplicateId, m.id, "", "module id defined twice");
            }
        }
    }

    QualityModel run(const std::optional<Id>& root) {
        check_module_graph();
        collect_elements();
        resolve_references();
        pick_root(root);
        if (!issues_.empty()) {
            throw LinkError(std::move(issues_));
        }
        build_indices();
        return std::move(model_);
    }

private:
    void issue(LinkIssue::Kind kind, const Id& id, const std::string& referrer,
               const std::string& detail) {
        issues_.push_back(LinkIssue{kind, id, referrer, detail});
    }

    void check_module_graph() {
        for (const auto& [mid, mod] : model_.modules) {
            for (const Id& dep : mod.requires_modules) {
                if (!model_.modules.count(dep)) {
                    issue(LinkIssue::Kind::UnresolvedReference, dep, mid,
                          "requires names an unknown module");
                }
            }
        }
        // DFS cycle check over the requires graph, deterministic by id order.
        std::map<Id, int> state;  // 0 new, 1 on stack, 2 done
        std::function<bool(const Id&)> dfs = [&](const Id& mid) -> bool {
            state[mid] = 1;
            auto it = model_.modules.find(mid);
            if (it != model_.modules.end()) {
                for (const Id& dep : it->second.requires_modules) {
                    if (!model_.modules.count(dep)) continue;
                    int s = state.count(dep) ? state[dep] : 0;
                    if (s == 1) return true;
                    if (s == 0 && dfs(dep)) return true;
                }
            }
            state[mid] = 2;
            return false;
        };
        for (const auto& [mid, mod] : model_.modules) {
            if ((state.count(mid) ? state[mid] : 0) == 0 && dfs(mid)) {
                issue(LinkIssue::Kind::CyclicModuleDependency, mid, "",
                      "module requires-graph has a cycle through this module");
                return;
            }
        }
        // Transitive closure of requires, including the module itself.
        for (const auto& [mid, mod] : model_.modules) {
            std::set<Id>& closure = reachable_[mid];
            std::vector<Id> stack{mid};
            while (!stack.empty()) {
                Id cur = stack.back();
                stack.pop_back();
                if (!closure.insert(cur).second) continue;
                auto it = model_.modules.find(cur);
                if (it == model_.modules.end()) continue;
                for (const Id& dep : it->second.requires_modules) {
                    stack.push_back(dep);
                }
            }
        }
    }

    template <typename T>
    void add_element(std::map<Id, T>& into, const T& element, const Id& module_id) {
        T copy = element;
        copy.module = module_id;
        if (!into.emplace(copy.id, copy).second) {
            issue(LinkIssue::Kind::DuplicateId, copy.id, module_id, "");
        } else {
            owner_module_[copy.id] = module_id;
        }
    }

    void collect_elements() {
        for (const auto& [mid, mod] : model_.modules) {
            for (const auto& e : mod.entities) add_element(model_.entities, e, mid);
            for (const auto& f : mod.factors) add_element(model_.factors, f, mid);
            for (const auto& m : mod.measures) add_element(model_.measures, m, mid);
            for (const auto& i : mod.instruments) add_element(model_.instruments, i, mid);
            for (const auto& ev : mod.evaluations) {
                EvaluationSpec copy = ev;
                copy.module = mid;
                if (!model_.evaluations.emplace(copy.owner, copy).second) {
                    issue(LinkIssue::Kind::DuplicateId, "evaluation:" + copy.owner, mid,
                          "factor has more than one evaluation");
                }
            }
            for (const auto& imp : mod.impacts) {
                Impact copy = imp;
                copy.module = mid;
                model_.impacts.push_back(copy);
            }
        }
        std::sort(model_.impacts.begin(), model_.impacts.end(),
                  [](const Impact& a, const Impact& b) {
                      return std::tie(a.source, a.target) < std::tie(b.source, b.target);
                  });
    }

    enum class RefTo { Entity, Factor, Measure };

    /// Checks that `target` resolves and that the referring module may see it.
    void ref(const Id& from_module, const std::string& referrer, const Id& target,
             RefTo to) {
        bool resolved = false;
        switch (to) {
            case RefTo::Entity: resolved = model_.entities.count(target) > 0; break;
            case RefTo::Factor: resolved = model_.factors.count(target) > 0; break;
            case RefTo::Measure: resolved = model_.measures.count(target) > 0; break;
        }
        if (!resolved) {
            issue(LinkIssue::Kind::UnresolvedReference, target, referrer, "");
            return;
        }
        const Id& target_module = owner_module_[target];
        const std::set<Id>& visible = reachable_[from_module];
        if (!visible.count(target_module)) {
            issue(LinkIssue::Kind::MissingRequires, target, referrer,
                  "module " + from_module + " does not require module " + target_module);
        }
    }

    void resolve_references() {
        for (const auto& [id, e] : model_.entities) {
            for (const Id& p : e.is_a) ref(e.module, id, p, RefTo::Entity);
            for (const Id& p : e.part_of) ref(e.module, id, p, RefTo::Entity);
        }
        for (const auto& [id, f] : model_.factors) {
            ref(f.module, id, f.entity, RefTo::Entity);
            for (const Id& p : f.refines) ref(f.module, id, p, RefTo::Factor);
        }
        for (const auto& [id, inst] : model_.instruments) {
            ref(inst.module, id, inst.measure, RefTo::Measure);
        }
        for (const Impact& imp : model_.impacts) {
            const std::string referrer = "impact:" + imp.source + "->" + imp.target;
            ref(imp.module, referrer, imp.source, RefTo::Factor);
            ref(imp.module, referrer, imp.target, RefTo::Factor);
        }
        for (const auto& [owner, ev] : model_.evaluations) {
            const std::string referrer = "evaluation:" + owner;
            ref(ev.module, referrer, owner, RefTo::Factor);
            for (const Id& child : ev.children) {
                ref(ev.module, referrer, child, RefTo::Factor);
            }
            for (const MeasureBinding& b : ev.bindings) {
                ref(ev.module, referrer, b.measure, RefTo::Measure);
                if (b.normaliser) {
                    ref(ev.module, referrer, *b.normaliser, RefTo::Measure);
                }
            }
        }
    }

    void pick_root(const std::optional<Id>& root) {
        if (root) {
            auto it = model_.factors.find(*root);
            if (it == model_.factors.end()) {
                issue(LinkIssue::Kind::UnresolvedReference, *root, "root aspect", "");
            } else if (it->second.kind != FactorKind::QualityAspect) {
                issue(LinkIssue::Kind::AmbiguousRoot, *root, "",
                      "root must be a quality aspect");
            } else {
                model_.root_aspect = *root;
            }
            return;
        }
        std::vector<Id> candidates;
        for (const auto& [id, f] : model_.factors) {
            if (f.kind == FactorKind::QualityAspect && f.refines.empty()) {
                candidates.push_back(id);
            }
        }
        if (candidates.size() == 1) {
            model_.root_aspect = candidates.front();
        } else if (candidates.empty()) {
            issue(LinkIssue::Kind::AmbiguousRoot, "", "",
                  "no quality aspect without refinement parents");
        } else {
            std::string list;
            for (const Id& c : candidates) list += (list.empty() ? "" : ", ") + c;
            issue(LinkIssue::Kind::AmbiguousRoot, candidates.front(), "",
                  "several top-level quality aspects (" + list +
                      "); pass the root aspect explicitly");
        }
    }

    void build_indices() {
        for (const auto& [id, f] : model_.factors) {
            for (const Id& parent : f.refines) {
                model_.refined_by[parent].push_back(id);
            }
        }
        for (size_t i = 0; i < model_.impacts.size(); ++i) {
            model_.impacts_on[model_.impacts[i].target].push_back(i);
            model_.impacts_of[model_.impacts[i].source].push_back(i);
        }
    }

    QualityModel model_;
    std::vector<LinkIssue> issues_;
    std::map<Id, std::set<Id>> reachable_;
    std::map<Id, Id> owner_module_;
};

}  // namespace

QualityModel link(const std::vector<QmModule>& modules, const std::optional<Id>& root) {
    return LinkContext(modules).run(root);
}

}  // namespace qme
