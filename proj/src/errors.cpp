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

#include "qme/errors.hpp"

#include <sstream>

namespace qme {

namespace {

const char* kind_name(LinkIssue::Kind kind) {
    switch (kind) {
        case LinkIssue::Kind::UnresolvedReference: return "UnresolvedReference";
        case LinkIssue::Kind::DuplicateId: return "DuplicateId";
        case LinkIssue::Kind::MissingRequires: return "MissingRequires";
        case LinkIssue::Kind::CyclicModuleDependency: return "CyclicModuleDependency";
        case LinkIssue::Kind::AmbiguousRoot: return "AmbiguousRoot";
    }
    return "LinkIssue";
}

std::string join_issues(const std::vector<LinkIssue>& issues) {
    std::ostringstream out;
    out << "linking failed with " << issues.size()
        << (issues.size() == 1 ? " issue:" : " issues:");
    for (const auto& issue : issues) {
        out << "\n  " << issue.describe();
    }
    return out.str();
}

}  // namespace

std::string LinkIssue::describe() const {
    std::ostringstream out;
    out << kind_name(kind) << ": " << id;
    if (!referrer.empty()) {
        out << " (referenced by " << referrer << ")";
    }
    if (!detail.empty()) {
        out << " -- " << detail;
    }
    return out.str();
}

LinkError::LinkError(std::vector<LinkIssue> issues)
    : ModelError(join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace qme
