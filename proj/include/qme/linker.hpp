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

#ifndef QME_LINKER_HPP
#define QME_LINKER_HPP

#include <optional>
#include <string>
#include <vector>

#include "qme/model.hpp"

namespace qme {

/// Links a set of modules into one resolved model. Module order does not
/// matter; the result is canonical (elements keyed by id).
///
/// Checks: unique ids, resolvable references, requires-coverage of every
/// cross-module reference (transitive), acyclic module dependencies, and a
/// unique root quality aspect (one aspect that refines nothing) unless
/// `root` names it explicitly. Throws LinkError with the full issue list.
QualityModel link(const std::vector<QmModule>& modules,
                  const std::optional<Id>& root = std::nullopt);

}  // namespace qme

#endif  // QME_LINKER_HPP
