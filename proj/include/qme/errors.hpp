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

#ifndef QME_ERRORS_HPP
#define QME_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qme {

/// Base class for all qme errors. The CLI maps the subtypes onto exit codes:
/// UsageError -> 1, ModelError -> 2, IoError -> 3, DataError -> 4.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad invocation or configuration.
class UsageError : public Error {
public:
    using Error::Error;
};

/// The quality model is structurally broken (linking failed, validation
/// errors present, schema violation in a model file).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Filesystem problems: unreadable inputs, unwritable outputs.
class IoError : public Error {
public:
    using Error::Error;
};

/// Measurement or corpus data is malformed or inconsistent.
class DataError : public Error {
public:
    using Error::Error;
};

/// One unresolved problem found while linking modules.
struct LinkIssue {
    enum class Kind {
        UnresolvedReference,
        DuplicateId,
        MissingRequires,
        CyclicModuleDependency,
        AmbiguousRoot,
    };

    Kind kind;
    std::string id;        ///< the offending or referenced id
    std::string referrer;  ///< element holding the reference, if any
    std::string detail;

    std::string describe() const;
};

/// Thrown by link() with the full list of problems found.
class LinkError : public ModelError {
public:
    explicit LinkError(std::vector<LinkIssue> issues);

    const std::vector<LinkIssue>& issues() const { return issues_; }

private:
    std::vector<LinkIssue> issues_;
};

}  // namespace qme

#endif  // QME_ERRORS_HPP
