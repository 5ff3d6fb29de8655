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
#include <filesystem>

#include "doctest.h"
#include "qme/errors.hpp"
#include "qme/model_io.hpp"

using qme::FactorKind;
using qme::Id;
using qme::link;
using qme::LinkError;
using qme::LinkIssue;
using qme::QmModule;
using qme::QualityModel;

namespace {

const std::filesystem::path kSourceDir = QME_SOURCE_DIR;

std::vector<QmModule> example_modules() {
    std::vector<QmModule> modules;
    for (auto& loaded :
         qme::load_model_dir(kSourceDir / "models/example", qme::ParseOptions{})) {
        modules.push_back(std::move(loaded.module));
    }
    return modules;
}

QmModule tiny_module(const std::string& id = "m") {
    QmModule m;
    m.id = id;
    qme::Entity product;
    product.id = id + "/product";
    m.entities.push_back(product);
    qme::Factor root;
    root.id = id + "/root";
    root.kind = FactorKind::QualityAspect;
    root.entity = id + "/product";
    m.factors.push_back(root);
    return m;
}

bool has_issue(const LinkError& error, LinkIssue::Kind kind, const Id& id) {
    return std::any_of(error.issues().begin(), error.issues().end(),
                       [&](const LinkIssue& issue) {
                           return issue.kind == kind && issue.id == id;
                       });
}

}  // namespace

TEST_CASE("the example model links and finds its root aspect") {
    const QualityModel model = link(example_modules());
    CHECK(model.root_aspect == "root/quality");
    CHECK(model.modules.size() == 4);
    CHECK(model.factors.size() == 7);
    CHECK(model.measures.size() == 7);
    CHECK(model.instruments.size() == 7);
    CHECK(model.evaluations.size() == 7);
    CHECK(model.impacts.size() == 4);

    // Derived indices reflect the refinement and impact edges.
    const auto refiners = model.refined_by.at("root/quality");
    REQUIRE(refiners.size() == 2);
    CHECK(refiners[0] == "root/functional-correctness");
    CHECK(refiners[1] == "root/maintainability");
    CHECK(model.impacts_on.at("root/maintainability").size() == 2);
    CHECK(model.impacts_of.at("root/duplication").size() == 1);
}

TEST_CASE("impacts are sorted by source then target") {
    const QualityModel model = link(example_modules());
    for (size_t i = 1; i < model.impacts.size(); ++i) {
        const auto& prev = model.impacts[i - 1];
        const auto& next = model.impacts[i];
        CHECK(std::tie(prev.source, prev.target) <= std::tie(next.source, next.target));
    }
}

TEST_CASE("module order does not change the linked model") {
    auto modules = example_modules();
    const QualityModel forward = link(modules);
    std::reverse(modules.begin(), modules.end());
    const QualityModel backward = link(modules);
    CHECK(forward.root_aspect == backward.root_aspect);
    CHECK(forward.factors.size() == backward.factors.size());
    auto it = backward.factors.begin();
    for (const auto& [id, factor] : forward.factors) {
        CHECK(id == it->first);
        ++it;
    }
}

TEST_CASE("duplicate element ids are reported") {
    QmModule m = tiny_module();
    m.factors.push_back(m.factors.front());
    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        CHECK(has_issue(error, LinkIssue::Kind::DuplicateId, "m/root"));
    }
}

TEST_CASE("duplicate module ids are reported") {
    try {
        link({tiny_module(), tiny_module()});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        CHECK(has_issue(error, LinkIssue::Kind::DuplicateId, "m"));
    }
}

TEST_CASE("duplicate evaluations for one owner are reported") {
    QmModule m = tiny_module();
    qme::EvaluationSpec ev;
    ev.owner = "m/root";
    ev.form = qme::EvaluationForm::Children;
    ev.weights.explicit_weights = {1.0};
    ev.children = {"m/root"};
    m.evaluations.push_back(ev);
    m.evaluations.push_back(ev);
    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        CHECK(has_issue(error, LinkIssue::Kind::DuplicateId, "evaluation:m/root"));
    }
}

TEST_CASE("dangling references are reported with their referrer") {
    QmModule m = tiny_module();
    m.factors[0].entity = "m/ghost";
    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        REQUIRE(error.issues().size() == 1);
        const LinkIssue& issue = error.issues().front();
        CHECK(issue.kind == LinkIssue::Kind::UnresolvedReference);
        CHECK(issue.id == "m/ghost");
        CHECK(issue.referrer == "m/root");
    }
}

TEST_CASE("cross-module references need a requires edge") {
    QmModule base = tiny_module("base");
    QmModule ext = tiny_module("ext");
    ext.factors[0].kind = FactorKind::ProductFactor;
    ext.factors[0].refines.clear();
    // References base/product without requiring the base module.
    ext.factors[0].entity = "base/product";
    try {
        link({base, ext});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        CHECK(has_issue(error, LinkIssue::Kind::MissingRequires, "base/product"));
    }

    ext.requires_modules = {"base"};
    const QualityModel model = link({base, ext});
    CHECK(model.root_aspect == "base/root");
}

TEST_CASE("requires visibility is transitive") {
    QmModule base = tiny_module("base");
    QmModule mid = tiny_module("mid");
    mid.factors.clear();
    mid.entities.clear();
    mid.requires_modules = {"base"};
    QmModule top = tiny_module("top");
    top.factors[0].kind = FactorKind::ProductFactor;
    top.factors[0].entity = "base/product";
    top.requires_modules = {"mid"};
    const QualityModel model = link({base, mid, top});
    CHECK(model.root_aspect == "base/root");
}

TEST_CASE("requiring an unknown module is reported") {
    QmModule m = tiny_module();
    m.requires_modules = {"elsewhere"};
    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        CHECK(has_issue(error, LinkIssue::Kind::UnresolvedReference, "elsewhere"));
    }
}

TEST_CASE("cyclic module dependencies are reported") {
    QmModule a = tiny_module("a");
    QmModule b = tiny_module("b");
    b.factors[0].refines = {"a/root"};
    a.requires_modules = {"b"};
    b.requires_modules = {"a"};
    try {
        link({a, b});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        const bool flagged =
            has_issue(error, LinkIssue::Kind::CyclicModuleDependency, "a") ||
            has_issue(error, LinkIssue::Kind::CyclicModuleDependency, "b");
        CHECK(flagged);
    }
}

TEST_CASE("a model without a top-level aspect has no root") {
    QmModule m = tiny_module();
    m.factors[0].kind = FactorKind::ProductFactor;
    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        REQUIRE(error.issues().size() == 1);
        CHECK(error.issues().front().kind == LinkIssue::Kind::AmbiguousRoot);
        CHECK(error.issues().front().detail ==
              "no quality aspect without refinement parents");
    }
}

TEST_CASE("several top-level aspects require an explicit root") {
    QmModule m = tiny_module();
    qme::Factor second;
    second.id = "m/other";
    second.kind = FactorKind::QualityAspect;
    second.entity = "m/product";
    m.factors.push_back(second);

    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        REQUIRE(error.issues().size() == 1);
        CHECK(error.issues().front().kind == LinkIssue::Kind::AmbiguousRoot);
        CHECK(error.issues().front().detail.find("m/other") != std::string::npos);
        CHECK(error.issues().front().detail.find("m/root") != std::string::npos);
    }

    const QualityModel model = link({m}, Id("m/other"));
    CHECK(model.root_aspect == "m/other");
}

TEST_CASE("an explicit root must exist and be a quality aspect") {
    QmModule m = tiny_module();
    try {
        link({m}, Id("m/nope"));
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        CHECK(has_issue(error, LinkIssue::Kind::UnresolvedReference, "m/nope"));
    }

    qme::Factor pf;
    pf.id = "m/pf";
    pf.kind = FactorKind::ProductFactor;
    pf.entity = "m/product";
    m.factors.push_back(pf);
    try {
        link({m}, Id("m/pf"));
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        REQUIRE(error.issues().size() == 1);
        CHECK(error.issues().front().kind == LinkIssue::Kind::AmbiguousRoot);
        CHECK(error.issues().front().detail == "root must be a quality aspect");
    }
}

TEST_CASE("link errors format each issue on its own line") {
    QmModule m = tiny_module();
    m.factors[0].entity = "m/ghost";
    m.factors[0].kind = FactorKind::ProductFactor;
    try {
        link({m});
        FAIL("expected LinkError");
    } catch (const LinkError& error) {
        REQUIRE(error.issues().size() == 2);
        const std::string what = error.what();
        for (const LinkIssue& issue : error.issues()) {
            CHECK(what.find(issue.describe()) != std::string::npos);
        }
    }
}
