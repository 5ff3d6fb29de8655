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

#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "qme/linker.hpp"
#include "qme/model_io.hpp"

using qme::EvaluationForm;
using qme::FactorKind;
using qme::Finding;
using qme::FindingLevel;
using qme::Id;
using qme::link;
using qme::Polarity;
using qme::QmModule;
using qme::QualityModel;
using qme::UtilityShape;
using qme::validate;

namespace {

const std::filesystem::path kSourceDir = QME_SOURCE_DIR;

/// A minimal well-formed module: one aspect over the product, one measured
/// product factor over a part, a negative impact, a normaliser.
QmModule clean_module() {
    QmModule m;
    m.id = "m";

    qme::Entity product;
    product.id = "m/product";
    qme::Entity part;
    part.id = "m/part";
    part.part_of = {"m/product"};
    m.entities = {product, part};

    qme::Factor root;
    root.id = "m/root";
    root.kind = FactorKind::QualityAspect;
    root.entity = "m/product";
    qme::Factor pf;
    pf.id = "m/pf";
    pf.kind = FactorKind::ProductFactor;
    pf.entity = "m/part";
    m.factors = {root, pf};

    qme::Measure count;
    count.id = "m/count";
    count.value_kind = qme::ValueKind::FindingsCount;
    qme::Measure size;
    size.id = "m/size";
    size.is_normalisation_measure = true;
    m.measures = {count, size};

    qme::Impact impact;
    impact.source = "m/pf";
    impact.target = "m/root";
    impact.polarity = Polarity::Negative;
    m.impacts = {impact};

    qme::EvaluationSpec pf_eval;
    pf_eval.owner = "m/pf";
    pf_eval.form = EvaluationForm::Measures;
    pf_eval.weights.explicit_weights = {1.0};
    qme::MeasureBinding binding;
    binding.measure = "m/count";
    binding.normaliser = "m/size";
    binding.utility.shape = UtilityShape::LinearDecreasing;
    binding.utility.min = 0.0;
    binding.utility.max = 1.0;
    pf_eval.bindings = {binding};

    qme::EvaluationSpec root_eval;
    root_eval.owner = "m/root";
    root_eval.form = EvaluationForm::Children;
    root_eval.weights.mode = qme::WeightMode::Ranked;
    root_eval.weights.ranks = {1};
    root_eval.children = {"m/pf"};

    m.evaluations = {pf_eval, root_eval};
    return m;
}

std::vector<Finding> findings_for(const QmModule& module, const char* rule) {
    std::vector<Finding> matched;
    for (const Finding& f : validate(link({module}))) {
        if (f.rule == rule) matched.push_back(f);
    }
    return matched;
}

size_t count_rule(const std::vector<Finding>& findings, const char* rule) {
    return std::count_if(findings.begin(), findings.end(),
                         [&](const Finding& f) { return f.rule == rule; });
}

}  // namespace

TEST_CASE("the minimal fixture and the example model validate clean") {
    CHECK(validate(link({clean_module()})).empty());

    std::vector<QmModule> modules;
    for (auto& loaded :
         qme::load_model_dir(kSourceDir / "models/example", qme::ParseOptions{})) {
        modules.push_back(std::move(loaded.module));
    }
    CHECK(validate(link(modules)).empty());
}

TEST_CASE("E1 flags impacts that do not run product factor to aspect") {
    QmModule m = clean_module();
    qme::Impact reversed;
    reversed.source = "m/root";
    reversed.target = "m/pf";
    m.impacts.push_back(reversed);

    const auto findings = findings_for(m, "E1");
    REQUIRE(findings.size() == 2);
    CHECK(findings[0].level == FindingLevel::Error);
    const bool source_flagged = std::any_of(
        findings.begin(), findings.end(), [](const Finding& f) {
            return f.element == "m/root" &&
                   f.message.find("source must be a product factor") != std::string::npos;
        });
    const bool target_flagged = std::any_of(
        findings.begin(), findings.end(), [](const Finding& f) {
            return f.element == "m/pf" &&
                   f.message.find("target must be a quality aspect") != std::string::npos;
        });
    CHECK(source_flagged);
    CHECK(target_flagged);
}

TEST_CASE("E2 flags refinement cycles") {
    QmModule m = clean_module();
    qme::Factor a;
    a.id = "m/a";
    a.kind = FactorKind::QualityAspect;
    a.entity = "m/product";
    a.refines = {"m/b"};
    qme::Factor b;
    b.id = "m/b";
    b.kind = FactorKind::QualityAspect;
    b.entity = "m/product";
    b.refines = {"m/a"};
    m.factors.push_back(a);
    m.factors.push_back(b);

    // One finding per cycle, attributed to the first element that reaches it.
    const auto findings = findings_for(m, "E2");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/a");
    CHECK(findings[0].message.find("refinement hierarchy has a cycle") != std::string::npos);
}

TEST_CASE("E2 flags entity hierarchy cycles") {
    QmModule m = clean_module();
    m.entities[0].is_a = {"m/part"};  // product is_a part, part part_of product

    // is_a and part_of edges share one parent graph, so this is one cycle.
    const auto all = validate(link({m}));
    CHECK(count_rule(all, "E2") == 1);
}

TEST_CASE("E3 flags weights that do not sum to one") {
    QmModule m = clean_module();
    qme::MeasureBinding extra = m.evaluations[0].bindings[0];
    extra.normaliser.reset();
    extra.measure = "m/size";
    m.evaluations[0].bindings.push_back(extra);
    m.evaluations[0].weights.explicit_weights = {0.5, 0.6};

    const auto findings = findings_for(m, "E3");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/pf");
    CHECK(findings[0].message.find("expected 1") != std::string::npos);
}

TEST_CASE("E3 flags weights outside the unit interval") {
    QmModule m = clean_module();
    qme::MeasureBinding extra = m.evaluations[0].bindings[0];
    extra.normaliser.reset();
    extra.measure = "m/size";
    m.evaluations[0].bindings.push_back(extra);
    m.evaluations[0].weights.explicit_weights = {1.5, -0.5};

    const auto findings = findings_for(m, "E3");
    CHECK(findings.size() == 2);  // one per offending weight; sum is still 1
}

TEST_CASE("E3 flags weight specs that cannot be resolved") {
    QmModule m = clean_module();
    m.evaluations[0].weights.explicit_weights = {0.5, 0.5};  // one binding only

    const auto findings = findings_for(m, "E3");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/pf");
}

TEST_CASE("E4 flags inverted utility thresholds") {
    QmModule m = clean_module();
    m.evaluations[0].bindings[0].utility.min = 2.0;
    m.evaluations[0].bindings[0].utility.max = 1.0;

    const auto findings = findings_for(m, "E4");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].message == "utility thresholds for m/count have min > max");
}

TEST_CASE("E4 accepts equal thresholds") {
    QmModule m = clean_module();
    m.evaluations[0].bindings[0].utility.min = 1.0;
    m.evaluations[0].bindings[0].utility.max = 1.0;
    CHECK(findings_for(m, "E4").empty());
}

TEST_CASE("E5 flags normalisers that are not normalisation measures") {
    QmModule m = clean_module();
    m.measures[1].is_normalisation_measure = false;

    const auto all = validate(link({m}));
    REQUIRE(count_rule(all, "E5") == 1);
    for (const Finding& f : all) {
        if (f.rule == "E5") {
            CHECK(f.message.find("not flagged") != std::string::npos);
        }
    }
}

TEST_CASE("E5 flags normalisation measures that are themselves normalised") {
    QmModule m = clean_module();
    qme::Measure size2;
    size2.id = "m/size2";
    size2.is_normalisation_measure = true;
    m.measures.push_back(size2);
    qme::MeasureBinding binding;
    binding.measure = "m/size";  // a normalisation measure ...
    binding.normaliser = "m/size2";  // ... must not be normalised itself
    m.evaluations[0].bindings.push_back(binding);
    m.evaluations[0].weights.explicit_weights = {0.5, 0.5};

    const auto findings = findings_for(m, "E5");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].message.find("must not itself be normalised") != std::string::npos);
}

TEST_CASE("E6 flags evaluation forms that mismatch the owner kind") {
    QmModule m = clean_module();
    std::swap(m.evaluations[0].form, m.evaluations[1].form);
    std::swap(m.evaluations[0].bindings, m.evaluations[1].bindings);
    std::swap(m.evaluations[0].children, m.evaluations[1].children);

    const auto all = validate(link({m}));
    bool pf_flagged = false;
    bool aspect_flagged = false;
    for (const Finding& f : all) {
        if (f.rule != "E6") continue;
        pf_flagged |= f.message == "product factor evaluation must list measure bindings";
        aspect_flagged |= f.message == "quality aspect evaluation must list child factors";
    }
    CHECK(pf_flagged);
    CHECK(aspect_flagged);
}

TEST_CASE("E6 flags children that neither refine nor impact the owner") {
    QmModule m = clean_module();
    qme::Factor other;
    other.id = "m/other";
    other.kind = FactorKind::ProductFactor;
    other.entity = "m/part";
    m.factors.push_back(other);
    m.evaluations[1].children.push_back("m/other");
    m.evaluations[1].weights.ranks = {1, 2};

    const auto findings = findings_for(m, "E6");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/root");
    CHECK(findings[0].message ==
          "m/other is neither a refining sub-factor nor an impacting product factor");
}

TEST_CASE("E6 flags refinement across factor kinds") {
    QmModule m = clean_module();
    m.factors[1].refines = {"m/root"};  // product factor refining an aspect

    const auto findings = findings_for(m, "E6");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/pf");
    CHECK(findings[0].message == "refines m/root of a different factor kind");
}

TEST_CASE("W1 flags unreferenced entities and measures") {
    QmModule m = clean_module();
    qme::Entity orphan;
    orphan.id = "m/orphan";
    m.entities.push_back(orphan);
    qme::Measure unused;
    unused.id = "m/unused";
    m.measures.push_back(unused);

    const auto findings = findings_for(m, "W1");
    REQUIRE(findings.size() == 2);
    for (const Finding& f : findings) {
        CHECK(f.level == FindingLevel::Warning);
    }
    CHECK(findings[0].element == "m/orphan");
    CHECK(findings[0].message == "entity is referenced nowhere");
    CHECK(findings[1].element == "m/unused");
    CHECK(findings[1].message == "measure is bound to no factor and used as no normaliser");
}

TEST_CASE("W1 does not flag entities that only parent other entities") {
    QmModule m = clean_module();
    // m/product anchors no factor any more but is still part_of parent of m/part.
    m.factors[0].entity = "m/part";
    const auto all = validate(link({m}));
    CHECK(count_rule(all, "W1") == 0);
    CHECK(count_rule(all, "W4") == 1);  // the aspect entity is now a part
}

TEST_CASE("W2 flags impacting product factors without measures") {
    QmModule m = clean_module();
    m.evaluations.erase(m.evaluations.begin());  // drop the measure bindings

    const auto findings = findings_for(m, "W2");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].level == FindingLevel::Warning);
    CHECK(findings[0].element == "m/pf");
    CHECK(findings[0].message == "product factor has impacts but no measures");
}

TEST_CASE("W3 flags negative impacts measured only by increasing utilities") {
    QmModule m = clean_module();
    m.evaluations[0].bindings[0].utility.shape = UtilityShape::LinearIncreasing;

    const auto findings = findings_for(m, "W3");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/pf");
    CHECK(findings[0].message.find("increasing utility function") != std::string::npos);

    // One decreasing binding quiets the warning.
    qme::MeasureBinding decreasing = m.evaluations[0].bindings[0];
    decreasing.measure = "m/size";
    decreasing.normaliser.reset();
    decreasing.utility.shape = UtilityShape::LinearDecreasing;
    m.evaluations[0].bindings.push_back(decreasing);
    m.evaluations[0].weights.explicit_weights = {0.5, 0.5};
    CHECK(findings_for(m, "W3").empty());
}

TEST_CASE("W4 flags aspects anchored to non-product entities") {
    QmModule m = clean_module();
    m.factors[0].entity = "m/part";

    const auto findings = findings_for(m, "W4");
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].element == "m/root");
    CHECK(findings[0].message ==
          "quality aspect entity m/part is not a whole-product entity");
}

TEST_CASE("has_errors distinguishes warnings from errors") {
    QmModule warn_only = clean_module();
    qme::Entity orphan;
    orphan.id = "m/orphan";
    warn_only.entities.push_back(orphan);
    CHECK_FALSE(qme::has_errors(validate(link({warn_only}))));

    QmModule broken = clean_module();
    broken.evaluations[0].bindings[0].utility.min = 5.0;
    CHECK(qme::has_errors(validate(link({broken}))));
}

TEST_CASE("findings format as level, rule, element, message") {
    Finding finding{FindingLevel::Error, "E4", "m/pf", "utility thresholds bad"};
    CHECK(qme::format_finding(finding) == "error E4 [m/pf]: utility thresholds bad");
    finding.level = FindingLevel::Warning;
    finding.rule = "W1";
    CHECK(qme::format_finding(finding) == "warning W1 [m/pf]: utility thresholds bad");
}
