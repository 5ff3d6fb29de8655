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

#include "qme/reporting.hpp"

#include <filesystem>
#include <functional>

#include "doctest.h"
#include "qme/errors.hpp"
#include "qme/linker.hpp"
#include "qme/model_io.hpp"

using qme::AssessmentResult;
using qme::DataError;
using qme::grade_color;
using qme::KiviatChart;
using qme::RenderOptions;
using qme::SunburstNode;
using qme::to_kiviat;
using qme::to_sunburst;

namespace {

const std::filesystem::path kSourceDir = QME_SOURCE_DIR;

AssessmentResult example_assessment(const std::string& system_id = "walkthrough") {
    std::vector<qme::QmModule> modules;
    for (auto& loaded :
         qme::load_model_dir(kSourceDir / "models/example", qme::ParseOptions{})) {
        modules.push_back(std::move(loaded.module));
    }
    const qme::QualityModel model = qme::link(modules);

    qme::MeasurementDataset data;
    data.system_id = system_id;
    data.raw["java/doomed-nan-comparison"] = 6.0;
    data.raw["java/float-equality-comparison"] = 9.0;
    data.raw["java/missing-javadoc"] = 48.0;
    data.raw["root/clone-coverage"] = 0.21;
    data.raw["root/loc"] = 2759369.0;
    data.raw["root/number-of-classes"] = 800.0;
    return qme::assess(model, data);
}

const SunburstNode* find_child(const SunburstNode& node, const qme::Id& id) {
    for (const SunburstNode& child : node.children) {
        if (child.factor == id) return &child;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("the sunburst mirrors the assessment trace") {
    const AssessmentResult result = example_assessment();
    const SunburstNode root = to_sunburst(result);

    CHECK(root.factor == "root/quality");
    CHECK(root.angle_fraction == 1.0);
    CHECK(root.grade_band == 6);
    REQUIRE(root.children.size() == 2);

    const SunburstNode* maintain = find_child(root, "root/maintainability");
    REQUIRE(maintain != nullptr);
    CHECK(maintain->angle_fraction == 0.5);
    REQUIRE(maintain->children.size() == 2);

    // Product factors fan out into measure leaves.
    const SunburstNode* duplication = find_child(*maintain, "root/duplication");
    REQUIRE(duplication != nullptr);
    REQUIRE(duplication->children.size() == 1);
    CHECK(duplication->children[0].factor == "root/clone-coverage");
    CHECK(duplication->children[0].children.empty());
    CHECK(duplication->children[0].angle_fraction == 1.0);

    const SunburstNode* functional = find_child(root, "root/functional-correctness");
    REQUIRE(functional != nullptr);
    const SunburstNode* comparison = find_child(*functional, "java/comparison-integrity");
    REQUIRE(comparison != nullptr);
    REQUIRE(comparison->children.size() == 2);
    // Measure leaves occupy their binding's weight share of the ring.
    CHECK(comparison->children[0].factor == "java/doomed-nan-comparison");
    CHECK(comparison->children[0].angle_fraction == 0.25);
    CHECK(comparison->children[1].angle_fraction == 0.75);
}

TEST_CASE("sunburst angles conserve the parent span at every level") {
    const AssessmentResult result = example_assessment();
    const SunburstNode root = to_sunburst(result);

    std::function<void(const SunburstNode&)> walk = [&](const SunburstNode& node) {
        if (node.children.empty()) return;
        double sum = 0.0;
        for (const SunburstNode& child : node.children) {
            sum += child.angle_fraction;
            walk(child);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    };
    walk(root);
}

TEST_CASE("sunburst JSON carries labels, fractions, and colours") {
    const AssessmentResult result = example_assessment();
    const nlohmann::json doc = qme::sunburst_to_json(to_sunburst(result));

    CHECK(doc["format"] == "qme-sunburst/1");
    const auto& root = doc["root"];
    CHECK(root["factor"] == "root/quality");
    CHECK(root["label"] == "Quality");
    CHECK(root["angle_fraction"] == 1.0);
    CHECK(root["grade_band"] == 6);
    CHECK(root["color"] == grade_color(6));
    REQUIRE(root["children"].is_array());
    CHECK(root["children"].size() == 2);
}

TEST_CASE("grade colours anchor green, yellow, and red") {
    CHECK(grade_color(1.0) == "#4caf50");
    CHECK(grade_color(3.5) == "#ffeb3b");
    CHECK(grade_color(6.0) == "#f44336");
    // Clamped outside the grade scale.
    CHECK(grade_color(0.0) == "#4caf50");
    CHECK(grade_color(9.0) == "#f44336");
    // Linear midpoints per segment, channel-rounded.
    CHECK(grade_color(2.25) == "#a6cd46");
    CHECK(grade_color(4.75) == "#fa9739");
}

TEST_CASE("the kiviat chart has one axis per top-level aspect") {
    const AssessmentResult result = example_assessment();
    const KiviatChart chart = to_kiviat({result});

    REQUIRE(chart.axes.size() == 2);
    CHECK(chart.axes[0].id == "root/maintainability");
    CHECK(chart.axes[0].label == "Maintainability");
    CHECK(chart.axes[1].id == "root/functional-correctness");
    CHECK(chart.axes[1].label == "Functional Correctness");

    REQUIRE(chart.series.size() == 1);
    CHECK(chart.series[0].system_id == "walkthrough");
    REQUIRE(chart.series[0].values.size() == 2);
    CHECK(chart.series[0].values[0] ==
          doctest::Approx(0.6828947368421053).epsilon(1e-12));
    CHECK(chart.series[0].values[1] ==
          doctest::Approx(0.6378819759155082).epsilon(1e-12));
}

TEST_CASE("kiviat series follow the order of the given results") {
    const AssessmentResult a = example_assessment("system-a");
    const AssessmentResult b = example_assessment("system-b");
    const KiviatChart chart = to_kiviat({a, b});
    REQUIRE(chart.series.size() == 2);
    CHECK(chart.series[0].system_id == "system-a");
    CHECK(chart.series[1].system_id == "system-b");
    CHECK(chart.series[0].values == chart.series[1].values);
}

TEST_CASE("kiviat construction rejects results from different models") {
    const AssessmentResult base = example_assessment();

    AssessmentResult other_root = base;
    other_root.root = "root/maintainability";
    CHECK_THROWS_WITH_AS(to_kiviat({base, other_root}),
                         "results come from different models: root "
                         "root/maintainability vs root/quality",
                         DataError);

    AssessmentResult fewer_children = base;
    fewer_children.factors.at("root/quality").children.pop_back();
    CHECK_THROWS_WITH_AS(to_kiviat({base, fewer_children}),
                         "results come from different models: differing "
                         "top-level children",
                         DataError);

    AssessmentResult renamed_axis = base;
    renamed_axis.factors.at("root/quality").children[1].id = "root/portability";
    CHECK_THROWS_WITH_AS(to_kiviat({base, renamed_axis}),
                         "results come from different models: axis "
                         "root/portability vs root/functional-correctness",
                         DataError);

    CHECK_THROWS_AS(to_kiviat({}), DataError);
}

TEST_CASE("kiviat JSON lists axes and series") {
    const nlohmann::json doc = qme::kiviat_to_json(to_kiviat({example_assessment()}));
    CHECK(doc["format"] == "qme-kiviat/1");
    REQUIRE(doc["axes"].size() == 2);
    CHECK(doc["axes"][0]["id"] == "root/maintainability");
    CHECK(doc["axes"][0]["label"] == "Maintainability");
    REQUIRE(doc["series"].size() == 1);
    CHECK(doc["series"][0]["system_id"] == "walkthrough");
    CHECK(doc["series"][0]["values"].size() == 2);
}

TEST_CASE("the HTML report is self-contained and names the system") {
    const AssessmentResult result = example_assessment();
    const SunburstNode sunburst = to_sunburst(result);
    const KiviatChart kiviat = to_kiviat({result});
    const std::string html = qme::render_html(result, sunburst, kiviat);

    CHECK(html.find("<!DOCTYPE html>") != std::string::npos);
    CHECK(html.find("walkthrough") != std::string::npos);
    CHECK(html.find("<svg") != std::string::npos);
    CHECK(html.find("Maintainability") != std::string::npos);
    CHECK(html.find("root/quality") != std::string::npos);
    // Self-contained: no external scripts, stylesheets, or images.
    CHECK(html.find("<script src") == std::string::npos);
    CHECK(html.find("<link") == std::string::npos);
    CHECK(html.find("http://") == std::string::npos);
    CHECK(html.find("https://") == std::string::npos);
    // Warnings appear verbatim (HTML-escaped).
    CHECK(html.find("csharp/bitwise-add-signed-byte") != std::string::npos);
}

TEST_CASE("HTML output escapes markup in model-provided text") {
    AssessmentResult result = example_assessment();
    auto& root = result.factors.at("root/quality");
    root.name = "Quality <script>alert(1)</script> & more";
    const std::string html =
        qme::render_html(result, to_sunburst(result), to_kiviat({result}));
    CHECK(html.find("<script>alert(1)</script>") == std::string::npos);
    CHECK(html.find("Quality &lt;script&gt;alert(1)&lt;/script&gt; &amp; more") !=
          std::string::npos);
}

TEST_CASE("the generation timestamp only appears when requested") {
    const AssessmentResult result = example_assessment();
    const SunburstNode sunburst = to_sunburst(result);
    const KiviatChart kiviat = to_kiviat({result});

    const std::string plain = qme::render_html(result, sunburst, kiviat);
    CHECK(plain.find("Generated at") == std::string::npos);

    RenderOptions options;
    options.timestamp = "2026-08-23T12:00:00Z";
    const std::string stamped = qme::render_html(result, sunburst, kiviat, options);
    CHECK(stamped.find("Generated at 2026-08-23T12:00:00Z") != std::string::npos);
}

TEST_CASE("rendering the same assessment twice is byte-identical") {
    const AssessmentResult result = example_assessment();
    const std::string first =
        qme::render_html(result, to_sunburst(result), to_kiviat({result}));
    const std::string second =
        qme::render_html(result, to_sunburst(result), to_kiviat({result}));
    CHECK(first == second);
    CHECK(qme::sunburst_to_json(to_sunburst(result)).dump(2) ==
          qme::sunburst_to_json(to_sunburst(result)).dump(2));
}
