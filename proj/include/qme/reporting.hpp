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

#ifndef QME_REPORTING_HPP
#define QME_REPORTING_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qme/assessment.hpp"

namespace qme {

/// One ring segment of the factor-hierarchy sunburst. The angle fraction is
/// the element's weight share within its parent; worst-case grades colour
/// the segments.
struct SunburstNode {
    Id factor;
    std::string label;
    double angle_fraction = 1.0;
    int grade_band = 6;
    std::vector<SunburstNode> children;
};

/// Mirrors the assessment trace: factor children recurse, measure leaves
/// terminate. Grade bands come from the worst-case (lo) endpoint.
SunburstNode to_sunburst(const AssessmentResult& result);

nlohmann::json sunburst_to_json(const SunburstNode& root);

struct KiviatAxis {
    Id id;
    std::string label;
};

struct KiviatSeries {
    std::string system_id;
    std::vector<double> values;  // worst-case utility per axis
};

/// One axis per direct child of the root aspect, one series per system.
struct KiviatChart {
    std::vector<KiviatAxis> axes;
    std::vector<KiviatSeries> series;
};

/// Builds the comparison chart. All results must share the same root and the
/// same top-level children (DataError otherwise).
KiviatChart to_kiviat(const std::vector<AssessmentResult>& results);

nlohmann::json kiviat_to_json(const KiviatChart& chart);

/// Colour for a grade value in [1, 6]: green at 1 via yellow at 3.5 to red
/// at 6, linearly interpolated, as "#rrggbb".
std::string grade_color(double grade);

struct RenderOptions {
    std::string timestamp;  // empty = no generation timestamp in the output
};

/// Renders a self-contained static HTML report: root grade, SVG sunburst and
/// Kiviat charts, an expandable assessment trace, and the verbatim warnings.
std::string render_html(const AssessmentResult& result, const SunburstNode& sunburst,
                        const KiviatChart& kiviat, const RenderOptions& options = {});

}  // namespace qme

#endif  // QME_REPORTING_HPP
