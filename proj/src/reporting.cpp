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

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qme/errors.hpp"

namespace qme {
namespace {

using nlohmann::json;

SunburstNode build_node(const AssessmentResult& result, const Id& factor_id,
                        double angle_fraction) {
    const FactorAssessment& fa = result.factors.at(factor_id);
    SunburstNode node;
    node.factor = fa.id;
    node.label = fa.name;
    node.angle_fraction = angle_fraction;
    node.grade_band = fa.grade_worst.band;
    for (const ChildContribution& child : fa.children) {
        if (child.kind == ChildKind::Factor) {
            node.children.push_back(build_node(result, child.id, child.weight));
        } else {
            SunburstNode leaf;
            leaf.factor = child.id;
            leaf.label = child.name;
            leaf.angle_fraction = child.weight;
            leaf.grade_band = interpret(child.interval.lo).band;
            node.children.push_back(std::move(leaf));
        }
    }
    return node;
}

json node_to_json(const SunburstNode& node) {
    json j;
    j["factor"] = node.factor;
    j["label"] = node.label;
    j["angle_fraction"] = node.angle_fraction;
    j["grade_band"] = node.grade_band;
    j["color"] = grade_color(node.grade_band);
    json children = json::array();
    for (const SunburstNode& child : node.children) {
        children.push_back(node_to_json(child));
    }
    j["children"] = std::move(children);
    return j;
}

}  // namespace

SunburstNode to_sunburst(const AssessmentResult& result) {
    return build_node(result, result.root, 1.0);
}

json sunburst_to_json(const SunburstNode& root) {
    json doc;
    doc["format"] = "qme-sunburst/1";
    doc["root"] = node_to_json(root);
    return doc;
}

KiviatChart to_kiviat(const std::vector<AssessmentResult>& results) {
    if (results.empty()) {
        throw DataError("kiviat chart needs at least one result");
    }
    KiviatChart chart;
    const AssessmentResult& first = results.front();
    for (const ChildContribution& child : first.root_assessment().children) {
        chart.axes.push_back({child.id, child.name});
    }
    for (const AssessmentResult& result : results) {
        if (result.root != first.root) {
            throw DataError("results come from different models: root " + result.root +
                            " vs " + first.root);
        }
        const std::vector<ChildContribution>& children = result.root_assessment().children;
        if (children.size() != chart.axes.size()) {
            throw DataError("results come from different models: differing top-level children");
        }
        KiviatSeries series;
        series.system_id = result.system_id;
        for (size_t i = 0; i < children.size(); ++i) {
            if (children[i].id != chart.axes[i].id) {
                throw DataError("results come from different models: axis " + children[i].id +
                                " vs " + chart.axes[i].id);
            }
            series.values.push_back(children[i].interval.lo);
        }
        chart.series.push_back(std::move(series));
    }
    return chart;
}

json kiviat_to_json(const KiviatChart& chart) {
    json axes = json::array();
    for (const KiviatAxis& axis : chart.axes) {
        axes.push_back({{"id", axis.id}, {"label", axis.label}});
    }
    json series = json::array();
    for (const KiviatSeries& s : chart.series) {
        series.push_back({{"system_id", s.system_id}, {"values", s.values}});
    }
    json doc;
    doc["format"] = "qme-kiviat/1";
    doc["axes"] = std::move(axes);
    doc["series"] = std::move(series);
    return doc;
}

std::string grade_color(double grade) {
    struct Rgb {
        double r, g, b;
    };
    const Rgb green{76, 175, 80};
    const Rgb yellow{255, 235, 59};
    const Rgb red{244, 67, 54};

    const double g = std::clamp(grade, 1.0, 6.0);
    Rgb from{}, to{};
    double t = 0.0;
    if (g <= 3.5) {
        from = green;
        to = yellow;
        t = (g - 1.0) / 2.5;
    } else {
        from = yellow;
        to = red;
        t = (g - 3.5) / 2.5;
    }
    const auto channel = [&](double a, double b) {
        return static_cast<int>(std::lround(a + (b - a) * t));
    };
    char buffer[8];
    std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", channel(from.r, to.r),
                  channel(from.g, to.g), channel(from.b, to.b));
    return buffer;
}

namespace {

std::string escape_html(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

std::string fmt_coord(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    return buffer;
}

std::string interval_text(const UtilityInterval& interval) {
    if (interval.is_point()) {
        return fmt(interval.lo);
    }
    return "[" + fmt(interval.lo) + ", " + fmt(interval.hi) + "]";
}

struct Point {
    double x, y;
};

Point polar(double cx, double cy, double radius, double angle_turns) {
    // Angle 0 points up; angles grow clockwise, matching reading order.
    const double radians = (angle_turns - 0.25) * 2.0 * 3.14159265358979323846;
    return {cx + radius * std::cos(radians), cy + radius * std::sin(radians)};
}

/// Annular sector path between radii r0 < r1 spanning [a0, a1] in turns.
std::string sector_path(double cx, double cy, double r0, double r1, double a0, double a1) {
    const double span = a1 - a0;
    if (span >= 0.999999) {
        // Full ring: two half-annuli avoid the degenerate-arc case.
        return sector_path(cx, cy, r0, r1, a0, a0 + 0.5) +
               sector_path(cx, cy, r0, r1, a0 + 0.5, a1);
    }
    const Point outer_start = polar(cx, cy, r1, a0);
    const Point outer_end = polar(cx, cy, r1, a1);
    const Point inner_end = polar(cx, cy, r0, a1);
    const Point inner_start = polar(cx, cy, r0, a0);
    const int large = span > 0.5 ? 1 : 0;
    std::string d;
    d += "M " + fmt_coord(outer_start.x) + " " + fmt_coord(outer_start.y) + " ";
    d += "A " + fmt_coord(r1) + " " + fmt_coord(r1) + " 0 " + std::to_string(large) + " 1 " +
         fmt_coord(outer_end.x) + " " + fmt_coord(outer_end.y) + " ";
    d += "L " + fmt_coord(inner_end.x) + " " + fmt_coord(inner_end.y) + " ";
    d += "A " + fmt_coord(r0) + " " + fmt_coord(r0) + " 0 " + std::to_string(large) + " 0 " +
         fmt_coord(inner_start.x) + " " + fmt_coord(inner_start.y) + " Z";
    return d;
}

int tree_depth(const SunburstNode& node) {
    int depth = 1;
    for (const SunburstNode& child : node.children) {
        depth = std::max(depth, 1 + tree_depth(child));
    }
    return depth;
}

void render_ring(std::string& svg, const SunburstNode& node, double cx, double cy,
                 double ring_width, int level, double a0, double a1) {
    const double r0 = ring_width * level;
    const double r1 = ring_width * (level + 1);
    const std::string title =
        escape_html(node.label) + " (" + escape_html(node.factor) + "), band " +
        std::to_string(node.grade_band);
    if (level == 0) {
        svg += "<circle cx=\"" + fmt_coord(cx) + "\" cy=\"" + fmt_coord(cy) + "\" r=\"" +
               fmt_coord(r1) + "\" fill=\"" + grade_color(node.grade_band) +
               "\" stroke=\"#ffffff\"><title>" + title + "</title></circle>\n";
    } else {
        svg += "<path d=\"" + sector_path(cx, cy, r0, r1, a0, a1) + "\" fill=\"" +
               grade_color(node.grade_band) + "\" stroke=\"#ffffff\"><title>" + title +
               "</title></path>\n";
    }
    double cursor = a0;
    const double span = a1 - a0;
    for (const SunburstNode& child : node.children) {
        const double child_span = span * child.angle_fraction;
        render_ring(svg, child, cx, cy, ring_width, level + 1, cursor, cursor + child_span);
        cursor += child_span;
    }
}

std::string sunburst_svg(const SunburstNode& root) {
    const int depth = tree_depth(root);
    const double size = 420.0;
    const double cx = size / 2.0;
    const double cy = size / 2.0;
    const double ring_width = (size / 2.0 - 10.0) / depth;
    std::string svg = "<svg viewBox=\"0 0 " + fmt_coord(size) + " " + fmt_coord(size) +
                      "\" width=\"420\" height=\"420\" role=\"img\" "
                      "aria-label=\"Factor hierarchy sunburst\">\n";
    render_ring(svg, root, cx, cy, ring_width, 0, 0.0, 1.0);
    svg += "</svg>";
    return svg;
}

std::string kiviat_svg(const KiviatChart& chart) {
    const double size = 420.0;
    const double cx = size / 2.0;
    const double cy = size / 2.0;
    const double radius = size / 2.0 - 60.0;
    const size_t n = chart.axes.size();
    std::string svg = "<svg viewBox=\"0 0 " + fmt_coord(size) + " " + fmt_coord(size) +
                      "\" width=\"420\" height=\"420\" role=\"img\" "
                      "aria-label=\"Top-level aspect chart\">\n";
    if (n == 0) {
        svg += "</svg>";
        return svg;
    }
    // Grid rings at 25% steps plus the axes with labels.
    for (int step = 1; step <= 4; ++step) {
        svg += "<circle cx=\"" + fmt_coord(cx) + "\" cy=\"" + fmt_coord(cy) + "\" r=\"" +
               fmt_coord(radius * step / 4.0) +
               "\" fill=\"none\" stroke=\"#dddddd\"/>\n";
    }
    for (size_t i = 0; i < n; ++i) {
        const double angle = static_cast<double>(i) / static_cast<double>(n);
        const Point end = polar(cx, cy, radius, angle);
        const Point label = polar(cx, cy, radius + 16.0, angle);
        svg += "<line x1=\"" + fmt_coord(cx) + "\" y1=\"" + fmt_coord(cy) + "\" x2=\"" +
               fmt_coord(end.x) + "\" y2=\"" + fmt_coord(end.y) + "\" stroke=\"#999999\"/>\n";
        svg += "<text x=\"" + fmt_coord(label.x) + "\" y=\"" + fmt_coord(label.y) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + escape_html(chart.axes[i].label) +
               "</text>\n";
    }
    const char* palette[] = {"#1976d2", "#d32f2f", "#388e3c", "#f57c00", "#7b1fa2", "#00796b"};
    for (size_t s = 0; s < chart.series.size(); ++s) {
        std::string points;
        for (size_t i = 0; i < n; ++i) {
            const double angle = static_cast<double>(i) / static_cast<double>(n);
            const Point p = polar(cx, cy, radius * chart.series[s].values[i], angle);
            points += fmt_coord(p.x) + "," + fmt_coord(p.y) + " ";
        }
        const char* color = palette[s % (sizeof(palette) / sizeof(palette[0]))];
        svg += "<polygon points=\"" + points + "\" fill=\"" + color +
               "\" fill-opacity=\"0.25\" stroke=\"" + color + "\" stroke-width=\"2\"><title>" +
               escape_html(chart.series[s].system_id) + "</title></polygon>\n";
    }
    svg += "</svg>";
    return svg;
}

void render_trace(std::string& html, const AssessmentResult& result, const Id& factor_id,
                  int depth) {
    const FactorAssessment& fa = result.factors.at(factor_id);
    html += "<details" + std::string(depth == 0 ? " open" : "") + "><summary><strong>" +
            escape_html(fa.name) + "</strong> <code>" + escape_html(fa.id) + "</code> " +
            "utility " + interval_text(fa.utility) + ", grade " +
            std::to_string(fa.grade_worst.band) +
            (fa.grade_worst.band != fa.grade_best.band
                 ? ".." + std::to_string(fa.grade_best.band)
                 : "") +
            "</summary>\n";
    if (!fa.children.empty()) {
        html += "<ul>\n";
        for (const ChildContribution& child : fa.children) {
            html += "<li>";
            if (child.kind == ChildKind::Factor) {
                render_trace(html, result, child.id, depth + 1);
            } else {
                html += "<span class=\"measure\">" + escape_html(child.name) + " <code>" +
                        escape_html(child.id) + "</code> weight " + fmt(child.weight) +
                        ", utility " + interval_text(child.interval);
                if (child.value) {
                    html += ", value " + fmt(*child.value);
                } else {
                    html += ", value missing";
                }
                if (child.coverage && *child.coverage != 1.0) {
                    html += ", coverage " + fmt(*child.coverage);
                }
                html += "</span>";
            }
            html += "</li>\n";
        }
        html += "</ul>\n";
    }
    html += "</details>\n";
}

}  // namespace

std::string render_html(const AssessmentResult& result, const SunburstNode& sunburst,
                        const KiviatChart& kiviat, const RenderOptions& options) {
    const FactorAssessment& root = result.root_assessment();
    std::string html;
    html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    html += "<title>Quality assessment: " + escape_html(result.system_id) + "</title>\n";
    html += "<style>\n"
            "body{font-family:sans-serif;margin:2em auto;max-width:60em;color:#222}\n"
            "code{background:#f4f4f4;padding:0 .25em}\n"
            "details{margin:.25em 0;padding-left:.5em;border-left:2px solid #eee}\n"
            "ul{list-style:none}\n"
            ".grade{display:inline-block;padding:.15em .5em;border-radius:.25em;color:#fff}\n"
            ".charts{display:flex;flex-wrap:wrap;gap:2em}\n"
            "</style>\n</head>\n<body>\n";
    html += "<h1>Quality assessment: " + escape_html(result.system_id) + "</h1>\n";

    const std::string band_text =
        root.grade_worst.band == root.grade_best.band
            ? std::to_string(root.grade_worst.band)
            : std::to_string(root.grade_worst.band) + ".." + std::to_string(root.grade_best.band);
    html += "<p>Root aspect <strong>" + escape_html(root.name) + "</strong> <code>" +
            escape_html(root.id) + "</code>: utility " + interval_text(root.utility) +
            ", grade <span class=\"grade\" style=\"background:" +
            grade_color(root.grade_worst.continuous) + "\">" + band_text +
            "</span> (continuous " + fmt(root.grade_worst.continuous) +
            (root.utility.is_point() ? "" : " worst case, " + fmt(root.grade_best.continuous) +
                                                " best case") +
            ")</p>\n";
    if (!options.timestamp.empty()) {
        html += "<p>Generated at " + escape_html(options.timestamp) + "</p>\n";
    }

    html += "<div class=\"charts\">\n";
    html += "<section>\n<h2>Factor hierarchy</h2>\n" + sunburst_svg(sunburst) + "\n</section>\n";
    html += "<section>\n<h2>Top-level aspects</h2>\n" + kiviat_svg(kiviat) + "\n</section>\n";
    html += "</div>\n";

    html += "<section>\n<h2>Assessment trace</h2>\n";
    render_trace(html, result, result.root, 0);
    html += "</section>\n";

    html += "<section>\n<h2>Warnings</h2>\n";
    if (result.warnings.empty()) {
        html += "<p>none</p>\n";
    } else {
        html += "<ul>\n";
        for (const std::string& warning : result.warnings) {
            html += "<li>" + escape_html(warning) + "</li>\n";
        }
        html += "</ul>\n";
    }
    html += "</section>\n</body>\n</html>\n";
    return html;
}

}  // namespace qme
