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
//
// Meta-model for operationalised quality models.
//
// A quality model is assembled from modules. Entities name the parts of the
// product, factors express properties of entities, measures quantify product
// factors, instruments collect measure values, impacts connect product
// factors to quality aspects, and evaluations say how each factor's utility
// is computed from its children. Ids are globally unique strings of the form
// "<module>/<local-name>".

#ifndef QME_MODEL_HPP
#define QME_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qme {

using Id = std::string;

/// A part of the software product (product, source code, class, method, ...).
struct Entity {
    Id id;
    std::string name;
    std::string description;
    std::vector<Id> is_a;     ///< generalisation parents
    std::vector<Id> part_of;  ///< composition parents
    Id module;
};

enum class FactorKind { QualityAspect, ProductFactor };

/// A property of an entity. Quality aspects are abstract, whole-product
/// characteristics; product factors are measurable properties of product
/// parts. Refinement stays within one kind.
struct Factor {
    Id id;
    std::string name;
    FactorKind kind = FactorKind::ProductFactor;
    Id entity;
    std::string description;
    std::vector<Id> refines;  ///< parents in the refinement hierarchy
    std::vector<std::string> tags;
    Id module;
};

enum class Polarity { Positive, Negative };

/// Directed influence of a product factor on a quality aspect.
struct Impact {
    Id source;  ///< product factor
    Id target;  ///< quality aspect
    Polarity polarity = Polarity::Positive;
    std::string justification;
    Id module;
};

enum class ValueKind { FindingsCount, Numeric };

struct Measure {
    Id id;
    std::string name;
    ValueKind value_kind = ValueKind::Numeric;
    bool is_normalisation_measure = false;
    std::string description;
    Id module;
};

enum class InstrumentSource { Tool, Manual };

/// A concrete collector for a measure: a static-analysis rule or a manual
/// check. Tool instruments are matched against ingested findings by
/// (tool_name, rule_id), case-sensitively.
struct Instrument {
    Id id;
    Id measure;
    InstrumentSource source = InstrumentSource::Tool;
    std::string tool_name;
    std::string rule_id;
    std::string context_tag;  ///< e.g. a language; used by adaptation
    Id module;
};

enum class UtilityShape { LinearIncreasing, LinearDecreasing };

/// Clamped linear map from a measure value to [0,1], parameterised by the
/// min/max thresholds. (0, 1e-8) with a decreasing shape is the degenerate
/// jump function produced by calibration when a measure has almost no
/// nonzero benchmark data.
struct UtilityFunction {
    UtilityShape shape = UtilityShape::LinearDecreasing;
    double min = 0.0;
    double max = 1.0;
};

/// One measure's contribution to a product factor's evaluation. The weight
/// is positional within the owning evaluation's WeightSpec. Coverage states
/// how completely the measure covers the factor; it is reported but takes no
/// part in the arithmetic.
struct MeasureBinding {
    Id measure;
    std::optional<Id> normaliser;
    UtilityFunction utility;
    double coverage = 1.0;
};

enum class WeightMode { Explicit, Ranked };

/// Importance of an evaluation's children: either explicit fractions that
/// sum to 1, or an importance ranking (1 = most important, ties allowed)
/// converted to weights with the rank-order centroid method.
struct WeightSpec {
    WeightMode mode = WeightMode::Explicit;
    std::vector<double> explicit_weights;
    std::vector<int> ranks;
};

enum class EvaluationForm { Measures, Children };

/// How a factor's utility is computed. Product factors aggregate measure
/// bindings; quality aspects aggregate child factors (refining sub-aspects
/// and impacting product factors, uniformly weighted in one spec).
struct EvaluationSpec {
    Id owner;
    WeightSpec weights;
    EvaluationForm form = EvaluationForm::Measures;
    std::vector<MeasureBinding> bindings;  ///< Measures form
    std::vector<Id> children;              ///< Children form
    Id module;

    size_t child_count() const {
        return form == EvaluationForm::Measures ? bindings.size() : children.size();
    }
};

/// One model file's worth of elements plus its dependencies.
struct QmModule {
    Id id;
    std::vector<Id> requires_modules;
    std::vector<Entity> entities;
    std::vector<Factor> factors;
    std::vector<Measure> measures;
    std::vector<Instrument> instruments;
    std::vector<Impact> impacts;
    std::vector<EvaluationSpec> evaluations;

    size_t element_count() const {
        return entities.size() + factors.size() + measures.size() +
               instruments.size() + impacts.size() + evaluations.size();
    }
};

/// A linked model: every reference resolved, elements keyed by id in
/// canonical (lexicographic) order. Treated as immutable once linked; safe
/// to share read-only between assessment workers.
struct QualityModel {
    std::map<Id, QmModule> modules;  ///< element lists kept for re-serialisation
    Id root_aspect;

    std::map<Id, Entity> entities;
    std::map<Id, Factor> factors;
    std::map<Id, Measure> measures;
    std::map<Id, Instrument> instruments;
    std::vector<Impact> impacts;  ///< sorted by (source, target)
    std::map<Id, EvaluationSpec> evaluations;  ///< keyed by owner

    // Derived indices, filled by link(). Impact indices point into `impacts`
    // so the model stays trivially copyable.
    std::map<Id, std::vector<Id>> refined_by;          ///< factor -> refining children
    std::map<Id, std::vector<size_t>> impacts_on;      ///< aspect -> incoming impacts
    std::map<Id, std::vector<size_t>> impacts_of;      ///< product factor -> outgoing impacts

    const Factor* find_factor(const Id& id) const;
    const Measure* find_measure(const Id& id) const;
    const EvaluationSpec* evaluation_of(const Id& factor_id) const;

    /// Distinct measure ids appearing in any binding (not normalisers).
    std::vector<Id> bound_measures() const;

    /// Total element count across all modules.
    size_t element_count() const;
};

const char* to_string(FactorKind kind);
const char* to_string(Polarity polarity);
const char* to_string(ValueKind kind);
const char* to_string(InstrumentSource source);
const char* to_string(UtilityShape shape);
const char* to_string(WeightMode mode);

}  // namespace qme

#endif  // QME_MODEL_HPP
