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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qme/linker.hpp"

namespace qme::oracle {

std::vector<double> roc_weights(int n) {
    if (n < 1) {
        throw std::invalid_argument("oracle::roc_weights needs n >= 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        double sum = 0.0;
        for (int k = i; k <= n; ++k) {
            sum += 1.0 / static_cast<double>(k);
        }
        out.push_back(sum / static_cast<double>(n));
    }
    return out;
}

std::vector<double> ranked_weights(const std::vector<int>& ranks) {
    if (ranks.empty()) {
        throw std::invalid_argument("oracle::ranked_weights needs at least one rank");
    }
    const std::vector<double> centroid = roc_weights(static_cast<int>(ranks.size()));
    // Group members by rank; groups occupy consecutive centroid positions in
    // ascending rank order and share their mean.
    std::map<int, std::vector<size_t>> groups;
    for (size_t i = 0; i < ranks.size(); ++i) {
        groups[ranks[i]].push_back(i);
    }
    std::vector<double> out(ranks.size(), 0.0);
    size_t position = 0;
    for (const auto& [rank, members] : groups) {
        double sum = 0.0;
        for (size_t k = 0; k < members.size(); ++k) {
            sum += centroid[position + k];
        }
        const double share = sum / static_cast<double>(members.size());
        for (size_t index : members) {
            out[index] = share;
        }
        position += members.size();
    }
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("oracle::quantile of empty vector");
    }
    std::sort(values.begin(), values.end());
    if (q <= 0.0) {
        return values.front();
    }
    if (q >= 1.0) {
        return values.back();
    }
    const double p = 1.0 + (static_cast<double>(values.size()) - 1.0) * q;
    const double k = std::floor(p);
    const double g = p - k;
    const size_t index = static_cast<size_t>(k) - 1;
    if (index + 1 >= values.size()) {
        return values.back();
    }
    return (1.0 - g) * values[index] + g * values[index + 1];
}

double utility(UtilityShape shape, double min, double max, double value) {
    if (min == max) {
        const bool reached = value >= min;
        return shape == UtilityShape::LinearIncreasing ? (reached ? 1.0 : 0.0)
                                                       : (reached ? 0.0 : 1.0);
    }
    double u = (value - min) / (max - min);
    if (shape == UtilityShape::LinearDecreasing) {
        u = 1.0 - u;
    }
    if (u < 0.0) {
        u = 0.0;
    }
    if (u > 1.0) {
        u = 1.0;
    }
    return u;
}

namespace {

std::vector<double> spec_weights(const WeightSpec& spec, size_t n) {
    if (spec.mode == WeightMode::Explicit) {
        if (spec.explicit_weights.size() != n) {
            throw std::logic_error("oracle: explicit weight count mismatch");
        }
        return spec.explicit_weights;
    }
    if (spec.ranks.size() != n) {
        throw std::logic_error("oracle: rank count mismatch");
    }
    return ranked_weights(spec.ranks);
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

Interval evaluate(const QualityModel& model, const std::map<Id, double>& derived_values,
                  const Id& factor) {
    const EvaluationSpec* eval = model.evaluation_of(factor);
    if (eval == nullptr) {
        return {0.0, 1.0};
    }
    std::vector<Interval> children;
    std::vector<double> weights;
    if (eval->form == EvaluationForm::Measures) {
        weights = spec_weights(eval->weights, eval->bindings.size());
        for (const MeasureBinding& binding : eval->bindings) {
            auto it = derived_values.find(binding.measure);
            if (it == derived_values.end()) {
                children.push_back({0.0, 1.0});
            } else {
                const double u = utility(binding.utility.shape, binding.utility.min,
                                         binding.utility.max, it->second);
                children.push_back({u, u});
            }
        }
    } else {
        weights = spec_weights(eval->weights, eval->children.size());
        for (const Id& child : eval->children) {
            children.push_back(evaluate(model, derived_values, child));
        }
    }
    double lo = 0.0;
    double hi = 0.0;
    for (size_t i = 0; i < children.size(); ++i) {
        lo += weights[i] * children[i].lo;
        hi += weights[i] * children[i].hi;
    }
    return {clamp01(lo), clamp01(hi)};
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

WeightSpec random_weight_spec(std::mt19937_64& rng, size_t n) {
    WeightSpec spec;
    if (uniform_int(rng, 0, 1) == 0) {
        spec.mode = WeightMode::Explicit;
        double sum = 0.0;
        std::vector<double> raw;
        for (size_t i = 0; i < n; ++i) {
            raw.push_back(uniform(rng, 0.1, 1.0));
            sum += raw.back();
        }
        for (double v : raw) {
            spec.explicit_weights.push_back(v / sum);
        }
    } else {
        spec.mode = WeightMode::Ranked;
        for (size_t i = 0; i < n; ++i) {
            spec.ranks.push_back(uniform_int(rng, 1, static_cast<int>(n)));
        }
    }
    return spec;
}

UtilityFunction random_utility(std::mt19937_64& rng, bool decreasing_only) {
    UtilityFunction fn;
    fn.shape = decreasing_only || uniform_int(rng, 0, 1) == 0 ? UtilityShape::LinearDecreasing
                                                              : UtilityShape::LinearIncreasing;
    if (uniform_int(rng, 0, 9) == 0) {
        fn.min = fn.max = uniform(rng, 0.0, 1.0);  // degenerate step
    } else {
        const double a = uniform(rng, 0.0, 1.0);
        const double b = a + uniform(rng, 0.05, 1.0);
        fn.min = a;
        fn.max = b;
    }
    return fn;
}

}  // namespace

QualityModel random_model(std::mt19937_64& rng, const ModelShape& shape) {
    QmModule mod;
    mod.id = "m";

    Entity product;
    product.id = "m/product";
    product.name = "Product";
    mod.entities.push_back(product);
    Entity part;
    part.id = "m/part";
    part.name = "Part";
    part.part_of = {"m/product"};
    mod.entities.push_back(part);

    Factor root;
    root.id = "m/root";
    root.name = "Root";
    root.kind = FactorKind::QualityAspect;
    root.entity = "m/product";
    mod.factors.push_back(root);

    // Every mid-level aspect needs at least one product factor, so cap the
    // aspect count to half the remaining factor budget up front.
    int factor_count = 1;
    int measure_count = 0;
    const int mid_cap = std::min(shape.max_mid_aspects, (shape.max_factors - 1) / 2);
    const int mids = uniform_int(rng, 1, std::max(1, mid_cap));
    std::vector<Id> mid_ids;
    for (int a = 0; a < mids; ++a) {
        Factor mid;
        mid.id = "m/mid" + std::to_string(a);
        mid.name = "Mid " + std::to_string(a);
        mid.kind = FactorKind::QualityAspect;
        mid.entity = "m/product";
        mid.refines = {"m/root"};
        mod.factors.push_back(mid);
        mid_ids.push_back(mid.id);
        ++factor_count;
    }

    for (size_t m = 0; m < mid_ids.size(); ++m) {
        const Id& mid = mid_ids[m];
        // Leave one factor slot per mid aspect still waiting for its factors.
        const int reserved = static_cast<int>(mid_ids.size() - m - 1);
        const int budget = shape.max_factors - factor_count - reserved;
        const int pfs = uniform_int(rng, 1, std::max(1, std::min(3, budget)));
        std::vector<Id> pf_ids;
        for (int p = 0; p < pfs; ++p) {
            Factor pf;
            pf.id = mid + "-pf" + std::to_string(p);
            pf.name = "Factor " + std::to_string(factor_count);
            pf.kind = FactorKind::ProductFactor;
            pf.entity = "m/part";
            mod.factors.push_back(pf);
            ++factor_count;

            Impact impact;
            impact.source = pf.id;
            impact.target = mid;
            impact.polarity = uniform_int(rng, 0, 1) == 0 ? Polarity::Positive
                                                          : Polarity::Negative;
            mod.impacts.push_back(impact);

            EvaluationSpec eval;
            eval.owner = pf.id;
            eval.form = EvaluationForm::Measures;
            const int bindings = uniform_int(rng, 1, shape.max_bindings);
            for (int b = 0; b < bindings; ++b) {
                Measure measure;
                measure.id = "m/meas" + std::to_string(measure_count++);
                measure.name = measure.id;
                measure.value_kind = ValueKind::Numeric;
                mod.measures.push_back(measure);

                MeasureBinding binding;
                binding.measure = measure.id;
                binding.utility = random_utility(rng, shape.decreasing_only);
                eval.bindings.push_back(binding);
            }
            eval.weights = random_weight_spec(rng, eval.bindings.size());
            mod.evaluations.push_back(eval);
            pf_ids.push_back(pf.id);
        }

        EvaluationSpec eval;
        eval.owner = mid;
        eval.form = EvaluationForm::Children;
        eval.children = pf_ids;
        eval.weights = random_weight_spec(rng, pf_ids.size());
        mod.evaluations.push_back(eval);
    }

    EvaluationSpec root_eval;
    root_eval.owner = "m/root";
    root_eval.form = EvaluationForm::Children;
    root_eval.children = mid_ids;
    root_eval.weights = random_weight_spec(rng, mid_ids.size());
    mod.evaluations.push_back(root_eval);

    return link({mod});
}

std::map<Id, double> random_complete_values(const QualityModel& model, std::mt19937_64& rng) {
    std::map<Id, double> values;
    for (const auto& [owner, eval] : model.evaluations) {
        for (const MeasureBinding& binding : eval.bindings) {
            const double span = binding.utility.max - binding.utility.min;
            const double pad = span > 0.0 ? 0.5 * span : 1.0;
            values[binding.measure] =
                uniform(rng, binding.utility.min - pad, binding.utility.max + pad);
        }
    }
    return values;
}

}  // namespace qme::oracle
