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

#include "qme/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qme/errors.hpp"

namespace qme {
namespace {

using nlohmann::json;

/// Checked accessors over one JSON object. Collects unknown keys so the
/// caller can reject (strict) or warn (lenient) about them.
class ObjectReader {
   public:
    ObjectReader(const json& obj, std::string context, const ParseOptions& options,
                 std::vector<std::string>& warnings)
        : obj_(obj), context_(std::move(context)), options_(options), warnings_(warnings) {
        if (!obj_.is_object()) {
            throw ModelError(context_ + ": expected a JSON object");
        }
    }

    ~ObjectReader() = default;

    std::string require_string(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr) {
            throw ModelError(context_ + ": missing required key \"" + key + "\"");
        }
        return as_string(*v, key);
    }

    std::optional<std::string> optional_string(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr || v->is_null()) {
            return std::nullopt;
        }
        return as_string(*v, key);
    }

    std::string optional_string_or(const std::string& key, const std::string& fallback) {
        auto v = optional_string(key);
        return v ? *v : fallback;
    }

    bool optional_bool(const std::string& key, bool fallback) {
        const json* v = take(key);
        if (v == nullptr || v->is_null()) {
            return fallback;
        }
        if (!v->is_boolean()) {
            throw ModelError(context_ + "." + key + ": expected a boolean");
        }
        return v->get<bool>();
    }

    double require_number(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr) {
            throw ModelError(context_ + ": missing required key \"" + key + "\"");
        }
        return as_number(*v, key);
    }

    std::optional<double> optional_number(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr || v->is_null()) {
            return std::nullopt;
        }
        return as_number(*v, key);
    }

    std::vector<std::string> optional_string_array(const std::string& key) {
        const json* v = take(key);
        std::vector<std::string> out;
        if (v == nullptr || v->is_null()) {
            return out;
        }
        if (!v->is_array()) {
            throw ModelError(context_ + "." + key + ": expected an array of strings");
        }
        for (const auto& item : *v) {
            out.push_back(as_string(item, key + "[]"));
        }
        return out;
    }

    /// Returns the raw array under `key`, or nullptr when absent.
    const json* optional_array(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr || v->is_null()) {
            return nullptr;
        }
        if (!v->is_array()) {
            throw ModelError(context_ + "." + key + ": expected an array");
        }
        return v;
    }

    const json* optional_object(const std::string& key) {
        const json* v = take(key);
        if (v == nullptr || v->is_null()) {
            return nullptr;
        }
        if (!v->is_object()) {
            throw ModelError(context_ + "." + key + ": expected an object");
        }
        return v;
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    /// Call once all expected keys were consumed; handles leftovers per mode.
    void finish() {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (consumed_.count(it.key()) != 0) {
                continue;
            }
            const std::string message = context_ + ": unknown key \"" + it.key() + "\"";
            if (options_.strict) {
                throw ModelError(message);
            }
            warnings_.push_back(message);
        }
    }

    const std::string& context() const { return context_; }

   private:
    const json* take(const std::string& key) {
        consumed_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::string as_string(const json& v, const std::string& key) const {
        if (!v.is_string()) {
            throw ModelError(context_ + "." + key + ": expected a string");
        }
        return v.get<std::string>();
    }

    double as_number(const json& v, const std::string& key) const {
        if (!v.is_number()) {
            throw ModelError(context_ + "." + key + ": expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ModelError(context_ + "." + key + ": expected a finite number");
        }
        return d;
    }

    const json& obj_;
    std::string context_;
    const ParseOptions& options_;
    std::vector<std::string>& warnings_;
    std::set<std::string> consumed_;
};

std::string element_context(const std::string& collection, size_t index) {
    return collection + "[" + std::to_string(index) + "]";
}

FactorKind parse_factor_kind(const std::string& s, const std::string& context) {
    if (s == "quality_aspect") return FactorKind::QualityAspect;
    if (s == "product_factor") return FactorKind::ProductFactor;
    throw ModelError(context + ".kind: unknown factor kind \"" + s +
                     "\" (expected \"quality_aspect\" or \"product_factor\")");
}

Polarity parse_polarity(const std::string& s, const std::string& context) {
    if (s == "positive") return Polarity::Positive;
    if (s == "negative") return Polarity::Negative;
    throw ModelError(context + ".polarity: unknown polarity \"" + s +
                     "\" (expected \"positive\" or \"negative\")");
}

ValueKind parse_value_kind(const std::string& s, const std::string& context) {
    if (s == "findings_count") return ValueKind::FindingsCount;
    if (s == "numeric") return ValueKind::Numeric;
    throw ModelError(context + ".value_kind: unknown value kind \"" + s +
                     "\" (expected \"findings_count\" or \"numeric\")");
}

InstrumentSource parse_instrument_source(const std::string& s, const std::string& context) {
    if (s == "tool") return InstrumentSource::Tool;
    if (s == "manual") return InstrumentSource::Manual;
    throw ModelError(context + ".source: unknown source \"" + s +
                     "\" (expected \"tool\" or \"manual\")");
}

UtilityShape parse_utility_shape(const std::string& s, const std::string& context) {
    if (s == "linear_increasing") return UtilityShape::LinearIncreasing;
    if (s == "linear_decreasing") return UtilityShape::LinearDecreasing;
    throw ModelError(context + ".shape: unknown shape \"" + s +
                     "\" (expected \"linear_increasing\" or \"linear_decreasing\")");
}

WeightMode parse_weight_mode(const std::string& s, const std::string& context) {
    if (s == "ranked") return WeightMode::Ranked;
    if (s == "explicit") return WeightMode::Explicit;
    throw ModelError(context + ".mode: unknown weight mode \"" + s +
                     "\" (expected \"ranked\" or \"explicit\")");
}

/// Every element id must be prefixed with the id of the declaring module.
void check_id_prefix(const Id& id, const Id& module_id, const std::string& context) {
    const std::string prefix = module_id + "/";
    if (id.rfind(prefix, 0) != 0 || id.size() <= prefix.size()) {
        throw ModelError(context + ".id: \"" + id + "\" must start with \"" + prefix +
                         "\" followed by a local name");
    }
}

WeightSpec parse_weights(const json& obj, const std::string& context,
                         const ParseOptions& options, std::vector<std::string>& warnings) {
    ObjectReader r(obj, context, options, warnings);
    WeightSpec spec;
    spec.mode = parse_weight_mode(r.require_string("mode"), context);
    if (spec.mode == WeightMode::Explicit) {
        const json* arr = r.optional_array("weights");
        if (arr == nullptr) {
            throw ModelError(context + ": explicit mode requires a \"weights\" array");
        }
        for (size_t i = 0; i < arr->size(); ++i) {
            const json& v = (*arr)[i];
            if (!v.is_number()) {
                throw ModelError(context + ".weights[" + std::to_string(i) +
                                 "]: expected a number");
            }
            spec.explicit_weights.push_back(v.get<double>());
        }
    } else {
        const json* arr = r.optional_array("ranks");
        if (arr == nullptr) {
            throw ModelError(context + ": ranked mode requires a \"ranks\" array");
        }
        for (size_t i = 0; i < arr->size(); ++i) {
            const json& v = (*arr)[i];
            if (!v.is_number_integer()) {
                throw ModelError(context + ".ranks[" + std::to_string(i) +
                                 "]: expected an integer");
            }
            spec.ranks.push_back(v.get<int>());
        }
    }
    r.finish();
    return spec;
}

UtilityFunction parse_utility(const json& obj, const std::string& context,
                              const ParseOptions& options, std::vector<std::string>& warnings) {
    ObjectReader r(obj, context, options, warnings);
    UtilityFunction fn;
    fn.shape = parse_utility_shape(r.require_string("shape"), context);
    fn.min = r.require_number("min");
    fn.max = r.require_number("max");
    r.finish();
    return fn;
}

MeasureBinding parse_binding(const json& obj, const std::string& context,
                             const ParseOptions& options, std::vector<std::string>& warnings) {
    ObjectReader r(obj, context, options, warnings);
    MeasureBinding binding;
    binding.measure = r.require_string("measure");
    binding.normaliser = r.optional_string("normaliser");
    const json* utility = r.optional_object("utility");
    if (utility == nullptr) {
        throw ModelError(context + ": missing required key \"utility\"");
    }
    binding.utility = parse_utility(*utility, context + ".utility", options, warnings);
    binding.coverage = r.optional_number("coverage").value_or(1.0);
    if (!(binding.coverage > 0.0) || binding.coverage > 1.0) {
        throw ModelError(context + ".coverage: must be in (0, 1], got " +
                         std::to_string(binding.coverage));
    }
    r.finish();
    return binding;
}

EvaluationSpec parse_evaluation(const json& obj, const std::string& context,
                                const ParseOptions& options,
                                std::vector<std::string>& warnings) {
    ObjectReader r(obj, context, options, warnings);
    EvaluationSpec eval;
    eval.owner = r.require_string("owner");
    const json* weights = r.optional_object("weights");
    if (weights == nullptr) {
        throw ModelError(context + ": missing required key \"weights\"");
    }
    eval.weights = parse_weights(*weights, context + ".weights", options, warnings);

    const bool has_measures = r.has("measures");
    const bool has_children = r.has("children");
    if (has_measures == has_children) {
        throw ModelError(context + ": exactly one of \"measures\" or \"children\" is required");
    }
    if (has_measures) {
        eval.form = EvaluationForm::Measures;
        const json* arr = r.optional_array("measures");
        for (size_t i = 0; i < arr->size(); ++i) {
            eval.bindings.push_back(parse_binding(
                (*arr)[i], context + ".measures[" + std::to_string(i) + "]", options, warnings));
        }
    } else {
        eval.form = EvaluationForm::Children;
        eval.children = r.optional_string_array("children");
    }
    r.finish();
    return eval;
}

}  // namespace

LoadedModule parse_module(const json& doc, const ParseOptions& options) {
    LoadedModule out;
    QmModule& mod = out.module;
    ObjectReader root(doc, "module", options, out.warnings);

    mod.id = root.require_string("id");
    if (mod.id.empty() || mod.id.find('/') != std::string::npos) {
        throw ModelError("module.id: \"" + mod.id + "\" must be a non-empty name without '/'");
    }
    mod.requires_modules = root.optional_string_array("requires");

    if (const json* arr = root.optional_array("entities")) {
        for (size_t i = 0; i < arr->size(); ++i) {
            const std::string ctx = element_context("entities", i);
            ObjectReader r((*arr)[i], ctx, options, out.warnings);
            Entity e;
            e.id = r.require_string("id");
            check_id_prefix(e.id, mod.id, ctx);
            e.name = r.optional_string_or("name", e.id);
            e.description = r.optional_string_or("description", "");
            e.is_a = r.optional_string_array("is_a");
            e.part_of = r.optional_string_array("part_of");
            e.module = mod.id;
            r.finish();
            mod.entities.push_back(std::move(e));
        }
    }

    if (const json* arr = root.optional_array("factors")) {
        for (size_t i = 0; i < arr->size(); ++i) {
            const std::string ctx = element_context("factors", i);
            ObjectReader r((*arr)[i], ctx, options, out.warnings);
            Factor f;
            f.id = r.require_string("id");
            check_id_prefix(f.id, mod.id, ctx);
            f.name = r.optional_string_or("name", f.id);
            f.description = r.optional_string_or("description", "");
            f.kind = parse_factor_kind(r.require_string("kind"), ctx);
            f.entity = r.optional_string_or("entity", "");
            f.refines = r.optional_string_array("refines");
            f.tags = r.optional_string_array("tags");
            f.module = mod.id;
            r.finish();
            mod.factors.push_back(std::move(f));
        }
    }

    if (const json* arr = root.optional_array("measures")) {
        for (size_t i = 0; i < arr->size(); ++i) {
            const std::string ctx = element_context("measures", i);
            ObjectReader r((*arr)[i], ctx, options, out.warnings);
            Measure m;
            m.id = r.require_string("id");
            check_id_prefix(m.id, mod.id, ctx);
            m.name = r.optional_string_or("name", m.id);
            m.description = r.optional_string_or("description", "");
            m.value_kind = parse_value_kind(r.require_string("value_kind"), ctx);
            m.is_normalisation_measure = r.optional_bool("normalisation", false);
            m.module = mod.id;
            r.finish();
            mod.measures.push_back(std::move(m));
        }
    }

    if (const json* arr = root.optional_array("instruments")) {
        for (size_t i = 0; i < arr->size(); ++i) {
            const std::string ctx = element_context("instruments", i);
            ObjectReader r((*arr)[i], ctx, options, out.warnings);
            Instrument ins;
            ins.id = r.require_string("id");
            check_id_prefix(ins.id, mod.id, ctx);
            ins.measure = r.require_string("measure");
            ins.source = parse_instrument_source(r.require_string("source"), ctx);
            ins.tool_name = r.optional_string_or("tool_name", "");
            ins.rule_id = r.optional_string_or("rule_id", "");
            ins.context_tag = r.optional_string_or("context_tag", "");
            ins.module = mod.id;
            if (ins.source == InstrumentSource::Tool && ins.tool_name.empty()) {
                throw ModelError(ctx + ": tool instruments require a non-empty \"tool_name\"");
            }
            r.finish();
            mod.instruments.push_back(std::move(ins));
        }
    }

    if (const json* arr = root.optional_array("impacts")) {
        for (size_t i = 0; i < arr->size(); ++i) {
            const std::string ctx = element_context("impacts", i);
            ObjectReader r((*arr)[i], ctx, options, out.warnings);
            Impact imp;
            imp.source = r.require_string("source");
            imp.target = r.require_string("target");
            imp.polarity = parse_polarity(r.require_string("polarity"), ctx);
            imp.justification = r.optional_string_or("justification", "");
            imp.module = mod.id;
            r.finish();
            mod.impacts.push_back(std::move(imp));
        }
    }

    if (const json* arr = root.optional_array("evaluations")) {
        for (size_t i = 0; i < arr->size(); ++i) {
            EvaluationSpec eval = parse_evaluation((*arr)[i], element_context("evaluations", i),
                                                    options, out.warnings);
            eval.module = mod.id;
            mod.evaluations.push_back(std::move(eval));
        }
    }

    root.finish();
    return out;
}

LoadedModule load_module(const std::filesystem::path& path, const ParseOptions& options) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ModelError(path.string() + ": invalid JSON: " + e.what());
    }
    try {
        return parse_module(doc, options);
    } catch (const ModelError& e) {
        throw ModelError(path.string() + ": " + e.what());
    }
}

std::vector<LoadedModule> load_model_dir(const std::filesystem::path& dir,
                                          const ParseOptions& options) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("not a directory: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw IoError("no .json module files found in " + dir.string());
    }
    std::vector<LoadedModule> out;
    out.reserve(files.size());
    for (const auto& file : files) {
        out.push_back(load_module(file, options));
    }
    return out;
}

namespace {

json weights_to_json(const WeightSpec& spec) {
    json j;
    j["mode"] = to_string(spec.mode);
    if (spec.mode == WeightMode::Explicit) {
        j["weights"] = spec.explicit_weights;
    } else {
        j["ranks"] = spec.ranks;
    }
    return j;
}

json binding_to_json(const MeasureBinding& binding) {
    json j;
    j["measure"] = binding.measure;
    if (binding.normaliser) {
        j["normaliser"] = *binding.normaliser;
    }
    j["utility"] = {{"shape", to_string(binding.utility.shape)},
                    {"min", binding.utility.min},
                    {"max", binding.utility.max}};
    if (binding.coverage != 1.0) {
        j["coverage"] = binding.coverage;
    }
    return j;
}

}  // namespace

json module_to_json(const QmModule& module) {
    json j;
    j["id"] = module.id;
    if (!module.requires_modules.empty()) {
        j["requires"] = module.requires_modules;
    }

    if (!module.entities.empty()) {
        json arr = json::array();
        for (const Entity& e : module.entities) {
            json item;
            item["id"] = e.id;
            item["name"] = e.name;
            if (!e.description.empty()) item["description"] = e.description;
            if (!e.is_a.empty()) item["is_a"] = e.is_a;
            if (!e.part_of.empty()) item["part_of"] = e.part_of;
            arr.push_back(std::move(item));
        }
        j["entities"] = std::move(arr);
    }

    if (!module.factors.empty()) {
        json arr = json::array();
        for (const Factor& f : module.factors) {
            json item;
            item["id"] = f.id;
            item["name"] = f.name;
            if (!f.description.empty()) item["description"] = f.description;
            item["kind"] = to_string(f.kind);
            if (!f.entity.empty()) item["entity"] = f.entity;
            if (!f.refines.empty()) item["refines"] = f.refines;
            if (!f.tags.empty()) item["tags"] = f.tags;
            arr.push_back(std::move(item));
        }
        j["factors"] = std::move(arr);
    }

    if (!module.measures.empty()) {
        json arr = json::array();
        for (const Measure& m : module.measures) {
            json item;
            item["id"] = m.id;
            item["name"] = m.name;
            if (!m.description.empty()) item["description"] = m.description;
            item["value_kind"] = to_string(m.value_kind);
            if (m.is_normalisation_measure) item["normalisation"] = true;
            arr.push_back(std::move(item));
        }
        j["measures"] = std::move(arr);
    }

    if (!module.instruments.empty()) {
        json arr = json::array();
        for (const Instrument& ins : module.instruments) {
            json item;
            item["id"] = ins.id;
            item["measure"] = ins.measure;
            item["source"] = to_string(ins.source);
            if (!ins.tool_name.empty()) item["tool_name"] = ins.tool_name;
            if (!ins.rule_id.empty()) item["rule_id"] = ins.rule_id;
            if (!ins.context_tag.empty()) item["context_tag"] = ins.context_tag;
            arr.push_back(std::move(item));
        }
        j["instruments"] = std::move(arr);
    }

    if (!module.impacts.empty()) {
        json arr = json::array();
        for (const Impact& imp : module.impacts) {
            json item;
            item["source"] = imp.source;
            item["target"] = imp.target;
            item["polarity"] = to_string(imp.polarity);
            if (!imp.justification.empty()) item["justification"] = imp.justification;
            arr.push_back(std::move(item));
        }
        j["impacts"] = std::move(arr);
    }

    if (!module.evaluations.empty()) {
        json arr = json::array();
        for (const EvaluationSpec& eval : module.evaluations) {
            json item;
            item["owner"] = eval.owner;
            item["weights"] = weights_to_json(eval.weights);
            if (eval.form == EvaluationForm::Measures) {
                json bindings = json::array();
                for (const MeasureBinding& b : eval.bindings) {
                    bindings.push_back(binding_to_json(b));
                }
                item["measures"] = std::move(bindings);
            } else {
                item["children"] = eval.children;
            }
            arr.push_back(std::move(item));
        }
        j["evaluations"] = std::move(arr);
    }

    return j;
}

void save_model_dir(const QualityModel& model, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
    for (const auto& [id, module] : model.modules) {
        const json j = module_to_json(module);
        write_file_atomic(dir / (id + ".json"), j.dump(2) + "\n");
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw IoError("read failed for " + path.string());
    }
    return buffer.str();
}

}  // namespace qme
