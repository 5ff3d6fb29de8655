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

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "qme/adaptation.hpp"
#include "qme/assessment.hpp"
#include "qme/calibration.hpp"
#include "qme/errors.hpp"
#include "qme/ingestion.hpp"
#include "qme/linker.hpp"
#include "qme/model_io.hpp"
#include "qme/reporting.hpp"
#include "qme/result_io.hpp"
#include "qme/validation.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitModel = 2;
constexpr int kExitIo = 3;
constexpr int kExitData = 4;

std::string now_utc_iso() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& warning : warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
}

/// Loads module files (or directories of them), links, and prints loader
/// warnings. `root` overrides root-aspect inference.
qme::QualityModel load_linked_model(const std::vector<std::string>& paths, bool lenient,
                                    const std::optional<qme::Id>& root) {
    qme::ParseOptions options;
    options.strict = !lenient;
    std::vector<qme::QmModule> modules;
    for (const std::string& path : paths) {
        if (fs::is_directory(path)) {
            for (qme::LoadedModule& loaded : qme::load_model_dir(path, options)) {
                print_warnings(loaded.warnings);
                modules.push_back(std::move(loaded.module));
            }
        } else {
            qme::LoadedModule loaded = qme::load_module(path, options);
            print_warnings(loaded.warnings);
            modules.push_back(std::move(loaded.module));
        }
    }
    return qme::link(modules, root);
}

std::optional<qme::Id> optional_id(const std::string& value) {
    if (value.empty()) {
        return std::nullopt;
    }
    return value;
}

int run_validate(const std::vector<std::string>& paths, bool lenient, const std::string& root) {
    qme::QualityModel model;
    try {
        model = load_linked_model(paths, lenient, optional_id(root));
    } catch (const qme::LinkError& e) {
        std::cout << e.what() << "\n";
        std::cout << "model is invalid (" << e.issues().size() << " linking issue(s))\n";
        return kExitModel;
    }
    const std::vector<qme::Finding> findings = qme::validate(model);
    size_t errors = 0;
    size_t warnings = 0;
    for (const qme::Finding& finding : findings) {
        std::cout << qme::format_finding(finding) << "\n";
        if (finding.level == qme::FindingLevel::Error) {
            ++errors;
        } else {
            ++warnings;
        }
    }
    std::cout << model.modules.size() << " module(s), "
              << model.factors.size() << " factor(s), " << model.measures.size()
              << " measure(s); root aspect " << model.root_aspect << "\n";
    std::cout << errors << " error(s), " << warnings << " warning(s)\n";
    return errors == 0 ? kExitOk : kExitModel;
}

int run_calibrate(const std::string& model_dir, const std::string& corpus_path,
                  const std::string& out_dir, const std::string& stats_path, bool lenient,
                  const std::string& root) {
    const qme::QualityModel model = load_linked_model({model_dir}, lenient, optional_id(root));
    const std::vector<qme::Finding> findings = qme::validate(model);
    if (qme::has_errors(findings)) {
        for (const qme::Finding& finding : findings) {
            if (finding.level == qme::FindingLevel::Error) {
                std::cerr << qme::format_finding(finding) << "\n";
            }
        }
        return kExitModel;
    }

    const qme::BenchmarkCorpus corpus = qme::load_corpus_file(corpus_path);
    const qme::CalibrationResult result = qme::calibrate_model(model, corpus);
    print_warnings(result.warnings);

    qme::save_model_dir(result.model, out_dir);
    if (!stats_path.empty()) {
        qme::write_file_atomic(stats_path, qme::stats_report_to_json(result).dump(2) + "\n");
    }
    std::cout << "calibrated " << result.stats.size() << " measure(s) from "
              << corpus.systems.size() << " benchmark system(s)\n";
    return kExitOk;
}

qme::MeasurementDataset build_dataset(const qme::QualityModel& model,
                                      const std::vector<std::string>& findings_files,
                                      const std::vector<std::string>& metrics_files,
                                      const std::string& system_id) {
    qme::MeasurementDataset dataset;
    dataset.system_id = system_id;
    for (const std::string& path : findings_files) {
        const std::vector<qme::FindingRecord> records = qme::read_findings_file(path);
        dataset.merge(qme::ingest_findings(records, model));
    }
    for (const std::string& path : metrics_files) {
        const std::vector<qme::MetricRecord> records = qme::read_metrics_file(path);
        dataset.merge(qme::ingest_metrics(records, model));
    }
    return dataset;
}

void write_assessment_outputs(const qme::AssessmentResult& result, const std::string& out_path,
                              const std::string& html_path, bool with_timestamp) {
    qme::write_result_file(result, out_path);
    if (!html_path.empty()) {
        const qme::SunburstNode sunburst = qme::to_sunburst(result);
        const qme::KiviatChart kiviat = qme::to_kiviat({result});
        qme::RenderOptions options;
        if (with_timestamp) {
            options.timestamp = now_utc_iso();
        }
        qme::write_file_atomic(html_path, qme::render_html(result, sunburst, kiviat, options));
    }
}

int run_assess_single(const qme::QualityModel& model,
                      const std::vector<std::string>& findings_files,
                      const std::vector<std::string>& metrics_files,
                      const std::string& system_id, const std::string& out_path,
                      const std::string& html_path, bool with_timestamp) {
    const qme::MeasurementDataset dataset =
        build_dataset(model, findings_files, metrics_files, system_id);
    const qme::AssessmentResult result = qme::assess(model, dataset);
    print_warnings(result.warnings);
    write_assessment_outputs(result, out_path, html_path, with_timestamp);
    const qme::FactorAssessment& root = result.root_assessment();
    std::printf("%s: utility [%.4f, %.4f], grade band %d..%d -> %s\n",
                result.system_id.c_str(), root.utility.lo, root.utility.hi,
                root.grade_worst.band, root.grade_best.band, out_path.c_str());
    return kExitOk;
}

std::vector<std::string> glob_csv(const fs::path& dir, const std::string& prefix) {
    std::vector<std::string> out;
    if (!fs::is_directory(dir)) {
        return out;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind(prefix, 0) == 0 &&
            entry.path().extension() == ".csv") {
            out.push_back(entry.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int run_assess_batch(const qme::QualityModel& model, const std::string& system_dir,
                     const std::string& out_dir, unsigned jobs) {
    std::vector<fs::path> systems;
    for (const auto& entry : fs::directory_iterator(system_dir)) {
        if (entry.is_directory()) {
            systems.push_back(entry.path());
        }
    }
    std::sort(systems.begin(), systems.end());
    if (systems.empty()) {
        throw qme::IoError("no system subdirectories found in " + system_dir);
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw qme::IoError("cannot create directory " + out_dir + ": " + ec.message());
    }

    if (jobs == 0) {
        jobs = std::thread::hardware_concurrency();
        if (const char* env = std::getenv("QME_JOBS")) {
            jobs = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        }
        if (jobs == 0) {
            jobs = 1;
        }
    }
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(systems.size()));

    std::atomic<size_t> next{0};
    std::mutex io_mutex;
    std::vector<std::string> failures;
    auto worker = [&]() {
        while (true) {
            const size_t index = next.fetch_add(1);
            if (index >= systems.size()) {
                return;
            }
            const fs::path& system = systems[index];
            try {
                const qme::MeasurementDataset dataset =
                    build_dataset(model, glob_csv(system, "findings"),
                                  glob_csv(system, "metrics"), system.filename().string());
                const qme::AssessmentResult result = qme::assess(model, dataset);
                const fs::path out = fs::path(out_dir) / (system.filename().string() + ".json");
                qme::write_result_file(result, out);
                const qme::FactorAssessment& root = result.root_assessment();
                std::lock_guard<std::mutex> lock(io_mutex);
                print_warnings(result.warnings);
                std::printf("%s: utility [%.4f, %.4f], grade band %d..%d -> %s\n",
                            result.system_id.c_str(), root.utility.lo, root.utility.hi,
                            root.grade_worst.band, root.grade_best.band, out.c_str());
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(io_mutex);
                failures.push_back(system.filename().string() + ": " + e.what());
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (!failures.empty()) {
        for (const std::string& failure : failures) {
            std::cerr << "error: " << failure << "\n";
        }
        return kExitData;
    }
    return kExitOk;
}

int run_adapt(const std::string& model_dir, const std::string& goal_path,
              const std::string& out_dir, const std::string& tasks_path, bool deterministic,
              bool lenient, const std::string& root) {
    const qme::QualityModel model = load_linked_model({model_dir}, lenient, optional_id(root));
    const qme::AdaptationGoal goal = qme::load_goal_file(goal_path);
    const std::string timestamp = deterministic ? "1970-01-01T00:00:00Z" : now_utc_iso();

    qme::PretailorResult result = qme::pretailor(model, goal, timestamp);
    const std::vector<qme::AdaptationTask> tasks =
        qme::merge_tasks(result.tasks, qme::generate_tasks(result.model));

    qme::save_model_dir(result.model, out_dir);
    if (!tasks_path.empty()) {
        qme::write_file_atomic(
            tasks_path, qme::adaptation_report_to_json(goal, tasks, result.history).dump(2) + "\n");
    }
    std::cout << qme::adaptation_report_to_text(tasks, result.history);
    std::cout << "adapted model written to " << out_dir << " ("
              << model.element_count() - result.model.element_count() << " element(s) removed)\n";
    return kExitOk;
}

int run_report(const std::string& result_path, const std::string& html_path,
               const std::string& sunburst_path, const std::string& kiviat_path,
               bool with_timestamp) {
    if (html_path.empty() && sunburst_path.empty() && kiviat_path.empty()) {
        throw qme::UsageError("report needs at least one of --html, --sunburst, --kiviat");
    }
    const qme::AssessmentResult result = qme::read_result_file(result_path);
    const qme::SunburstNode sunburst = qme::to_sunburst(result);
    const qme::KiviatChart kiviat = qme::to_kiviat({result});
    if (!sunburst_path.empty()) {
        qme::write_file_atomic(sunburst_path, qme::sunburst_to_json(sunburst).dump(2) + "\n");
    }
    if (!kiviat_path.empty()) {
        qme::write_file_atomic(kiviat_path, qme::kiviat_to_json(kiviat).dump(2) + "\n");
    }
    if (!html_path.empty()) {
        qme::RenderOptions options;
        if (with_timestamp) {
            options.timestamp = now_utc_iso();
        }
        qme::write_file_atomic(html_path, qme::render_html(result, sunburst, kiviat, options));
    }
    return kExitOk;
}

int run_compare(const std::vector<std::string>& result_paths, const std::string& kiviat_path) {
    std::vector<qme::AssessmentResult> results;
    results.reserve(result_paths.size());
    for (const std::string& path : result_paths) {
        results.push_back(qme::read_result_file(path));
    }
    const qme::KiviatChart chart = qme::to_kiviat(results);
    if (!kiviat_path.empty()) {
        qme::write_file_atomic(kiviat_path, qme::kiviat_to_json(chart).dump(2) + "\n");
    }
    std::printf("%-24s %8s %8s\n", "system", "worst", "best");
    for (const qme::AssessmentResult& result : results) {
        const qme::FactorAssessment& root = result.root_assessment();
        std::printf("%-24s %8.2f %8.2f\n", result.system_id.c_str(),
                    root.grade_worst.continuous, root.grade_best.continuous);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qme - operationalised quality model assessment"};
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "Link and validate quality-model modules");
    std::vector<std::string> validate_paths;
    bool validate_lenient = false;
    std::string validate_root;
    validate->add_option("paths", validate_paths, "Module files or directories")->required();
    validate->add_flag("--lenient", validate_lenient, "Warn on unknown keys instead of failing");
    validate->add_option("--root", validate_root, "Root quality aspect id");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "Derive utility thresholds from a corpus");
    std::string cal_model, cal_corpus, cal_out, cal_stats, cal_root;
    bool cal_lenient = false;
    calibrate->add_option("--model", cal_model, "Model directory")->required();
    calibrate->add_option("--corpus", cal_corpus, "Benchmark corpus CSV")->required();
    calibrate->add_option("--out", cal_out, "Output model directory")->required();
    calibrate->add_option("--stats", cal_stats, "Calibration stats report (JSON)");
    calibrate->add_flag("--lenient", cal_lenient, "Warn on unknown keys instead of failing");
    calibrate->add_option("--root", cal_root, "Root quality aspect id");

    // assess
    auto* assess = app.add_subcommand("assess", "Assess one system or a directory of systems");
    std::string as_model, as_out, as_html, as_system = "system", as_system_dir, as_root;
    std::vector<std::string> as_findings, as_metrics;
    bool as_lenient = false;
    bool as_timestamp = false;
    unsigned as_jobs = 0;
    assess->add_option("--model", as_model, "Model directory")->required();
    assess->add_option("--findings", as_findings, "Findings CSV file(s)");
    assess->add_option("--metrics", as_metrics, "Metrics CSV file(s)");
    assess->add_option("--out", as_out, "Result JSON path (or directory with --system-dir)")
        ->required();
    assess->add_option("--html", as_html, "Also render an HTML report here");
    assess->add_option("--system", as_system, "System id for the result")
        ->capture_default_str();
    assess->add_option("--system-dir", as_system_dir,
                       "Directory of per-system subdirectories (batch mode)");
    assess->add_option("--jobs", as_jobs, "Parallel assessments in batch mode (default $QME_JOBS)");
    assess->add_flag("--lenient", as_lenient, "Warn on unknown keys instead of failing");
    assess->add_flag("--timestamp", as_timestamp, "Embed a generation timestamp in HTML output");
    assess->add_option("--root", as_root, "Root quality aspect id");

    // adapt
    auto* adapt = app.add_subcommand("adapt", "Tailor a model to an adaptation goal");
    std::string ad_model, ad_goal, ad_out, ad_tasks, ad_root;
    bool ad_deterministic = false;
    bool ad_lenient = false;
    adapt->add_option("--model", ad_model, "Model directory")->required();
    adapt->add_option("--goal", ad_goal, "Adaptation goal (JSON)")->required();
    adapt->add_option("--out", ad_out, "Output model directory")->required();
    adapt->add_option("--tasks", ad_tasks, "Adaptation tasks and history (JSON)");
    adapt->add_flag("--deterministic", ad_deterministic,
                    "Use a fixed timestamp in the adaptation history");
    adapt->add_flag("--lenient", ad_lenient, "Warn on unknown keys instead of failing");
    adapt->add_option("--root", ad_root, "Root quality aspect id");

    // report
    auto* report = app.add_subcommand("report", "Render reports from a result file");
    std::string rp_result, rp_html, rp_sunburst, rp_kiviat;
    bool rp_timestamp = false;
    report->add_option("--result", rp_result, "Assessment result JSON")->required();
    report->add_option("--html", rp_html, "HTML report output");
    report->add_option("--sunburst", rp_sunburst, "Sunburst JSON output");
    report->add_option("--kiviat", rp_kiviat, "Kiviat JSON output");
    report->add_flag("--timestamp", rp_timestamp, "Embed a generation timestamp in HTML output");

    // compare
    auto* compare = app.add_subcommand("compare", "Compare several assessment results");
    std::vector<std::string> cp_results;
    std::string cp_kiviat;
    compare->add_option("--results", cp_results, "Result JSON files")->required();
    compare->add_option("--kiviat", cp_kiviat, "Kiviat JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*validate) {
            return run_validate(validate_paths, validate_lenient, validate_root);
        }
        if (*calibrate) {
            return run_calibrate(cal_model, cal_corpus, cal_out, cal_stats, cal_lenient,
                                 cal_root);
        }
        if (*assess) {
            const qme::QualityModel model =
                load_linked_model({as_model}, as_lenient, optional_id(as_root));
            if (!as_system_dir.empty()) {
                if (!as_findings.empty() || !as_metrics.empty()) {
                    throw qme::UsageError(
                        "--system-dir cannot be combined with --findings/--metrics");
                }
                return run_assess_batch(model, as_system_dir, as_out, as_jobs);
            }
            if (as_findings.empty() && as_metrics.empty()) {
                throw qme::UsageError("assess needs --findings and/or --metrics (or --system-dir)");
            }
            return run_assess_single(model, as_findings, as_metrics, as_system, as_out, as_html,
                                     as_timestamp);
        }
        if (*adapt) {
            return run_adapt(ad_model, ad_goal, ad_out, ad_tasks, ad_deterministic, ad_lenient,
                             ad_root);
        }
        if (*report) {
            return run_report(rp_result, rp_html, rp_sunburst, rp_kiviat, rp_timestamp);
        }
        if (*compare) {
            return run_compare(cp_results, cp_kiviat);
        }
    } catch (const qme::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qme::ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return kExitModel;
    } catch (const qme::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const qme::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
