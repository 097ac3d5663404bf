#include "dynnull/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "dynnull/errors.hpp"
#include "dynnull/graph.hpp"
#include "dynnull/report.hpp"
#include "dynnull/scenario_io.hpp"

namespace dynnull {

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = kExitOk;
    std::string message;
    std::string verdict;
    std::string null_type;
    std::string delta;
    std::string residual;
};

template <class F>
Outcome guarded(F&& body) {
    Outcome out;
    try {
        body(out);
    } catch (const IntegrationDomainError& e) {
        out.code = kExitIntegration;
        out.message = fmt::format("integration error: {}", e.what());
    } catch (const ParseError& e) {
        out.code = kExitValidation;
        out.message = fmt::format("parse error: {}", e.what());
    } catch (const ValidationError& e) {
        out.code = kExitValidation;
        out.message = fmt::format("validation error: {}", e.what());
    } catch (const std::exception& e) {
        out.code = kExitValidation;
        out.message = fmt::format("error: {}", e.what());
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    if (!f) throw Error("failed writing " + path.string());
}

ScenarioDocument load_with_overrides(const fs::path& path, const RunOptions& opts) {
    ScenarioDocument doc = load_scenario(path);
    if (opts.step) doc.scenario.step = *opts.step;
    if (opts.horizon) doc.scenario.horizon = *opts.horizon;
    if (opts.epsilon_eq) doc.classifier.epsilon_eq = *opts.epsilon_eq;
    if (opts.step || opts.horizon) {
        try {
            validate(doc.scenario);
        } catch (const Error& e) {
            throw ValidationError("overrides", e.what());
        }
    }
    return doc;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

Outcome run_one(const fs::path& scenario, const fs::path& out_dir, const RunOptions& opts) {
    return guarded([&](Outcome& out) {
        const ScenarioDocument doc = load_with_overrides(scenario, opts);
        const ScenarioRun run = run_scenario(doc.scenario);
        const ClassifierConfig cfg = resolve_classifier(doc);

        const auto classification = classification_report(run, cfg, opts.effect_epsilon);
        const auto equilibria = equilibria_report(run);
        const auto times = resolve_measure_times(doc);
        const CausalGraph dag = time_indexed_dag(run, times, opts.effect_epsilon);
        const CausalGraph dynamic = dynamic_causal_graph(run.original_spec());

        fs::create_directories(out_dir);
        write_file(out_dir / "trajectories.csv", trajectories_csv(run));
        write_file(out_dir / "classification.json", dump(classification));
        write_file(out_dir / "equilibria.json", dump(equilibria));
        write_file(out_dir / "time_dag.dot", to_dot(dag));
        write_file(out_dir / "dynamic_graph.dot", to_dot(dynamic));

        auto field = [&](const char* key) {
            const auto& v = classification[key];
            if (v.is_null()) return std::string("-");
            if (v.is_string()) return v.get<std::string>();
            return fmt::format("{:.6g}", v.get<double>());
        };
        out.verdict = field("verdict");
        out.null_type = classification.contains("null_type") ? field("null_type") : "-";
        out.delta = classification.contains("delta") ? field("delta") : "-";
        out.residual = classification.contains("residual") ? field("residual") : "-";
    });
}

}  // namespace

int cmd_run(const fs::path& scenario, const fs::path& out_dir, const RunOptions& opts, std::ostream& err) {
    const Outcome o = run_one(scenario, out_dir, opts);
    if (o.code != kExitOk) err << scenario.string() << ": " << o.message << "\n";
    return o.code;
}

int cmd_batch(const fs::path& dir, const fs::path& out_root, int jobs, const RunOptions& opts,
              std::ostream& out, std::ostream& err) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        err << dir.string() << ": not a directory\n";
        return kExitValidation;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<Outcome> outcomes(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++)
            outcomes[i] = run_one(files[i], out_root / files[i].stem(), opts);
    };
    const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, files.size()); ++w) pool.emplace_back(worker);
    }

    int code = kExitOk;
    if (!files.empty())
        out << fmt::format("{:<24} {:<18} {:<24} {:>14} {:>14}\n", "scenario", "verdict", "null_type", "delta",
                           "residual");
    for (std::size_t i = 0; i < files.size(); ++i) {
        const auto& o = outcomes[i];
        const std::string name = files[i].stem().string();
        if (o.code != kExitOk) {
            out << fmt::format("{:<24} {:<18} {:<24} {:>14} {:>14}\n", name, "FAILED", "-", "-", "-");
            err << files[i].string() << ": " << o.message << "\n";
            code = std::max(code, o.code);
        } else {
            out << fmt::format("{:<24} {:<18} {:<24} {:>14} {:>14}\n", name, o.verdict, o.null_type, o.delta,
                               o.residual);
        }
    }
    return code;
}

int cmd_equilibria(const fs::path& scenario, const std::optional<fs::path>& out_dir, const RunOptions& opts,
                   std::ostream& out, std::ostream& err) {
    const Outcome o = guarded([&](Outcome&) {
        const ScenarioDocument doc = load_with_overrides(scenario, opts);
        const std::string body = dump(equilibria_report(run_scenario(doc.scenario)));
        if (out_dir) {
            fs::create_directories(*out_dir);
            write_file(*out_dir / "equilibria.json", body);
        } else {
            out << body;
        }
    });
    if (o.code != kExitOk) err << scenario.string() << ": " << o.message << "\n";
    return o.code;
}

int cmd_graph(const fs::path& scenario, const fs::path& out_dir, GraphFormat format, const RunOptions& opts,
              std::ostream& err) {
    const Outcome o = guarded([&](Outcome&) {
        const ScenarioDocument doc = load_with_overrides(scenario, opts);
        const ScenarioRun run = run_scenario(doc.scenario);
        const auto times = resolve_measure_times(doc);
        const CausalGraph dag = time_indexed_dag(run, times, opts.effect_epsilon);
        const CausalGraph dynamic = dynamic_causal_graph(run.original_spec());
        fs::create_directories(out_dir);
        if (format == GraphFormat::dot) {
            write_file(out_dir / "time_dag.dot", to_dot(dag));
            write_file(out_dir / "dynamic_graph.dot", to_dot(dynamic));
        } else {
            write_file(out_dir / "time_dag.json", dump(to_json(dag)));
            write_file(out_dir / "dynamic_graph.json", dump(to_json(dynamic)));
        }
    });
    if (o.code != kExitOk) err << scenario.string() << ": " << o.message << "\n";
    return o.code;
}

int cmd_validate(const fs::path& scenario, std::ostream& out, std::ostream& err) {
    const Outcome o = guarded([&](Outcome&) { out << emit_scenario(load_scenario(scenario)); });
    if (o.code != kExitOk) err << scenario.string() << ": " << o.message << "\n";
    return o.code;
}

}  // namespace dynnull
