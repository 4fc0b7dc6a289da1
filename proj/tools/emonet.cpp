// Command-line front end: synth -> analyze -> export.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emonet/error.hpp"
#include "emonet/pipeline.hpp"

namespace {

// EMONET_SEED replaces the built-in default seed; an explicit --seed still
// wins because CLI11 only keeps defaults for flags the user did not pass.
std::uint64_t default_seed(std::uint64_t fallback) {
    const char* env = std::getenv("EMONET_SEED");
    if (env == nullptr || *env == '\0') return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') {
        throw emonet::Error(emonet::Stage::config,
                            std::string("EMONET_SEED is not an integer: ") + env);
    }
    return static_cast<std::uint64_t>(v);
}

int run(int argc, char** argv) {
    CLI::App app{"Emotion-word semantic networks: generation, decomposition, export"};
    app.require_subcommand(1);

    // --- synth ---------------------------------------------------------
    emonet::SynthRunConfig synth;
    synth.model.seed = default_seed(synth.model.seed);
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic rating CSV");
    cmd_synth->add_option("output", synth.out_path, "Output CSV path")->required();
    cmd_synth->add_option("--participants", synth.participants, "Number of participants")
        ->capture_default_str();
    std::string synth_task = "similarity";
    cmd_synth->add_option("--task", synth_task, "Rating task: similarity or association")
        ->capture_default_str();
    cmd_synth->add_option("--block-size", synth.block_size, "Ordered pairs per participant")
        ->capture_default_str();
    cmd_synth->add_option("--base-within", synth.model.base_within,
                          "Mean score inside a petal")->capture_default_str();
    cmd_synth->add_option("--base-opposite", synth.model.base_opposite,
                          "Mean score across opposite petals")->capture_default_str();
    cmd_synth->add_option("--base-other", synth.model.base_other,
                          "Mean score for all remaining pairs")->capture_default_str();
    cmd_synth->add_option("--noise-sd", synth.model.noise_sd, "Response noise")
        ->capture_default_str();
    cmd_synth->add_option("--careless-rate", synth.model.careless_rate,
                          "Fraction of participants answering at random")
        ->capture_default_str();
    cmd_synth->add_option("--seed", synth.model.seed, "Generator seed")
        ->capture_default_str();

    // --- analyze -------------------------------------------------------
    emonet::AnalyzeConfig analyze;
    analyze.seed = default_seed(analyze.seed);
    analyze.exports = {"json", "svg"};
    auto* cmd_analyze = app.add_subcommand("analyze", "Run the full pipeline on a rating CSV");
    cmd_analyze->add_option("input", analyze.input, "Rating CSV")->required();
    cmd_analyze->add_option("--input-b", analyze.input_b,
                            "Second CSV; adds cross-task statistics");
    cmd_analyze->add_option("--out", analyze.out_dir, "Output bundle directory")->required();
    cmd_analyze->add_option("--damping", analyze.damping, "Teleport probability")
        ->capture_default_str();
    cmd_analyze->add_option("--double-pass-threshold", analyze.double_pass_threshold,
                            "Minimum repeat correlation")->capture_default_str();
    cmd_analyze->add_flag("--impute-missing", analyze.impute_missing,
                          "Fill unanswered pairs with the global mean instead of failing");
    cmd_analyze->add_option("--k-max", analyze.k_max, "Component slots")
        ->capture_default_str();
    cmd_analyze->add_option("--alpha", analyze.alpha, "Resolution parameter")
        ->capture_default_str();
    cmd_analyze->add_option("--alpha-sweep", analyze.sweep_alphas,
                            "Extra alphas to sweep (comma separated)")
        ->delimiter(',');
    cmd_analyze->add_option("--seeds", analyze.seeds, "Restart seeds (comma separated)")
        ->delimiter(',');
    cmd_analyze->add_option("--seed", analyze.seed,
                            "Base seed when --seeds is not given")->capture_default_str();
    cmd_analyze->add_option("--tol", analyze.tol, "Convergence tolerance")
        ->capture_default_str();
    cmd_analyze->add_option("--max-iter", analyze.max_iter, "Iteration cap")
        ->capture_default_str();
    cmd_analyze->add_option("--prune-eps", analyze.prune_eps,
                            "Mixture weight below which a component counts as inactive")
        ->capture_default_str();
    std::string nmi_domain = "petal24";
    cmd_analyze->add_option("--nmi-domain", nmi_domain,
                            "Agreement domain: petal24 or all48")->capture_default_str();
    std::vector<std::string> analyze_exports;
    cmd_analyze->add_option("--export", analyze_exports,
                            "Formats to write: json, dot, graphml, svg")
        ->delimiter(',');

    // --- export --------------------------------------------------------
    emonet::ExportConfig expo;
    auto* cmd_export = app.add_subcommand("export", "Re-derive files from an analysis bundle");
    cmd_export->add_option("bundle", expo.bundle_dir, "Bundle directory from analyze")
        ->required();
    std::vector<std::string> export_formats;
    cmd_export->add_option("--export,--format", export_formats,
                           "Formats to write: dot, graphml, svg")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : emonet::Error::exit_code_for(emonet::Stage::config);
    }

    if (cmd_synth->parsed()) {
        const auto task = emonet::task_from_name(synth_task);
        if (!task) {
            throw emonet::Error(emonet::Stage::config, "unknown task '" + synth_task + "'");
        }
        synth.task = *task;
        const emonet::FilterReport report = emonet::run_synth(synth);
        std::cout << emonet::filter_report_to_json(report);
        return 0;
    }
    if (cmd_analyze->parsed()) {
        const auto domain = emonet::nmi_domain_from_name(nmi_domain);
        if (!domain) {
            throw emonet::Error(emonet::Stage::config,
                                "unknown nmi domain '" + nmi_domain + "'");
        }
        analyze.nmi_domain = *domain;
        if (!analyze_exports.empty()) {
            analyze.exports.clear();
            analyze.exports.insert(analyze_exports.begin(), analyze_exports.end());
        }
        const emonet::AnalyzeResult r = emonet::run_analyze(analyze);
        std::cout << "sessions retained: " << r.filter_report.retained << "/"
                  << r.filter_report.input_sessions << "\n"
                  << "active communities: " << r.active
                  << (r.converged ? "" : " (not converged)") << "\n"
                  << "nmi vs wheel: " << r.nmi_vs_wheel << "\n"
                  << "locality: " << r.locality << "  globality: " << r.globality << "\n"
                  << "wrote " << r.written.size() << " files to " << analyze.out_dir << "\n";
        return 0;
    }
    // export
    if (!export_formats.empty()) {
        expo.formats.clear();
        expo.formats.insert(export_formats.begin(), export_formats.end());
    }
    const auto written = emonet::run_export(expo);
    for (const auto& name : written) std::cout << name << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const emonet::Error& e) {
        std::cerr << "emonet: " << emonet::Error::stage_name(e.stage()) << ": " << e.what()
                  << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "emonet: " << e.what() << "\n";
        return 1;
    }
}
