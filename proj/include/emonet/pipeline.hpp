#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emonet/ingest.hpp"
#include "emonet/mdmc.hpp"
#include "emonet/metrics.hpp"
#include "emonet/synth.hpp"

namespace emonet {

// End-to-end runs behind the command-line interface. Everything here is a
// pure function of its configuration so runs can be reproduced and tested
// without a shell.

enum class NmiDomain {
    petal24,  // compare labelings over the 24 wheel words
    all48,    // all words; off-wheel words count as their own reference label
};

const char* nmi_domain_name(NmiDomain domain);
std::optional<NmiDomain> nmi_domain_from_name(const std::string& name);

struct SynthRunConfig {
    std::string out_path;
    std::size_t participants = 200;
    TaskKind task = TaskKind::similarity;
    std::size_t block_size = 120;
    PlantedModel model;
};

// Writes the generated CSV and reports how the standard filters would treat
// it, so generator settings can be sanity-checked without a full analysis.
FilterReport run_synth(const SynthRunConfig& cfg);

struct AnalyzeConfig {
    std::string input;            // rating CSV
    std::string input_b;          // optional second CSV for task comparisons
    std::string out_dir;
    double damping = 0.15;
    double double_pass_threshold = 0.4;
    bool impute_missing = false;
    std::size_t k_max = 10;
    double alpha = 0.001;
    std::vector<double> sweep_alphas;      // empty: no sweep
    std::vector<std::uint64_t> seeds;      // restart seeds; filled from seed if empty
    std::uint64_t seed = 12345;
    double tol = 1e-10;
    std::size_t max_iter = 5000;
    double prune_eps = 1e-6;
    NmiDomain nmi_domain = NmiDomain::petal24;
    NmiNorm nmi_norm = NmiNorm::mean_entropy;
    std::set<std::string> exports = {"json"};  // json, dot, graphml, svg
};

struct AnalyzeResult {
    FilterReport filter_report;
    std::size_t active = 0;
    double nmi_vs_wheel = 0.0;
    double locality = 0.0;
    double globality = 0.0;
    bool converged = false;
    std::vector<std::string> written;  // files produced, relative to out_dir
};

AnalyzeResult run_analyze(const AnalyzeConfig& cfg);

struct ExportConfig {
    std::string bundle_dir;  // directory produced by run_analyze
    std::set<std::string> formats = {"dot"};  // dot, graphml, svg
};

std::vector<std::string> run_export(const ExportConfig& cfg);

// Reference labeling for NMI comparisons on the chosen domain.
Partition reference_partition(const EmotionLexicon& lexicon, NmiDomain domain);

// Detected labeling restricted to the same domain.
Partition detected_partition(const Decomposition& dec, const SemanticNetwork& net,
                             const EmotionLexicon& lexicon, NmiDomain domain);

}  // namespace emonet
