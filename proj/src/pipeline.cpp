#include "emonet/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emonet/error.hpp"
#include "emonet/mds.hpp"
#include "emonet/render.hpp"
#include "emonet/stats.hpp"

namespace emonet {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Stage::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Stage::io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(Stage::io, "write failed for " + path.string());
}

struct DatasetRun {
    FilterOutcome filtered;
    SemanticNetwork net;
};

DatasetRun ingest_dataset(const std::string& path, const EmotionLexicon& lexicon,
                          double threshold, bool impute) {
    std::ifstream in(path);
    if (!in) throw Error(Stage::io, "cannot open " + path);
    const auto sessions = parse_sessions(in, lexicon);
    DatasetRun run;
    run.filtered = apply_filters(sessions, threshold);
    if (run.filtered.retained.empty()) {
        throw Error(Stage::filter, "no sessions survive filtering in " + path);
    }
    const auto agg = aggregate(run.filtered.retained, lexicon);
    run.net = make_network(agg, lexicon,
                           impute ? MissingPolicy::impute_global_mean : MissingPolicy::error);
    return run;
}

nlohmann::json test_result_json(const TestResult& r) {
    nlohmann::json doc;
    doc["test"] = r.test;
    doc["statistic"] = r.statistic;
    doc["df"] = r.df;
    doc["p_value"] = r.p_value;
    doc["underflow"] = r.underflow;
    return doc;
}

}  // namespace

const char* nmi_domain_name(NmiDomain domain) {
    return domain == NmiDomain::petal24 ? "petal24" : "all48";
}

std::optional<NmiDomain> nmi_domain_from_name(const std::string& name) {
    if (name == "petal24") return NmiDomain::petal24;
    if (name == "all48") return NmiDomain::all48;
    return std::nullopt;
}

Partition reference_partition(const EmotionLexicon& lexicon, NmiDomain domain) {
    Partition reference = wheel_partition(lexicon.wheel());
    if (domain == NmiDomain::all48) {
        // Off-wheel words have no petal; each becomes its own reference
        // community so agreement on them is neither free nor punished twice.
        for (const auto& w : lexicon.words()) {
            if (!reference.contains(w.id)) reference.assign(w.id, 8 + w.id);
        }
    }
    return reference;
}

Partition detected_partition(const Decomposition& dec, const SemanticNetwork& net,
                             const EmotionLexicon& lexicon, NmiDomain domain) {
    const Partition all = hard_assign_words(dec, net);
    const Partition reference = reference_partition(lexicon, domain);
    Partition restricted;
    for (const int id : reference.domain()) {
        if (!all.contains(id)) {
            throw Error(Stage::metrics, "detected partition is missing word '" +
                                            lexicon.word(id).english + "'");
        }
        restricted.assign(id, all.label(id));
    }
    return restricted;
}

FilterReport run_synth(const SynthRunConfig& cfg) {
    if (cfg.out_path.empty()) throw Error(Stage::config, "synth: no output path");
    const auto& lexicon = builtin_lexicon();
    const auto sessions = generate(cfg.model, lexicon, cfg.participants, cfg.task,
                                   cfg.block_size);
    std::ostringstream out;
    write_sessions_csv(out, sessions, lexicon);
    write_file(cfg.out_path, out.str());
    return apply_filters(sessions).report;
}

AnalyzeResult run_analyze(const AnalyzeConfig& cfg) {
    if (cfg.input.empty()) throw Error(Stage::config, "analyze: no input file");
    if (cfg.out_dir.empty()) throw Error(Stage::config, "analyze: no output directory");
    for (const auto& format : cfg.exports) {
        if (format != "json" && format != "dot" && format != "graphml" && format != "svg") {
            throw Error(Stage::config, "analyze: unknown export format '" + format + "'");
        }
    }
    const auto& lexicon = builtin_lexicon();
    const fs::path out_dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(Stage::io, "cannot create " + out_dir.string());

    AnalyzeResult result;
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file(out_dir / name, content);
        result.written.push_back(name);
    };

    // Ingest and filter.
    DatasetRun primary = ingest_dataset(cfg.input, lexicon, cfg.double_pass_threshold,
                                        cfg.impute_missing);
    result.filter_report = primary.filtered.report;
    emit("filter_report.json", filter_report_to_json(primary.filtered.report));
    emit("network.json", network_to_json(primary.net, lexicon));

    std::optional<DatasetRun> secondary;
    if (!cfg.input_b.empty()) {
        secondary = ingest_dataset(cfg.input_b, lexicon, cfg.double_pass_threshold,
                                   cfg.impute_missing);
        emit("filter_report_b.json", filter_report_to_json(secondary->filtered.report));
        emit("network_b.json", network_to_json(secondary->net, lexicon));
    }

    // Decompose the walk on the primary network.
    MarkovModel model = transition_matrix(primary.net, cfg.damping);
    model.p = stationary(model);
    DecomposeConfig dc;
    dc.k_max = cfg.k_max;
    dc.alpha = cfg.alpha;
    dc.seed = cfg.seed;
    dc.tol = cfg.tol;
    dc.max_iter = cfg.max_iter;
    dc.prune_eps = cfg.prune_eps;
    std::vector<std::uint64_t> seeds = cfg.seeds;
    if (seeds.empty()) {
        for (std::uint64_t s = 0; s < 10; ++s) seeds.push_back(cfg.seed + s);
    }
    const Decomposition dec = decompose_best(model, dc, seeds);
    result.active = active_count(dec);
    result.converged = dec.converged;
    {
        // The bundle keeps the damping next to the decomposition so exports
        // can rebuild the walk without the original command line.
        nlohmann::json doc = nlohmann::json::parse(decomposition_to_json(dec));
        doc["damping"] = cfg.damping;
        emit("decomposition.json", doc.dump(2) + "\n");
    }

    // Hard labels and agreement with the wheel.
    const Partition detected = detected_partition(dec, primary.net, lexicon, cfg.nmi_domain);
    const Partition reference = reference_partition(lexicon, cfg.nmi_domain);
    result.nmi_vs_wheel = nmi(detected, reference, cfg.nmi_norm);
    {
        nlohmann::json doc;
        doc["domain"] = nmi_domain_name(cfg.nmi_domain);
        doc["active"] = result.active;
        doc["nmi_vs_wheel"] = result.nmi_vs_wheel;
        nlohmann::json labels;
        const Partition by_word = hard_assign_words(dec, primary.net);
        for (const auto& [id, label] : by_word.labels()) {
            labels[lexicon.word(id).english] = label;
        }
        doc["labels"] = std::move(labels);
        emit("partition.json", doc.dump(2) + "\n");
    }

    // Cohesion measures.
    const LocalityReport loc = locality_report(primary.net, lexicon.wheel());
    result.locality = loc.locality;
    result.globality = loc.globality;
    {
        nlohmann::json doc;
        doc["locality"] = loc.locality;
        doc["globality"] = loc.globality;
        doc["per_petal_locality"] = loc.per_petal_locality;
        doc["per_petal_globality"] = loc.per_petal_globality;
        doc["e_max"] = loc.e_max;
        if (secondary) {
            const LocalityReport loc_b = locality_report(secondary->net, lexicon.wheel());
            doc["locality_b"] = loc_b.locality;
            doc["globality_b"] = loc_b.globality;
        }
        emit("metrics.json", doc.dump(2) + "\n");
    }

    // Community network and layouts.
    const CommunityNetwork cn = omega(dec, model);
    emit("omega.json", community_network_to_json(cn, dec, primary.net, lexicon));

    const DissimilarityMatrix dis = dissimilarity(primary.net);
    const Layout net_layout = classical_mds(dis, 2);
    {
        std::vector<std::string> labels;
        for (const int id : primary.net.words) labels.push_back(lexicon.word(id).english);
        emit("layout_network.json", layout_to_json(net_layout, labels));
    }
    std::optional<Layout> comm_layout;
    if (cn.communities.size() >= 2) {
        comm_layout = omega_layout(cn, 2);
        std::vector<std::string> labels;
        for (const auto& top : cn.top_words) {
            std::string label;
            for (const int idx : top) {
                if (idx < 0) continue;
                if (!label.empty()) label += " / ";
                label += lexicon.word(primary.net.words[static_cast<std::size_t>(idx)]).english;
            }
            labels.push_back(std::move(label));
        }
        emit("layout_communities.json", layout_to_json(*comm_layout, labels));
    }

    // Statistics: score distributions, and task comparisons when a second
    // dataset is present.
    {
        nlohmann::json doc;
        doc["score_histogram"] = score_histogram(primary.filtered.retained);
        if (secondary) {
            doc["score_histogram_b"] = score_histogram(secondary->filtered.retained);
            doc["chi_square"] = test_result_json(
                chi_square_homogeneity(score_histogram(primary.filtered.retained),
                                       score_histogram(secondary->filtered.retained)));
            const auto within_a = within_pair_values(primary.net, lexicon.wheel());
            const auto within_b = within_pair_values(secondary->net, lexicon.wheel());
            doc["paired_t_within"] = test_result_json(paired_t_test(within_a, within_b));
            const auto cross_a = cross_pair_values(primary.net, lexicon.wheel());
            const auto cross_b = cross_pair_values(secondary->net, lexicon.wheel());
            doc["paired_t_cross"] = test_result_json(paired_t_test(cross_a, cross_b));
        }
        emit("stats.json", doc.dump(2) + "\n");
    }

    // Resolution sweep.
    if (!cfg.sweep_alphas.empty()) {
        const auto sweep = alpha_sweep(model, dc, cfg.sweep_alphas, seeds);
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& row : sweep) {
            nlohmann::json r;
            r["alpha"] = row.alpha;
            r["seed"] = row.seed;
            r["active"] = row.active;
            r["converged"] = row.converged;
            r["residual"] = row.residual;
            nlohmann::json labels;
            for (const auto& [node, label] : row.partition.labels()) {
                labels[lexicon.word(primary.net.words[static_cast<std::size_t>(node)]).english] =
                    label;
            }
            r["labels"] = std::move(labels);
            doc.push_back(std::move(r));
        }
        emit("sweep.json", doc.dump(2) + "\n");
    }

    // Optional graph/vector exports.
    const Partition word_labels = hard_assign_words(dec, primary.net);
    if (cfg.exports.count("dot") != 0) {
        std::ostringstream dot;
        write_dot(dot, primary.net, lexicon, &word_labels);
        emit("network.dot", dot.str());
        std::ostringstream cdot;
        write_community_dot(cdot, cn, dec, primary.net, lexicon);
        emit("communities.dot", cdot.str());
    }
    if (cfg.exports.count("graphml") != 0) {
        std::ostringstream gml;
        write_graphml(gml, primary.net, lexicon, &word_labels);
        emit("network.graphml", gml.str());
    }
    if (cfg.exports.count("svg") != 0) {
        std::ostringstream svg;
        write_network_svg(svg, net_layout, primary.net, lexicon);
        emit("layout_network.svg", svg.str());
        if (comm_layout) {
            std::ostringstream csvg;
            write_community_svg(csvg, *comm_layout, cn, dec, primary.net, lexicon);
            emit("layout_communities.svg", csvg.str());
        }
    }

    // Run summary.
    {
        nlohmann::json doc;
        doc["input"] = cfg.input;
        if (!cfg.input_b.empty()) doc["input_b"] = cfg.input_b;
        doc["damping"] = cfg.damping;
        doc["k_max"] = cfg.k_max;
        doc["alpha"] = cfg.alpha;
        doc["seeds"] = seeds;
        doc["active"] = result.active;
        doc["converged"] = result.converged;
        doc["nmi_domain"] = nmi_domain_name(cfg.nmi_domain);
        doc["nmi_vs_wheel"] = result.nmi_vs_wheel;
        doc["locality"] = result.locality;
        doc["globality"] = result.globality;
        doc["files"] = result.written;
        emit("summary.json", doc.dump(2) + "\n");
    }
    return result;
}

std::vector<std::string> run_export(const ExportConfig& cfg) {
    if (cfg.bundle_dir.empty()) throw Error(Stage::config, "export: no bundle directory");
    for (const auto& format : cfg.formats) {
        if (format != "dot" && format != "graphml" && format != "svg") {
            throw Error(Stage::config, "export: unknown format '" + format + "'");
        }
    }
    const auto& lexicon = builtin_lexicon();
    const fs::path dir(cfg.bundle_dir);
    const SemanticNetwork net = network_from_json(read_file(dir / "network.json"), lexicon);
    const std::string dec_text = read_file(dir / "decomposition.json");
    const Decomposition dec = decomposition_from_json(dec_text);
    double damping = 0.15;
    {
        const auto doc = nlohmann::json::parse(dec_text);
        if (doc.contains("damping")) damping = doc["damping"].get<double>();
    }
    MarkovModel model = transition_matrix(net, damping);
    model.p = dec.stationary;
    const CommunityNetwork cn = omega(dec, model);
    const Partition word_labels = hard_assign_words(dec, net);

    std::vector<std::string> written;
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        written.push_back(name);
    };
    if (cfg.formats.count("dot") != 0) {
        std::ostringstream dot;
        write_dot(dot, net, lexicon, &word_labels);
        emit("network.dot", dot.str());
        std::ostringstream cdot;
        write_community_dot(cdot, cn, dec, net, lexicon);
        emit("communities.dot", cdot.str());
    }
    if (cfg.formats.count("graphml") != 0) {
        std::ostringstream gml;
        write_graphml(gml, net, lexicon, &word_labels);
        emit("network.graphml", gml.str());
    }
    if (cfg.formats.count("svg") != 0) {
        const Layout net_layout = classical_mds(dissimilarity(net), 2);
        std::ostringstream svg;
        write_network_svg(svg, net_layout, net, lexicon);
        emit("layout_network.svg", svg.str());
        if (cn.communities.size() >= 2) {
            const Layout comm_layout = omega_layout(cn, 2);
            std::ostringstream csvg;
            write_community_svg(csvg, comm_layout, cn, dec, net, lexicon);
            emit("layout_communities.svg", csvg.str());
        }
    }
    return written;
}

}  // namespace emonet
