#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "emonet/error.hpp"
#include "emonet/ingest.hpp"
#include "emonet/lexicon.hpp"
#include "emonet/mdmc.hpp"
#include "emonet/metrics.hpp"
#include "emonet/pipeline.hpp"
#include "emonet/synth.hpp"

using namespace emonet;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "emonet_pipeline_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) {
        ++n;
    }
    return n;
}

// A corpus with well-separated petals and mild noise; strong enough that the
// eight communities survive the session filters with room to spare.
SynthRunConfig strong_corpus(const fs::path& out_path, std::uint64_t seed = 42) {
    SynthRunConfig cfg;
    cfg.out_path = out_path.string();
    cfg.participants = 100;
    cfg.model.base_within = 6.5;
    cfg.model.base_opposite = 0.2;
    cfg.model.base_other = 0.25;
    cfg.model.noise_sd = 0.2;
    cfg.model.careless_rate = 0.0;
    cfg.model.seed = seed;
    return cfg;
}

// The shared rating CSV used by the analyze tests, generated once.
const fs::path& corpus_a() {
    static const fs::path path = [] {
        const fs::path p = fresh_dir("corpus") / "similarity.csv";
        run_synth(strong_corpus(p));
        return p;
    }();
    return path;
}

AnalyzeConfig strong_analyze(const fs::path& input, const fs::path& out_dir) {
    AnalyzeConfig cfg;
    cfg.input = input.string();
    cfg.out_dir = out_dir.string();
    cfg.seeds = {1, 2, 3};
    cfg.double_pass_threshold = 0.2;
    cfg.impute_missing = true;
    return cfg;
}

int run_cli(const std::string& tail) {
    const std::string cmd = std::string(EMONET_CLI_PATH) + " " + tail;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("agreement domain names round trip") {
    CHECK(std::string(nmi_domain_name(NmiDomain::petal24)) == "petal24");
    CHECK(std::string(nmi_domain_name(NmiDomain::all48)) == "all48");
    CHECK(nmi_domain_from_name("petal24") == NmiDomain::petal24);
    CHECK(nmi_domain_from_name("all48") == NmiDomain::all48);
    CHECK_FALSE(nmi_domain_from_name("wheel").has_value());
    CHECK_FALSE(nmi_domain_from_name("").has_value());
}

TEST_CASE("reference partition keeps petal labels and isolates off-wheel words") {
    const auto& lexicon = builtin_lexicon();

    const Partition petals = reference_partition(lexicon, NmiDomain::petal24);
    CHECK(petals == wheel_partition(lexicon.wheel()));
    CHECK(petals.size() == 24);

    const Partition all = reference_partition(lexicon, NmiDomain::all48);
    REQUIRE(all.size() == lexicon.size());
    std::set<int> off_wheel_labels;
    for (const auto& w : lexicon.words()) {
        const int petal = lexicon.wheel().petal_of(w.id);
        if (petal >= 0) {
            CHECK(all.label(w.id) == petal);
        } else {
            CHECK(all.label(w.id) >= 8);
            off_wheel_labels.insert(all.label(w.id));
        }
    }
    // every off-wheel word is its own community
    CHECK(off_wheel_labels.size() == lexicon.size() - 24);
}

TEST_CASE("detected partition restricts the hard assignment to the reference domain") {
    const auto& lexicon = builtin_lexicon();
    const SemanticNetwork net = planted_network(lexicon.wheel(), 6.5, 1.0, 0.5, 42);
    const MarkovModel model = transition_matrix(net, 0.15);

    DecomposeConfig cfg;
    cfg.k_max = 10;
    cfg.alpha = 0.001;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const Decomposition dec = decompose_best(model, cfg, seeds);

    const Partition detected = detected_partition(dec, net, lexicon, NmiDomain::petal24);
    const Partition by_word = hard_assign_words(dec, net);
    REQUIRE(detected.size() == 24);
    for (const int id : detected.domain()) {
        CHECK(lexicon.wheel().petal_of(id) >= 0);
        CHECK(detected.label(id) == by_word.label(id));
    }
    CHECK(nmi(detected, reference_partition(lexicon, NmiDomain::petal24)) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // the 24-word planted network has no off-wheel words to restrict to
    CHECK_THROWS_AS((void)detected_partition(dec, net, lexicon, NmiDomain::all48), Error);
    try {
        (void)detected_partition(dec, net, lexicon, NmiDomain::all48);
    } catch (const Error& e) {
        CHECK(e.stage() == Stage::metrics);
    }
}

TEST_CASE("synthetic corpus generation writes a parseable csv") {
    const fs::path dir = fresh_dir("synth");
    SynthRunConfig cfg = strong_corpus(dir / "out.csv", 9);
    cfg.participants = 30;

    const FilterReport report = run_synth(cfg);
    CHECK(report.input_sessions == 30);
    CHECK(report.retained <= 30);

    // the CSV parses back into the same sessions the report was computed from
    std::ifstream in(dir / "out.csv");
    const auto sessions = parse_sessions(in, builtin_lexicon());
    REQUIRE(sessions.size() == 30);
    const FilterReport again = apply_filters(sessions).report;
    CHECK(again.input_sessions == report.input_sessions);
    CHECK(again.removed_defective == report.removed_defective);
    CHECK(again.removed_catch == report.removed_catch);
    CHECK(again.removed_double_pass == report.removed_double_pass);
    CHECK(again.double_pass_degenerate == report.double_pass_degenerate);
    CHECK(again.retained == report.retained);

    // regeneration with the same seed is byte-identical
    SynthRunConfig rerun = cfg;
    rerun.out_path = (dir / "rerun.csv").string();
    run_synth(rerun);
    CHECK(slurp(dir / "out.csv") == slurp(dir / "rerun.csv"));

    SynthRunConfig bad = cfg;
    bad.out_path = "/nonexistent/dir/out.csv";
    CHECK_THROWS_AS((void)run_synth(bad), Error);
    SynthRunConfig empty = cfg;
    empty.out_path.clear();
    CHECK_THROWS_WITH_AS((void)run_synth(empty), "synth: no output path", Error);
}

TEST_CASE("analyze runs the whole pipeline and writes the bundle") {
    const fs::path dir = fresh_dir("analyze");
    AnalyzeConfig cfg = strong_analyze(corpus_a(), dir);
    cfg.sweep_alphas = {0.001, 0.1, 1.0};
    cfg.exports = {"json", "dot", "graphml", "svg"};

    const AnalyzeResult r = run_analyze(cfg);

    CHECK(r.filter_report.input_sessions == 100);
    CHECK(r.filter_report.removed_defective == 0);
    CHECK(r.filter_report.removed_catch == 0);
    CHECK(r.filter_report.removed_double_pass == 59);
    CHECK(r.filter_report.double_pass_degenerate == 16);
    CHECK(r.filter_report.retained == 41);

    CHECK(r.active == 8);
    CHECK(r.converged);
    CHECK(r.nmi_vs_wheel == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.locality > 0.8);
    CHECK(r.globality < 0.1);
    CHECK(r.locality > r.globality);

    const std::vector<std::string> expected{
        "filter_report.json",  "network.json",         "decomposition.json",
        "partition.json",      "metrics.json",         "omega.json",
        "layout_network.json", "layout_communities.json", "stats.json",
        "sweep.json",          "network.dot",          "communities.dot",
        "network.graphml",     "layout_network.svg",   "layout_communities.svg",
        "summary.json",
    };
    CHECK(r.written == expected);
    for (const auto& name : r.written) {
        CHECK_MESSAGE(!slurp(dir / name).empty(), name);
    }

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("active").get<int>() == 8);
    CHECK(summary.at("converged").get<bool>());
    CHECK(summary.at("nmi_domain").get<std::string>() == "petal24");
    // the summary lists every bundle file except itself
    CHECK(summary.at("files").size() == expected.size() - 1);

    const auto partition = nlohmann::json::parse(slurp(dir / "partition.json"));
    CHECK(partition.at("domain").get<std::string>() == "petal24");
    CHECK(partition.at("active").get<int>() == 8);
    // labels cover the whole vocabulary; the domain only scopes the agreement
    REQUIRE(partition.at("labels").size() == 48);
    CHECK(partition.at("labels").contains("joy"));

    const auto omega = nlohmann::json::parse(slurp(dir / "omega.json"));
    CHECK(omega.at("communities").size() == 8);
    REQUIRE(omega.at("omega_x10000").size() == 8);
    CHECK(omega.at("omega_x10000").at(0).size() == 8);

    const auto sweep = nlohmann::json::parse(slurp(dir / "sweep.json"));
    REQUIRE(sweep.size() == 3);
    CHECK(sweep.at(0).at("alpha").get<double>() == doctest::Approx(0.001));
    CHECK(sweep.at(2).at("alpha").get<double>() == doctest::Approx(1.0));
    for (const auto& row : sweep) CHECK(row.at("active").get<int>() >= 1);

    // one glyph per word in the network layout, one per community in the other
    CHECK(count_occurrences(slurp(dir / "layout_network.svg"), "<circle") == 48);
    CHECK(count_occurrences(slurp(dir / "layout_communities.svg"), "<circle") == 8);

    // a second run is byte-identical, file by file
    const fs::path dir2 = fresh_dir("analyze_again");
    AnalyzeConfig cfg2 = cfg;
    cfg2.out_dir = dir2.string();
    const AnalyzeResult r2 = run_analyze(cfg2);
    REQUIRE(r2.written == r.written);
    for (const auto& name : r.written) {
        CHECK_MESSAGE(slurp(dir / name) == slurp(dir2 / name), name);
    }
}

TEST_CASE("a second task csv adds the cross-task statistics") {
    const fs::path dir = fresh_dir("two_tasks");
    SynthRunConfig second = strong_corpus(dir / "b.csv", 43);
    second.model.base_within = 5.0;
    second.model.noise_sd = 0.4;
    run_synth(second);

    AnalyzeConfig cfg = strong_analyze(corpus_a(), dir / "bundle");
    cfg.input_b = (dir / "b.csv").string();
    cfg.seeds = {1};
    const AnalyzeResult r = run_analyze(cfg);

    const auto& written = r.written;
    const auto has = [&](const std::string& name) {
        return std::find(written.begin(), written.end(), name) != written.end();
    };
    CHECK(has("filter_report_b.json"));
    CHECK(has("network_b.json"));

    const auto stats = nlohmann::json::parse(slurp(dir / "bundle" / "stats.json"));
    REQUIRE(stats.contains("chi_square"));
    const auto& chi = stats.at("chi_square");
    CHECK(chi.at("test").get<std::string>() == "chi_square_homogeneity");
    CHECK(chi.at("df").get<double>() == doctest::Approx(7.0));
    CHECK(chi.at("statistic").get<double>() > 0.0);
    CHECK(chi.at("p_value").get<double>() >= 0.0);
    CHECK(chi.at("p_value").get<double>() <= 1.0);

    // 48 within-task pairs, 72 cross-task pairs -> df 47 and 71
    CHECK(stats.at("paired_t_within").at("df").get<double>() == doctest::Approx(47.0));
    CHECK(stats.at("paired_t_cross").at("df").get<double>() == doctest::Approx(71.0));

    CHECK(stats.at("score_histogram").size() == 8);
    CHECK(stats.at("score_histogram_b").size() == 8);
}

TEST_CASE("an exported bundle can be rebuilt without rerunning the decomposition") {
    const fs::path full_dir = fresh_dir("export_full");
    AnalyzeConfig full = strong_analyze(corpus_a(), full_dir);
    full.exports = {"json", "dot", "graphml", "svg"};
    run_analyze(full);

    const fs::path lean_dir = fresh_dir("export_lean");
    AnalyzeConfig lean = strong_analyze(corpus_a(), lean_dir);
    lean.exports = {"json"};
    const AnalyzeResult r = run_analyze(lean);
    for (const auto& name : r.written) CHECK(name.find(".json") != std::string::npos);

    ExportConfig expo;
    expo.bundle_dir = lean_dir.string();
    expo.formats = {"dot", "graphml", "svg"};
    const auto written = run_export(expo);
    const std::vector<std::string> expected{
        "network.dot", "communities.dot", "network.graphml",
        "layout_network.svg", "layout_communities.svg",
    };
    REQUIRE(written == expected);
    for (const auto& name : written) {
        CHECK_MESSAGE(slurp(lean_dir / name) == slurp(full_dir / name), name);
    }
}

TEST_CASE("analyze and export validate their configuration") {
    AnalyzeConfig cfg;
    CHECK_THROWS_WITH_AS((void)run_analyze(cfg), "analyze: no input file", Error);
    cfg.input = corpus_a().string();
    CHECK_THROWS_WITH_AS((void)run_analyze(cfg), "analyze: no output directory", Error);
    cfg.out_dir = fresh_dir("validate").string();
    cfg.exports = {"json", "pdf"};
    CHECK_THROWS_WITH_AS((void)run_analyze(cfg), "analyze: unknown export format 'pdf'",
                         Error);

    AnalyzeConfig missing = strong_analyze("/nonexistent/input.csv", fresh_dir("missing"));
    try {
        (void)run_analyze(missing);
        FAIL("expected an i/o error");
    } catch (const Error& e) {
        CHECK(e.stage() == Stage::io);
    }

    ExportConfig expo;
    CHECK_THROWS_WITH_AS((void)run_export(expo), "export: no bundle directory", Error);
    expo.bundle_dir = "/nonexistent/bundle";
    expo.formats = {"pdf"};
    CHECK_THROWS_WITH_AS((void)run_export(expo), "export: unknown format 'pdf'", Error);
    expo.formats = {"dot"};
    try {
        (void)run_export(expo);
        FAIL("expected an i/o error");
    } catch (const Error& e) {
        CHECK(e.stage() == Stage::io);
    }
}

TEST_CASE("the command line front end maps failures onto exit code families") {
    const fs::path dir = fresh_dir("cli");
    const std::string csv = (dir / "ratings.csv").string();
    const std::string devnull = " > /dev/null 2>&1";

    SUBCASE("synth then analyze succeed end to end") {
        const std::string stdout_path = (dir / "synth.out").string();
        CHECK(run_cli("synth " + csv +
                      " --participants 100 --base-within 6.5 --base-opposite 0.2"
                      " --base-other 0.25 --noise-sd 0.2 --seed 42 > " +
                      stdout_path + " 2>/dev/null") == 0);
        CHECK(slurp(stdout_path).find("retained") != std::string::npos);

        const fs::path bundle = dir / "bundle";
        CHECK(run_cli("analyze " + csv + " --out " + bundle.string() +
                      " --seeds 1 --double-pass-threshold 0.2 --impute-missing" + devnull) ==
              0);
        CHECK(fs::exists(bundle / "summary.json"));

        CHECK(run_cli("export " + bundle.string() + " --format dot" + devnull) == 0);
        CHECK(fs::exists(bundle / "network.dot"));
    }

    SUBCASE("configuration mistakes exit with the config code") {
        CHECK(run_cli("--bogus-flag" + devnull) == 2);
        CHECK(run_cli("synth " + csv + " --task telepathy" + devnull) == 2);
        CHECK(run_cli("analyze missing.csv --out " + (dir / "x").string() +
                      " --nmi-domain wheel" + devnull) == 2);
    }

    SUBCASE("a malformed csv exits with the parse code") {
        std::ofstream(dir / "bad.csv") << "not,a,header\n1,2,3\n";
        CHECK(run_cli("analyze " + (dir / "bad.csv").string() + " --out " +
                      (dir / "bad_bundle").string() + devnull) == 3);
    }

    SUBCASE("a missing input file exits with the i/o code") {
        CHECK(run_cli("analyze /nonexistent/input.csv --out " + (dir / "io").string() +
                      devnull) == 10);
    }

    SUBCASE("the seed environment variable matches an explicit seed") {
        const std::string env_csv = (dir / "env.csv").string();
        const std::string flag_csv = (dir / "flag.csv").string();
        CHECK(run_cli("synth " + flag_csv + " --participants 5 --seed 7" + devnull) == 0);
        const int status = std::system(("EMONET_SEED=7 " + std::string(EMONET_CLI_PATH) +
                                        " synth " + env_csv + " --participants 5" + devnull)
                                           .c_str());
        REQUIRE(status != -1);
        CHECK(WEXITSTATUS(status) == 0);
        CHECK(slurp(env_csv) == slurp(flag_csv));

        const int bad = std::system(("EMONET_SEED=notanumber " +
                                     std::string(EMONET_CLI_PATH) + " synth " + env_csv +
                                     devnull)
                                        .c_str());
        REQUIRE(bad != -1);
        CHECK(WEXITSTATUS(bad) == 2);
    }
}
