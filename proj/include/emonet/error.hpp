#pragma once

#include <stdexcept>
#include <string>

namespace emonet {

// Pipeline stage an error belongs to. The CLI maps each stage family to a
// distinct exit code so scripts can tell a bad CSV from a bad decomposition.
enum class Stage {
    config,
    parse,
    filter,
    network,
    decompose,
    metrics,
    stats,
    layout,
    io,
};

class Error : public std::runtime_error {
public:
    Error(Stage stage, const std::string& message)
        : std::runtime_error(message), stage_(stage) {}

    Stage stage() const { return stage_; }

    int exit_code() const { return exit_code_for(stage_); }

    static int exit_code_for(Stage stage) {
        switch (stage) {
            case Stage::config: return 2;
            case Stage::parse: return 3;
            case Stage::filter: return 4;
            case Stage::network: return 5;
            case Stage::decompose: return 6;
            case Stage::metrics: return 7;
            case Stage::stats: return 8;
            case Stage::layout: return 9;
            case Stage::io: return 10;
        }
        return 1;
    }

    static const char* stage_name(Stage stage) {
        switch (stage) {
            case Stage::config: return "config";
            case Stage::parse: return "parse";
            case Stage::filter: return "filter";
            case Stage::network: return "network";
            case Stage::decompose: return "decompose";
            case Stage::metrics: return "metrics";
            case Stage::stats: return "stats";
            case Stage::layout: return "layout";
            case Stage::io: return "io";
        }
        return "unknown";
    }

private:
    Stage stage_;
};

}  // namespace emonet
