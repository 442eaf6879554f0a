// cqed: batch front-end for the simulation pipelines.
//
// Exit codes: 0 ok, 1 config error, 2 numerical failure, 3 check failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "cqed/io/config.hpp"
#include "cqed/pipelines.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    bool check = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config file")
        ->required();
    cmd->add_option("--out", opts.out_dir, "output directory override");
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_flag("--check", opts.check,
                  "fail (exit 3) if any pipeline check fails");
}

int run_kind(cqed::io::ExperimentKind kind, const CommonOpts& opts) {
    using namespace cqed::io;
    ExperimentConfig cfg;
    try {
        cfg = load_config(opts.config_path);
        if (cfg.kind != kind) {
            std::cerr << "config error: config is for '" << to_string(cfg.kind)
                      << "', subcommand is '" << to_string(kind) << "'\n";
            return 1;
        }
        if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
        if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    } catch (const ConfigError& err) {
        for (const auto& d : err.diagnostics) {
            std::cerr << "config error";
            if (d.line > 0) std::cerr << " (line " << d.line << ")";
            std::cerr << ": " << d.message << "\n";
        }
        return 1;
    }

    RunResult result;
    try {
        result = run_experiment(cfg);
    } catch (const ConfigError& err) {
        for (const auto& d : err.diagnostics)
            std::cerr << "config error: " << d.message << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "numerical failure: " << err.what() << "\n";
        std::cerr << "outputs may be partial; see the manifest for the "
                     "declared set\n";
        return 2;
    }

    for (const auto& path : result.outputs) std::cout << path << "\n";
    for (const auto& c : result.checks)
        std::cout << "check " << c.name << ": "
                  << (c.passed ? "pass" : "FAIL") << " (" << c.detail << ")\n";
    if (opts.check && !result.all_checks_passed()) return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transient cavity-QED spectroscopy pipelines"};
    app.require_subcommand(1);

    struct Sub {
        cqed::io::ExperimentKind kind;
        CLI::App* cmd;
        CommonOpts opts;
    };
    std::vector<Sub> subs;
    using EK = cqed::io::ExperimentKind;
    const std::pair<EK, const char*> kinds[] = {
        {EK::fid, "free-induction envelope"},
        {EK::cpmg, "CPMG echo envelope, revival train, signal report"},
        {EK::eseem, "echo-envelope modulation and its spectrum"},
        {EK::transmission, "inhomogeneously broadened transmission scan"},
        {EK::signal, "signal strength and bounds"},
        {EK::oracle_compare, "brute-force simulator vs closed forms"},
        {EK::reconstruct, "envelope recovery from comb-peak samples"},
    };
    subs.reserve(std::size(kinds));
    for (const auto& [kind, help] : kinds) {
        subs.push_back({kind, nullptr, {}});
        subs.back().cmd = app.add_subcommand(cqed::io::to_string(kind), help);
        add_common(subs.back().cmd, subs.back().opts);
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& sub : subs)
        if (sub.cmd->parsed()) return run_kind(sub.kind, sub.opts);
    std::cerr << "no subcommand selected\n";
    return 1;
}
