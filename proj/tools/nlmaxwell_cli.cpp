// Command-line entry point: nlmaxwell <run|sweep|mms|validate-graph> --config PATH [options]

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nlmaxwell/commands.hpp"
#include "nlmaxwell/config.hpp"

int main(int argc, char** argv) {
    using namespace nlmaxwell;

    CLI::App app{"Nonlinear Maxwell solvers: full and quasi-static runs, eps sweeps, refinement studies"};
    app.require_subcommand(1, 1);

    std::string config_path;
    ExecOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 0;

    for (const char* name : {"run", "sweep", "mms", "validate-graph"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
        sub->add_flag("--strict", opt.strict, "Exit 4 when a sweep is not confirming");
        sub->add_option("--threads", opt.threads, "Maximum concurrent runs")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Seed recorded with the run (solver math does not use it)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code::config;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed")) opt.seed = seed;
    const auto command = parse_command(sub->get_name());

    std::ifstream is(config_path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    opt.config_text = ss.str();

    ConfigParseResult parsed = parse_config(opt.config_text);
    if (!parsed.config) {
        std::cerr << config_path << ": " << parsed.errors.size() << " configuration error(s)\n";
        for (const std::string& e : parsed.errors) std::cerr << "  " << e << '\n';
        return exit_code::config;
    }
    return execute(*parsed.config, *command, opt, std::cout, std::cerr);
}
