#include "chiral/parallel.hpp"
#include "chiral/runner.hpp"
#include "chiral/types.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using chiral::kExitNumerical;
using chiral::kExitOk;
using chiral::kExitValidation;

struct Args {
    std::string config;
    std::string out;
    int threads = 0;
    bool dump = false;
};

void add_common(CLI::App* cmd, Args& a, bool run_flags) {
    cmd->add_option("--config,-c", a.config, "configuration file (JSON)")->required();
    if (!run_flags) return;
    cmd->add_option("--out,-o", a.out, "output directory (overrides output_dir)");
    cmd->add_option("--threads", a.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    cmd->add_flag("--dump-matrices", a.dump, "write J.csv and Gamma.csv (dynamics mode)");
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw chiral::ValidationError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw chiral::ValidationError(path + ": " + e.what());
    }
}

int validate_only(const std::string& path) {
    const auto errors = chiral::validate(read_json(path));
    for (const auto& e : errors) std::cerr << path << ": " << e << '\n';
    if (!errors.empty()) return kExitValidation;
    std::cout << path << ": ok\n";
    return kExitOk;
}

int execute(const std::string& sub, const Args& a) {
    const nlohmann::json doc = read_json(a.config);
    const auto errors = chiral::validate(doc);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << a.config << ": " << e << '\n';
        return kExitValidation;
    }
    const chiral::RunConfig cfg = chiral::parse_config(doc);
    if (sub != "run" && sub != chiral::to_string(cfg.mode)) {
        std::cerr << "subcommand '" << sub << "' does not match config mode '" << chiral::to_string(cfg.mode) << "'\n";
        return kExitValidation;
    }
    if (a.threads > 0) chiral::parallel::set_threads(a.threads);

    chiral::RunOptions opt;
    if (!a.out.empty()) opt.output_dir = a.out;
    opt.dump_matrices = a.dump;
    opt.config_dir = std::filesystem::path(a.config).parent_path();
    const auto outcome = chiral::run(cfg, opt, std::cout);
    std::cout << "manifest: " << (opt.output_dir ? *opt.output_dir : cfg.output_dir) << "/manifest.json\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    chiral::parallel::apply_env_threads();
    CLI::App app{"chiral: helix emitter-array simulator"};
    app.require_subcommand(1);

    Args args;
    const char* modes[] = {"run", "dynamics", "bands", "zak", "field", "check"};
    for (const char* m : modes) add_common(app.add_subcommand(m, std::string("execute a ") + m + " configuration"), args, true);
    add_common(app.add_subcommand("validate", "check a configuration without running it"), args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (sub == "validate") return validate_only(args.config);
        return execute(sub, args);
    } catch (const chiral::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const chiral::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
