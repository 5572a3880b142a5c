#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "minpen/experiments.hpp"

namespace {

// One line per check so shell pipelines can grep the verdicts.
void print_summary(const minpen::ExperimentOutput& output, bool quiet) {
    if (quiet) return;
    std::printf("kind: %s\n", output.kind.c_str());
    for (const minpen::CheckLine& check : output.checks)
        std::printf("check %-36s value=%-22.17g threshold=%-22.17g %s\n",
                    check.name.c_str(), check.value, check.threshold,
                    check.passed ? "PASS" : "FAIL");
}

std::string json_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"penalty and risk experiments on Levy density processes"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed_override = 0;
    std::size_t paths_override = 0;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--paths", paths_override, "override the Monte Carlo path count");
    run->add_option("--out", out_dir, "output directory for CSV tables");
    run->add_flag("--quiet", quiet, "suppress the check summary");

    std::vector<std::string> user_files;
    CLI::App* list = app.add_subcommand("list-presets", "list built-in presets");
    list->add_option("--user", user_files, "user config files to validate");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::fputs(minpen::describe_presets(user_files).c_str(), stdout);
        return 0;
    }

    minpen::RunOverrides overrides;
    if (run->count("--seed")) overrides.seed = seed_override;
    if (run->count("--paths")) overrides.paths = paths_override;

    try {
        const minpen::ExperimentOutput output =
            minpen::run_config_file(config_path, overrides);
        minpen::write_tables(output, out_dir);
        print_summary(output, quiet);
        return output.all_passed() ? 0 : 1;
    } catch (const minpen::ConfigError& e) {
        std::fprintf(stderr, "{\"error\":\"config\",\"message\":\"%s\"}\n",
                     json_escape(e.what()).c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"runtime\",\"message\":\"%s\"}\n",
                     json_escape(e.what()).c_str());
        return 3;
    }
}
