#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qfock/config.hpp"
#include "qfock/suites.hpp"

namespace {

void apply_thread_cap() {
    const char* env = std::getenv("QFOCK_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 0) throw qfock::ConfigError(std::string("QFOCK_THREADS: invalid value '") + env + "'");
    if (n > 0) Eigen::setNbThreads(static_cast<int>(n));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qfock: discrete Q-deformed Fock space verification suites"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qfock 1.0.0");

    std::string config_path, preset_name, format = "json", out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_max, d, n, refinements;
    std::vector<std::string> functions;

    const std::pair<const char*, const char*> suites[] = {
        {"verify", "operator identities, Gram positivity, adjointness, moment oracle, cyclicity"},
        {"moments", "Wick and matrix vacuum moments for the configured test functions"},
        {"spectrum", "N_d gap against the proof bound, plus the operator-norm bounds"},
        {"converge", "field moment under successive grid refinements"},
    };
    for (const auto& [name, help] : suites) {
        auto* sub = app.add_subcommand(name, help);
        auto* cfg_opt = sub->add_option("--config", config_path, "kernel/run configuration (JSON)");
        auto* preset_opt = sub->add_option("--preset", preset_name, "built-in configuration")
                               ->check(CLI::IsMember(qfock::preset_names()));
        cfg_opt->excludes(preset_opt);
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--seed", seed, "seed for random test functions (default 0)");
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--n-max", n_max, "truncation level");
        sub->add_option("-d", d, "number of disjoint bump functions");
        sub->add_option("-n", n, "moment degree");
        sub->add_option("--refinements", refinements, "grid refinements for converge");
        sub->add_option("--functions", functions, "test function names (uniform, bump_k, random)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto* sub = app.get_subcommands().front();
    try {
        apply_thread_cap();
        if (config_path.empty() && preset_name.empty()) throw qfock::ConfigError("one of --config or --preset is required");
        qfock::RunConfig cfg = config_path.empty() ? qfock::preset(preset_name) : qfock::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (n_max) cfg.n_max = *n_max;
        if (d) cfg.d = *d;
        if (n) cfg.n = *n;
        if (refinements) cfg.refinements = *refinements;
        if (!functions.empty()) cfg.functions = functions;
        cfg.format = format == "csv" ? qfock::Format::csv : qfock::Format::json;
        qfock::validate(cfg);

        const auto t0 = std::chrono::steady_clock::now();
        const auto result = qfock::run_suite(qfock::parse_suite(sub->get_name()), cfg);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string text = cfg.format == qfock::Format::csv ? qfock::format_csv(result) : qfock::format_json(result);

        if (out_path.empty()) {
            std::cout << text << std::flush;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw qfock::ConfigError("cannot write '" + out_path + "'");
            out << text;
        }
        std::fprintf(stderr, "qfock %s: %s in %.2f s\n", result.suite.c_str(), result.pass() ? "pass" : "FAIL", elapsed);
        return result.pass() ? 0 : 1;
    } catch (const qfock::ConfigError& e) {
        std::fprintf(stderr, "qfock: configuration error: %s\n", e.what());
        return 2;
    } catch (const qfock::ResourceLimitError& e) {
        std::fprintf(stderr, "qfock: configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qfock: error: %s\n", e.what());
        return 1;
    }
}
