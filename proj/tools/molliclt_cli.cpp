#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace molliclt::cli;
    RunConfig c;
    std::uint64_t q = 0;
    double eta = 0;

    CLI::App app{"Mollified central values of Dirichlet L-functions: experiments and checks"};
    app.set_config("--config", "", "flat key=value file; command line flags take precedence");
    app.require_subcommand(1);
    auto* q_opt = app.add_option("--q", q, "prime modulus");
    app.add_option("--mode", c.mode, "parameter mode: desk or paper")->capture_default_str();
    auto* eta_opt = app.add_option("--eta", eta, "paper mode eta in (0, 1)");
    app.add_option("--c0", c.c0, "lower end of the first prime interval")->capture_default_str();
    app.add_option("--theta", c.theta, "desk mode interval exponents, ascending")->delimiter(',');
    app.add_option("--seed", c.seed, "random model seed")->capture_default_str();
    app.add_option("--mc", c.mc_samples, "Monte Carlo samples")->capture_default_str();
    app.add_option("--out", c.output_dir, "output directory")->capture_default_str();
    app.add_option("--threads", c.threads, "worker threads")->capture_default_str();
    app.add_option("--method", c.method, "central values: afe or oracle")->capture_default_str();
    app.add_flag("--compare", c.compare, "lvalues: also run the other method and compare");
    app.add_option("--delta", c.delta, "clt: Selberg bandwidth (0 = default)")->capture_default_str();
    app.add_option("--length", c.length, "second-moment: twist length")->capture_default_str();

    const std::pair<const char*, const char*> subs[] = {
        {"characters", "orthogonality and Gauss sum checks, gauss_sums.csv"},
        {"lvalues", "central values for every character, cached for clt"},
        {"clt", "weighted and unweighted distribution of log|L(1/2, chi)|"},
        {"random", "random model checks: moments, E_ell, local factors, V"},
        {"second-moment", "M(alpha, beta) variants and the twisted second moment"},
    };
    for (auto [name, help] : subs) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (q_opt->count()) c.q = q;
    if (eta_opt->count()) c.eta = eta;
    return run(c);
}
