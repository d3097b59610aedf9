#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwgauss/error.hpp"
#include "gwgauss_cli/cli.hpp"

int main(int argc, char** argv) {
    using gwgauss::cli::Command;
    CLI::App app{"Closed-form entropic Gromov-Wasserstein between Gaussian measures"};
    app.require_subcommand(1);

    gwgauss::cli::RunConfig cfg;
    std::vector<std::string> files;
    std::string weights;
    std::size_t dim = 0;
    double tau = 0.0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--epsilon", cfg.epsilon, "entropic regularisation (>= 0)");
        sub->add_option("--out", cfg.output_path, "write JSON here instead of stdout");
    };

    auto* igw = app.add_subcommand("igw", "balanced entropic IGW between two probability measures");
    common(igw);
    igw->add_option("measures", files, "two measure JSON files")->required()->expected(2);

    auto* uigw = app.add_subcommand("uigw", "unbalanced entropic IGW between two scaled measures");
    common(uigw);
    uigw->add_option("--tau", tau, "marginal relaxation strength (> 0)")->required();
    uigw->add_option("measures", files, "two measure JSON files")->required()->expected(2);

    auto* bary = app.add_subcommand("barycenter", "IGW barycenter spectrum");
    common(bary);
    bary->add_option("--weights", weights, "comma-separated barycentric weights")->required();
    bary->add_option("--dim", dim, "barycenter dimension")->required();
    bary->add_option("measures", files, "measure JSON files")->required();

    auto* verify = app.add_subcommand("verify", "run oracle cross-checks");
    verify->add_option("--seed", cfg.seed, "root seed");
    verify->add_option("--suite", cfg.suite, "suite name")
        ->check(CLI::IsMember(gwgauss::cli::suite_names()));
    verify->add_option("--out", cfg.output_path, "write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gwgauss::cli::exit_code::kValidation;
    }

    if (igw->parsed()) {
        cfg.command = Command::Igw;
    } else if (uigw->parsed()) {
        cfg.command = Command::Uigw;
        cfg.tau = tau;
    } else if (bary->parsed()) {
        cfg.command = Command::Barycenter;
        try {
            cfg.weights = gwgauss::cli::parse_csv(weights);
        } catch (const gwgauss::Error& e) {
            std::cerr << "error: --weights: " << e.what() << '\n';
            return gwgauss::cli::exit_code::kValidation;
        }
        cfg.target_dim = dim;
    } else {
        cfg.command = Command::Verify;
    }
    return gwgauss::cli::run(cfg, files, std::cout, std::cerr);
}
