#include "pc/config.hpp"
#include "pc/errors.hpp"
#include "pc/experiments.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

struct Invocation {
    std::string experiment;
    std::string config;
    std::string out = ".";
    bool svg = false;
};

CLI::App* add_experiment(CLI::App& parent, const std::string& name, const std::string& experiment,
                         const std::string& help, Invocation& inv) {
    CLI::App* sub = parent.add_subcommand(name, help);
    sub->add_option("--config", inv.config, "JSON config file")->required();
    sub->add_option("--out", inv.out, "output directory");
    sub->add_flag("--svg", inv.svg, "also write an SVG figure (m = 2)");
    sub->callback([&inv, experiment] { inv.experiment = experiment; });
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Potential centers of convex and non-convex bodies"};
    app.require_subcommand(1);
    Invocation inv;
    add_experiment(app, "eval", "eval", "evaluate a potential at config.points", inv);
    add_experiment(app, "unfolded", "unfolded", "minimal unfolded region", inv);
    add_experiment(app, "conebound", "conebound", "E(R) profile and its zero R~", inv);
    add_experiment(app, "summability", "summability", "kernel family summability conditions", inv);
    add_experiment(app, "gap", "gap", "small-parameter comparison of deep and boundary points", inv);
    add_experiment(app, "converge", "converge", "alias of 'centers converge'", inv);
    add_experiment(app, "contain", "contain", "alias of 'centers contain'", inv);
    add_experiment(app, "concavity", "concavity", "alias of 'centers concavity'", inv);
    CLI::App* centers = app.add_subcommand("centers", "center searches and experiments");
    centers->require_subcommand(1);
    add_experiment(*centers, "find", "centers", "plateau of maximizers", inv);
    add_experiment(*centers, "converge", "converge", "small-parameter convergence to the renormalized centers", inv);
    add_experiment(*centers, "contain", "contain", "containment in Uf and the inner parallel body", inv);
    add_experiment(*centers, "concavity", "concavity", "seeded midpoint-concavity probes", inv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        pc::ExperimentConfig cfg = pc::load_config(inv.config);
        cfg.experiment = inv.experiment;
        const pc::RunResult r = pc::run(cfg, inv.out, inv.svg);
        for (const auto& f : r.files) std::cout << f << "\n";
        return 0;
    } catch (const pc::Error& e) {
        std::cerr << "pc: " << e.what() << "\n";
        return e.numerical() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "pc: internal error: " << e.what() << "\n";
        return 1;
    }
}
