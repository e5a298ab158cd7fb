#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gbandit/experiment.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> repetitions;
};

void add_common(CLI::App& cmd, Overrides& o, bool with_repetitions) {
    cmd.add_option("--config", o.config, "YAML experiment config")->check(CLI::ExistingFile);
    cmd.add_option("--seed", o.seed, "master seed (overrides the config)");
    cmd.add_option("--out", o.out, "output directory (overrides the config)");
    if (with_repetitions) cmd.add_option("--repetitions", o.repetitions, "repetition count (overrides the config)");
}

gbandit::ExperimentConfig resolve(const Overrides& o) {
    gbandit::ExperimentConfig c = o.config.empty() ? gbandit::ExperimentConfig{} : gbandit::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.output = *o.out;
    if (o.repetitions) c.repetitions = *o.repetitions;
    return c;
}

int generate(const Overrides& o) {
    auto c = resolve(o);
    if (o.seed) c.graph.seed = *o.seed;
    const gbandit::Graph g = gbandit::build_graph(c.graph);
    if (!o.out) {
        gbandit::write_edge_list(std::cout, g);
        return 0;
    }
    std::filesystem::create_directories(*o.out);
    const auto path = std::filesystem::path(*o.out) / "graph.edges";
    std::ofstream file(path);
    if (!file) throw gbandit::IoError("cannot open " + path.string() + " for writing");
    gbandit::write_edge_list(file, g);
    std::cout << path.string() << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    return 0;
}

int run(const Overrides& o, std::optional<gbandit::RunMode> mode) {
    auto c = resolve(o);
    if (mode) c.mode = *mode;
    if (c.mode == gbandit::RunMode::curve && o.config.empty()) {
        c.algorithms = {"nne", "min_tree", "max_tree"};
        c.noise = gbandit::NoiseModel::uniform_bounded;
        c.epsilon = 0.0;
        c.budgets = {1000, 10000, 100000};
    }
    const auto out = gbandit::run_experiment(c);
    std::cout << gbandit::to_string(c.mode) << ": " << out.rows << " rows -> " << out.results.string() << " (fnv1a64 "
              << out.results_hash << ")\n"
              << "manifest: " << out.manifest.string() << '\n';
    if (c.mode == gbandit::RunMode::curve) std::cout << gbandit::read_file(out.results);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best-node identification on graphical bandits"};
    app.set_version_flag("--version", std::string(gbandit::kVersion));
    app.require_subcommand(1);

    Overrides gen_opts, run_opts, curve_opts, ctx_opts;
    auto* gen = app.add_subcommand("generate", "write the configured graph as a 1-based edge list");
    add_common(*gen, gen_opts, false);
    auto* runc = app.add_subcommand("run", "run the experiment described by the config");
    add_common(*runc, run_opts, true);
    auto* curve = app.add_subcommand("curve", "budgeted error curves");
    add_common(*curve, curve_opts, true);
    auto* ctx = app.add_subcommand("contextual", "contextual identification over a context sequence");
    add_common(*ctx, ctx_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) return generate(gen_opts);
        if (*runc) return run(run_opts, std::nullopt);
        if (*curve) return run(curve_opts, gbandit::RunMode::curve);
        if (*ctx) return run(ctx_opts, gbandit::RunMode::contextual);
    } catch (const std::exception& e) {
        std::cerr << "gbandit: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
