#pragma once

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gbandit/config.hpp"
#include "gbandit/contextual.hpp"
#include "gbandit/environment.hpp"
#include "gbandit/error_curve.hpp"
#include "gbandit/nne.hpp"
#include "gbandit/pac.hpp"
#include "gbandit/rng.hpp"
#include "gbandit/spanning_tree.hpp"
#include "gbandit/version.hpp"

namespace gbandit {

/// Seeds of one repetition, all derived from the master seed.
struct RepetitionSeeds {
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    std::uint64_t rewards = 0;  // node rewards or directions
    std::uint64_t noise = 0;
    std::uint64_t contexts = 0;
};

inline RepetitionSeeds repetition_seeds(std::uint64_t master, std::size_t repetition) {
    const std::uint64_t s = derive_seed(master, repetition);
    return {repetition, s, derive_seed(s, 1), derive_seed(s, 2), derive_seed(s, 3)};
}

struct PacRow {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    NoiseModel noise = NoiseModel::preference_sign;
    Node chosen = 0;
    Node best = 0;
    std::uint64_t total_pulls = 0;
    std::size_t phases = 0;
};

struct ContextualRow {
    PacRow pac;
    std::size_t stage = 0;
    std::uint64_t cumulative_pulls = 0;
    std::size_t dimension = 0;
};

namespace detail {

inline std::string format_double(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

inline NodeRewards make_rewards(const ExperimentConfig& c, std::size_t n, const RepetitionSeeds& s) {
    if (c.rewards.scheme == "explicit") return NodeRewards::from_values(c.rewards.values);
    return NodeRewards::uniform01(n, s.rewards);
}

template <class F>
auto with_repetition_context(std::size_t rep, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw InvalidStateError("repetition " + std::to_string(rep) + " failed: " + e.what());
    }
}

}  // namespace detail

/// Full PAC runs: one row per algorithm and repetition, algorithm-major.
inline std::vector<PacRow> run_pac_experiment(const ExperimentConfig& c) {
    c.validate();
    const Graph g = build_graph(c.graph);
    const PacParams params{c.epsilon, c.delta};
    std::vector<PacRow> rows;
    for (const auto& algorithm : c.algorithms) {
        const Graph tree = algorithm == "min_tree"   ? min_diameter_spanning_tree(g)
                           : algorithm == "max_tree" ? max_diameter_spanning_tree(g)
                                                     : g;
        for (std::size_t rep = 0; rep < c.repetitions; ++rep) {
            const auto seeds = repetition_seeds(c.seed, rep);
            rows.push_back(detail::with_repetition_context(rep, [&] {
                Environment env(g, detail::make_rewards(c, g.node_count(), seeds), c.noise, seeds.noise);
                IdentificationResult r;
                if (algorithm == "line") r = run_line(env, g, params);
                else if (algorithm == "nne") r = run_nne(env, g, params);
                else r = run_tree(env, tree, params);
                return PacRow{algorithm, seeds.seed, g.node_count(), c.epsilon,  c.delta,
                              c.noise,   r.chosen,   env.rewards().best(), r.total_pulls, r.phases.size()};
            }));
        }
    }
    return rows;
}

/// Budgeted error curves: one point per algorithm and budget.
inline std::vector<CurvePoint> run_curve_experiment(const ExperimentConfig& c) {
    c.validate();
    const Graph g = build_graph(c.graph);
    EnvironmentFactory factory = [&](std::size_t rep) {
        const auto seeds = repetition_seeds(c.seed, rep);
        return Environment(g, detail::make_rewards(c, g.node_count(), seeds), c.noise, seeds.noise);
    };
    std::vector<CurvePoint> points;
    for (const auto& algorithm : c.algorithms) {
        auto curve = budgeted_error_curve(factory, g, parse_curve_algorithm(algorithm), c.budgets, c.repetitions);
        points.insert(points.end(), curve.begin(), curve.end());
    }
    return points;
}

/// The context sequence of one repetition.
inline std::vector<Vector> make_contexts(const ContextualConfig& cc, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vector> xs;
    const Vector fixed = random_unit_vector(cc.dimension, rng);
    for (std::size_t s = 0; s < cc.stages; ++s) {
        if (cc.contexts == "identical") xs.push_back(fixed);
        else if (cc.contexts == "basis_cycle") xs.push_back(basis_vector(cc.dimension, s % cc.dimension));
        else xs.push_back(random_unit_vector(cc.dimension, rng));
    }
    return xs;
}

/// Contextual sequences: one row per repetition and stage.
inline std::vector<ContextualRow> run_contextual_experiment(const ExperimentConfig& c) {
    c.validate();
    const Graph g = build_graph(c.graph);
    const ContextualParams params{c.epsilon, c.delta, c.contextual.horizon_known};
    std::vector<ContextualRow> rows;
    for (std::size_t rep = 0; rep < c.repetitions; ++rep) {
        const auto seeds = repetition_seeds(c.seed, rep);
        auto stages = detail::with_repetition_context(rep, [&] {
            ContextualEnvironment env(g,
                                      NodeDirections::random_cap(g.node_count(), c.contextual.dimension,
                                                                 seeds.rewards, c.contextual.cap_angle),
                                      seeds.noise, c.noise);
            return run_contextual_sequence(env, make_contexts(c.contextual, seeds.contexts), params);
        });
        for (const auto& s : stages) {
            rows.push_back({{"contextual_nne", seeds.seed, g.node_count(), c.epsilon, c.delta, c.noise, s.chosen,
                             s.best, s.pulls, s.phases.size()},
                            s.stage,
                            s.cumulative_pulls,
                            c.contextual.dimension});
        }
    }
    return rows;
}

inline void write_pac_csv(std::ostream& out, const std::vector<PacRow>& rows) {
    out << "algorithm,seed,n,epsilon,delta,noise_model,chosen_node,best_node,total_pulls,phases\n";
    for (const auto& r : rows) {
        out << r.algorithm << ',' << r.seed << ',' << r.n << ',' << detail::format_double(r.epsilon) << ','
            << detail::format_double(r.delta) << ',' << to_string(r.noise) << ',' << r.chosen + 1 << ','
            << r.best + 1 << ',' << r.total_pulls << ',' << r.phases << '\n';
    }
}

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
    out << "algorithm,budget,error_rate,standard_error,errors,repetitions\n";
    for (const auto& p : points) {
        out << to_string(p.algorithm) << ',' << p.budget << ',';
        if (p.flagged) {
            out << "NA,NA,NA,";
        } else {
            out << detail::format_double(p.error_rate()) << ',' << detail::format_double(p.standard_error()) << ','
                << p.errors << ',';
        }
        out << p.repetitions << '\n';
    }
}

inline void write_contextual_csv(std::ostream& out, const std::vector<ContextualRow>& rows) {
    out << "algorithm,seed,n,epsilon,delta,noise_model,chosen_node,best_node,total_pulls,phases,stage,"
           "cumulative_pulls,d\n";
    for (const auto& row : rows) {
        const auto& r = row.pac;
        out << r.algorithm << ',' << r.seed << ',' << r.n << ',' << detail::format_double(r.epsilon) << ','
            << detail::format_double(r.delta) << ',' << to_string(r.noise) << ',' << r.chosen + 1 << ','
            << r.best + 1 << ',' << r.total_pulls << ',' << r.phases << ',' << row.stage << ','
            << row.cumulative_pulls << ',' << row.dimension << '\n';
    }
}

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

struct ExperimentOutput {
    std::filesystem::path results;
    std::filesystem::path manifest;
    std::string results_hash;
    std::size_t rows = 0;
};

inline std::string results_file_name(RunMode mode) {
    switch (mode) {
        case RunMode::pac: return "pac_results.csv";
        case RunMode::curve: return "curve_results.csv";
        case RunMode::contextual: return "contextual_results.csv";
    }
    return "results.csv";
}

/// Runs the configured mode and returns the CSV text and its row count.
inline std::pair<std::string, std::size_t> run_to_csv(const ExperimentConfig& c) {
    std::ostringstream csv;
    std::size_t rows = 0;
    switch (c.mode) {
        case RunMode::pac: {
            auto r = run_pac_experiment(c);
            write_pac_csv(csv, r);
            rows = r.size();
            break;
        }
        case RunMode::curve: {
            auto r = run_curve_experiment(c);
            write_curve_csv(csv, r);
            rows = r.size();
            break;
        }
        case RunMode::contextual: {
            auto r = run_contextual_experiment(c);
            write_contextual_csv(csv, r);
            rows = r.size();
            break;
        }
    }
    return {csv.str(), rows};
}

inline std::string manifest_yaml(const ExperimentConfig& c, const std::string& results_name,
                                 const std::string& results_hash, std::size_t rows) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "gbandit_version" << YAML::Value << std::string(kVersion);
    out << YAML::Key << "config_format" << YAML::Value << kConfigFormat;
    out << YAML::Key << "config" << YAML::Value;
    emit_config(out, c);
    out << YAML::Key << "repetition_seeds" << YAML::Value << YAML::BeginSeq;
    for (std::size_t rep = 0; rep < c.repetitions; ++rep) {
        const auto s = repetition_seeds(c.seed, rep);
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "repetition" << YAML::Value << rep << YAML::Key << "seed"
            << YAML::Value << s.seed << YAML::Key << "rewards" << YAML::Value << s.rewards << YAML::Key << "noise"
            << YAML::Value << s.noise << YAML::Key << "contexts" << YAML::Value << s.contexts << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "results" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "file" << YAML::Value << results_name;
    out << YAML::Key << "rows" << YAML::Value << rows;
    out << YAML::Key << "fnv1a64" << YAML::Value << results_hash;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace detail

/// Runs the experiment and writes the results CSV and manifest.yaml into
/// `c.output`. Nothing is written if any repetition fails.
inline ExperimentOutput run_experiment(const ExperimentConfig& c) {
    auto [csv, rows] = run_to_csv(c);
    const std::filesystem::path dir = c.output;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    ExperimentOutput result;
    result.results = dir / results_file_name(c.mode);
    result.manifest = dir / "manifest.yaml";
    result.results_hash = fnv1a_hex(csv);
    result.rows = rows;
    detail::write_file(result.results, csv);
    detail::write_file(result.manifest, manifest_yaml(c, result.results.filename().string(), result.results_hash, rows));
    return result;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Re-runs a manifest's config in memory and checks the recorded hash.
inline bool replay_matches(const std::filesystem::path& manifest) {
    const ExperimentConfig c = load_config(manifest);
    YAML::Node root = YAML::LoadFile(manifest.string());
    const auto expected = root["results"]["fnv1a64"].as<std::string>();
    return fnv1a_hex(run_to_csv(c).first) == expected;
}

}  // namespace gbandit
