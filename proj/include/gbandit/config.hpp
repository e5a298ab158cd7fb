#pragma once

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbandit/environment.hpp"
#include "gbandit/errors.hpp"
#include "gbandit/generators.hpp"
#include "gbandit/graph.hpp"

namespace gbandit {

enum class RunMode { pac, curve, contextual };

inline std::string_view to_string(RunMode m) {
    switch (m) {
        case RunMode::pac: return "pac";
        case RunMode::curve: return "curve";
        case RunMode::contextual: return "contextual";
    }
    return "unknown";
}

inline RunMode parse_run_mode(std::string_view s) {
    if (s == "pac") return RunMode::pac;
    if (s == "curve") return RunMode::curve;
    if (s == "contextual") return RunMode::contextual;
    throw ValidationError("unknown mode '" + std::string(s) + "' (expected pac, curve or contextual)");
}

/// kind: line | random_tree | spider_web | erdos_renyi | edges.
/// Edge-list files are read at load time and stored as `edges` (1-based),
/// so a saved config never depends on the original file.
struct GraphConfig {
    std::string kind = "spider_web";
    std::size_t n = 15;
    std::size_t rings = 3;
    std::size_t nodes_per_ring = 5;
    double p = 0.3;
    std::uint64_t seed = 1;
    std::vector<std::pair<Node, Node>> edges;  // 1-based
};

/// scheme: uniform01 (fresh per repetition) | explicit.
struct RewardConfig {
    std::string scheme = "uniform01";
    std::vector<double> values;
};

struct ContextualConfig {
    std::size_t dimension = 3;
    std::size_t stages = 20;
    std::string contexts = "identical";  // identical | basis_cycle | random
    bool horizon_known = true;
    double cap_angle = 0.5;
};

struct ExperimentConfig {
    RunMode mode = RunMode::pac;
    GraphConfig graph;
    RewardConfig rewards;
    NoiseModel noise = NoiseModel::preference_sign;
    std::vector<std::string> algorithms{"nne"};
    double epsilon = 0.1;
    double delta = 0.1;
    std::vector<std::uint64_t> budgets;
    std::size_t repetitions = 1;
    std::uint64_t seed = 1;
    std::string output = "out";
    ContextualConfig contextual;

    void validate() const;
};

inline constexpr int kConfigFormat = 1;

inline Graph build_graph(const GraphConfig& c) {
    if (c.kind == "line") return line_graph(c.n);
    if (c.kind == "random_tree") return random_tree(c.n, c.seed);
    if (c.kind == "spider_web") return spider_web({c.rings, c.nodes_per_ring});
    if (c.kind == "erdos_renyi") return erdos_renyi_connected(c.n, c.p, c.seed);
    if (c.kind == "edges") {
        std::size_t n = 0;
        std::vector<std::pair<Node, Node>> zero_based;
        for (auto [a, b] : c.edges) {
            if (a == 0 || b == 0) throw ValidationError("graph edges are 1-based");
            n = std::max({n, a, b});
            zero_based.emplace_back(a - 1, b - 1);
        }
        return Graph(n, zero_based);
    }
    throw ValidationError("unknown graph kind '" + c.kind + "'");
}

inline void ExperimentConfig::validate() const {
    if (repetitions < 1) throw ValidationError("repetitions must be at least 1");
    if (algorithms.empty()) throw ValidationError("no algorithms configured");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
    if (!(epsilon >= 0.0 && epsilon <= 2.0)) throw ValidationError("epsilon must lie in [0, 2]");
    if (rewards.scheme != "uniform01" && rewards.scheme != "explicit") {
        throw ValidationError("unknown reward scheme '" + rewards.scheme + "'");
    }
    const Graph g = build_graph(graph);
    if (rewards.scheme == "explicit") {
        if (rewards.values.size() != g.node_count()) throw ValidationError("explicit rewards do not match the graph");
        NodeRewards::from_values(rewards.values);
    }
    for (const auto& a : algorithms) {
        static const std::vector<std::string> pac{"line", "tree", "min_tree", "max_tree", "nne"};
        static const std::vector<std::string> curve{"nne", "min_tree", "max_tree"};
        const auto& allowed = mode == RunMode::curve ? curve : pac;
        if (mode != RunMode::contextual && std::find(allowed.begin(), allowed.end(), a) == allowed.end()) {
            throw ValidationError("algorithm '" + a + "' is not available in " + std::string(to_string(mode)) + " mode");
        }
    }
    if (mode == RunMode::pac && epsilon == 0.0) throw ValidationError("PAC runs need epsilon > 0");
    if (mode == RunMode::curve) {
        if (budgets.empty()) throw ValidationError("curve mode needs budgets");
        if (!std::is_sorted(budgets.begin(), budgets.end())) throw ValidationError("budgets must be ascending");
    }
    if (mode == RunMode::contextual) {
        if (contextual.dimension < 2) throw ValidationError("contextual dimension must be at least 2");
        if (epsilon == 0.0) throw ValidationError("contextual runs need epsilon > 0");
        if (contextual.contexts != "identical" && contextual.contexts != "basis_cycle" &&
            contextual.contexts != "random") {
            throw ValidationError("unknown context sequence '" + contextual.contexts + "'");
        }
        if (!(contextual.cap_angle > 0.0 && contextual.cap_angle <= 0.5235987755982988)) {
            throw ValidationError("cap_angle must lie in (0, pi/6]");
        }
    }
}

namespace detail {

template <class T>
T get_or(const YAML::Node& node, const char* key, T fallback) {
    if (!node[key]) return fallback;
    try {
        return node[key].as<T>();
    } catch (const YAML::Exception& e) {
        throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
}

inline std::vector<std::pair<Node, Node>> read_edge_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list " + path.string());
    const Graph g = read_edge_list(in);
    std::vector<std::pair<Node, Node>> edges;
    for (const Edge& e : g.edges()) edges.emplace_back(e.a + 1, e.b + 1);
    return edges;
}

}  // namespace detail

/// Parses a config map. Relative file paths resolve against `base_dir`.
inline ExperimentConfig parse_config(const YAML::Node& root, const std::filesystem::path& base_dir = ".") {
    if (root.IsNull()) return ExperimentConfig{};
    if (!root.IsMap()) throw ValidationError("config must be a YAML map");
    // a manifest carries its config under `config`
    const YAML::Node node = root["config"] ? root["config"] : root;
    if (const int version = detail::get_or(node, "format_version", kConfigFormat); version != kConfigFormat) {
        throw ValidationError("unsupported config format_version " + std::to_string(version));
    }
    ExperimentConfig c;
    c.mode = parse_run_mode(detail::get_or<std::string>(node, "mode", "pac"));
    if (const auto g = node["graph"]) {
        c.graph.kind = detail::get_or<std::string>(g, "kind", c.graph.kind);
        c.graph.n = detail::get_or(g, "n", c.graph.n);
        c.graph.rings = detail::get_or(g, "rings", c.graph.rings);
        c.graph.nodes_per_ring = detail::get_or(g, "nodes_per_ring", c.graph.nodes_per_ring);
        c.graph.p = detail::get_or(g, "p", c.graph.p);
        c.graph.seed = detail::get_or(g, "seed", c.graph.seed);
        if (c.graph.kind == "edge_list") {
            const auto path = detail::get_or<std::string>(g, "path", "");
            if (path.empty()) throw ValidationError("edge_list graphs need a path");
            c.graph.edges = detail::read_edge_file(base_dir / path);
            c.graph.kind = "edges";
        } else if (c.graph.kind == "edges") {
            for (const auto& e : g["edges"]) {
                if (!e.IsSequence() || e.size() != 2) throw ValidationError("each edge must be a pair [i, j]");
                c.graph.edges.emplace_back(e[0].as<Node>(), e[1].as<Node>());
            }
        }
    }
    if (const auto r = node["rewards"]) {
        c.rewards.scheme = detail::get_or<std::string>(r, "scheme", c.rewards.scheme);
        if (c.rewards.scheme == "file") {
            const auto path = base_dir / detail::get_or<std::string>(r, "path", "");
            std::ifstream in(path);
            if (!in) throw IoError("cannot open rewards file " + path.string());
            c.rewards.values = read_rewards_csv(in).values();
            c.rewards.scheme = "explicit";
        } else {
            c.rewards.values = detail::get_or(r, "values", c.rewards.values);
        }
    }
    c.noise = parse_noise_model(detail::get_or<std::string>(node, "noise", std::string(to_string(c.noise))));
    c.algorithms = detail::get_or(node, "algorithms", c.algorithms);
    c.epsilon = detail::get_or(node, "epsilon", c.epsilon);
    c.delta = detail::get_or(node, "delta", c.delta);
    c.budgets = detail::get_or(node, "budgets", c.budgets);
    c.repetitions = detail::get_or(node, "repetitions", c.repetitions);
    c.seed = detail::get_or(node, "seed", c.seed);
    c.output = detail::get_or(node, "output", c.output);
    if (const auto x = node["contextual"]) {
        c.contextual.dimension = detail::get_or(x, "dimension", c.contextual.dimension);
        c.contextual.stages = detail::get_or(x, "stages", c.contextual.stages);
        c.contextual.contexts = detail::get_or(x, "contexts", c.contextual.contexts);
        c.contextual.horizon_known = detail::get_or(x, "horizon_known", c.contextual.horizon_known);
        c.contextual.cap_angle = detail::get_or(x, "cap_angle", c.contextual.cap_angle);
    }
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
        throw IoError("cannot read config " + path.string());
    } catch (const YAML::Exception& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return parse_config(root, path.parent_path());
}

/// Writes the config as a YAML map value (the caller opens/closes the map key).
inline void emit_config(YAML::Emitter& out, const ExperimentConfig& c) {
    out << YAML::BeginMap;
    out << YAML::Key << "format_version" << YAML::Value << kConfigFormat;
    out << YAML::Key << "mode" << YAML::Value << std::string(to_string(c.mode));
    out << YAML::Key << "graph" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << c.graph.kind;
    if (c.graph.kind == "spider_web") {
        out << YAML::Key << "rings" << YAML::Value << c.graph.rings;
        out << YAML::Key << "nodes_per_ring" << YAML::Value << c.graph.nodes_per_ring;
    } else if (c.graph.kind == "edges") {
        out << YAML::Key << "edges" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (auto [a, b] : c.graph.edges) out << YAML::Flow << YAML::BeginSeq << a << b << YAML::EndSeq;
        out << YAML::EndSeq;
    } else {
        out << YAML::Key << "n" << YAML::Value << c.graph.n;
        if (c.graph.kind == "erdos_renyi") out << YAML::Key << "p" << YAML::Value << c.graph.p;
        if (c.graph.kind != "line") out << YAML::Key << "seed" << YAML::Value << c.graph.seed;
    }
    out << YAML::EndMap;
    out << YAML::Key << "rewards" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "scheme" << YAML::Value << c.rewards.scheme;
    if (c.rewards.scheme == "explicit") out << YAML::Key << "values" << YAML::Value << YAML::Flow << c.rewards.values;
    out << YAML::EndMap;
    out << YAML::Key << "noise" << YAML::Value << std::string(to_string(c.noise));
    out << YAML::Key << "algorithms" << YAML::Value << YAML::Flow << c.algorithms;
    out << YAML::Key << "epsilon" << YAML::Value << c.epsilon;
    out << YAML::Key << "delta" << YAML::Value << c.delta;
    out << YAML::Key << "budgets" << YAML::Value << YAML::Flow << c.budgets;
    out << YAML::Key << "repetitions" << YAML::Value << c.repetitions;
    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::Key << "output" << YAML::Value << c.output;
    out << YAML::Key << "contextual" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dimension" << YAML::Value << c.contextual.dimension;
    out << YAML::Key << "stages" << YAML::Value << c.contextual.stages;
    out << YAML::Key << "contexts" << YAML::Value << c.contextual.contexts;
    out << YAML::Key << "horizon_known" << YAML::Value << c.contextual.horizon_known;
    out << YAML::Key << "cap_angle" << YAML::Value << c.contextual.cap_angle;
    out << YAML::EndMap;
    out << YAML::EndMap;
}

inline std::string config_to_yaml(const ExperimentConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    emit_config(out, c);
    return std::string(out.c_str()) + "\n";
}

}  // namespace gbandit
