#include "hubcast/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hubcast/backtest.hpp"

namespace hubcast {

SearchNode& SearchTree::add_node(std::optional<int> parent, ForecasterConfig config) {
    if (parent && (*parent < 0 || static_cast<std::size_t>(*parent) >= nodes_.size())) {
        throw std::invalid_argument("parent id out of range");
    }
    SearchNode node;
    node.id = static_cast<int>(nodes_.size());
    node.parent = parent;
    node.config = std::move(config);
    node.visit_count = 1;
    nodes_.push_back(std::move(node));

    std::optional<int> up = parent;
    while (up) {
        SearchNode& ancestor = nodes_[static_cast<std::size_t>(*up)];
        ancestor.visit_count += 1;
        up = ancestor.parent;
    }
    return nodes_.back();
}

std::optional<int> puct_select(const SearchTree& tree, double exploration_constant,
                               const std::function<double(const SearchNode&)>& prior) {
    if (exploration_constant <= 0.0) {
        throw std::invalid_argument("exploration constant must be positive");
    }
    if (tree.empty()) return std::nullopt;

    int best_id = -1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (const SearchNode& node : tree.nodes()) {
        const double q = 1.0 / (1.0 + node.score);
        const double p = prior ? prior(node) : 1.0;
        const int parent_visits =
            node.parent ? tree.at(*node.parent).visit_count : node.visit_count;
        const double u = exploration_constant * p * std::sqrt(static_cast<double>(parent_visits)) /
                         (1.0 + static_cast<double>(node.visit_count));
        const double value = q + u;
        if (value > best_value) {
            best_value = value;
            best_id = node.id;
        }
    }
    return best_id;
}

ForecasterConfig mutate_config(const ForecasterConfig& parent, Rng& rng) {
    ForecasterConfig child = parent;

    // Occasionally jump to a different model family with its default knobs.
    if (rng.uniform() < 0.10) {
        switch (rng.uniform_index(3)) {
            case 0:
                child.kind = ForecasterKind::Flatline;
                child.params = {{"history_diffs", 0.0}, {"n_trajectories", 2000.0}};
                return child;
            case 1:
                child.kind = ForecasterKind::Climatological;
                child.params = {{"window_halfwidth", 3.0},
                                {"min_samples", 2.0},
                                {"smoothing", 0.0}};
                return child;
            default:
                child.kind = ForecasterKind::Ar6Pooled;
                child.params = {{"epsilon", 0.01}, {"n_trajectories", 2000.0}};
                return child;
        }
    }

    switch (child.kind) {
        case ForecasterKind::Flatline: {
            double diffs = child.param_or("history_diffs", 0.0);
            diffs = std::max(0.0, diffs + static_cast<double>(rng.uniform_index(7)) - 3.0);
            child.params["history_diffs"] = std::floor(diffs);
            break;
        }
        case ForecasterKind::Climatological: {
            if (rng.uniform() < 0.5) {
                double hw = child.param_or("window_halfwidth", 3.0);
                hw = std::clamp(hw + (rng.uniform() < 0.5 ? -1.0 : 1.0), 0.0, 8.0);
                child.params["window_halfwidth"] = hw;
            } else {
                double s = child.param_or("smoothing", 0.0);
                s = std::clamp(s + 0.1 * (rng.uniform() - 0.5), 0.0, 0.9);
                child.params["smoothing"] = s;
            }
            break;
        }
        case ForecasterKind::Ar6Pooled: {
            double eps = child.param_or("epsilon", 0.01);
            eps = std::clamp(eps * std::exp(rng.uniform() - 0.5), 1e-4, 1.0);
            child.params["epsilon"] = eps;
            break;
        }
    }
    return child;
}

SearchResult run_search(const ForecasterConfig& root_config, const SearchCallbacks& callbacks,
                        const Budget& budget, const SearchOptions& options) {
    if (budget.max_nodes == 0 || budget.max_runtime.count() <= 0.0) {
        throw std::invalid_argument("budget must be positive");
    }
    if (!callbacks.evaluate) throw std::invalid_argument("missing evaluator");

    auto propose = callbacks.propose
                       ? callbacks.propose
                       : [](const ForecasterConfig& parent, Rng& rng) {
                             return mutate_config(parent, rng);
                         };

    SearchResult result;
    Rng rng(options.seed);
    std::chrono::duration<double> spent{0.0};

    auto evaluate_node = [&](SearchNode& node) {
        const bool passed = callbacks.gate ? callbacks.gate(node.config) : true;
        node.gate_passed = passed;
        if (!passed) {
            node.score = options.gate_penalty;
            return;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
            node.score = callbacks.evaluate(node.config);
        } catch (const std::exception&) {
            node.score = options.gate_penalty;
            node.gate_passed = false;
        }
        const auto elapsed = std::chrono::steady_clock::now() - start;
        node.wall_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed)
                .count();
        spent += elapsed;
    };

    double best = std::numeric_limits<double>::infinity();
    auto record = [&](const SearchNode& node) {
        best = std::min(best, node.score);
        result.trajectory.push_back(TrajectoryPoint{node.id, best});
    };

    evaluate_node(result.tree.add_node(std::nullopt, root_config));
    record(result.tree.at(0));

    while (result.tree.size() < budget.max_nodes && spent < budget.max_runtime) {
        const auto selected = puct_select(result.tree, options.exploration_constant);
        if (!selected) break;
        ForecasterConfig child_config = propose(result.tree.at(*selected).config, rng);
        SearchNode& child = result.tree.add_node(*selected, std::move(child_config));
        evaluate_node(child);
        record(child);
    }

    // Best node: lowest score among gate-passing nodes, falling back to the
    // whole tree when the gate rejected everything; ties -> lowest id.
    int best_id = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (const SearchNode& node : result.tree.nodes()) {
        if (node.gate_passed && node.score < best_score) {
            best_score = node.score;
            best_id = node.id;
        }
    }
    if (best_id < 0) {
        for (const SearchNode& node : result.tree.nodes()) {
            if (node.score < best_score) {
                best_score = node.score;
                best_id = node.id;
            }
        }
    }
    result.best_node_id = best_id;
    return result;
}

int select_final_node(const SearchTree& tree,
                      const std::function<double(const ForecasterConfig&)>& test_evaluator) {
    if (tree.empty()) throw std::invalid_argument("empty search tree");
    if (!test_evaluator) throw std::invalid_argument("missing test evaluator");

    int best_id = -1;
    double best = std::numeric_limits<double>::infinity();
    for (const SearchNode& node : tree.nodes()) {
        const double test = test_evaluator(node.config);
        const double combined = selection_score(node.score, test);
        if (combined < best) {
            best = combined;
            best_id = node.id;
        }
    }
    return best_id;
}

}  // namespace hubcast
