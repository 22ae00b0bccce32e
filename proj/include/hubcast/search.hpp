#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hubcast/forecasters.hpp"
#include "hubcast/random.hpp"

namespace hubcast {

// One explored configuration in the search tree.
struct SearchNode {
    int id = 0;
    std::optional<int> parent;
    ForecasterConfig config;
    double score = 0.0;  // aggregated validation score (penalty when gated)
    int visit_count = 0;
    bool gate_passed = true;
    double wall_ms = 0.0;  // evaluator wall time
};

struct Budget {
    std::size_t max_nodes = 2500;
    std::chrono::duration<double> max_runtime = std::chrono::hours(2500);
};

class SearchTree {
public:
    const std::vector<SearchNode>& nodes() const { return nodes_; }
    SearchNode& at(int id) { return nodes_.at(static_cast<std::size_t>(id)); }
    const SearchNode& at(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }

    // Appends a node with the next id, visit count one, and bumps every
    // ancestor's visit count.
    SearchNode& add_node(std::optional<int> parent, ForecasterConfig config);

private:
    std::vector<SearchNode> nodes_;
};

// PUCT selection over the whole tree: argmax of
//   Q(node) + c * P(node) * sqrt(N_parent) / (1 + N_node)
// where Q = 1 / (1 + score) maps lower scores to higher rewards, P is a prior
// (uniform when absent), and the root uses its own visit count as N_parent.
// Ties break toward the lowest id; returns nullopt on an empty tree.
std::optional<int> puct_select(const SearchTree& tree, double exploration_constant,
                               const std::function<double(const SearchNode&)>& prior = {});

// Deterministic child-config proposer: perturbs one numeric parameter or, at
// low probability, switches model kind. Pure function of (parent, rng draw).
ForecasterConfig mutate_config(const ForecasterConfig& parent, Rng& rng);

struct SearchCallbacks {
    // Child proposal; defaults to mutate_config.
    std::function<ForecasterConfig(const ForecasterConfig& parent, Rng& rng)> propose;
    // Compliance gate; failing configs take the penalty score unexamined.
    std::function<bool(const ForecasterConfig&)> gate;
    // Validation evaluator; throwing marks the node penalized.
    std::function<double(const ForecasterConfig&)> evaluate;
};

struct TrajectoryPoint {
    int node_id = 0;
    double cumulative_best = 0.0;
};

struct SearchResult {
    SearchTree tree;
    int best_node_id = 0;
    std::vector<TrajectoryPoint> trajectory;
};

struct SearchOptions {
    double exploration_constant = 1.0;
    double gate_penalty = 1000.0;
    std::uint64_t seed = 0;
};

// Budgeted PUCT loop: select, propose, gate, evaluate, backpropagate visit
// counts. The trajectory records the best score seen so far after each node.
// Gated nodes only become best when every node is gated.
SearchResult run_search(const ForecasterConfig& root_config, const SearchCallbacks& callbacks,
                        const Budget& budget, const SearchOptions& options = {});

// Post-search selection: scores every node on the retrospective test block
// and returns the id minimizing validation + 2 x test; ties -> lowest id.
int select_final_node(const SearchTree& tree,
                      const std::function<double(const ForecasterConfig&)>& test_evaluator);

}  // namespace hubcast
