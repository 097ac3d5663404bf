#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dynnull/intervention.hpp"
#include "dynnull/system.hpp"

namespace dynnull {

enum class NodeKind { state, derivative, parameter, intervention };
enum class Highlight { none, intervened, affected };

std::string_view to_string(NodeKind k);
std::string_view to_string(Highlight h);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::state;
    std::optional<std::size_t> species;
    std::optional<double> time;
    Highlight highlight = Highlight::none;
    std::string label;
};

using Edge = std::pair<std::string, std::string>;

struct CausalGraph {
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    const Node* find(std::string_view id) const;
    std::size_t in_degree(std::string_view id) const;
    std::size_t out_degree(std::string_view id) const;
};

/// Throws ArgumentError on duplicate ids or dangling edges.
void validate(const CausalGraph& g);

/// Kahn's algorithm; true when the graph has no directed cycle.
bool is_acyclic(const CausalGraph& g);

/// Ids reachable from `sources` along directed edges (sources included).
std::vector<std::string> reachable_from(const CausalGraph& g, std::span<const std::string> sources);

/// Unrolled graph over (species, measurement time) state nodes.
///
/// Same-species edges join consecutive measurement times; a cross edge
/// (j, t_k) -> (i, t_k+1) exists when gamma(i, j) is nonzero in any spec in
/// force on [t_k, t_k+1). Each intervention gets its own node with an edge
/// into its species at the first measurement time >= t*. A SetState cuts
/// the incoming same-species edge of the node it targets; ScaleState
/// keeps it since the new value still depends on the old one.
///
/// Highlights: "intervened" for the node a state action lands on;
/// "affected" when |intervened - baseline| > epsilon for that species at
/// that time and the node is reachable from an intervention node.
/// Throws ArgumentError if measure_times are off-grid, unsorted or fewer
/// than two.
CausalGraph time_indexed_dag(const ScenarioRun& run, std::span<const double> measure_times,
                             double epsilon);

/// State, derivative and parameter nodes for the vector field. Parameter
/// nodes are roots.
CausalGraph dynamic_causal_graph(const SystemSpec& spec);

/// Graphviz text, nodes and edges sorted by id. Byte-stable.
std::string to_dot(const CausalGraph& g);

nlohmann::ordered_json to_json(const CausalGraph& g);

}  // namespace dynnull
