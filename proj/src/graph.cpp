#include "dynnull/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include <fmt/format.h>

#include "dynnull/errors.hpp"

namespace dynnull {

std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::state: return "state";
        case NodeKind::derivative: return "derivative";
        case NodeKind::parameter: return "parameter";
        case NodeKind::intervention: return "intervention";
    }
    return "unknown";
}

std::string_view to_string(Highlight h) {
    switch (h) {
        case Highlight::none: return "none";
        case Highlight::intervened: return "intervened";
        case Highlight::affected: return "affected";
    }
    return "unknown";
}

const Node* CausalGraph::find(std::string_view id) const {
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

std::size_t CausalGraph::in_degree(std::string_view id) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.second == id; }));
}

std::size_t CausalGraph::out_degree(std::string_view id) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.first == id; }));
}

void validate(const CausalGraph& g) {
    std::set<std::string_view> ids;
    for (const auto& n : g.nodes)
        if (!ids.insert(n.id).second) throw ArgumentError("duplicate node id '" + n.id + "'");
    for (const auto& [from, to] : g.edges)
        if (!ids.contains(from) || !ids.contains(to))
            throw ArgumentError("edge " + from + " -> " + to + " references a missing node");
}

bool is_acyclic(const CausalGraph& g) {
    std::map<std::string_view, std::size_t> indegree;
    std::map<std::string_view, std::vector<std::string_view>> out;
    for (const auto& n : g.nodes) indegree[n.id] = 0;
    for (const auto& [from, to] : g.edges) {
        ++indegree[to];
        out[from].push_back(to);
    }
    std::deque<std::string_view> ready;
    for (const auto& [id, d] : indegree)
        if (d == 0) ready.push_back(id);
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto id = ready.front();
        ready.pop_front();
        ++visited;
        for (auto next : out[id])
            if (--indegree[next] == 0) ready.push_back(next);
    }
    return visited == indegree.size();
}

std::vector<std::string> reachable_from(const CausalGraph& g, std::span<const std::string> sources) {
    std::map<std::string_view, std::vector<std::string_view>> out;
    for (const auto& [from, to] : g.edges) out[from].push_back(to);
    std::set<std::string_view> seen(sources.begin(), sources.end());
    std::deque<std::string_view> queue(sources.begin(), sources.end());
    while (!queue.empty()) {
        auto id = queue.front();
        queue.pop_front();
        for (auto next : out[id])
            if (seen.insert(next).second) queue.push_back(next);
    }
    return {seen.begin(), seen.end()};
}

namespace {

std::string state_id(const SystemSpec& spec, std::size_t i, double t) {
    return fmt::format("V_{}@{}", spec.species_names[i], t);
}

}  // namespace

CausalGraph time_indexed_dag(const ScenarioRun& run, std::span<const double> measure_times,
                             double epsilon) {
    const Trajectory& traj = run.intervened;
    if (measure_times.size() < 2) throw ArgumentError("need at least two measurement times");
    std::vector<std::size_t> idx;
    for (double t : measure_times) {
        auto k = traj.grid_index(t, 1e-6 * traj.step());
        if (!k) throw ArgumentError(fmt::format("measurement time {} is not on the grid", t));
        if (!idx.empty() && *k <= idx.back())
            throw ArgumentError("measurement times must be strictly increasing");
        idx.push_back(*k);
    }

    const SystemSpec& spec = run.original_spec();
    const std::size_t n = spec.size();
    const std::size_t m = idx.size();
    // Requested times name the nodes; grid times can carry rounding noise.
    auto time_of = [&](std::size_t k) { return measure_times[k]; };

    CausalGraph g;
    // (species, measurement) -> node position
    auto node_at = [m](std::size_t i, std::size_t k) { return i * m + k; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < m; ++k)
            g.nodes.push_back({state_id(spec, i, time_of(k)), NodeKind::state, i, time_of(k),
                               Highlight::none,
                               fmt::format("{}({})", spec.species_names[i], time_of(k))});

    std::set<std::size_t> severed;  // node positions whose same-species edge is cut
    std::vector<std::string> sources;
    for (std::size_t a = 0; a < run.interventions.size(); ++a) {
        const auto& iv = run.interventions[a];
        Node node{fmt::format("do{}", a), NodeKind::intervention, targeted_species(iv.action),
                  iv.time, Highlight::none, describe(iv.action, spec)};
        sources.push_back(node.id);
        g.nodes.push_back(node);

        auto first = std::find_if(idx.begin(), idx.end(), [&](std::size_t k) {
            return traj.time_at(k) >= iv.time - 1e-9 * traj.step();
        });
        if (first == idx.end()) continue;
        const auto k = static_cast<std::size_t>(first - idx.begin());
        const std::size_t i = targeted_species(iv.action);
        auto& target = g.nodes[node_at(i, k)];
        g.edges.emplace_back(node.id, target.id);
        if (is_state_action(iv.action)) target.highlight = Highlight::intervened;
        if (std::holds_alternative<SetState>(iv.action)) severed.insert(node_at(i, k));
    }

    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double lo = traj.time_at(idx[k]);
        const double hi = traj.time_at(idx[k + 1]);
        for (std::size_t i = 0; i < n; ++i) {
            if (!severed.contains(node_at(i, k + 1)))
                g.edges.emplace_back(g.nodes[node_at(i, k)].id, g.nodes[node_at(i, k + 1)].id);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const bool coupled =
                    std::any_of(run.spec_timeline.begin(), run.spec_timeline.end(), [&](const SpecSegment& s) {
                        return s.start < hi && s.end > lo && s.spec.gamma(i, j) != 0.0;
                    });
                if (coupled)
                    g.edges.emplace_back(g.nodes[node_at(j, k)].id, g.nodes[node_at(i, k + 1)].id);
            }
        }
    }

    const auto reachable = reachable_from(g, sources);
    const std::set<std::string_view> reach(reachable.begin(), reachable.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            auto& node = g.nodes[node_at(i, k)];
            if (node.highlight != Highlight::none) continue;
            const double gap = std::abs(run.intervened[idx[k]][i] - run.baseline[idx[k]][i]);
            if (gap > epsilon && reach.contains(node.id)) node.highlight = Highlight::affected;
        }
    }
    return g;
}

CausalGraph dynamic_causal_graph(const SystemSpec& spec) {
    validate(spec);
    CausalGraph g;
    const std::size_t n = spec.size();
    const auto& names = spec.species_names;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string state = "V_" + names[i];
        const std::string deriv = "dV_" + names[i];
        g.nodes.push_back({state, NodeKind::state, i, std::nullopt, Highlight::none, state});
        g.nodes.push_back({deriv, NodeKind::derivative, i, std::nullopt, Highlight::none, deriv + "/dt"});
        g.nodes.push_back({"r_" + names[i], NodeKind::parameter, i, std::nullopt, Highlight::none,
                           "r_" + names[i]});
        g.nodes.push_back({"K_" + names[i], NodeKind::parameter, i, std::nullopt, Highlight::none,
                           "K_" + names[i]});
        g.edges.emplace_back(state, deriv);
        g.edges.emplace_back(deriv, state);
        g.edges.emplace_back("r_" + names[i], deriv);
        g.edges.emplace_back("K_" + names[i], deriv);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || spec.gamma(i, j) == 0.0) continue;
            const std::string param = fmt::format("gamma_{}_{}", names[i], names[j]);
            g.nodes.push_back({param, NodeKind::parameter, i, std::nullopt, Highlight::none,
                               fmt::format("gamma:{}->{}", names[i], names[j])});
            g.edges.emplace_back(param, deriv);
            g.edges.emplace_back("V_" + names[j], deriv);
        }
    }
    return g;
}

namespace {

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string_view shape_of(NodeKind k) {
    switch (k) {
        case NodeKind::state: return "ellipse";
        case NodeKind::derivative: return "diamond";
        case NodeKind::parameter: return "box";
        case NodeKind::intervention: return "hexagon";
    }
    return "ellipse";
}

std::vector<const Node*> sorted_nodes(const CausalGraph& g) {
    std::vector<const Node*> nodes;
    for (const auto& n : g.nodes) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) { return a->id < b->id; });
    return nodes;
}

std::vector<Edge> sorted_edges(const CausalGraph& g) {
    std::vector<Edge> edges = g.edges;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

std::string to_dot(const CausalGraph& g) {
    std::string out = "digraph G {\n";
    for (const Node* n : sorted_nodes(g)) {
        out += fmt::format("  {} [label={}, shape={}", quote(n->id), quote(n->label), shape_of(n->kind));
        if (n->highlight == Highlight::intervened) out += ", color=red, style=filled";
        if (n->highlight == Highlight::affected) out += ", style=dashed";
        out += "];\n";
    }
    for (const auto& [from, to] : sorted_edges(g)) out += fmt::format("  {} -> {};\n", quote(from), quote(to));
    out += "}\n";
    return out;
}

nlohmann::ordered_json to_json(const CausalGraph& g) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const Node* n : sorted_nodes(g)) {
        nlohmann::ordered_json j;
        j["id"] = n->id;
        j["kind"] = to_string(n->kind);
        j["species"] = n->species ? nlohmann::ordered_json(*n->species) : nlohmann::ordered_json(nullptr);
        j["time"] = n->time ? nlohmann::ordered_json(*n->time) : nlohmann::ordered_json(nullptr);
        j["highlight"] = to_string(n->highlight);
        nodes.push_back(std::move(j));
    }
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& [from, to] : sorted_edges(g)) edges.push_back({from, to});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace dynnull
