#pragma once

#include "citeclass/flow.hpp"
#include "citeclass/scheme.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace citeclass {

/// Directed, weighted class graph. Node order is the order nodes were given
/// (class code order when built from a flow matrix).
struct FlowGraph {
    struct Node {
        std::string id;
        double size = 0.0;
    };
    struct Edge {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        double weight = 0.0;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges; // ascending by (from, to); weight > 0; no self loops

    /// Undirected view: one entry per unordered pair {u < v}, weight summed
    /// over both directions.
    std::vector<Edge> symmetrized() const;

    /// Weighted degree on the undirected view.
    std::vector<double> degrees() const;

    /// Throws std::invalid_argument on self loops, non-positive weights, bad
    /// indices or duplicate directed edges.
    void validate() const;
};

/// One node per class (size = system-B size), one edge per flow entry above
/// `epsilon`. Throws std::invalid_argument when `classes` is empty.
FlowGraph build_flow_graph(const FlowMatrix& matrix, const std::vector<ClassIndex>& classes, const Scheme& scheme,
                           double epsilon = 1e-6);

struct Partition {
    std::vector<std::uint32_t> community; // per node, dense ids from 0
    double q = 0.0;
    std::size_t communities() const;
};

/// Weighted modularity on the undirected view. 0 for a graph with no edges.
/// Throws std::invalid_argument if the partition does not cover every node.
double modularity(const FlowGraph& graph, const std::vector<std::uint32_t>& community);

/// Greedy agglomerative modularity maximization (Clauset-Newman-Moore): merge
/// the adjacent pair with the largest positive gain, ties to the smallest
/// (i, j), until no merge improves Q. Community ids are renumbered densely in
/// order of each community's first node.
Partition detect_communities(const FlowGraph& graph);

enum class Repulsion {
    degree,  // pair weight deg_u * deg_v (default)
    uniform, // pair weight 1
};

struct LayoutParams {
    int iterations = 5000;
    double step = 0.1;          // initial largest per-node displacement
    std::uint64_t seed = 1;
    double tolerance = 1e-9;    // stop on relative energy change below this
    Repulsion repulsion = Repulsion::degree;
};

struct Layout {
    std::vector<double> x;
    std::vector<double> y;
    double final_energy = 0.0;
    int iterations = 0;
    std::vector<double> energy_trace; // energy after the start and every accepted step
};

/// LinLog energy: sum over undirected edges of w * dist, minus sum over node
/// pairs of r_u * r_v * ln(dist) with r the repulsion weight.
double linlog_energy(const FlowGraph& graph, const std::vector<double>& x, const std::vector<double>& y,
                     Repulsion repulsion = Repulsion::degree);

/// Analytic gradient of linlog_energy.
void linlog_gradient(const FlowGraph& graph, const std::vector<double>& x, const std::vector<double>& y,
                     std::vector<double>& gx, std::vector<double>& gy, Repulsion repulsion = Repulsion::degree);

/// Gradient descent with backtracking (halve the step until the energy
/// decreases sufficiently). Deterministic for a fixed seed.
Layout linlog_layout(const FlowGraph& graph, const LayoutParams& params = {});

enum class GraphFormat { json, graphml };

/// Throws std::invalid_argument for anything but "json" / "graphml".
GraphFormat parse_graph_format(const std::string& token);

void export_graph(const FlowGraph& graph, const Partition& partition, const Layout& layout, GraphFormat format,
                  std::ostream& out);
void export_graph(const FlowGraph& graph, const Partition& partition, const Layout& layout, GraphFormat format,
                  const std::filesystem::path& path);

struct LoadedGraph {
    FlowGraph graph;
    Partition partition;
    Layout layout;
};

/// Reads back what export_graph wrote (either format).
LoadedGraph import_graph(std::istream& in, GraphFormat format);

} // namespace citeclass
