#include "citeclass/netgraph.hpp"

#include "citeclass/error.hpp"
#include "citeclass/rng.hpp"
#include "citeclass/simd/kernels.hpp"

#include <json.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace citeclass {

std::vector<FlowGraph::Edge> FlowGraph::symmetrized() const {
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> pairs;
    for (const auto& e : edges) pairs[{std::min(e.from, e.to), std::max(e.from, e.to)}] += e.weight;
    std::vector<Edge> out;
    out.reserve(pairs.size());
    for (const auto& [k, w] : pairs) out.push_back({k.first, k.second, w});
    return out;
}

std::vector<double> FlowGraph::degrees() const {
    std::vector<double> deg(nodes.size(), 0.0);
    for (const auto& e : symmetrized()) {
        deg[e.from] += e.weight;
        deg[e.to] += e.weight;
    }
    return deg;
}

void FlowGraph::validate() const {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.from >= nodes.size() || e.to >= nodes.size()) throw std::invalid_argument("edge endpoint out of range");
        if (e.from == e.to) throw std::invalid_argument("self loop on node '" + nodes[e.from].id + "'");
        if (!(e.weight > 0.0)) throw std::invalid_argument("non-positive edge weight");
        if (i > 0 && std::pair(edges[i - 1].from, edges[i - 1].to) >= std::pair(e.from, e.to))
            throw std::invalid_argument("edges not strictly ordered by (from, to)");
    }
}

std::size_t Partition::communities() const {
    std::uint32_t top = 0;
    for (auto c : community) top = std::max(top, c + 1);
    return top;
}

FlowGraph build_flow_graph(const FlowMatrix& matrix, const std::vector<ClassIndex>& classes, const Scheme& scheme,
                           double epsilon) {
    if (classes.empty()) throw std::invalid_argument("cannot build a flow graph from an empty matrix");
    FlowGraph g;
    g.nodes.reserve(classes.size());
    for (auto c : classes) g.nodes.push_back({class_code(scheme, matrix.level(), c), matrix.size_b(c)});
    for (std::uint32_t i = 0; i < classes.size(); ++i)
        for (std::uint32_t j = 0; j < classes.size(); ++j) {
            if (i == j) continue;
            const double w = matrix.flow(classes[i], classes[j]);
            if (w > epsilon) g.edges.push_back({i, j, w});
        }
    return g;
}

double modularity(const FlowGraph& graph, const std::vector<std::uint32_t>& community) {
    if (community.size() != graph.nodes.size())
        throw std::invalid_argument("partition does not cover every node");
    const auto sym = graph.symmetrized();
    double two_m = 0.0;
    for (const auto& e : sym) two_m += 2.0 * e.weight;
    if (!(two_m > 0.0)) return 0.0;

    std::uint32_t k = 0;
    for (auto c : community) k = std::max(k, c + 1);
    std::vector<double> inside(k, 0.0), total(k, 0.0);
    for (const auto& e : sym) {
        total[community[e.from]] += e.weight;
        total[community[e.to]] += e.weight;
        if (community[e.from] == community[e.to]) inside[community[e.from]] += 2.0 * e.weight;
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < k; ++c) {
        const double a = total[c] / two_m;
        q += inside[c] / two_m - a * a;
    }
    return q;
}

Partition detect_communities(const FlowGraph& graph) {
    graph.validate();
    const std::size_t n = graph.nodes.size();
    const auto sym = graph.symmetrized();
    double two_m = 0.0;
    for (const auto& e : sym) two_m += 2.0 * e.weight;

    std::vector<std::uint32_t> root(n);
    for (std::uint32_t i = 0; i < n; ++i) root[i] = i;

    if (two_m > 0.0) {
        std::vector<std::map<std::uint32_t, double>> e(n); // e[i][j]: fraction of edge ends between i and j
        std::vector<double> a(n, 0.0);
        for (const auto& s : sym) {
            const double f = s.weight / two_m;
            e[s.from][s.to] += f;
            e[s.to][s.from] += f;
            a[s.from] += f;
            a[s.to] += f;
        }
        std::vector<char> alive(n, 1);

        for (;;) {
            double best = 0.0;
            std::uint32_t bi = 0, bj = 0;
            bool found = false;
            for (std::uint32_t i = 0; i < n; ++i) {
                if (!alive[i]) continue;
                for (const auto& [j, eij] : e[i]) {
                    if (j <= i) continue;
                    const double dq = 2.0 * (eij - a[i] * a[j]);
                    if (dq > best) {
                        best = dq;
                        bi = i;
                        bj = j;
                        found = true;
                    }
                }
            }
            if (!found) break;

            // Merge bj into bi.
            for (const auto& [k, ejk] : e[bj]) {
                if (k == bi) continue;
                e[bi][k] += ejk;
                e[k][bi] += ejk;
                e[k].erase(bj);
            }
            e[bi].erase(bj);
            e[bj].clear();
            a[bi] += a[bj];
            a[bj] = 0.0;
            alive[bj] = 0;
            for (auto& r : root)
                if (r == bj) r = bi;
        }
    }

    Partition p;
    p.community.resize(n);
    std::map<std::uint32_t, std::uint32_t> dense;
    for (std::uint32_t i = 0; i < n; ++i) {
        auto [it, fresh] = dense.try_emplace(root[i], static_cast<std::uint32_t>(dense.size()));
        p.community[i] = it->second;
    }
    p.q = modularity(graph, p.community);
    return p;
}

namespace {

std::vector<double> repulsion_weights(const FlowGraph& graph, Repulsion repulsion) {
    if (repulsion == Repulsion::uniform) return std::vector<double>(graph.nodes.size(), 1.0);
    return graph.degrees();
}

double attraction_energy(const std::vector<FlowGraph::Edge>& sym, const std::vector<double>& x,
                         const std::vector<double>& y) {
    double e = 0.0;
    for (const auto& s : sym) e += s.weight * std::hypot(x[s.from] - x[s.to], y[s.from] - y[s.to]);
    return e;
}

struct EnergyModel {
    std::vector<FlowGraph::Edge> sym;
    std::vector<double> c;
    const simd::RepulsionKernels* kernels;

    double energy(const std::vector<double>& x, const std::vector<double>& y, double* min_dist2 = nullptr) const {
        double md = std::numeric_limits<double>::infinity();
        const double rep = kernels->energy(x.data(), y.data(), c.data(), x.size(), &md);
        if (min_dist2) *min_dist2 = md;
        return attraction_energy(sym, x, y) + rep;
    }

    void gradient(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& gx,
                  std::vector<double>& gy) const {
        gx.assign(x.size(), 0.0);
        gy.assign(y.size(), 0.0);
        for (const auto& s : sym) {
            const double dx = x[s.from] - x[s.to];
            const double dy = y[s.from] - y[s.to];
            const double d = std::hypot(dx, dy);
            if (d == 0.0) continue;
            const double f = s.weight / d;
            gx[s.from] += f * dx;
            gy[s.from] += f * dy;
            gx[s.to] -= f * dx;
            gy[s.to] -= f * dy;
        }
        kernels->gradient(x.data(), y.data(), c.data(), x.size(), gx.data(), gy.data());
    }
};

EnergyModel make_model(const FlowGraph& graph, Repulsion repulsion) {
    return EnergyModel{graph.symmetrized(), repulsion_weights(graph, repulsion), &simd::repulsion_kernels()};
}

bool has_coincident(const std::vector<double>& x, const std::vector<double>& y, std::vector<char>& mark) {
    mark.assign(x.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (x[i] == x[j] && y[i] == y[j]) mark[i] = mark[j] = any = true;
    return any;
}

} // namespace

double linlog_energy(const FlowGraph& graph, const std::vector<double>& x, const std::vector<double>& y,
                     Repulsion repulsion) {
    return make_model(graph, repulsion).energy(x, y);
}

void linlog_gradient(const FlowGraph& graph, const std::vector<double>& x, const std::vector<double>& y,
                     std::vector<double>& gx, std::vector<double>& gy, Repulsion repulsion) {
    make_model(graph, repulsion).gradient(x, y, gx, gy);
}

Layout linlog_layout(const FlowGraph& graph, const LayoutParams& params) {
    graph.validate();
    const std::size_t n = graph.nodes.size();
    Xoshiro256 rng(params.seed);
    Layout out;
    out.x.resize(n);
    out.y.resize(n);
    const double spread = std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = (rng.uniform() - 0.5) * spread;
        out.y[i] = (rng.uniform() - 0.5) * spread;
    }
    std::vector<char> mark;
    for (int round = 0; round < 16 && has_coincident(out.x, out.y, mark); ++round)
        for (std::size_t i = 0; i < n; ++i)
            if (mark[i]) {
                out.x[i] += 1e-9 * (2.0 * rng.uniform() - 1.0);
                out.y[i] += 1e-9 * (2.0 * rng.uniform() - 1.0);
            }

    const auto model = make_model(graph, params.repulsion);
    double energy = model.energy(out.x, out.y);
    out.energy_trace.push_back(energy);
    std::vector<double> gx, gy, tx(n), ty(n);
    double step = params.step;
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxHalvings = 80;

    int it = 0;
    for (; it < params.iterations; ++it) {
        model.gradient(out.x, out.y, gx, gy);
        double gmax = 0.0, gnorm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gmax = std::max({gmax, std::abs(gx[i]), std::abs(gy[i])});
            gnorm2 += gx[i] * gx[i] + gy[i] * gy[i];
        }
        if (!(gmax > 0.0) || !std::isfinite(gmax)) break;

        bool accepted = false;
        double trial_energy = energy;
        for (int h = 0; h < kMaxHalvings; ++h) {
            const double scale = step / gmax;
            for (std::size_t i = 0; i < n; ++i) {
                tx[i] = out.x[i] - scale * gx[i];
                ty[i] = out.y[i] - scale * gy[i];
            }
            trial_energy = model.energy(tx, ty);
            if (std::isfinite(trial_energy) && trial_energy <= energy - kArmijo * scale * gnorm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const double change = std::abs(energy - trial_energy) / std::max(std::abs(energy), 1e-300);
        out.x.swap(tx);
        out.y.swap(ty);
        energy = trial_energy;
        out.energy_trace.push_back(energy);
        step *= 2.0;
        if (change < params.tolerance) {
            ++it;
            break;
        }
    }
    out.iterations = it;
    out.final_energy = energy;
    return out;
}

GraphFormat parse_graph_format(const std::string& token) {
    if (token == "json") return GraphFormat::json;
    if (token == "graphml") return GraphFormat::graphml;
    throw std::invalid_argument("unknown graph format '" + token + "' (expected json or graphml)");
}

namespace {

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

void check_same_nodes(const FlowGraph& g, const Partition& p, const Layout& l) {
    if (p.community.size() != g.nodes.size() || l.x.size() != g.nodes.size() || l.y.size() != g.nodes.size())
        throw std::invalid_argument("graph, partition and layout cover different node sets");
}

} // namespace

void export_graph(const FlowGraph& graph, const Partition& partition, const Layout& layout, GraphFormat format,
                  std::ostream& out) {
    check_same_nodes(graph, partition, layout);
    if (format == GraphFormat::json) {
        nlohmann::json doc;
        doc["nodes"] = nlohmann::json::array();
        for (std::size_t i = 0; i < graph.nodes.size(); ++i)
            doc["nodes"].push_back({{"id", graph.nodes[i].id},
                                    {"size", graph.nodes[i].size},
                                    {"community", partition.community[i]},
                                    {"x", layout.x[i]},
                                    {"y", layout.y[i]}});
        doc["edges"] = nlohmann::json::array();
        for (const auto& e : graph.edges)
            doc["edges"].push_back(
                {{"from", graph.nodes[e.from].id}, {"to", graph.nodes[e.to].id}, {"weight", e.weight}});
        out << doc.dump(1) << '\n';
        return;
    }

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
           "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n"
           "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
           "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
           "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n"
           "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
           "  <graph id=\"flows\" edgedefault=\"directed\">\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        out << "    <node id=\"" << xml_escape(graph.nodes[i].id) << "\">"
            << "<data key=\"size\">" << num(graph.nodes[i].size) << "</data>"
            << "<data key=\"community\">" << partition.community[i] << "</data>"
            << "<data key=\"x\">" << num(layout.x[i]) << "</data>"
            << "<data key=\"y\">" << num(layout.y[i]) << "</data></node>\n";
    }
    for (const auto& e : graph.edges)
        out << "    <edge source=\"" << xml_escape(graph.nodes[e.from].id) << "\" target=\""
            << xml_escape(graph.nodes[e.to].id) << "\"><data key=\"weight\">" << num(e.weight) << "</data></edge>\n";
    out << "  </graph>\n</graphml>\n";
}

void export_graph(const FlowGraph& graph, const Partition& partition, const Layout& layout, GraphFormat format,
                  const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    export_graph(graph, partition, layout, format, out);
}

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad number '" + s + "' in graph file");
    return v;
}

} // namespace

LoadedGraph import_graph(std::istream& in, GraphFormat format) {
    LoadedGraph g;
    std::map<std::string, std::uint32_t> index;
    auto add_node = [&](const std::string& id, double size, std::uint32_t community, double x, double y) {
        if (!index.emplace(id, static_cast<std::uint32_t>(g.graph.nodes.size())).second)
            throw std::invalid_argument("duplicate node '" + id + "'");
        g.graph.nodes.push_back({id, size});
        g.partition.community.push_back(community);
        g.layout.x.push_back(x);
        g.layout.y.push_back(y);
    };
    auto add_edge = [&](const std::string& from, const std::string& to, double w) {
        auto f = index.find(from), t = index.find(to);
        if (f == index.end() || t == index.end()) throw std::invalid_argument("edge references unknown node");
        g.graph.edges.push_back({f->second, t->second, w});
    };

    if (format == GraphFormat::json) {
        auto doc = nlohmann::json::parse(in);
        for (const auto& n : doc.at("nodes"))
            add_node(n.at("id").get<std::string>(), n.at("size").get<double>(), n.at("community").get<std::uint32_t>(),
                     n.at("x").get<double>(), n.at("y").get<double>());
        for (const auto& e : doc.at("edges"))
            add_edge(e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("weight").get<double>());
    } else {
        namespace pt = boost::property_tree;
        pt::ptree tree;
        pt::read_xml(in, tree);
        for (const auto& [tag, child] : tree.get_child("graphml.graph")) {
            if (tag != "node" && tag != "edge") continue;
            std::map<std::string, std::string> data;
            for (const auto& [dtag, d] : child)
                if (dtag == "data") data[d.get<std::string>("<xmlattr>.key")] = d.get_value<std::string>();
            if (tag == "node") {
                add_node(child.get<std::string>("<xmlattr>.id"), parse_double(data.at("size")),
                         static_cast<std::uint32_t>(std::stoul(data.at("community"))), parse_double(data.at("x")),
                         parse_double(data.at("y")));
            } else {
                add_edge(child.get<std::string>("<xmlattr>.source"), child.get<std::string>("<xmlattr>.target"),
                         parse_double(data.at("weight")));
            }
        }
    }
    g.graph.validate();
    g.partition.q = modularity(g.graph, g.partition.community);
    return g;
}

} // namespace citeclass
