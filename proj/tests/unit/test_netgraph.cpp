#include "fixtures.hpp"

#include "citeclass/netgraph.hpp"
#include "citeclass/rng.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <sstream>

using namespace citeclass;

namespace {

FlowGraph make_graph(std::size_t n, const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges) {
    FlowGraph g;
    for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({"n" + std::to_string(i), 1.0});
    for (const auto& [u, v, w] : edges) g.edges.push_back({u, v, w});
    std::sort(g.edges.begin(), g.edges.end(),
              [](const auto& a, const auto& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    return g;
}

FlowGraph triangle_pair() {
    return make_graph(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
}

// Q written out from the adjacency matrix, independent of the library.
double modularity_oracle(const FlowGraph& g, const std::vector<std::uint32_t>& comm) {
    const std::size_t n = g.nodes.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges) {
        a[e.from][e.to] += e.weight;
        a[e.to][e.from] += e.weight;
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            k[i] += a[i][j];
            two_m += a[i][j];
        }
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (comm[i] == comm[j]) q += a[i][j] - k[i] * k[j] / two_m;
    return q / two_m;
}

// Best Q over every set partition (restricted growth strings).
void enumerate(const FlowGraph& g, std::vector<std::uint32_t>& rgs, std::size_t i, std::uint32_t used, double& best) {
    if (i == rgs.size()) {
        best = std::max(best, modularity_oracle(g, rgs));
        return;
    }
    for (std::uint32_t c = 0; c <= used; ++c) {
        rgs[i] = c;
        enumerate(g, rgs, i + 1, std::max(used, c + 1), best);
    }
}

double brute_force_best(const FlowGraph& g) {
    std::vector<std::uint32_t> rgs(g.nodes.size(), 0);
    double best = -1.0;
    enumerate(g, rgs, 0, 0, best);
    return best;
}

FlowGraph random_graph(Xoshiro256& rng, std::size_t n) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> e;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v)
            if (u != v && rng.chance(0.3)) e.emplace_back(u, v, 0.1 + rng.uniform());
    return make_graph(n, e);
}

} // namespace

TEST_CASE("build_flow_graph") {
    const Scheme s = fx::toy_scheme();
    const ClassIndex X = fx::cat(s, "1101"), Y = fx::cat(s, "1201"), Z = fx::cat(s, "1202");
    FlowMatrix m(Level::category, s.category_count());
    m.set_sizes(X, 0.6, 0.2, 0.2);
    m.set_sizes(Y, 0.3, 0.3, 0.3);
    m.set_sizes(Z, 0.1, 0.5, 0.1);
    m.set_flow(X, Z, 0.4);
    const auto g = build_flow_graph(m, {X, Y, Z}, s);
    REQUIRE(g.nodes.size() == 3);
    CHECK(g.nodes[0].id == "1101");
    CHECK(g.nodes[2].size == doctest::Approx(0.5));
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].from == 0);
    CHECK(g.edges[0].to == 2);
    CHECK(g.edges[0].weight == doctest::Approx(0.4));

    FlowMatrix zero(Level::category, s.category_count());
    CHECK(build_flow_graph(zero, {X, Y}, s).edges.empty());
    CHECK_THROWS_AS(build_flow_graph(zero, {}, s), std::invalid_argument);
}

TEST_CASE("modularity: hand values") {
    const auto one = make_graph(2, {{0, 1, 1}});
    CHECK(modularity(one, {0, 1}) == doctest::Approx(-0.5));
    CHECK(modularity(one, {0, 0}) == doctest::Approx(0.0));
    const auto tp = triangle_pair();
    CHECK(modularity(tp, {0, 0, 0, 1, 1, 1}) == doctest::Approx(6.0 / 7.0 - 0.5));
    CHECK(modularity(make_graph(3, {}), {0, 1, 2}) == 0.0);
    CHECK_THROWS_AS(modularity(tp, {0, 0}), std::invalid_argument);
}

TEST_CASE("detect_communities: two triangles and a bridge") {
    const auto tp = triangle_pair();
    const auto p = detect_communities(tp);
    CHECK(p.community == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
    CHECK(std::abs(p.q - modularity_oracle(tp, p.community)) <= 1e-9);
    CHECK(std::abs(p.q - (6.0 / 7.0 - 0.5)) <= 1e-9);
    CHECK(std::abs(brute_force_best(tp) - p.q) <= 1e-12);
}

TEST_CASE("detect_communities: complete graph") {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> e;
    for (std::uint32_t u = 0; u < 5; ++u)
        for (std::uint32_t v = u + 1; v < 5; ++v) e.emplace_back(u, v, 1.0);
    const auto g = make_graph(5, e);
    const auto p = detect_communities(g);
    CHECK(p.q >= modularity(g, {0, 1, 2, 3, 4}) - 1e-12);
}

TEST_CASE("detect_communities never beats the brute-force optimum") {
    Xoshiro256 rng(77);
    for (int t = 0; t < 50; ++t) {
        const auto g = random_graph(rng, 2 + rng.below(7));
        const auto p = detect_communities(g);
        CHECK(std::abs(p.q - modularity_oracle(g, p.community)) <= 1e-9);
        CHECK(p.q <= brute_force_best(g) + 1e-12);
        const auto again = detect_communities(g);
        CHECK(again.community == p.community);
        CHECK(again.q == p.q);
    }
}

TEST_CASE("linlog: analytic gradient matches central differences") {
    Xoshiro256 rng(5);
    for (int t = 0; t < 100; ++t) {
        const auto g = random_graph(rng, 2 + rng.below(8));
        const std::size_t n = g.nodes.size();
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 4.0 * rng.uniform();
            y[i] = 4.0 * rng.uniform();
        }
        for (Repulsion r : {Repulsion::degree, Repulsion::uniform}) {
            std::vector<double> gx, gy;
            linlog_gradient(g, x, y, gx, gy, r);
            const double h = 1e-6;
            double err = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (int axis = 0; axis < 2; ++axis) {
                    auto& c = axis == 0 ? x : y;
                    const double keep = c[i];
                    c[i] = keep + h;
                    const double up = linlog_energy(g, x, y, r);
                    c[i] = keep - h;
                    const double down = linlog_energy(g, x, y, r);
                    c[i] = keep;
                    const double fd = (up - down) / (2 * h);
                    const double an = axis == 0 ? gx[i] : gy[i];
                    err = std::max(err, std::abs(fd - an));
                    scale = std::max(scale, std::abs(an));
                }
            CHECK(err <= 1e-4 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("linlog: two nodes settle at unit distance") {
    const auto g = make_graph(2, {{0, 1, 1}});
    const auto l = linlog_layout(g, {});
    const double d = std::hypot(l.x[0] - l.x[1], l.y[0] - l.y[1]);
    CHECK(std::abs(d - 1.0) <= 1e-3);
    CHECK(l.final_energy == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("linlog: energy never increases and layouts repeat exactly") {
    Xoshiro256 rng(19);
    for (int t = 0; t < 10; ++t) {
        const auto g = random_graph(rng, 3 + rng.below(10));
        LayoutParams p;
        p.seed = 100 + t;
        p.iterations = 500;
        const auto a = linlog_layout(g, p);
        for (std::size_t i = 1; i < a.energy_trace.size(); ++i) CHECK(a.energy_trace[i] <= a.energy_trace[i - 1]);
        const auto b = linlog_layout(g, p);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
}

TEST_CASE("linlog: two cliques joined by a weak edge separate") {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> e = {
        {0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 0.05}};
    const auto g = make_graph(6, e);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        LayoutParams p;
        p.seed = seed;
        const auto l = linlog_layout(g, p);
        auto dist = [&](int i, int j) { return std::hypot(l.x[i] - l.x[j], l.y[i] - l.y[j]); };
        double intra = 0.0, inter = 1e300;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                if ((i < 3) == (j < 3)) intra = std::max(intra, dist(i, j));
                else inter = std::min(inter, dist(i, j));
            }
        CHECK(intra < inter);
    }
}

TEST_CASE("linlog: single node stays put") {
    const auto g = make_graph(1, {});
    LayoutParams p;
    p.seed = 3;
    const auto l = linlog_layout(g, p);
    CHECK(l.final_energy == 0.0);
    Xoshiro256 rng(3);
    CHECK(l.x[0] == (rng.uniform() - 0.5));
    CHECK(l.iterations == 0);
}

TEST_CASE("export: JSON shape and GraphML round trip") {
    const auto g = make_graph(3, {{0, 1, 0.5}, {1, 2, 2.0}});
    const auto p = detect_communities(g);
    const auto l = linlog_layout(g, {});

    std::ostringstream js;
    export_graph(g, p, l, GraphFormat::json, js);
    const auto doc = nlohmann::json::parse(js.str());
    REQUIRE(doc["nodes"].size() == 3);
    std::vector<std::string> keys;
    for (const auto& [k, v] : doc["nodes"][0].items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"community", "id", "size", "x", "y"});
    for (const auto& node : doc["nodes"]) CHECK(node.contains("community"));

    for (GraphFormat f : {GraphFormat::json, GraphFormat::graphml}) {
        std::ostringstream out;
        export_graph(g, p, l, f, out);
        std::istringstream in(out.str());
        const auto back = import_graph(in, f);
        REQUIRE(back.graph.nodes.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(back.graph.nodes[i].id == g.nodes[i].id);
            CHECK(back.graph.nodes[i].size == g.nodes[i].size);
            CHECK(back.layout.x[i] == l.x[i]);
            CHECK(back.layout.y[i] == l.y[i]);
        }
        CHECK(back.partition.community == p.community);
        REQUIRE(back.graph.edges.size() == g.edges.size());
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            CHECK(back.graph.edges[i].from == g.edges[i].from);
            CHECK(back.graph.edges[i].to == g.edges[i].to);
            CHECK(back.graph.edges[i].weight == g.edges[i].weight);
        }
    }
    CHECK(parse_graph_format("graphml") == GraphFormat::graphml);
    CHECK_THROWS_AS(parse_graph_format("bogus"), std::invalid_argument);
}
