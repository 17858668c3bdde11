// Acceptance harness: one PASS/FAIL line per criterion.
//
//   acceptance --cli <path to citeclass> --work <scratch dir> [criterion numbers...]
//
// With no numbers every criterion runs. Exit status is 0 only if all selected
// criteria pass.

#include "fixtures.hpp"

#include "citeclass/asjc.hpp"
#include "citeclass/citer.hpp"
#include "citeclass/cli.hpp"
#include "citeclass/flow.hpp"
#include "citeclass/indicators.hpp"
#include "citeclass/netgraph.hpp"
#include "citeclass/rng.hpp"
#include "citeclass/syngen.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

extern char** environ;

using namespace citeclass;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failures for the report line.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        if (++failures_ <= 3) msg_ += (msg_.empty() ? "" : "; ") + what;
    }
    Outcome done(const std::string& summary) const {
        if (failures_ == 0) return {true, summary};
        return {false, msg_ + (failures_ > 3 ? " (+" + std::to_string(failures_ - 3) + " more)" : "")};
    }

private:
    std::size_t failures_ = 0;
    std::string msg_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

syngen::SyntheticCorpus corpus_of(std::size_t n, std::uint64_t seed, double prob = 0.8) {
    syngen::SynParams p;
    p.n_docs = n;
    p.seed = seed;
    p.intra_category_citation_prob = prob;
    p.max_external_citations = 15;
    return syngen::generate_corpus(p);
}

struct Classified {
    AssignmentSet asjc, u1;
};

Classified classify(const syngen::SyntheticCorpus& sc, CiterOptions options = {}) {
    auto asjc = classify_asjc_all(sc.corpus, sc.scheme);
    auto u1 = classify_u1f08(sc.corpus, CitationIndex(sc.corpus, std::nullopt), asjc, options);
    return {std::move(asjc), std::move(u1)};
}

CategoryVector raw_aggregate(const Corpus& c, DocIndex d, const CitationIndex& idx, const AssignmentSet& asjc) {
    std::vector<CategoryVector> profiles;
    for (auto r : c.references(d)) profiles.push_back(reference_profile(r, d, c, idx, asjc));
    return aggregate_references(profiles);
}

// ---------------------------------------------------------------------------

Outcome mass_conservation() {
    const auto t0 = std::chrono::steady_clock::now();
    Check check;
    std::size_t rows = 0;
    auto verify = [&](const AssignmentSet& set, const Scheme& s, const std::string& label) {
        for (std::size_t d = 0; d < set.size(); ++d) {
            double sum = 0.0;
            for (const auto& e : set.row(d)) {
                sum += e.weight;
                check.expect(s.is_regular(e.cls) && e.weight > 0.0, label + ": weight on a non-regular class");
            }
            check.expect(std::abs(sum - 1.0) <= 1e-9, label + ": row sums to " + fmt(sum, 12));
            ++rows;
        }
    };
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto sc = corpus_of(1000, seed);
        const auto cl = classify(sc);
        verify(cl.asjc, sc.scheme, "seed " + std::to_string(seed) + " ASJC-FRAC");
        verify(cl.u1, sc.scheme, "seed " + std::to_string(seed) + " U1-F-0.8");
    }
    // Misc-heavy and multidisciplinary-heavy journals on a full-size scheme.
    {
        syngen::SynParams p;
        p.n_docs = 1000;
        p.seed = 6;
        p.areas = 26;
        p.categories_per_area = 11;
        p.misc_share = 0.9;
        p.multidisciplinary_share = 0.3;
        const auto sc = syngen::generate_corpus(p);
        const auto cl = classify(sc);
        verify(cl.asjc, sc.scheme, "misc-heavy ASJC-FRAC");
        verify(cl.u1, sc.scheme, "misc-heavy U1-F-0.8");
    }
    const double dt = seconds_since(t0);
    check.expect(dt < 10.0, "runtime " + fmt(dt) + " s >= 10 s");
    return check.done(std::to_string(rows) + " rows sum to 1, no misc/multidisciplinary weight, " + fmt(dt) + " s");
}

Outcome multidisciplinary_split() {
    Check check;
    const Scheme s = fx::asjc_like_scheme();
    check.expect(s.regular_categories().size() == 285, "scheme does not reduce to 285 categories");
    const Corpus c({fx::journal("M", {"10"}, s)}, {fx::doc("D", "M", 2020)});
    const auto v = classify_asjc_fractional(0, c, s);
    check.expect(v.size() == 285, "support size " + std::to_string(v.size()));
    double worst = 0.0;
    for (const auto& e : v) {
        worst = std::max(worst, std::abs(e.weight - 1.0 / 285.0));
        check.expect(s.is_regular(e.cls), "weight on non-regular class");
    }
    check.expect(worst <= 1e-12, "max deviation " + std::to_string(worst));
    std::ostringstream dev;
    dev << worst;
    return check.done("285 categories at 1/285, max deviation " + dev.str());
}

Outcome u1_contract() {
    Check check;
    std::size_t thresholded = 0, fallbacks = 0;
    for (auto [n, seed, prob] : {std::tuple<std::size_t, std::uint64_t, double>{3000, 21, 0.8}, {3000, 22, 0.4}, {3000, 23, 0.1}}) {
        syngen::SynParams p;
        p.n_docs = n;
        p.seed = seed;
        p.refs_min = 1;
        p.intra_category_citation_prob = prob;
        const auto sc = syngen::generate_corpus(p);
        const Corpus& c = sc.corpus;
        const auto cl = classify(sc);
        const CitationIndex idx(c, std::nullopt);
        for (DocIndex d = 0; d < c.size(); ++d) {
            const auto row = cl.u1.row(d);
            check.expect(!row.empty(), "empty assignment");
            if (c.reference_count(d) < 3) {
                ++fallbacks;
                const auto a = cl.asjc.row(d);
                bool equal = a.size() == row.size();
                for (std::size_t i = 0; equal && i < a.size(); ++i)
                    equal = a[i].cls == row[i].cls && std::bit_cast<std::uint64_t>(a[i].weight) ==
                                                          std::bit_cast<std::uint64_t>(row[i].weight);
                check.expect(equal, "fallback row differs from ASJC-FRAC for " + c.doc_id(d));
                continue;
            }
            const auto raw = raw_aggregate(c, d, idx, cl.asjc);
            if (raw.empty()) continue; // no usable reference: ASJC-FRAC fallback
            ++thresholded;
            check.expect(row.size() >= 1 && row.size() <= 5, "support size " + std::to_string(row.size()));
            const double m = raw.max();
            for (const auto& e : row)
                check.expect(raw.get(e.cls) >= 0.8 * m * (1.0 - 1e-12), "kept category below 0.8 x max");
        }
    }
    return check.done(std::to_string(thresholded) + " thresholded rows with support in [1,5] above 0.8 x max, " +
                      std::to_string(fallbacks) + " short-reference rows bit-equal to ASJC-FRAC");
}

Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    Check check;
    double worst = 0.0;
    for (auto [n, seed] : {std::pair<std::size_t, std::uint64_t>{200, 42}, {2000, 7}}) {
        syngen::SynParams p;
        p.n_docs = n;
        p.seed = seed;
        const auto sc = syngen::generate_corpus(p);
        const auto fast = classify(sc).u1;
        const auto slow = syngen::oracle_classify(sc.corpus, sc.scheme, ThresholdPolicy{});
        for (DocIndex d = 0; d < sc.corpus.size(); ++d) {
            const auto a = fast.row(d), b = slow.row(d);
            check.expect(a.size() == b.size(), "support differs for " + sc.corpus.doc_id(d));
            for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
                check.expect(a[i].cls == b[i].cls, "class differs for " + sc.corpus.doc_id(d));
                worst = std::max(worst, std::abs(a[i].weight - b[i].weight));
            }
        }
    }
    check.expect(worst <= 1e-9, "max weight difference " + std::to_string(worst));

    Xoshiro256 rng(2718);
    double flow_worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
        CategoryVector v[2];
        for (auto& x : v) {
            std::vector<WeightEntry> e;
            const std::size_t k = 1 + rng.below(6);
            for (std::size_t i = 0; i < k; ++i) e.push_back({static_cast<ClassIndex>(rng.below(10)), 0.01 + rng.uniform()});
            x = CategoryVector::from_entries(std::move(e));
            x.normalize();
        }
        const auto fast = document_flow(v[0], v[1]);
        const auto slow = syngen::oracle_flow(v[0], v[1]);
        bool same = fast.common.size() == slow.common.size() && fast.moves.size() == slow.moves.size();
        for (std::size_t i = 0; same && i < fast.common.size(); ++i) {
            same = fast.common[i].cls == slow.common[i].cls;
            flow_worst = std::max(flow_worst, std::abs(fast.common[i].weight - slow.common[i].weight));
        }
        for (std::size_t i = 0; same && i < fast.moves.size(); ++i) {
            same = fast.moves[i].from == slow.moves[i].from && fast.moves[i].to == slow.moves[i].to;
            flow_worst = std::max(flow_worst, std::abs(fast.moves[i].weight - slow.moves[i].weight));
        }
        check.expect(same, "flow structure differs on pair " + std::to_string(t));
    }
    check.expect(flow_worst <= 1e-9, "max flow difference " + std::to_string(flow_worst));
    const double dt = seconds_since(t0);
    check.expect(dt < 60.0, "runtime " + fmt(dt) + " s >= 60 s");
    std::ostringstream s;
    s << "classify max diff " << worst << ", 10000 flow pairs max diff " << flow_worst << ", " << fmt(dt) << " s";
    return check.done(s.str());
}

Outcome planted_recovery() {
    Check check;
    const double probs[] = {1.0, 0.9, 0.7, 0.5};
    std::vector<double> accuracy;
    for (double prob : probs) {
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            syngen::SynParams p;
            p.n_docs = 4000;
            p.seed = 500 + seed;
            p.max_journal_codes = 1;
            p.multidisciplinary_share = 0.0;
            p.misc_share = 0.0;
            p.intra_category_citation_prob = prob;
            const auto sc = syngen::generate_corpus(p);
            const auto u1 = classify(sc).u1;
            std::size_t eligible = 0, hit = 0;
            for (DocIndex d = 0; d < sc.corpus.size(); ++d) {
                const auto refs = sc.corpus.references(d);
                const bool internal = std::any_of(refs.begin(), refs.end(), [](auto r) { return !r.is_external(); });
                if (refs.size() < 3 || !internal) continue;
                ++eligible;
                // Top category, ties to the lowest class index.
                const auto row = u1.row(d);
                ClassIndex best = row[0].cls;
                double bw = row[0].weight;
                for (const auto& e : row)
                    if (e.weight > bw) best = e.cls, bw = e.weight;
                if (best == sc.planted[d]) ++hit;
            }
            sum += eligible ? static_cast<double>(hit) / static_cast<double>(eligible) : 0.0;
        }
        accuracy.push_back(sum / 5.0);
    }
    check.expect(accuracy[0] == 1.0, "accuracy at prob 1.0 is " + fmt(100 * accuracy[0], 4) + "%");
    for (std::size_t i = 1; i < accuracy.size(); ++i)
        check.expect(accuracy[i] <= accuracy[i - 1], "accuracy rises from prob " + fmt(probs[i - 1], 1) + " to " +
                                                         fmt(probs[i], 1));
    std::string s = "accuracy";
    for (std::size_t i = 0; i < accuracy.size(); ++i) s += " " + fmt(probs[i], 1) + ":" + fmt(100 * accuracy[i]) + "%";
    return check.done(s);
}

Outcome flow_balance() {
    Check check;
    std::size_t docs = 0;
    for (std::uint64_t seed : {31, 32, 33}) {
        const auto sc = corpus_of(3000, seed, 0.5);
        const auto cl = classify(sc);
        const double n = static_cast<double>(sc.corpus.size());
        for (DocIndex d = 0; d < sc.corpus.size(); ++d, ++docs) {
            const auto a = CategoryVector::from_entries({cl.asjc.row(d).begin(), cl.asjc.row(d).end()});
            const auto b = CategoryVector::from_entries({cl.u1.row(d).begin(), cl.u1.row(d).end()});
            const auto f = document_flow(a, b);
            double common = 0.0, moved = 0.0;
            for (const auto& e : f.common) common += e.weight;
            for (const auto& m : f.moves) moved += m.weight;
            const double out = a.sum() - common, in = b.sum() - common;
            check.expect(std::abs(out - in) <= 1e-9 && std::abs(out - moved) <= 1e-9, "document imbalance");
        }
        for (Level level : {Level::category, Level::area}) {
            const auto m = flow_matrix(cl.asjc, cl.u1, level, sc.scheme);
            double ta = 0.0, tb = 0.0;
            std::vector<double> ins, outs;
            for (const auto& st : class_flow_stats(m, class_universe(m, sc.scheme))) {
                check.expect(std::abs((st.size_a - st.size_b) - (st.outgoing - st.incoming)) <= 1e-9 * n,
                             "class identity broken");
                ta += st.size_a;
                tb += st.size_b;
                ins.push_back(st.incoming);
                outs.push_back(st.outgoing);
            }
            check.expect(std::abs(ta - n) <= 1e-9 * n && std::abs(tb - n) <= 1e-9 * n, "global size != N");
            const double mi = summary_stats(ins).mean, mo = summary_stats(outs).mean;
            check.expect(std::abs(mi - mo) <= 1e-9 * std::max(1.0, mo), "mean incoming != mean outgoing");
        }
    }
    return check.done(std::to_string(docs) + " documents balanced; class identities and equal in/out means hold");
}

Outcome ni_self_normalization() {
    Check check;
    std::size_t cells = 0;
    for (std::uint64_t seed : {41, 42}) {
        const auto sc = corpus_of(4000, seed, 0.6);
        const auto cl = classify(sc);
        const Corpus& c = sc.corpus;
        const CitationIndex idx(c, std::nullopt);
        const std::vector<std::uint64_t> cit(idx.citation_counts().begin(), idx.citation_counts().end());
        for (const auto* set : {&cl.asjc, &cl.u1}) {
            const auto base = category_baselines(c, *set, cit);
            std::map<CellKey, std::pair<double, double>> acc;
            for (DocIndex d = 0; d < c.size(); ++d)
                for (const auto& e : set->row(d)) {
                    const CellKey key{c.type_of(d), c.year(d), e.cls};
                    const double mean = base.find(key)->mean_citations();
                    if (!(mean > 0.0)) continue;
                    acc[key].first += e.weight * static_cast<double>(cit[d]) / mean;
                    acc[key].second += e.weight;
                }
            for (const auto& [key, v] : acc) {
                ++cells;
                check.expect(std::abs(v.first / v.second - 1.0) <= 1e-9, "cell mean NI " + fmt(v.first / v.second, 12));
            }

            // Double every count in one (type, year) slice; those means double with them.
            const auto ni = normalized_impacts(c, *set, cit, base).ni;
            const int year = c.min_year() + (c.max_year() - c.min_year()) / 2;
            auto doubled = cit;
            for (DocIndex d = 0; d < c.size(); ++d)
                if (c.year(d) == year && c.type_of(d) == c.type_of(0)) doubled[d] *= 2;
            const auto ni2 = normalized_impacts(c, *set, doubled, category_baselines(c, *set, doubled)).ni;
            double worst = 0.0;
            for (DocIndex d = 0; d < c.size(); ++d) worst = std::max(worst, std::abs(ni[d] - ni2[d]) / std::max(1.0, ni[d]));
            check.expect(worst <= 1e-12, "NI moved by " + std::to_string(worst) + " after doubling");
        }
    }
    return check.done(std::to_string(cells) + " cells average NI 1; doubling a slice leaves NI unchanged");
}

Outcome excellence_cap() {
    Check check;
    std::size_t cells = 0;
    for (std::uint64_t seed : {51, 52}) {
        syngen::SynParams p;
        p.n_docs = 5000;
        p.seed = seed;
        p.max_external_citations = 40;
        const auto sc = syngen::generate_corpus(p);
        const auto cl = classify(sc);
        const CitationIndex idx(sc.corpus, std::nullopt);
        const auto& cit = idx.citation_counts();
        for (const auto* set : {&cl.asjc, &cl.u1})
            for (double pp : {0.10, 0.01}) {
                const auto t = excellence_thresholds(sc.corpus, *set, cit, pp, sc.scheme);
                for (const auto& cell : t.cells()) {
                    ++cells;
                    check.expect(cell.share() <= pp * (1.0 + 1e-12), "cell share " + fmt(cell.share(), 6) + " > p");
                }
            }
    }
    std::vector<std::pair<std::uint64_t, double>> distinct;
    for (std::uint64_t i = 0; i < 1000; ++i) distinct.emplace_back((i * 389) % 1000, 1.0);
    for (double pp : {0.10, 0.01}) {
        const double share = excellence_cut(distinct, pp).share();
        check.expect(std::abs(share - pp) <= 0.001, "distinct share " + fmt(share, 6) + " at p " + fmt(pp));
    }
    std::vector<std::pair<std::uint64_t, double>> tied(500, {5, 1.0});
    check.expect(excellence_cut(tied, 0.10).share() == 0.0, "tied cell share is not 0");
    return check.done(std::to_string(cells) + " cells within p; distinct citations hit p; tied cell yields 0");
}

FlowGraph graph_of(std::size_t n, const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& edges) {
    FlowGraph g;
    for (std::size_t i = 0; i < n; ++i) g.nodes.push_back({"v" + std::to_string(i), 1.0});
    for (const auto& [u, v, w] : edges) g.edges.push_back({u, v, w});
    std::sort(g.edges.begin(), g.edges.end(),
              [](const auto& a, const auto& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    return g;
}

double q_oracle(const FlowGraph& g, const std::vector<std::uint32_t>& comm) {
    const std::size_t n = g.nodes.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (const auto& e : g.edges) {
        a[e.from][e.to] += e.weight;
        a[e.to][e.from] += e.weight;
    }
    std::vector<double> k(n, 0.0);
    double two_m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j], two_m += a[i][j];
    if (two_m == 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (comm[i] == comm[j]) q += a[i][j] - k[i] * k[j] / two_m;
    return q / two_m;
}

double q_best(const FlowGraph& g) {
    std::vector<std::uint32_t> rgs(g.nodes.size(), 0);
    double best = -1.0;
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t used) {
        if (i == rgs.size()) {
            best = std::max(best, q_oracle(g, rgs));
            return;
        }
        for (std::uint32_t c = 0; c <= used; ++c) {
            rgs[i] = c;
            rec(i + 1, std::max(used, c + 1));
        }
    };
    rec(0, 0);
    return best;
}

FlowGraph random_graph(Xoshiro256& rng, std::size_t n) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> e;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = 0; v < n; ++v)
            if (u != v && rng.chance(0.35)) e.emplace_back(u, v, 0.05 + rng.uniform());
    return graph_of(n, e);
}

Outcome cnm_correctness() {
    Check check;
    const auto tp = graph_of(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 1}});
    const auto p = detect_communities(tp);
    check.expect(p.community == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1}, "triangles not separated");
    check.expect(std::abs(p.q - q_oracle(tp, p.community)) <= 1e-9, "reported Q disagrees with recomputation");
    check.expect(std::abs(p.q - (6.0 / 7.0 - 0.5)) <= 1e-9, "Q is " + fmt(p.q, 9));
    Xoshiro256 rng(909);
    double worst_gap = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto g = random_graph(rng, 2 + rng.below(7));
        const auto a = detect_communities(g);
        const double best = q_best(g);
        check.expect(a.q <= best + 1e-12, "Q above brute-force optimum");
        check.expect(std::abs(a.q - q_oracle(g, a.community)) <= 1e-9, "Q disagrees with recomputation");
        const auto b = detect_communities(g);
        check.expect(a.community == b.community && a.q == b.q, "rerun differs");
        worst_gap = std::max(worst_gap, best - a.q);
    }
    return check.done("triangle pair Q " + fmt(p.q, 9) + "; 50 random graphs at or below optimum (largest gap " +
                      fmt(worst_gap, 4) + "), reruns identical");
}

Outcome linlog_correctness() {
    Check check;
    Xoshiro256 rng(1234);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto g = random_graph(rng, 2 + rng.below(10));
        const std::size_t n = g.nodes.size();
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = 5.0 * rng.uniform(), y[i] = 5.0 * rng.uniform();
        const Repulsion r = t % 2 ? Repulsion::uniform : Repulsion::degree;
        std::vector<double> gx, gy;
        linlog_gradient(g, x, y, gx, gy, r);
        double err = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int axis = 0; axis < 2; ++axis) {
                auto& c = axis ? y : x;
                const double keep = c[i], h = 1e-6 * std::max(1.0, std::abs(keep));
                c[i] = keep + h;
                const double up = linlog_energy(g, x, y, r);
                c[i] = keep - h;
                const double down = linlog_energy(g, x, y, r);
                c[i] = keep;
                const double an = axis ? gy[i] : gx[i];
                err += std::pow((up - down) / (2 * h) - an, 2);
                norm += an * an;
            }
        const double rel = std::sqrt(err) / std::max(std::sqrt(norm), 1e-12);
        worst = std::max(worst, rel);

        LayoutParams lp;
        lp.seed = 40 + t;
        lp.iterations = 300;
        lp.repulsion = r;
        const auto a = linlog_layout(g, lp);
        for (std::size_t i = 1; i < a.energy_trace.size(); ++i)
            check.expect(a.energy_trace[i] <= a.energy_trace[i - 1], "energy rose on an accepted step");
        const auto b = linlog_layout(g, lp);
        check.expect(a.x == b.x && a.y == b.y, "layout not bit-identical for a fixed seed");
    }
    check.expect(worst <= 1e-4, "gradient relative error " + std::to_string(worst));
    const auto two = linlog_layout(graph_of(2, {{0, 1, 1}}), {});
    const double d = std::hypot(two.x[0] - two.x[1], two.y[0] - two.y[1]);
    check.expect(std::abs(d - 1.0) <= 1e-3, "two-node distance " + fmt(d, 6));
    std::ostringstream s;
    s << "gradient rel. error <= " << worst << ", energy monotone, two-node distance " << fmt(d, 6)
      << ", layouts repeat";
    return check.done(s.str());
}

// ---------------------------------------------------------------------------
// Criteria that drive the command-line tool as child processes.

struct ChildResult {
    int code = -1;
    double seconds = 0.0;
    long max_rss_kb = 0;
};

ChildResult spawn(const std::string& exe, const std::vector<std::string>& args, const fs::path& log) {
    std::vector<std::string> store{exe};
    store.insert(store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : store) argv.push_back(a.data());
    argv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 1, log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    posix_spawn_file_actions_addopen(&actions, 2, log.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    ChildResult r;
    const auto t0 = std::chrono::steady_clock::now();
    pid_t pid = 0;
    if (posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv.data(), environ) != 0) {
        posix_spawn_file_actions_destroy(&actions);
        return r;
    }
    posix_spawn_file_actions_destroy(&actions);
    int status = 0;
    rusage usage{};
    wait4(pid, &status, 0, &usage);
    r.seconds = seconds_since(t0);
    r.max_rss_kb = usage.ru_maxrss;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    if (fs::file_size(a) != fs::file_size(b)) return false;
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::vector<char> ba(1 << 20), bb(1 << 20);
    while (fa && fb) {
        fa.read(ba.data(), static_cast<std::streamsize>(ba.size()));
        fb.read(bb.data(), static_cast<std::streamsize>(bb.size()));
        if (fa.gcount() != fb.gcount() || !std::equal(ba.begin(), ba.begin() + fa.gcount(), bb.begin())) return false;
    }
    return true;
}

struct Env {
    std::string cli;
    fs::path work;
};

Outcome end_to_end(const Env& env) {
    Check check;
    const fs::path root = env.work / "scale";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path log = root / "log.txt";
    const std::string corpus = (root / "corpus").string();
    // About ten references per document: ten million citation edges.
    const auto gen = spawn(env.cli,
                           {"syngen", "--out", corpus, "--seed", "11", "--param", "n_docs=1000000", "--param",
                            "n_journals=5000", "--param", "areas=26", "--param", "categories_per_area=11", "--param",
                            "refs_min=5", "--param", "refs_max=15", "--param", "max_external_citations=10", "--param",
                            "intra_category_citation_prob=0.7"},
                           log);
    if (gen.code != 0) return {false, "syngen failed, see " + log.string()};

    double worst_wall = 0.0;
    long peak = 0;
    std::string stages;
    for (const char* run : {"run1", "run2"}) {
        const std::string out = (root / run).string();
        const std::vector<std::vector<std::string>> steps = {
            {"ingest", "--scheme", corpus + "/scheme.csv", "--journals", corpus + "/journals.jsonl", "--documents",
             corpus + "/documents.jsonl", "--out", out},
            {"classify", "--system", "both", "--out", out},
            {"compare", "--out", out},
            {"indicators", "--out", out}};
        double wall = 0.0;
        for (const auto& step : steps) {
            const auto r = spawn(env.cli, step, log);
            check.expect(r.code == 0, step[0] + " exited " + std::to_string(r.code));
            wall += r.seconds;
            peak = std::max(peak, r.max_rss_kb);
            if (std::string(run) == "run1") stages += " " + step[0] + " " + fmt(r.seconds, 1) + "s";
        }
        worst_wall = std::max(worst_wall, wall);
    }
    std::size_t files = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "run1")) {
        if (!e.is_regular_file()) continue;
        ++files;
        const fs::path other = root / "run2" / fs::relative(e.path(), root / "run1");
        check.expect(fs::exists(other) && same_bytes(e.path(), other), "differs: " + e.path().filename().string());
    }
    const double peak_gb = static_cast<double>(peak) / (1024.0 * 1024.0);
    check.expect(worst_wall <= 600.0, "pipeline took " + fmt(worst_wall, 1) + " s");
    check.expect(peak_gb <= 8.0, "peak memory " + fmt(peak_gb) + " GB");
    check.expect(files > 20, "only " + std::to_string(files) + " output files");
    fs::remove_all(root);
    const unsigned cores = std::thread::hardware_concurrency();
    return check.done("1,000,000 docs in " + fmt(worst_wall, 1) + " s on " + std::to_string(cores) + " core(s) (" +
                      stages.substr(1) + "), peak " + fmt(peak_gb) + " GB, " + std::to_string(files) +
                      " files byte-identical across two runs");
}

Outcome manifest(const Env& env) {
    Check check;
    const fs::path root = env.work / "manifest";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path log = root / "log.txt";
    const std::string corpus = (root / "corpus").string(), out = (root / "out").string();
    const std::vector<std::vector<std::string>> steps = {
        {"syngen", "--out", corpus, "--param", "n_docs=20000", "--param", "max_external_citations=10", "--seed", "3"},
        {"ingest", "--scheme", corpus + "/scheme.csv", "--journals", corpus + "/journals.jsonl", "--documents",
         corpus + "/documents.jsonl", "--out", out},
        {"classify", "--out", out},
        {"compare", "--out", out, "--bin-width", "500"},
        {"indicators", "--out", out},
        {"network", "--out", out},
        {"report", "--out", out}};
    for (const auto& step : steps) {
        const auto r = spawn(env.cli, step, log);
        if (r.code != 0) return {false, step[0] + " exited " + std::to_string(r.code) + ", see " + log.string()};
    }

    std::set<std::string> expected;
    for (int i = 1; i <= 10; ++i) expected.insert("Figure " + std::to_string(i));
    for (int i = 1; i <= 4; ++i) expected.insert("Table " + std::to_string(i));

    std::ifstream in(root / "out" / "manifest.json");
    const auto doc = nlohmann::json::parse(in);
    std::set<std::string> seen;
    for (const auto& d : doc.at("datasets")) {
        const auto artifact = d.at("artifact").get<std::string>();
        const auto file = d.at("file").get<std::string>();
        seen.insert(artifact);
        check.expect(d.at("valid").get<bool>(), artifact + " (" + file + ") invalid in manifest");
        // Re-check the file against the documented schema here as well.
        for (const auto& schema : cli::dataset_schemas())
            if (schema.artifact == artifact) {
                check.expect(schema.file == file, artifact + " maps to " + file);
                const auto problems = cli::validate_dataset(schema, root / "out");
                check.expect(problems.empty(), problems.empty() ? "" : problems.front());
            }
    }
    check.expect(seen == expected, "manifest covers " + std::to_string(seen.size()) + " artifacts");
    fs::remove_all(root);
    return check.done(std::to_string(seen.size()) + " datasets (Figures 1-10, Tables 1-4) validate");
}

} // namespace

int main(int argc, char** argv) {
    Env env;
    env.work = fs::temp_directory_path() / "citeclass_acceptance";
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--cli" && i + 1 < argc) env.cli = argv[++i];
        else if (a == "--work" && i + 1 < argc) env.work = argv[++i];
        else only.insert(std::stoi(a));
    }
    if (env.cli.empty()) {
        std::cerr << "usage: acceptance --cli <citeclass> [--work <dir>] [criterion...]\n";
        return 2;
    }
    env.cli = fs::absolute(env.cli).string();

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"mass conservation", mass_conservation},
        {"multidisciplinary split", multidisciplinary_split},
        {"U1-F-0.8 contract", u1_contract},
        {"oracle equivalence", oracle_equivalence},
        {"planted recovery", planted_recovery},
        {"flow balance", flow_balance},
        {"NI self-normalization", ni_self_normalization},
        {"excellence cap", excellence_cap},
        {"CNM correctness", cnm_correctness},
        {"LinLog correctness", linlog_correctness},
        {"end-to-end determinism and throughput", [&] { return end_to_end(env); }},
        {"figure/table manifest", [&] { return manifest(env); }},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << "criterion " << id << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << ": "
                  << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
