#include "citeclass/syngen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace citeclass::syngen {

namespace {

using Dense = std::vector<double>;

Dense dense_asjc(const Journal& journal, const Scheme& scheme) {
    const std::size_t n = scheme.category_count();
    Dense raw(n + 1, 0.0);
    for (auto c : journal.resolved) raw[c] += 1.0 / static_cast<double>(journal.resolved.size());

    Dense out(n, 0.0);
    const auto& regular = scheme.regular_categories();
    for (std::size_t c = 0; c <= n; ++c) {
        if (raw[c] == 0.0) continue;
        if (c == n) {
            for (auto r : regular) out[r] += raw[c] / static_cast<double>(regular.size());
        } else if (scheme.categories()[c].is_misc) {
            const auto& sib = scheme.areas()[scheme.categories()[c].area].non_misc;
            for (auto r : sib) out[r] += raw[c] / static_cast<double>(sib.size());
        } else {
            out[c] += raw[c];
        }
    }
    double total = 0.0;
    for (double v : out) total += v;
    for (double& v : out) v /= total;
    return out;
}

std::vector<WeightEntry> sparse(const Dense& v) {
    std::vector<WeightEntry> out;
    for (std::size_t c = 0; c < v.size(); ++c)
        if (v[c] >= 1e-12) out.push_back({static_cast<ClassIndex>(c), v[c]});
    return out;
}

std::vector<WeightEntry> threshold(const Dense& v, const ThresholdPolicy& policy) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    std::vector<std::pair<long long, ClassIndex>> keep;
    const long long cut = std::llround(policy.theta / kThresholdResolution);
    for (std::size_t c = 0; c < v.size(); ++c) {
        if (v[c] <= 0.0) continue;
        const long long key = std::llround((v[c] / m) / kThresholdResolution);
        if (key >= cut) keep.push_back({-key, static_cast<ClassIndex>(c)});
    }
    std::sort(keep.begin(), keep.end());
    if (keep.size() > static_cast<std::size_t>(policy.max_categories)) keep.resize(policy.max_categories);
    std::sort(keep.begin(), keep.end(), [](auto& a, auto& b) { return a.second < b.second; });
    double total = 0.0;
    for (auto& k : keep) total += v[k.second];
    std::vector<WeightEntry> out;
    for (auto& k : keep) out.push_back({k.second, v[k.second] / total});
    return out;
}

} // namespace

AssignmentSet oracle_asjc(const Corpus& corpus, const Scheme& scheme) {
    AssignmentSet out(AssignmentSet::System::asjc_frac);
    for (DocIndex d = 0; d < corpus.size(); ++d) {
        const auto row = sparse(dense_asjc(corpus.journal(corpus.journal_of(d)), scheme));
        out.append(row);
    }
    return out;
}

AssignmentSet oracle_classify(const Corpus& corpus, const Scheme& scheme, const ThresholdPolicy& policy) {
    const std::size_t n = corpus.size();
    if (n > 10000) throw std::invalid_argument("oracle_classify: corpus too large for the dense oracle");
    const std::size_t k = scheme.category_count();

    std::vector<Dense> asjc;
    asjc.reserve(n);
    for (DocIndex d = 0; d < n; ++d) asjc.push_back(dense_asjc(corpus.journal(corpus.journal_of(d)), scheme));

    std::vector<std::vector<DocIndex>> cited_by(n);
    for (DocIndex c = 0; c < n; ++c)
        for (auto r : corpus.references(c))
            if (!r.is_external()) cited_by[r.doc()].push_back(c);

    AssignmentSet out(AssignmentSet::System::u1f08);
    for (DocIndex d = 0; d < n; ++d) {
        const auto refs = corpus.references(d);
        if (refs.size() < static_cast<std::size_t>(policy.min_references)) {
            out.append(sparse(asjc[d]));
            continue;
        }
        Dense agg(k, 0.0);
        std::size_t profiles = 0;
        for (auto r : refs) {
            if (r.is_external()) continue;
            Dense prof(k, 0.0);
            std::size_t citers = 0;
            for (DocIndex c : cited_by[r.doc()]) {
                if (c == d) continue;
                for (std::size_t i = 0; i < k; ++i) prof[i] += asjc[c][i];
                ++citers;
            }
            if (citers == 0) {
                prof = asjc[r.doc()];
            } else {
                for (double& v : prof) v /= static_cast<double>(citers);
            }
            for (std::size_t i = 0; i < k; ++i) agg[i] += prof[i];
            ++profiles;
        }
        if (profiles == 0) {
            out.append(sparse(asjc[d]));
            continue;
        }
        for (double& v : agg) v /= static_cast<double>(profiles);
        out.append(threshold(agg, policy));
    }
    return out;
}

DocFlow oracle_flow(const CategoryVector& a, const CategoryVector& b) {
    std::vector<ClassIndex> classes;
    for (const auto& e : a.entries()) classes.push_back(e.cls);
    for (const auto& e : b.entries()) classes.push_back(e.cls);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() > 10) throw std::invalid_argument("oracle_flow: more than 10 classes");

    DocFlow out;
    double deficit_total = 0.0;
    for (auto c : classes) {
        const double lo = std::min(a.get(c), b.get(c));
        if (lo > 0.0) out.common.push_back({c, lo});
        deficit_total += std::max(a.get(c) - b.get(c), 0.0);
    }
    if (deficit_total <= 0.0) return out;
    for (auto i : classes) {
        const double di = a.get(i) - b.get(i);
        if (di <= 0.0) continue;
        for (auto j : classes) {
            const double sj = b.get(j) - a.get(j);
            if (sj <= 0.0) continue;
            out.moves.push_back({i, j, di * sj / deficit_total});
        }
    }
    return out;
}

} // namespace citeclass::syngen
