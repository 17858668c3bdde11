#include "citeclass/indicators.hpp"

#include "citeclass/flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace citeclass {

namespace {

std::uint64_t pack(const CellKey& k) {
    return (static_cast<std::uint64_t>(k.type) << 48) |
           (static_cast<std::uint64_t>(static_cast<std::uint16_t>(k.year + 32768)) << 32) | k.cls;
}

template <typename Cell>
const Cell* lookup(const std::vector<Cell>& cells, const CellKey& key) {
    auto it = std::lower_bound(cells.begin(), cells.end(), key,
                               [](const Cell& c, const CellKey& k) { return c.key < k; });
    return (it != cells.end() && it->key == key) ? &*it : nullptr;
}

} // namespace

BaselineTable::BaselineTable(std::vector<BaselineCell> cells) : cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
}

const BaselineCell* BaselineTable::find(const CellKey& key) const { return lookup(cells_, key); }

BaselineTable category_baselines(const Corpus& corpus, const AssignmentSet& set,
                                 std::span<const std::uint64_t> citations) {
    if (set.size() != corpus.size() || citations.size() != corpus.size())
        throw std::invalid_argument("baselines: assignments/citations do not cover the corpus");
    std::unordered_map<std::uint64_t, BaselineCell> cells;
    for (DocIndex d = 0; d < corpus.size(); ++d) {
        const double cit = static_cast<double>(citations[d]);
        for (const auto& e : set.row(d)) {
            CellKey key{corpus.type_of(d), corpus.year(d), e.cls};
            auto& cell = cells[pack(key)];
            cell.key = key;
            cell.weighted_citations += e.weight * cit;
            cell.weight += e.weight;
        }
    }
    std::vector<BaselineCell> out;
    out.reserve(cells.size());
    for (auto& [k, c] : cells)
        if (c.weight > 0.0) out.push_back(c);
    return BaselineTable(std::move(out));
}

double normalized_impact(DocIndex doc, std::span<const WeightEntry> weights, std::uint64_t citations,
                         const Corpus& corpus, const BaselineTable& baselines, std::size_t* zero_mean_terms) {
    const double cit = static_cast<double>(citations);
    double ni = 0.0;
    for (const auto& e : weights) {
        const auto* cell = baselines.find({corpus.type_of(doc), corpus.year(doc), e.cls});
        const double mean = cell ? cell->mean_citations() : 0.0;
        if (!(mean > 0.0)) {
            if (zero_mean_terms) ++*zero_mean_terms;
            continue;
        }
        ni += e.weight * (cit / mean);
    }
    return ni;
}

NormalizedImpact normalized_impacts(const Corpus& corpus, const AssignmentSet& set,
                                    std::span<const std::uint64_t> citations, const BaselineTable& baselines) {
    NormalizedImpact out;
    out.ni.resize(corpus.size());
    for (DocIndex d = 0; d < corpus.size(); ++d)
        out.ni[d] = normalized_impact(d, set.row(d), citations[d], corpus, baselines, &out.zero_mean_terms);
    return out;
}

std::vector<YearDiff> ni_abs_diff_series(std::span<const double> ni_a, std::span<const double> ni_b,
                                         const Corpus& corpus, bool drop_last_year) {
    if (ni_a.size() != corpus.size() || ni_b.size() != corpus.size())
        throw std::invalid_argument("NI tables do not cover the corpus");
    std::map<int, std::pair<double, std::size_t>> acc;
    for (DocIndex d = 0; d < corpus.size(); ++d) {
        auto& [sum, n] = acc[corpus.year(d)];
        sum += std::abs(ni_a[d] - ni_b[d]);
        ++n;
    }
    std::vector<YearDiff> out;
    for (const auto& [year, v] : acc) {
        if (drop_last_year && year == corpus.max_year()) continue;
        out.push_back({year, v.first / static_cast<double>(v.second), v.second});
    }
    return out;
}

std::vector<AreaSpread> ni_std_by_area(std::span<const double> ni, const AssignmentSet& set, const Scheme& scheme) {
    if (ni.size() != set.size()) throw std::invalid_argument("NI table does not match assignments");
    const std::size_t n = scheme.area_count();
    std::vector<double> w(n, 0.0), wx(n, 0.0);
    for (std::size_t d = 0; d < set.size(); ++d)
        for (const auto& e : collapse_to_areas(set.row(d), scheme)) {
            w[e.cls] += e.weight;
            wx[e.cls] += e.weight * ni[d];
        }
    std::vector<double> mean(n, 0.0), ss(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        if (w[a] > 0.0) mean[a] = wx[a] / w[a];
    // Second pass around the mean avoids the E[x^2] - E[x]^2 cancellation.
    for (std::size_t d = 0; d < set.size(); ++d)
        for (const auto& e : collapse_to_areas(set.row(d), scheme)) {
            const double dev = ni[d] - mean[e.cls];
            ss[e.cls] += e.weight * dev * dev;
        }
    std::vector<AreaSpread> out;
    for (ClassIndex a = 0; a < n; ++a)
        if (w[a] > 0.0) out.push_back({a, std::sqrt(ss[a] / w[a]), mean[a], w[a]});
    return out;
}

ExcellenceThresholds::ExcellenceThresholds(double p, std::vector<ExcellenceCell> cells)
    : p_(p), cells_(std::move(cells)) {
    std::sort(cells_.begin(), cells_.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
}

const ExcellenceCell* ExcellenceThresholds::find(const CellKey& key) const { return lookup(cells_, key); }

ExcellenceCell excellence_cut(std::vector<std::pair<std::uint64_t, double>> docs, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("excellence share p must lie in (0, 1]");
    ExcellenceCell cell;
    for (const auto& [c, w] : docs) cell.weight += w;
    if (docs.empty() || !(cell.weight > 0.0)) return cell;

    std::sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const double cap = p * cell.weight * (1.0 + 1e-12);

    // Walk distinct citation values from the top; share(t) is constant on
    // (next lower value, value], so the smallest admissible cut sits just
    // above the first value that breaks the cap.
    cell.cut = docs.front().first + 1;
    cell.excellent_weight = 0.0;
    double above = 0.0;
    std::size_t i = 0;
    while (i < docs.size()) {
        const std::uint64_t value = docs[i].first;
        double group = 0.0;
        while (i < docs.size() && docs[i].first == value) group += docs[i++].second;
        if (above + group > cap) break;
        above += group;
        cell.excellent_weight = above;
        cell.cut = (i < docs.size()) ? docs[i].first + 1 : 0;
    }
    return cell;
}

ExcellenceThresholds excellence_thresholds(const Corpus& corpus, const AssignmentSet& set,
                                           std::span<const std::uint64_t> citations, double p, const Scheme& scheme) {
    if (set.size() != corpus.size() || citations.size() != corpus.size())
        throw std::invalid_argument("excellence: assignments/citations do not cover the corpus");
    std::unordered_map<std::uint64_t, std::pair<CellKey, std::vector<std::pair<std::uint64_t, double>>>> groups;
    for (DocIndex d = 0; d < corpus.size(); ++d)
        for (const auto& e : collapse_to_areas(set.row(d), scheme)) {
            CellKey key{corpus.type_of(d), corpus.year(d), e.cls};
            auto& g = groups[pack(key)];
            g.first = key;
            g.second.emplace_back(citations[d], e.weight);
        }
    std::vector<ExcellenceCell> cells;
    cells.reserve(groups.size());
    for (auto& [k, g] : groups) {
        auto cell = excellence_cut(std::move(g.second), p);
        cell.key = g.first;
        cells.push_back(cell);
    }
    return ExcellenceThresholds(p, std::move(cells));
}

std::vector<char> excellence_flags(const Corpus& corpus, const AssignmentSet& set,
                                   std::span<const std::uint64_t> citations, const ExcellenceThresholds& thresholds,
                                   const Scheme& scheme) {
    std::vector<char> flags(corpus.size(), 0);
    for (DocIndex d = 0; d < corpus.size(); ++d)
        for (const auto& e : collapse_to_areas(set.row(d), scheme)) {
            if (!(e.weight > 0.0)) continue;
            const auto* cell = thresholds.find({corpus.type_of(d), corpus.year(d), e.cls});
            if (cell && citations[d] >= cell->cut) {
                flags[d] = 1;
                break;
            }
        }
    return flags;
}

std::vector<AreaOverlap> excellence_overlap(std::span<const char> flags_a, std::span<const char> flags_b,
                                            const AssignmentSet& set_b, const Scheme& scheme) {
    if (flags_a.size() != set_b.size() || flags_b.size() != set_b.size())
        throw std::invalid_argument("excellence flags do not match assignments");
    const std::size_t n = scheme.area_count();
    std::vector<double> size(n, 0.0), both(n, 0.0), only_b(n, 0.0), only_a(n, 0.0);
    for (std::size_t d = 0; d < set_b.size(); ++d)
        for (const auto& e : collapse_to_areas(set_b.row(d), scheme)) {
            size[e.cls] += e.weight;
            if (flags_a[d] && flags_b[d]) both[e.cls] += e.weight;
            else if (flags_b[d]) only_b[e.cls] += e.weight;
            else if (flags_a[d]) only_a[e.cls] += e.weight;
        }
    std::vector<AreaOverlap> out;
    for (ClassIndex a = 0; a < n; ++a) {
        if (!(size[a] > 0.0)) continue;
        out.push_back({a, 100.0 * both[a] / size[a], 100.0 * only_b[a] / size[a], 100.0 * only_a[a] / size[a]});
    }
    return out;
}

} // namespace citeclass
