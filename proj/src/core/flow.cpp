#include "citeclass/flow.hpp"

#include "citeclass/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace citeclass {

const char* level_name(Level level) noexcept { return level == Level::category ? "category" : "area"; }

namespace {

double sum_of(std::span<const WeightEntry> v) {
    double s = 0.0;
    for (const auto& e : v) s += e.weight;
    return s;
}

} // namespace

DocFlow document_flow(std::span<const WeightEntry> a, std::span<const WeightEntry> b) {
    if (std::abs(sum_of(a) - 1.0) > kNormTolerance || std::abs(sum_of(b) - 1.0) > kNormTolerance)
        throw std::invalid_argument("document_flow requires normalized vectors");

    DocFlow out;
    std::vector<WeightEntry> deficits;
    std::vector<WeightEntry> surpluses;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        ClassIndex c;
        double wa = 0.0, wb = 0.0;
        if (j == b.size() || (i < a.size() && a[i].cls < b[j].cls)) {
            c = a[i].cls;
            wa = a[i++].weight;
        } else if (i == a.size() || b[j].cls < a[i].cls) {
            c = b[j].cls;
            wb = b[j++].weight;
        } else {
            c = a[i].cls;
            wa = a[i++].weight;
            wb = b[j++].weight;
        }
        const double m = std::min(wa, wb);
        if (m > 0.0) out.common.push_back({c, m});
        if (wa > wb) deficits.push_back({c, wa - wb});
        if (wb > wa) surpluses.push_back({c, wb - wa});
    }

    double total = 0.0;
    for (const auto& d : deficits) total += d.weight;
    if (total > 0.0 && !surpluses.empty()) {
        out.moves.reserve(deficits.size() * surpluses.size());
        for (const auto& d : deficits)
            for (const auto& s : surpluses) out.moves.push_back({d.cls, s.cls, d.weight * s.weight / total});
    }
    return out;
}

CategoryVector collapse_to_areas(std::span<const WeightEntry> categories, const Scheme& scheme) {
    std::vector<WeightEntry> entries;
    entries.reserve(categories.size());
    for (const auto& e : categories) {
        if (e.cls >= scheme.category_count())
            throw ValidationError("multidisciplinary pseudo-entry cannot be collapsed to an area");
        entries.push_back({scheme.area_of(e.cls), e.weight});
    }
    return CategoryVector::from_entries(std::move(entries));
}

FlowMatrix::FlowMatrix(Level level, std::size_t classes)
    : level_(level), n_(classes), common_(classes, 0.0), size_a_(classes, 0.0), size_b_(classes, 0.0),
      flow_(classes * classes, 0.0) {}

double FlowMatrix::incoming(ClassIndex c) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += flow_[i * n_ + c];
    return s;
}

double FlowMatrix::outgoing(ClassIndex c) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += flow_[static_cast<std::size_t>(c) * n_ + j];
    return s;
}

void FlowMatrix::add(const DocFlow& flow, std::span<const WeightEntry> a, std::span<const WeightEntry> b) {
    for (const auto& e : flow.common) common_[e.cls] += e.weight;
    for (const auto& m : flow.moves) flow_[static_cast<std::size_t>(m.from) * n_ + m.to] += m.weight;
    for (const auto& e : a) size_a_[e.cls] += e.weight;
    for (const auto& e : b) size_b_[e.cls] += e.weight;
    ++documents_;
}

void FlowMatrix::set_sizes(ClassIndex c, double size_a, double size_b, double common) {
    size_a_[c] = size_a;
    size_b_[c] = size_b;
    common_[c] = common;
}

FlowMatrix flow_matrix(const AssignmentSet& a, const AssignmentSet& b, Level level, const Scheme& scheme) {
    if (a.size() != b.size())
        throw ValidationError("assignment sets cover different document sets (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    const std::size_t classes = level == Level::category ? scheme.category_count() : scheme.area_count();
    FlowMatrix m(level, classes);

    auto check = [&](std::span<const WeightEntry> row) {
        for (const auto& e : row)
            if (e.cls >= scheme.category_count())
                throw ValidationError("assignment still carries the multidisciplinary pseudo-entry");
    };

    for (std::size_t d = 0; d < a.size(); ++d) {
        const auto ra = a.row(d);
        const auto rb = b.row(d);
        check(ra);
        check(rb);
        if (level == Level::category) {
            m.add(document_flow(ra, rb), ra, rb);
        } else {
            const auto ca = collapse_to_areas(ra, scheme);
            const auto cb = collapse_to_areas(rb, scheme);
            m.add(document_flow(ca, cb), ca.entries(), cb.entries());
        }
    }
    return m;
}

std::vector<ClassIndex> class_universe(const FlowMatrix& matrix, const Scheme& scheme) {
    const auto& regular = matrix.level() == Level::category ? scheme.regular_categories() : scheme.regular_areas();
    std::vector<char> in(matrix.classes(), 0);
    for (auto c : regular) in[c] = 1;
    for (ClassIndex c = 0; c < matrix.classes(); ++c)
        if (matrix.size_a(c) > 0.0 || matrix.size_b(c) > 0.0) in[c] = 1;
    std::vector<ClassIndex> out;
    for (ClassIndex c = 0; c < matrix.classes(); ++c)
        if (in[c]) out.push_back(c);
    return out;
}

std::string class_code(const Scheme& scheme, Level level, ClassIndex c) {
    return level == Level::category ? scheme.categories().at(c).code : scheme.areas().at(c).code;
}

std::string class_label(const Scheme& scheme, Level level, ClassIndex c) {
    return level == Level::category ? scheme.categories().at(c).name : scheme.areas().at(c).name;
}

std::vector<ClassFlowStats> class_flow_stats(const FlowMatrix& matrix, const std::vector<ClassIndex>& classes) {
    std::vector<ClassFlowStats> out;
    out.reserve(classes.size());
    for (auto c : classes) {
        ClassFlowStats s;
        s.cls = c;
        s.size_a = matrix.size_a(c);
        s.size_b = matrix.size_b(c);
        s.common = matrix.common(c);
        s.incoming = matrix.incoming(c);
        s.outgoing = matrix.outgoing(c);
        if (s.size_b > 0.0) {
            s.pct_incoming = 100.0 * s.incoming / s.size_b;
            s.pct_outgoing = 100.0 * s.outgoing / s.size_b;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<Move> top_links(const FlowMatrix& matrix, double min_weight) {
    std::vector<Move> out;
    const auto n = static_cast<ClassIndex>(matrix.classes());
    for (ClassIndex i = 0; i < n; ++i)
        for (ClassIndex j = 0; j < n; ++j) {
            const double w = matrix.flow(i, j);
            if (w > 0.0 && w >= min_weight) out.push_back({i, j, w});
        }
    std::sort(out.begin(), out.end(), [](const Move& a, const Move& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    return out;
}

SummaryStats summary_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summary_stats of an empty list");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    SummaryStats s;
    s.mean = mean;
    s.std = std::sqrt(ss / n);
    s.cv_pct = mean == 0.0 ? kUndefined : 100.0 * s.std / mean;
    return s;
}

std::vector<ClassComposition> class_composition(const AssignmentSet& set, Level level, const Scheme& scheme,
                                                const std::vector<ClassIndex>& classes) {
    const std::size_t n = level == Level::category ? scheme.category_count() : scheme.area_count();
    std::vector<std::size_t> docs(n, 0), single(n, 0);
    std::vector<double> weight(n, 0.0);

    for (std::size_t d = 0; d < set.size(); ++d) {
        CategoryVector collapsed;
        auto row = set.row(d);
        if (level == Level::area) {
            collapsed = collapse_to_areas(row, scheme);
            row = collapsed.entries();
        }
        std::size_t support = 0;
        for (const auto& e : row)
            if (e.weight > kSupportEpsilon) ++support;
        for (const auto& e : row) {
            if (e.weight <= kSupportEpsilon) continue;
            if (e.cls >= n) throw ValidationError("class outside the scheme in assignment");
            ++docs[e.cls];
            if (support == 1) ++single[e.cls];
            weight[e.cls] += e.weight;
        }
    }

    std::vector<ClassComposition> out;
    for (auto c : classes) {
        ClassComposition k;
        k.cls = c;
        k.documents = docs[c];
        k.single = single[c];
        k.size = weight[c];
        if (docs[c] > 0) {
            k.pct_single = 100.0 * static_cast<double>(single[c]) / static_cast<double>(docs[c]);
            k.mean_weight = weight[c] / static_cast<double>(docs[c]);
        }
        out.push_back(k);
    }
    return out;
}

std::vector<HistogramBin> size_histogram(std::span<const double> sizes, double width, std::size_t min_bins) {
    if (!(width > 0.0)) throw std::invalid_argument("histogram bin width must be positive");
    double top = 0.0;
    for (double s : sizes) top = std::max(top, s);
    std::size_t bins = std::max<std::size_t>(min_bins, static_cast<std::size_t>(std::floor(top / width)) + 1);
    std::vector<HistogramBin> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        out[k].lower = static_cast<double>(k) * width;
        out[k].upper = static_cast<double>(k + 1) * width;
    }
    for (double s : sizes) {
        auto k = static_cast<std::size_t>(std::floor(std::max(0.0, s) / width));
        ++out[std::min(k, bins - 1)].count;
    }
    if (!sizes.empty())
        for (auto& b : out) b.pct = 100.0 * static_cast<double>(b.count) / static_cast<double>(sizes.size());
    return out;
}

} // namespace citeclass
