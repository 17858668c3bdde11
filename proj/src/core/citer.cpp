#include "citeclass/citer.hpp"

#include "citeclass/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace citeclass {

void ThresholdPolicy::validate() const {
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
    if (max_categories < 1) throw std::invalid_argument("max_categories must be >= 1");
    if (min_references < 0) throw std::invalid_argument("min_references must be >= 0");
}

namespace {

bool citer_admitted(const Corpus& corpus, DocIndex citer, DocIndex ref, const CitationWindow& window) {
    return !window || corpus.year(citer) - corpus.year(ref) <= *window;
}

std::int64_t quantize(double ratio) { return std::llround(ratio / kThresholdResolution); }

/// Dense accumulator that remembers which slots were touched.
class Scratch {
public:
    explicit Scratch(std::size_t n) : values_(n, 0.0), marked_(n, 0) {}

    void add(ClassIndex c, double w) {
        if (!marked_[c]) {
            marked_[c] = 1;
            touched_.push_back(c);
        }
        values_[c] += w;
    }

    bool empty() const noexcept { return touched_.empty(); }

    /// Emits the touched slots in ascending order, scaled by `scale`, and resets.
    void drain(std::vector<WeightEntry>& out, double scale) {
        std::sort(touched_.begin(), touched_.end());
        out.clear();
        for (auto c : touched_) {
            const double w = values_[c] * scale;
            if (w > 0.0) out.push_back({c, w});
            values_[c] = 0.0;
            marked_[c] = 0;
        }
        touched_.clear();
    }

private:
    std::vector<double> values_;
    std::vector<char> marked_;
    std::vector<ClassIndex> touched_;
};

std::size_t class_space(const AssignmentSet& asjc) {
    ClassIndex top = 0;
    for (std::size_t d = 0; d < asjc.size(); ++d)
        for (const auto& e : asjc.row(d)) top = std::max(top, e.cls);
    return static_cast<std::size_t>(top) + 1;
}

} // namespace

CategoryVector reference_profile(Reference ref, DocIndex citing_doc, const Corpus& corpus,
                                 const CitationIndex& index, const AssignmentSet& asjc,
                                 CitationWindow citer_window) {
    if (ref.is_external()) return {};
    const DocIndex r = ref.doc();

    std::vector<WeightEntry> entries;
    std::size_t citers = 0;
    for (DocIndex c : index.citers(r)) {
        if (c == citing_doc || !citer_admitted(corpus, c, r, citer_window)) continue;
        ++citers;
        for (const auto& e : asjc.row(c)) entries.push_back(e);
    }
    if (citers == 0) {
        auto own = asjc.row(r);
        return CategoryVector::from_entries({own.begin(), own.end()});
    }
    auto v = CategoryVector::from_entries(std::move(entries));
    std::vector<WeightEntry> scaled(v.entries().begin(), v.entries().end());
    for (auto& e : scaled) e.weight /= static_cast<double>(citers);
    return CategoryVector::from_entries(std::move(scaled));
}

CategoryVector aggregate_references(std::span<const CategoryVector> profiles) {
    std::vector<WeightEntry> entries;
    std::size_t used = 0;
    for (const auto& p : profiles) {
        if (p.empty()) continue;
        ++used;
        entries.insert(entries.end(), p.entries().begin(), p.entries().end());
    }
    if (used == 0) return {};
    auto v = CategoryVector::from_entries(std::move(entries));
    v.normalize(0.0);
    return v;
}

namespace {

void threshold_into(std::span<const WeightEntry> in, const ThresholdPolicy& policy, std::vector<WeightEntry>& out) {
    double m = 0.0;
    for (const auto& e : in) m = std::max(m, e.weight);
    if (in.empty() || !(m > 0.0)) throw std::invalid_argument("apply_threshold on an empty vector");

    struct Ranked {
        std::int64_t key;
        WeightEntry entry;
    };
    const std::int64_t cut = quantize(policy.theta);
    std::vector<Ranked> kept;
    for (const auto& e : in) {
        const std::int64_t key = quantize(e.weight / m);
        if (key >= cut) kept.push_back({key, e});
    }
    std::sort(kept.begin(), kept.end(), [](const Ranked& a, const Ranked& b) {
        return a.key != b.key ? a.key > b.key : a.entry.cls < b.entry.cls;
    });
    if (kept.size() > static_cast<std::size_t>(policy.max_categories)) kept.resize(policy.max_categories);

    double total = 0.0;
    out.clear();
    for (const auto& k : kept) out.push_back(k.entry);
    std::sort(out.begin(), out.end(), [](const WeightEntry& a, const WeightEntry& b) { return a.cls < b.cls; });
    for (const auto& e : out) total += e.weight;
    for (auto& e : out) e.weight /= total;
}

} // namespace

CategoryVector apply_threshold(const CategoryVector& vector, const ThresholdPolicy& policy) {
    std::vector<WeightEntry> out;
    threshold_into(vector.entries(), policy, out);
    return CategoryVector::from_entries(std::move(out));
}

AssignmentSet classify_u1f08(const Corpus& corpus, const CitationIndex& index, const AssignmentSet& asjc,
                             const CiterOptions& options) {
    options.policy.validate();
    const std::size_t n = corpus.size();
    if (asjc.size() != n) throw std::invalid_argument("ASJC assignments do not cover the corpus");
    const std::size_t space = class_space(asjc);
    const auto& window = options.citer_window;

    // Per cited document: sum of admitted citers' ASJC vectors and their count.
    std::vector<std::uint32_t> citer_count(n, 0);
    AssignmentSet citer_sums;
    {
        constexpr std::size_t kChunks = 256;
        std::vector<AssignmentSet> parts(std::min<std::size_t>(kChunks, std::max<std::size_t>(n, 1)));
        parallel_chunks(n, kChunks, options.workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            Scratch scratch(space);
            std::vector<WeightEntry> row;
            auto& part = parts[chunk];
            for (std::size_t r = begin; r < end; ++r) {
                std::uint32_t k = 0;
                for (DocIndex c : index.citers(static_cast<DocIndex>(r))) {
                    if (!citer_admitted(corpus, c, static_cast<DocIndex>(r), window)) continue;
                    ++k;
                    for (const auto& e : asjc.row(c)) scratch.add(e.cls, e.weight);
                }
                citer_count[r] = k;
                scratch.drain(row, 1.0);
                part.append(row);
            }
        });
        std::size_t total = 0;
        for (const auto& p : parts) total += p.total_entries();
        citer_sums.reserve(n, total);
        for (auto& p : parts) {
            for (std::size_t i = 0; i < p.size(); ++i) citer_sums.append(p.row(i));
            p = AssignmentSet(); // release as we go to keep the peak near one copy
        }
    }

    const auto& policy = options.policy;
    constexpr std::size_t kChunks = 512;
    std::vector<AssignmentSet> parts(std::min<std::size_t>(kChunks, std::max<std::size_t>(n, 1)),
                                     AssignmentSet(AssignmentSet::System::u1f08));
    parallel_chunks(n, kChunks, options.workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Scratch scratch(space);
        std::vector<WeightEntry> aggregate;
        std::vector<WeightEntry> result;
        std::vector<double> own(space, 0.0);
        auto& part = parts[chunk];

        for (std::size_t di = begin; di < end; ++di) {
            const auto d = static_cast<DocIndex>(di);
            const auto refs = corpus.references(d);
            if (refs.size() < static_cast<std::size_t>(policy.min_references)) {
                part.append(asjc.row(d));
                continue;
            }

            const auto own_row = asjc.row(d);
            for (const auto& e : own_row) own[e.cls] = e.weight;

            std::size_t used = 0;
            for (auto ref : refs) {
                if (ref.is_external()) continue;
                const DocIndex r = ref.doc();
                const bool self_counted = citer_admitted(corpus, d, r, window);
                const std::uint32_t others = citer_count[r] - (self_counted ? 1u : 0u);
                ++used;
                if (others == 0) {
                    for (const auto& e : asjc.row(r)) scratch.add(e.cls, e.weight);
                    continue;
                }
                const double inv = 1.0 / static_cast<double>(others);
                for (const auto& e : citer_sums.row(r)) {
                    double w = self_counted ? e.weight - own[e.cls] : e.weight;
                    if (w < 0.0) w = 0.0; // cancellation noise
                    scratch.add(e.cls, w * inv);
                }
            }
            for (const auto& e : own_row) own[e.cls] = 0.0;

            if (used == 0) {
                scratch.drain(aggregate, 1.0);
                part.append(own_row);
                continue;
            }
            scratch.drain(aggregate, 1.0 / static_cast<double>(used));
            if (aggregate.empty()) {
                part.append(own_row);
                continue;
            }
            threshold_into(aggregate, policy, result);
            part.append(result);
        }
    });

    AssignmentSet out(AssignmentSet::System::u1f08);
    std::size_t total = 0;
    for (const auto& p : parts) total += p.total_entries();
    out.reserve(n, total);
    for (auto& p : parts) {
        for (std::size_t i = 0; i < p.size(); ++i) out.append(p.row(i));
        p = AssignmentSet(AssignmentSet::System::u1f08);
    }
    return out;
}

} // namespace citeclass
