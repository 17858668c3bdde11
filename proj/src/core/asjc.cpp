#include "citeclass/asjc.hpp"

#include "citeclass/error.hpp"

#include <cmath>

namespace citeclass {

CategoryVector journal_base_weights(const Journal& journal, const Scheme& scheme) {
    if (journal.resolved.empty())
        throw ValidationError("journal '" + journal.journal_id + "' has no ASJC codes");
    const double w = 1.0 / static_cast<double>(journal.resolved.size());
    std::vector<WeightEntry> entries;
    entries.reserve(journal.resolved.size());
    for (auto c : journal.resolved) {
        if (c > scheme.multi_index())
            throw ValidationError("journal '" + journal.journal_id + "' has an unresolved code");
        entries.push_back({c, w});
    }
    return CategoryVector::from_entries(std::move(entries));
}

CategoryVector redistribute(const CategoryVector& vector, const Scheme& scheme) {
    const ClassIndex multi = scheme.multi_index();

    bool pure = true;
    for (const auto& e : vector.entries())
        if (e.cls == multi || !scheme.is_regular(e.cls)) pure = false;
    if (pure && std::abs(vector.sum() - 1.0) <= 1e-12) return vector;

    std::vector<double> dense(scheme.category_count(), 0.0);

    // Multidisciplinary share first; it never lands on misc categories.
    if (double m = vector.get(multi); m > 0.0) {
        const auto& targets = scheme.regular_categories();
        if (targets.empty()) throw ValidationError("no regular categories to receive multidisciplinary weight");
        const double share = m / static_cast<double>(targets.size());
        for (auto c : targets) dense[c] += share;
    }

    for (const auto& e : vector.entries()) {
        if (e.cls == multi) continue;
        if (e.cls > multi) throw ValidationError("class index out of range in category vector");
        const auto& cat = scheme.categories()[e.cls];
        if (!cat.is_misc) {
            dense[e.cls] += e.weight;
            continue;
        }
        const auto& targets = scheme.areas()[cat.area].non_misc;
        if (targets.empty())
            throw ValidationError("misc category '" + cat.code + "' has no sibling categories to absorb its weight");
        const double share = e.weight / static_cast<double>(targets.size());
        for (auto c : targets) dense[c] += share;
    }

    std::vector<WeightEntry> entries;
    for (ClassIndex c = 0; c < dense.size(); ++c)
        if (dense[c] > 0.0) entries.push_back({c, dense[c]});
    auto out = CategoryVector::from_entries(std::move(entries));
    out.normalize();
    return out;
}

CategoryVector classify_asjc_fractional(DocIndex doc, const Corpus& corpus, const Scheme& scheme) {
    return redistribute(journal_base_weights(corpus.journal(corpus.journal_of(doc)), scheme), scheme);
}

std::vector<CategoryVector> journal_vectors(const Corpus& corpus, const Scheme& scheme) {
    std::vector<CategoryVector> out;
    out.reserve(corpus.journal_count());
    for (const auto& j : corpus.journals()) out.push_back(redistribute(journal_base_weights(j, scheme), scheme));
    return out;
}

AssignmentSet classify_asjc_all(const Corpus& corpus, const Scheme& scheme) {
    const auto by_journal = journal_vectors(corpus, scheme);
    AssignmentSet out(AssignmentSet::System::asjc_frac);
    std::size_t total = 0;
    for (DocIndex d = 0; d < corpus.size(); ++d) total += by_journal[corpus.journal_of(d)].size();
    out.reserve(corpus.size(), total);
    for (DocIndex d = 0; d < corpus.size(); ++d) out.append(by_journal[corpus.journal_of(d)].entries());
    return out;
}

} // namespace citeclass
