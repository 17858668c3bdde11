#include "citeclass/category_vector.hpp"

#include <algorithm>

namespace citeclass {

CategoryVector CategoryVector::from_entries(std::vector<WeightEntry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const WeightEntry& a, const WeightEntry& b) { return a.cls < b.cls; });
    CategoryVector v;
    for (const auto& e : entries) {
        if (!v.entries_.empty() && v.entries_.back().cls == e.cls)
            v.entries_.back().weight += e.weight;
        else
            v.entries_.push_back(e);
    }
    return v;
}

double CategoryVector::get(ClassIndex cls) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), cls,
                               [](const WeightEntry& e, ClassIndex c) { return e.cls < c; });
    return (it != entries_.end() && it->cls == cls) ? it->weight : 0.0;
}

double CategoryVector::sum() const noexcept {
    double s = 0.0;
    for (const auto& e : entries_) s += e.weight;
    return s;
}

double CategoryVector::max() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.weight);
    return m;
}

void CategoryVector::normalize(double drop_below) {
    const double s = sum();
    if (s <= 0.0) {
        entries_.clear();
        return;
    }
    for (auto& e : entries_) e.weight /= s;
    std::erase_if(entries_, [drop_below](const WeightEntry& e) { return e.weight < drop_below; });
}

void AssignmentSet::append(std::span<const WeightEntry> row) {
    entries_.insert(entries_.end(), row.begin(), row.end());
    offsets_.push_back(entries_.size());
}

void AssignmentSet::reserve(std::size_t docs, std::size_t entries) {
    offsets_.reserve(docs + 1);
    entries_.reserve(entries);
}

const char* system_name(AssignmentSet::System s) noexcept {
    return s == AssignmentSet::System::asjc_frac ? "ASJC-FRAC" : "U1-F-0.8";
}

} // namespace citeclass
