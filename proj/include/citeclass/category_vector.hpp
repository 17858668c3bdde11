#pragma once

#include "citeclass/scheme.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace citeclass {

struct WeightEntry {
    ClassIndex cls = 0;
    double weight = 0.0;
    friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

/// Sparse class → weight map, entries strictly ascending by class index.
class CategoryVector {
public:
    CategoryVector() = default;

    /// Builds from unsorted entries; duplicate classes are summed.
    static CategoryVector from_entries(std::vector<WeightEntry> entries);

    std::span<const WeightEntry> entries() const noexcept { return entries_; }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }

    double get(ClassIndex cls) const noexcept;
    double sum() const noexcept;
    double max() const noexcept;

    /// Scales to unit sum and drops entries below `drop_below` afterwards.
    void normalize(double drop_below = 1e-12);

    friend bool operator==(const CategoryVector&, const CategoryVector&) = default;

private:
    std::vector<WeightEntry> entries_;
};

/// Per-document vectors for a whole corpus in CSR layout (one row per
/// DocIndex). Rows are immutable once appended.
class AssignmentSet {
public:
    enum class System { asjc_frac, u1f08 };

    explicit AssignmentSet(System system = System::asjc_frac) : system_(system) { offsets_.push_back(0); }

    System system() const noexcept { return system_; }
    std::size_t size() const noexcept { return offsets_.size() - 1; }

    std::span<const WeightEntry> row(std::size_t doc) const {
        return {entries_.data() + offsets_[doc], entries_.data() + offsets_[doc + 1]};
    }

    void append(std::span<const WeightEntry> row);
    void reserve(std::size_t docs, std::size_t entries);

    std::size_t total_entries() const noexcept { return entries_.size(); }

private:
    System system_;
    std::vector<std::size_t> offsets_;
    std::vector<WeightEntry> entries_;
};

const char* system_name(AssignmentSet::System s) noexcept;

} // namespace citeclass
