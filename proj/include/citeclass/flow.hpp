#pragma once

#include "citeclass/category_vector.hpp"
#include "citeclass/scheme.hpp"

#include <limits>
#include <string>
#include <vector>

namespace citeclass {

enum class Level { category, area };

const char* level_name(Level level) noexcept;

struct Move {
    ClassIndex from = 0;
    ClassIndex to = 0;
    double weight = 0.0;
    friend bool operator==(const Move&, const Move&) = default;
};

/// Weight a single document keeps and moves when switching from system A to B.
struct DocFlow {
    std::vector<WeightEntry> common; // pointwise min, ascending by class
    std::vector<Move> moves;         // ascending by (from, to)
};

/// Tolerance on |sum - 1| for inputs to document_flow.
inline constexpr double kNormTolerance = 1e-9;

/// Proportional coupling: each deficit class i sends d_i * s_j / T to each
/// surplus class j, T the total deficit. Throws std::invalid_argument when a
/// vector is not normalized.
DocFlow document_flow(std::span<const WeightEntry> a, std::span<const WeightEntry> b);
inline DocFlow document_flow(const CategoryVector& a, const CategoryVector& b) {
    return document_flow(a.entries(), b.entries());
}

/// Sums area weights of a category vector (multi/misc must already be gone).
CategoryVector collapse_to_areas(std::span<const WeightEntry> categories, const Scheme& scheme);

/// Class-to-class flow between two assignment sets over the same documents.
class FlowMatrix {
public:
    FlowMatrix(Level level, std::size_t classes);

    Level level() const noexcept { return level_; }
    std::size_t classes() const noexcept { return n_; }

    double common(ClassIndex c) const { return common_[c]; }
    double size_a(ClassIndex c) const { return size_a_[c]; }
    double size_b(ClassIndex c) const { return size_b_[c]; }
    double flow(ClassIndex from, ClassIndex to) const { return flow_[static_cast<std::size_t>(from) * n_ + to]; }

    double incoming(ClassIndex c) const;
    double outgoing(ClassIndex c) const;

    std::size_t documents() const noexcept { return documents_; }

    /// Adds one document's flow and its A/B vectors (already at this level).
    void add(const DocFlow& flow, std::span<const WeightEntry> a, std::span<const WeightEntry> b);

    /// Sets one entry directly (used when reloading a flows CSV).
    void set_flow(ClassIndex from, ClassIndex to, double w) { flow_[static_cast<std::size_t>(from) * n_ + to] = w; }
    void set_sizes(ClassIndex c, double size_a, double size_b, double common);

private:
    Level level_;
    std::size_t n_;
    std::size_t documents_ = 0;
    std::vector<double> common_;
    std::vector<double> size_a_;
    std::vector<double> size_b_;
    std::vector<double> flow_;
};

/// Throws ValidationError if the two sets cover different numbers of documents.
FlowMatrix flow_matrix(const AssignmentSet& a, const AssignmentSet& b, Level level, const Scheme& scheme);

/// Classes reported for a level: regular categories / regular areas, plus any
/// other class that carries weight in the matrix.
std::vector<ClassIndex> class_universe(const FlowMatrix& matrix, const Scheme& scheme);

std::string class_code(const Scheme& scheme, Level level, ClassIndex c);
std::string class_label(const Scheme& scheme, Level level, ClassIndex c);

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

struct ClassFlowStats {
    ClassIndex cls = 0;
    double size_a = 0.0;
    double size_b = 0.0;
    double common = 0.0;
    double incoming = 0.0;
    double outgoing = 0.0;
    double pct_incoming = kUndefined; // of size_b; NaN when size_b == 0
    double pct_outgoing = kUndefined;
};

std::vector<ClassFlowStats> class_flow_stats(const FlowMatrix& matrix, const std::vector<ClassIndex>& classes);

/// Links with weight >= min_weight (and > 0), heaviest first, ties by (from, to).
std::vector<Move> top_links(const FlowMatrix& matrix, double min_weight);

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;    // population
    double cv_pct = 0.0; // NaN when mean == 0
};

/// Throws std::invalid_argument on an empty list.
SummaryStats summary_stats(std::span<const double> values);

/// Per-class composition of one assignment set at a level.
struct ClassComposition {
    ClassIndex cls = 0;
    std::size_t documents = 0;        // documents with weight > epsilon in the class
    std::size_t single = 0;           // ... of which the whole document sits in this class
    double pct_single = kUndefined;
    double mean_weight = kUndefined;  // mean weight among those documents
    double size = 0.0;
};

inline constexpr double kSupportEpsilon = 1e-9;

std::vector<ClassComposition> class_composition(const AssignmentSet& set, Level level, const Scheme& scheme,
                                                const std::vector<ClassIndex>& classes);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    double pct = 0.0;
};

/// Bins class sizes into [k*width, (k+1)*width); always covers the largest value.
std::vector<HistogramBin> size_histogram(std::span<const double> sizes, double width, std::size_t min_bins = 1);

} // namespace citeclass
