#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace citeclass {

/// Dense index of a class (category or area, depending on context).
using ClassIndex = std::uint32_t;

struct Category {
    std::string code;
    std::string name;
    std::string area_code;
    bool is_misc = false;
    ClassIndex area = 0; // index into Scheme::areas()
};

struct Area {
    std::string code;
    std::string name;
    bool is_multidisciplinary = false;
    std::vector<ClassIndex> categories;     // all member categories
    std::vector<ClassIndex> non_misc;       // redistribution targets for the misc category
};

/// Two-level area/category taxonomy. Categories and areas are kept sorted by
/// code, so a ClassIndex is also the lexicographic rank of the code.
///
/// Category vectors use the index range [0, category_count()) plus one extra
/// slot, multi_index(), for the multidisciplinary pseudo-entry.
class Scheme {
public:
    Scheme() = default;

    /// Validates and indexes. Throws ValidationError on duplicate codes,
    /// dangling area references, more than one multidisciplinary area, a
    /// multidisciplinary area with categories, or a non-multidisciplinary area
    /// without non-misc categories / with several misc categories.
    Scheme(std::vector<Category> categories, std::vector<Area> areas);

    const std::vector<Category>& categories() const noexcept { return categories_; }
    const std::vector<Area>& areas() const noexcept { return areas_; }

    std::size_t category_count() const noexcept { return categories_.size(); }
    std::size_t area_count() const noexcept { return areas_.size(); }

    /// Slot of the multidisciplinary pseudo-entry inside category vectors.
    ClassIndex multi_index() const noexcept { return static_cast<ClassIndex>(categories_.size()); }

    std::optional<ClassIndex> multidisciplinary_area() const noexcept { return multi_area_; }

    std::optional<ClassIndex> find_category(std::string_view code) const;
    std::optional<ClassIndex> find_area(std::string_view code) const;

    /// Resolves a journal code: a category code, or the multidisciplinary area
    /// code (mapped to multi_index()).
    std::optional<ClassIndex> resolve_journal_code(std::string_view code) const;

    /// Non-misc categories of every non-multidisciplinary area, ascending.
    const std::vector<ClassIndex>& regular_categories() const noexcept { return regular_; }

    /// Non-multidisciplinary areas, ascending.
    const std::vector<ClassIndex>& regular_areas() const noexcept { return regular_areas_; }

    bool is_regular(ClassIndex category) const noexcept {
        return category < categories_.size() && !categories_[category].is_misc;
    }

    ClassIndex area_of(ClassIndex category) const noexcept { return categories_[category].area; }

private:
    std::vector<Category> categories_;
    std::vector<Area> areas_;
    std::unordered_map<std::string, ClassIndex> category_by_code_;
    std::unordered_map<std::string, ClassIndex> area_by_code_;
    std::optional<ClassIndex> multi_area_;
    std::vector<ClassIndex> regular_;
    std::vector<ClassIndex> regular_areas_;
};

/// Reads the scheme CSV:
///   code,name,area_code,area_name,is_misc,is_multidisciplinary
/// The multidisciplinary area is one row with an empty `code`.
Scheme load_scheme(const std::filesystem::path& path);
Scheme parse_scheme(std::istream& in, const std::string& source_name = "<scheme>");

/// Writes the same CSV format, categories in code order, the multidisciplinary
/// row last.
void write_scheme(const Scheme& scheme, std::ostream& out);

} // namespace citeclass
