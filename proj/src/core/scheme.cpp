#include "citeclass/scheme.hpp"

#include "citeclass/csv.hpp"
#include "citeclass/error.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

namespace citeclass {

Scheme::Scheme(std::vector<Category> categories, std::vector<Area> areas)
    : categories_(std::move(categories)), areas_(std::move(areas)) {
    std::sort(areas_.begin(), areas_.end(), [](const Area& a, const Area& b) { return a.code < b.code; });
    std::sort(categories_.begin(), categories_.end(),
              [](const Category& a, const Category& b) { return a.code < b.code; });

    for (ClassIndex i = 0; i < areas_.size(); ++i) {
        auto& area = areas_[i];
        area.categories.clear();
        area.non_misc.clear();
        if (area.code.empty()) throw ValidationError("area with empty code");
        if (!area_by_code_.emplace(area.code, i).second)
            throw ValidationError("duplicate area code '" + area.code + "'");
        if (area.is_multidisciplinary) {
            if (multi_area_) throw ValidationError("multiple multidisciplinary areas ('" +
                                                   areas_[*multi_area_].code + "', '" + area.code + "')");
            multi_area_ = i;
        }
    }

    for (ClassIndex i = 0; i < categories_.size(); ++i) {
        auto& cat = categories_[i];
        if (cat.code.empty()) throw ValidationError("category with empty code");
        if (!category_by_code_.emplace(cat.code, i).second)
            throw ValidationError("duplicate category code '" + cat.code + "'");
        if (area_by_code_.count(cat.code))
            throw ValidationError("code '" + cat.code + "' used for both an area and a category");
        auto it = area_by_code_.find(cat.area_code);
        if (it == area_by_code_.end())
            throw ValidationError("category '" + cat.code + "' references unknown area '" + cat.area_code + "'");
        cat.area = it->second;
        areas_[cat.area].categories.push_back(i);
        if (!cat.is_misc) areas_[cat.area].non_misc.push_back(i);
    }

    for (ClassIndex i = 0; i < areas_.size(); ++i) {
        const auto& area = areas_[i];
        if (area.is_multidisciplinary) {
            if (!area.categories.empty())
                throw ValidationError("multidisciplinary area '" + area.code + "' has categories");
            continue;
        }
        if (area.non_misc.empty())
            throw ValidationError("area '" + area.code + "' has no non-misc category");
        if (area.categories.size() - area.non_misc.size() > 1)
            throw ValidationError("area '" + area.code + "' has more than one misc category");
        regular_areas_.push_back(i);
        regular_.insert(regular_.end(), area.non_misc.begin(), area.non_misc.end());
    }
    std::sort(regular_.begin(), regular_.end());
}

std::optional<ClassIndex> Scheme::find_category(std::string_view code) const {
    auto it = category_by_code_.find(std::string(code));
    if (it == category_by_code_.end()) return std::nullopt;
    return it->second;
}

std::optional<ClassIndex> Scheme::find_area(std::string_view code) const {
    auto it = area_by_code_.find(std::string(code));
    if (it == area_by_code_.end()) return std::nullopt;
    return it->second;
}

std::optional<ClassIndex> Scheme::resolve_journal_code(std::string_view code) const {
    if (auto c = find_category(code)) return c;
    if (multi_area_ && areas_[*multi_area_].code == code) return multi_index();
    return std::nullopt;
}

namespace {

bool parse_bool(const std::string& s, const std::string& source, std::size_t line, std::size_t col) {
    if (s == "true" || s == "1" || s == "TRUE" || s == "True") return true;
    if (s == "false" || s == "0" || s == "FALSE" || s == "False" || s.empty()) return false;
    throw ParseError(source, line, col, "expected boolean, got '" + s + "'");
}

const char* kHeader[] = {"code", "name", "area_code", "area_name", "is_misc", "is_multidisciplinary"};

} // namespace

Scheme parse_scheme(std::istream& in, const std::string& source) {
    csv::Reader reader(in, source);
    csv::Row row;
    if (!reader.next(row)) throw ParseError(source, 1, 1, "empty scheme file");
    if (row.fields.size() != 6) throw ParseError(source, row.line, 1, "header must have 6 columns");
    for (std::size_t i = 0; i < 6; ++i)
        if (row.fields[i] != kHeader[i])
            throw ParseError(source, row.line, row.columns[i],
                             std::string("expected column '") + kHeader[i] + "'");

    std::vector<Category> categories;
    std::map<std::string, Area> areas;
    while (reader.next(row)) {
        if (row.fields.size() != 6)
            throw ParseError(source, row.line, row.columns.back(),
                             "expected 6 fields, got " + std::to_string(row.fields.size()));
        const auto& f = row.fields;
        if (f[2].empty()) throw ParseError(source, row.line, row.columns[2], "empty area_code");
        const bool misc = parse_bool(f[4], source, row.line, row.columns[4]);
        const bool multi = parse_bool(f[5], source, row.line, row.columns[5]);

        auto [it, inserted] = areas.try_emplace(f[2]);
        Area& area = it->second;
        if (inserted) {
            area.code = f[2];
            area.name = f[3];
            area.is_multidisciplinary = multi;
        } else if (area.is_multidisciplinary != multi) {
            throw ParseError(source, row.line, row.columns[5],
                             "inconsistent is_multidisciplinary for area '" + f[2] + "'");
        }

        if (f[0].empty()) {
            if (!multi)
                throw ParseError(source, row.line, row.columns[0],
                                 "empty category code on a non-multidisciplinary row");
            continue;
        }
        if (multi)
            throw ValidationError("multidisciplinary area '" + f[2] + "' has categories (line " +
                                  std::to_string(row.line) + ")");
        categories.push_back(Category{f[0], f[1], f[2], misc, 0});
    }

    std::vector<Area> area_list;
    area_list.reserve(areas.size());
    for (auto& [code, area] : areas) area_list.push_back(std::move(area));
    return Scheme(std::move(categories), std::move(area_list));
}

Scheme load_scheme(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scheme file '" + path.string() + "'");
    return parse_scheme(in, path.string());
}

void write_scheme(const Scheme& scheme, std::ostream& out) {
    out << "code,name,area_code,area_name,is_misc,is_multidisciplinary\n";
    for (const auto& c : scheme.categories()) {
        const auto& a = scheme.areas()[c.area];
        out << csv::escape(c.code) << ',' << csv::escape(c.name) << ',' << csv::escape(a.code) << ','
            << csv::escape(a.name) << ',' << (c.is_misc ? "true" : "false") << ",false\n";
    }
    for (const auto& a : scheme.areas()) {
        if (a.is_multidisciplinary)
            out << "," << csv::escape(a.name) << ',' << csv::escape(a.code) << ',' << csv::escape(a.name)
                << ",false,true\n";
    }
}

} // namespace citeclass
