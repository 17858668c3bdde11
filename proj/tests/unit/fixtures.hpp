#pragma once

#include "citeclass/corpus.hpp"
#include "citeclass/scheme.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace fx {

using namespace citeclass;

// Area 11: misc 1100, regular 1101, 1102. Area 12: regular 1201..1203.
// Multidisciplinary area 10.
inline Scheme toy_scheme() {
    std::vector<Category> cats = {
        {"1100", "Misc 11", "11", true, 0},  {"1101", "X", "11", false, 0}, {"1102", "X2", "11", false, 0},
        {"1201", "Y", "12", false, 0},       {"1202", "Z", "12", false, 0}, {"1203", "W", "12", false, 0},
    };
    std::vector<Area> areas = {{"11", "Area 11", false, {}, {}},
                               {"12", "Area 12", false, {}, {}},
                               {"10", "Multidisciplinary", true, {}, {}}};
    return Scheme(std::move(cats), std::move(areas));
}

// 26 regular areas with 285 regular categories and one misc category each,
// plus the multidisciplinary area: 311 categories in total.
inline std::string asjc_like_csv() {
    std::ostringstream s;
    s << "code,name,area_code,area_name,is_misc,is_multidisciplinary\n";
    s << ",,10,Multidisciplinary,false,true\n";
    for (int a = 0; a < 26; ++a) {
        const std::string area = std::to_string(11 + a);
        const int regular = a < 25 ? 11 : 10;
        s << area << "00,\"General " << area << ", misc\"," << area << ",Area " << area << ",true,false\n";
        for (int c = 1; c <= regular; ++c) {
            const std::string code = area + (c < 10 ? "0" : "") + std::to_string(c);
            s << code << ",Category " << code << "," << area << ",Area " << area << ",false,false\n";
        }
    }
    return s.str();
}

inline Scheme asjc_like_scheme() {
    std::istringstream in(asjc_like_csv());
    return parse_scheme(in);
}

inline Journal journal(const std::string& id, std::vector<std::string> codes, const Scheme& scheme) {
    Journal j{id, std::move(codes), {}};
    for (const auto& c : j.asjc_codes) j.resolved.push_back(*scheme.resolve_journal_code(c));
    return j;
}

inline Corpus::DocumentRecord doc(std::string id, std::string journal, int year, std::vector<std::string> refs = {},
                                  std::uint64_t external = 0, std::string type = "article") {
    return {std::move(id), std::move(journal), year, std::move(type), std::move(refs), external};
}

inline ClassIndex cat(const Scheme& s, const std::string& code) { return *s.find_category(code); }
inline ClassIndex area(const Scheme& s, const std::string& code) { return *s.find_area(code); }

} // namespace fx
