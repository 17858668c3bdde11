#include "citeclass/syngen.hpp"

#include "citeclass/error.hpp"
#include "citeclass/rng.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace citeclass::syngen {

void SynParams::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("syngen: " + m); };
    if (n_docs < 1) fail("n_docs must be >= 1");
    if (n_journals < 1) fail("n_journals must be >= 1");
    if (areas < 1 || areas > 89) fail("areas must lie in [1, 89]");
    if (categories_per_area < 1 || categories_per_area > 99) fail("categories_per_area must lie in [1, 99]");
    if (max_journal_codes < 1 || max_journal_codes > 3) fail("max_journal_codes must lie in [1, 3]");
    auto prob = [&](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) fail(std::string(name) + " must lie in [0, 1]");
    };
    prob(misc_share, "misc_share");
    prob(multidisciplinary_share, "multidisciplinary_share");
    prob(intra_category_citation_prob, "intra_category_citation_prob");
    if (multidisciplinary_share > 0.0 && !multidisciplinary_area)
        fail("multidisciplinary_share > 0 needs multidisciplinary_area");
    if (year_min > year_max) fail("year_min > year_max");
    if (refs_min > refs_max) fail("refs_min > refs_max");
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw std::invalid_argument("syngen: bad value '" + v + "' for " + key);
    return out;
}

bool parse_flag(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("syngen: bad boolean '" + v + "' for " + key);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string pad(std::size_t value, std::size_t width) {
    std::string s = std::to_string(value);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

} // namespace

SynParams parse_params(const std::map<std::string, std::string>& kv) {
    SynParams p;
    for (const auto& [k, v] : kv) {
        if (k == "n_docs") p.n_docs = parse_number<std::size_t>(k, v);
        else if (k == "n_journals") p.n_journals = parse_number<std::size_t>(k, v);
        else if (k == "areas") p.areas = parse_number<std::size_t>(k, v);
        else if (k == "categories_per_area") p.categories_per_area = parse_number<std::size_t>(k, v);
        else if (k == "misc_categories") p.misc_categories = parse_flag(k, v);
        else if (k == "multidisciplinary_area") p.multidisciplinary_area = parse_flag(k, v);
        else if (k == "max_journal_codes") p.max_journal_codes = parse_number<std::size_t>(k, v);
        else if (k == "misc_share") p.misc_share = parse_number<double>(k, v);
        else if (k == "multidisciplinary_share") p.multidisciplinary_share = parse_number<double>(k, v);
        else if (k == "year_min") p.year_min = parse_number<int>(k, v);
        else if (k == "year_max") p.year_max = parse_number<int>(k, v);
        else if (k == "refs_min") p.refs_min = parse_number<std::size_t>(k, v);
        else if (k == "refs_max") p.refs_max = parse_number<std::size_t>(k, v);
        else if (k == "intra_category_citation_prob") p.intra_category_citation_prob = parse_number<double>(k, v);
        else if (k == "max_external_citations") p.max_external_citations = parse_number<std::uint64_t>(k, v);
        else if (k == "seed") p.seed = parse_number<std::uint64_t>(k, v);
        else throw std::invalid_argument("syngen: unknown parameter '" + k + "'");
    }
    p.validate();
    return p;
}

SynParams parse_params(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("syngen: expected key = value, got '" + line + "'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return parse_params(kv);
}

SyntheticRecords generate_records(const SynParams& params) {
    params.validate();
    Xoshiro256 rng(params.seed);
    SyntheticRecords out;

    // Scheme: areas "11".."99", categories "<area>01".., misc "<area>00",
    // multidisciplinary area "10" (the ASJC numbering pattern).
    std::vector<Category> categories;
    std::vector<Area> areas;
    for (std::size_t a = 0; a < params.areas; ++a) {
        const std::string code = std::to_string(11 + a);
        areas.push_back(Area{code, "Area " + code, false, {}, {}});
        if (params.misc_categories)
            categories.push_back(Category{code + "00", "Area " + code + " (miscellaneous)", code, true, 0});
        for (std::size_t c = 0; c < params.categories_per_area; ++c)
            categories.push_back(Category{code + pad(c + 1, 2), "Category " + code + pad(c + 1, 2), code, false, 0});
    }
    if (params.multidisciplinary_area) areas.push_back(Area{"10", "Multidisciplinary", true, {}, {}});
    out.scheme = Scheme(std::move(categories), std::move(areas));
    const auto& scheme = out.scheme;
    const auto& regular = scheme.regular_categories();

    // Journals. A journal's primary category cycles through the regular
    // categories so that every category is populated.
    std::vector<std::int64_t> journal_primary(params.n_journals, -1);
    const std::size_t jwidth = std::to_string(params.n_journals).size();
    for (std::size_t j = 0; j < params.n_journals; ++j) {
        Journal journal;
        journal.journal_id = "J" + pad(j + 1, jwidth);
        if (params.multidisciplinary_area && rng.chance(params.multidisciplinary_share)) {
            journal.asjc_codes.push_back("10");
        } else {
            const ClassIndex primary = regular[j % regular.size()];
            journal_primary[j] = primary;
            journal.asjc_codes.push_back(scheme.categories()[primary].code);
            const std::size_t extra = rng.below(params.max_journal_codes);
            const auto& area = scheme.areas()[scheme.area_of(primary)];
            for (std::size_t e = 0; e < extra; ++e) {
                std::string code;
                const bool has_misc = area.categories.size() > area.non_misc.size();
                if (has_misc && rng.chance(params.misc_share)) {
                    for (auto c : area.categories)
                        if (scheme.categories()[c].is_misc) code = scheme.categories()[c].code;
                } else if (rng.chance(0.5)) {
                    code = scheme.categories()[area.non_misc[rng.below(area.non_misc.size())]].code;
                } else {
                    code = scheme.categories()[regular[rng.below(regular.size())]].code;
                }
                if (std::find(journal.asjc_codes.begin(), journal.asjc_codes.end(), code) == journal.asjc_codes.end())
                    journal.asjc_codes.push_back(code);
            }
        }
        for (const auto& code : journal.asjc_codes) journal.resolved.push_back(*scheme.resolve_journal_code(code));
        out.journals.push_back(std::move(journal));
    }

    // Documents in year order, so doc index order == id order == year order.
    const std::size_t n = params.n_docs;
    const std::size_t years = static_cast<std::size_t>(params.year_max - params.year_min) + 1;
    const std::size_t dwidth = std::max<std::size_t>(7, std::to_string(n).size());
    out.documents.resize(n);
    out.planted.resize(n);
    std::vector<std::size_t> year_start(years + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& doc = out.documents[i];
        const std::size_t y = i * years / n;
        if (year_start[y] == n) year_start[y] = i;
        doc.doc_id = "D" + pad(i + 1, dwidth);
        doc.year = params.year_min + static_cast<int>(y);
        const std::size_t j = rng.below(params.n_journals);
        doc.journal_id = out.journals[j].journal_id;
        out.planted[i] = journal_primary[j] >= 0 ? static_cast<ClassIndex>(journal_primary[j])
                                                 : regular[rng.below(regular.size())];
        const double t = rng.uniform();
        doc.doc_type = t < 0.8 ? "article" : (t < 0.9 ? "review" : "conference-paper");
        if (params.max_external_citations > 0) doc.external_citations = rng.below(params.max_external_citations + 1);
    }
    for (std::size_t y = years; y-- > 0;)
        if (year_start[y] == n && y + 1 <= years) year_start[y] = year_start[y + 1];

    // Per planted category, document indices ascending.
    std::vector<std::vector<std::uint32_t>> by_category(scheme.category_count());
    for (std::size_t i = 0; i < n; ++i) by_category[out.planted[i]].push_back(static_cast<std::uint32_t>(i));

    std::vector<std::uint32_t> chosen;
    for (std::size_t i = 0; i < n; ++i) {
        auto& doc = out.documents[i];
        const std::size_t k = params.refs_min + rng.below(params.refs_max - params.refs_min + 1);
        const std::size_t y = static_cast<std::size_t>(doc.year - params.year_min);
        const std::size_t earlier = year_start[y];
        doc.references.reserve(k);

        if (earlier == 0) {
            for (std::size_t r = 0; r < k; ++r) doc.references.push_back("X" + doc.doc_id.substr(1) + "-" + std::to_string(r + 1));
            continue;
        }
        if (earlier < params.refs_min)
            throw std::runtime_error("syngen: infeasible parameters: document " + doc.doc_id + " needs " +
                                     std::to_string(params.refs_min) + " references but only " +
                                     std::to_string(earlier) + " earlier documents exist");

        const auto& pool = by_category[out.planted[i]];
        const std::size_t same = static_cast<std::size_t>(
            std::lower_bound(pool.begin(), pool.end(), static_cast<std::uint32_t>(earlier)) - pool.begin());
        const std::size_t want = std::min(k, earlier);

        chosen.clear();
        std::size_t externals = 0;
        auto taken = [&](std::uint32_t t) { return std::find(chosen.begin(), chosen.end(), t) != chosen.end(); };
        for (std::size_t r = 0; r < want; ++r) {
            const bool intra = rng.chance(params.intra_category_citation_prob);
            std::uint32_t target = 0;
            bool ok = false;
            if (intra) {
                const std::size_t free_same = same - static_cast<std::size_t>(std::count_if(
                                                         chosen.begin(), chosen.end(), [&](std::uint32_t t) {
                                                             return out.planted[t] == out.planted[i];
                                                         }));
                if (free_same == 0) {
                    ++externals;
                    continue;
                }
                for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
                    target = pool[rng.below(same)];
                    ok = !taken(target);
                }
                for (std::size_t s = 0; s < same && !ok; ++s)
                    if (!taken(pool[s])) {
                        target = pool[s];
                        ok = true;
                    }
            } else {
                for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
                    target = static_cast<std::uint32_t>(rng.below(earlier));
                    ok = !taken(target);
                }
                for (std::uint32_t s = 0; s < earlier && !ok; ++s)
                    if (!taken(s)) {
                        target = s;
                        ok = true;
                    }
            }
            chosen.push_back(target);
        }
        for (auto t : chosen) doc.references.push_back(out.documents[t].doc_id);
        for (std::size_t e = 0; e < externals + (k - want); ++e)
            doc.references.push_back("X" + doc.doc_id.substr(1) + "-" + std::to_string(e + 1));
    }
    return out;
}

SyntheticCorpus generate_corpus(const SynParams& params) {
    auto records = generate_records(params);
    Corpus corpus(std::move(records.journals), std::move(records.documents));
    return SyntheticCorpus{std::move(records.scheme), std::move(corpus), std::move(records.planted)};
}

void write_records(const SyntheticRecords& records, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw IoError("cannot write '" + (dir / name).string() + "'");
        return f;
    };
    {
        auto f = open("scheme.csv");
        write_scheme(records.scheme, f);
    }
    {
        auto f = open("journals.jsonl");
        for (const auto& j : records.journals) {
            f << "{\"journal_id\":\"" << j.journal_id << "\",\"asjc_codes\":[";
            for (std::size_t i = 0; i < j.asjc_codes.size(); ++i) f << (i ? "," : "") << '"' << j.asjc_codes[i] << '"';
            f << "]}\n";
        }
    }
    {
        auto f = open("documents.jsonl");
        std::string line;
        for (const auto& d : records.documents) {
            line.clear();
            line += "{\"doc_id\":\"" + d.doc_id + "\",\"journal_id\":\"" + d.journal_id +
                    "\",\"year\":" + std::to_string(d.year) + ",\"doc_type\":\"" + d.doc_type + "\",\"references\":[";
            for (std::size_t i = 0; i < d.references.size(); ++i) {
                if (i) line += ',';
                line += '"';
                line += d.references[i];
                line += '"';
            }
            line += ']';
            if (d.external_citations > 0) line += ",\"external_citations\":" + std::to_string(d.external_citations);
            line += "}\n";
            f << line;
        }
    }
    {
        auto f = open("planted.csv");
        f << "doc_id,category\n";
        for (std::size_t i = 0; i < records.documents.size(); ++i)
            f << records.documents[i].doc_id << ',' << records.scheme.categories()[records.planted[i]].code << '\n';
    }
}

} // namespace citeclass::syngen
