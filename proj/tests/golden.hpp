#pragma once

// Reader for the hand-transcribed case functions in golden/d2e_cases.json.

#include "json.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace golden {

struct CaseTable {
    int m = 0;
    int n_min = 0;
    int n_max = 0;
    std::map<int, int> d_by_n;
};

inline std::map<int, CaseTable> load_cases(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    const auto doc = nlohmann::json::parse(in);
    std::map<int, CaseTable> out;
    for (const auto& t : doc.at("tables")) {
        CaseTable table;
        table.m = t.at("m").get<int>();
        table.n_min = t.at("n_min").get<int>();
        table.n_max = t.at("n_max").get<int>();
        for (const auto& c : t.at("cases")) {
            const int d = c.at("d").get<int>();
            for (const auto& piece : c.at("pieces")) {
                const int first = piece.at(0).get<int>();
                const int last = piece.at(1).is_null() ? table.n_max : piece.at(1).get<int>();
                const int step = piece.at(2).get<int>();
                for (int n = first; n <= last; n += step) {
                    if (!table.d_by_n.emplace(n, d).second) {
                        throw std::runtime_error("golden case overlap at n=" + std::to_string(n));
                    }
                }
            }
        }
        for (int n = table.n_min; n <= table.n_max; ++n) {
            if (!table.d_by_n.contains(n)) {
                throw std::runtime_error("golden case gap at n=" + std::to_string(n));
            }
        }
        out[table.m] = std::move(table);
    }
    return out;
}

inline std::string cases_path()
{
    return std::string(CAPLCD_GOLDEN_DIR) + "/d2e_cases.json";
}

} // namespace golden
