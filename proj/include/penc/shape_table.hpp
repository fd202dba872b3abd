#pragma once

#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "penc/ring.hpp"

namespace penc {

// Arity-shape table over 1 <= a <= a_max, a < b <= b_max. A cell is absent
// when the class has no multiplicative arity and hence forms no ring.
struct ShapeTable {
    std::int64_t a_max;
    std::int64_t b_max;
    std::map<std::pair<std::int64_t, std::int64_t>, std::optional<ArityShape>> cells;

    const std::optional<ArityShape>& cell(std::int64_t a, std::int64_t b) const {
        auto it = cells.find({a, b});
        if (it == cells.end())
            throw ParameterError("cell outside table range");
        return it->second;
    }
};

inline ShapeTable build_table(std::int64_t a_max, std::int64_t b_max) {
    if (a_max < 1 || b_max < 2)
        throw ParameterError("table range needs a_max >= 1 and b_max >= 2");
    ShapeTable t{a_max, b_max, {}};
    for (std::int64_t a = 1; a <= a_max; ++a) {
        for (std::int64_t b = a + 1; b <= b_max; ++b) {
            ArityShape s = arity_shape(CongruenceClass(a, b));
            if (s.n)
                t.cells.emplace(std::make_pair(a, b), s);
            else
                t.cells.emplace(std::make_pair(a, b), std::nullopt);
        }
    }
    return t;
}

enum class TableFormat { text, csv };

namespace detail {

inline std::string shape_cell_text(const ArityShape& s) {
    std::ostringstream os;
    os << "m=" << s.m << " n=" << *s.n << " I=" << s.I << " J=" << to_string(*s.J);
    return os.str();
}

} // namespace detail

// Deterministic render, row-major by a then b. No-ring cells are empty.
inline std::string render_table(const ShapeTable& t, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::csv) {
        out << "a,b,m,n,I,J\n";
        for (const auto& [key, cell] : t.cells) {
            out << key.first << ',' << key.second << ',';
            if (cell)
                out << cell->m << ',' << *cell->n << ',' << cell->I << ','
                    << to_string(*cell->J);
            else
                out << ",,,";
            out << '\n';
        }
        return out.str();
    }

    // Fixed-width grid, one row per a, one column per b.
    std::size_t width = 8;
    for (const auto& [key, cell] : t.cells)
        if (cell)
            width = std::max(width, detail::shape_cell_text(*cell).size());
    out << std::left << std::setw(6) << "a\\b";
    for (std::int64_t b = 2; b <= t.b_max; ++b)
        out << "| " << std::setw(static_cast<int>(width) + 1) << b;
    out << '\n';
    for (std::int64_t a = 1; a <= t.a_max; ++a) {
        out << std::left << std::setw(6) << a;
        for (std::int64_t b = 2; b <= t.b_max; ++b) {
            std::string text;
            if (b > a) {
                const auto& cell = t.cell(a, b);
                if (cell)
                    text = detail::shape_cell_text(*cell);
            }
            out << "| " << std::setw(static_cast<int>(width) + 1) << text;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace penc
