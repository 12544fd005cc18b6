#pragma once

/// On-disk description of a map: a small line-oriented format carrying a field
/// spec, three component polynomials, and optionally an inverse.
///
///     # lines starting with '#' and blank lines are skipped
///     name: quadratic-example
///     field: GF(5)
///     map: x*y | x*y - 2*z^2 | y*z + 3*z^2
///     inverse: 2*x^2 - 2*x*y | ... | ...
///
/// Parsing validates the components over the declared field (homogeneous, one
/// common degree, not all proportional) and stores the canonical printed form
/// of the reduced map, so parse -> print -> parse is the identity. For
/// extension fields the modulus is reconstructed by seeded search; the same
/// seed yields the same field.

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cremona/cremona.hpp"
#include "cremona/parse.hpp"

namespace cremona {

struct MapFile {
    std::string name;  // optional, empty when absent
    std::string field_text;
    FieldSpec field;
    std::array<std::string, 3> map_exprs;
    bool has_inverse = false;
    std::array<std::string, 3> inverse_exprs;
};

/// A map (and optional inverse) realized over a concrete ring.
template <class Ring>
struct TypedMap {
    CremonaMap<Ring> map;
    std::optional<CremonaMap<Ring>> inverse;
};

inline std::string field_spec_to_string(const FieldSpec& spec) {
    switch (spec.kind) {
        case FieldKind::Rationals:
            return "QQ";
        case FieldKind::Prime:
            return "GF(" + std::to_string(spec.p) + ")";
        case FieldKind::Extension:
            return "GF(" + std::to_string(spec.p) + "," + std::to_string(spec.k) + ")";
    }
    throw error("internal: unhandled field kind");
}

template <class Ring>
TypedMap<Ring> mapfile_instantiate(const Ring& R, const MapFile& mf,
                                   std::size_t term_cap = kDefaultTermCap) {
    auto build = [&](const std::array<std::string, 3>& exprs) {
        return map_new(R, hp_parse(R, exprs[0]), hp_parse(R, exprs[1]), hp_parse(R, exprs[2]),
                       term_cap);
    };
    TypedMap<Ring> out{build(mf.map_exprs), std::nullopt};
    if (mf.has_inverse) out.inverse = build(mf.inverse_exprs);
    return out;
}

namespace detail {

inline std::string trim_ws(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::array<std::string, 3> split_components(const std::string& value,
                                                   const std::string& key) {
    std::array<std::string, 3> out;
    std::size_t start = 0, idx = 0;
    for (;;) {
        auto bar = value.find('|', start);
        std::string piece =
            trim_ws(bar == std::string::npos ? value.substr(start) : value.substr(start, bar - start));
        if (idx >= 3 || piece.empty())
            throw parse_error("'" + key + "' needs exactly three '|'-separated polynomials", 0);
        out[idx++] = std::move(piece);
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    if (idx != 3)
        throw parse_error("'" + key + "' needs exactly three '|'-separated polynomials", 0);
    return out;
}

}  // namespace detail

/// Parse the map file format from a string. Throws parse_error on malformed
/// input and precondition_error when the declared field or map is invalid.
inline MapFile mapfile_parse(const std::string& text, u64 seed = 0,
                             std::size_t term_cap = kDefaultTermCap) {
    std::string name, field_txt, map_txt, inv_txt;
    bool saw_field = false, saw_map = false, saw_inv = false, saw_name = false;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim_ws(line);
        if (t.empty() || t[0] == '#') continue;
        auto colon = t.find(':');
        if (colon == std::string::npos)
            throw parse_error("line " + std::to_string(lineno) + ": expected 'key: value'", 0);
        std::string key = detail::trim_ws(t.substr(0, colon));
        std::string value = detail::trim_ws(t.substr(colon + 1));
        auto set = [&](std::string& slot, bool& seen) {
            if (seen)
                throw parse_error("line " + std::to_string(lineno) + ": duplicate '" + key + "'",
                                  0);
            if (value.empty())
                throw parse_error("line " + std::to_string(lineno) + ": empty '" + key + "'", 0);
            slot = value;
            seen = true;
        };
        if (key == "name")
            set(name, saw_name);
        else if (key == "field")
            set(field_txt, saw_field);
        else if (key == "map")
            set(map_txt, saw_map);
        else if (key == "inverse")
            set(inv_txt, saw_inv);
        else
            throw parse_error("line " + std::to_string(lineno) + ": unknown key '" + key + "'", 0);
    }
    if (!saw_field) throw parse_error("missing 'field:' line", 0);
    if (!saw_map) throw parse_error("missing 'map:' line", 0);

    MapFile mf;
    mf.name = name;
    mf.field = field_make(field_txt, seed);
    mf.field_text = field_spec_to_string(mf.field);
    mf.map_exprs = detail::split_components(map_txt, "map");
    if (saw_inv) {
        mf.has_inverse = true;
        mf.inverse_exprs = detail::split_components(inv_txt, "inverse");
    }

    // Validate over the declared field and canonicalize: the stored strings
    // are the printed forms of the reduced, normalized components.
    with_ring(mf.field, [&](const auto& R) {
        auto tm = mapfile_instantiate(R, mf, term_cap);
        for (int i = 0; i < 3; ++i)
            mf.map_exprs[static_cast<std::size_t>(i)] =
                hp_to_string(R, tm.map.f[static_cast<std::size_t>(i)]);
        if (tm.inverse)
            for (int i = 0; i < 3; ++i)
                mf.inverse_exprs[static_cast<std::size_t>(i)] =
                    hp_to_string(R, tm.inverse->f[static_cast<std::size_t>(i)]);
    });
    return mf;
}

inline std::string mapfile_print(const MapFile& mf) {
    std::string out;
    if (!mf.name.empty()) out += "name: " + mf.name + "\n";
    out += "field: " + mf.field_text + "\n";
    out += "map: " + mf.map_exprs[0] + " | " + mf.map_exprs[1] + " | " + mf.map_exprs[2] + "\n";
    if (mf.has_inverse)
        out += "inverse: " + mf.inverse_exprs[0] + " | " + mf.inverse_exprs[1] + " | " +
               mf.inverse_exprs[2] + "\n";
    return out;
}

inline MapFile mapfile_read(const std::string& path, u64 seed = 0,
                            std::size_t term_cap = kDefaultTermCap) {
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot open map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return mapfile_parse(buf.str(), seed, term_cap);
}

inline void mapfile_write(const std::string& path, const MapFile& mf) {
    std::ofstream out(path);
    if (!out) throw precondition_error("cannot write map file: " + path);
    out << mapfile_print(mf);
}

}  // namespace cremona
