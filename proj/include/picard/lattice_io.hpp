#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "picard/orbit.hpp"

namespace picard {

using json = nlohmann::json;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All numeric output goes through %.17g: lossless for doubles and byte
// reproducible across runs.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// CSV complex literal "re+imi" / "re-imi".
inline std::string format_complex(cplx z) {
    char buf[88];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

inline cplx parse_complex(const std::string& text) {
    if (text.empty() || text.back() != 'i') throw io_error("parse_complex: missing trailing i");
    const std::string body = text.substr(0, text.size() - 1);
    // The imaginary part starts at the last sign not belonging to an exponent.
    for (std::size_t pos = body.size(); pos-- > 1;) {
        const char c = body[pos];
        if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
            return cplx{std::stod(body.substr(0, pos)), std::stod(body.substr(pos))};
        }
    }
    throw io_error("parse_complex: no imaginary part in '" + text + "'");
}

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw io_error("complex entries must be [re, im] arrays");
    return cplx{j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const Mat3& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) {
        json row = json::array();
        for (int c = 0; c < 3; ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline Mat3 matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw io_error("generator must be a 3x3 array");
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
        if (!j[static_cast<std::size_t>(r)].is_array() || j[static_cast<std::size_t>(r)].size() != 3)
            throw io_error("generator must be a 3x3 array");
        for (int c = 0; c < 3; ++c)
            m(r, c) = complex_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
    return m;
}

// Lattice document before SU(2,1) validation; cmd_validate reports on these.
struct RawLattice {
    std::string name;
    std::vector<Mat3> generators;
    bool include_inverses = true;
    std::optional<double> injectivity_radius_override;
};

inline RawLattice raw_lattice_from_json(const json& j) {
    RawLattice raw;
    raw.name = j.value("name", std::string{"unnamed"});
    if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty())
        throw io_error("lattice document needs a nonempty 'generators' array");
    for (const auto& g : j["generators"]) raw.generators.push_back(matrix_from_json(g));
    raw.include_inverses = j.value("include_inverses", true);
    if (j.contains("injectivity_radius_override"))
        raw.injectivity_radius_override = j["injectivity_radius_override"].get<double>();
    return raw;
}

inline LatticeSpec lattice_from_raw(const RawLattice& raw) {
    std::vector<GroupElement> gens;
    gens.reserve(raw.generators.size());
    for (const auto& m : raw.generators) gens.emplace_back(m);
    return LatticeSpec{raw.name, std::move(gens), raw.include_inverses,
                       raw.injectivity_radius_override};
}

inline json lattice_to_json(const LatticeSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["generators"] = json::array();
    for (const auto& g : spec.generators) j["generators"].push_back(matrix_to_json(g.matrix()));
    j["include_inverses"] = spec.include_inverses;
    if (spec.injectivity_radius_override)
        j["injectivity_radius_override"] = *spec.injectivity_radius_override;
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    return json::parse(in);  // json::parse_error carries byte position
}

inline RawLattice load_raw_lattice(const std::string& path) {
    return raw_lattice_from_json(load_json_file(path));
}

inline LatticeSpec load_lattice(const std::string& path) {
    return lattice_from_raw(load_raw_lattice(path));
}

// --points accepts a JSON file ([[ [re,im], [re,im] ], ...]) or an inline
// "re,im,re,im;re,im,re,im" list.
inline std::vector<BallPoint> parse_points_json(const json& j) {
    std::vector<BallPoint> points;
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw io_error("each point must be [[re,im],[re,im]]");
        points.emplace_back(complex_from_json(entry[0]), complex_from_json(entry[1]));
    }
    if (points.empty()) throw io_error("empty point list");
    return points;
}

inline std::vector<BallPoint> parse_points_inline(const std::string& text) {
    std::vector<BallPoint> points;
    std::stringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        if (group.empty()) continue;
        std::stringstream fields(group);
        std::string field;
        std::vector<double> vals;
        while (std::getline(fields, field, ',')) vals.push_back(std::stod(field));
        if (vals.size() != 4)
            throw io_error("inline points need four comma-separated reals per point");
        points.emplace_back(cplx{vals[0], vals[1]}, cplx{vals[2], vals[3]});
    }
    if (points.empty()) throw io_error("empty point list");
    return points;
}

inline std::string word_to_string(const std::vector<int>& word) {
    if (word.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(word[i]);
    }
    return out;
}

// One table cell; complex values render as "re+imi" literals in CSV and as
// [re, im] arrays in JSON, both lossless at double precision.
struct Cell {
    enum class Kind { text, integer, real, cx } kind = Kind::text;
    std::string text;
    long long integer = 0;
    double real = 0.0;
    cplx z{};

    static Cell of(std::string s) { return Cell{Kind::text, std::move(s), 0, 0.0, {}}; }
    static Cell of(const char* s) { return of(std::string{s}); }
    static Cell of(long long v) { return Cell{Kind::integer, {}, v, 0.0, {}}; }
    static Cell of(int v) { return of(static_cast<long long>(v)); }
    static Cell of(double v) { return Cell{Kind::real, {}, 0, v, {}}; }
    static Cell of(cplx v) { return Cell{Kind::cx, {}, 0, 0.0, v}; }
    static Cell of(bool v) { return of(std::string{v ? "true" : "false"}); }

    std::string csv() const {
        switch (kind) {
            case Kind::text: return text;
            case Kind::integer: return std::to_string(integer);
            case Kind::real: return format_double(real);
            case Kind::cx: return format_complex(z);
        }
        return {};
    }

    json to_json() const {
        switch (kind) {
            case Kind::text: return json(text);
            case Kind::integer: return json(integer);
            case Kind::real: return json(real);
            case Kind::cx: return complex_to_json(z);
        }
        return {};
    }
};

// Fixed-schema table; the CSV and JSON renderings mirror the same cells.
struct Table {
    std::vector<std::string> comments;  // emitted as leading '# ' lines
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    std::string to_csv() const {
        std::string out;
        for (const auto& c : comments) out += "# " + c + "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            out += (i ? "," : "# columns: ") + columns[i];
        out += "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i].csv();
            out += "\n";
        }
        return out;
    }

    std::string to_json_text() const {
        json j;
        j["comments"] = comments;
        j["columns"] = columns;
        j["rows"] = json::array();
        for (const auto& row : rows) {
            json jr = json::array();
            for (const auto& cell : row) jr.push_back(cell.to_json());
            j["rows"].push_back(jr);
        }
        return j.dump(2) + "\n";
    }
};

inline Table orbit_table(const Orbit& orbit, const InjectivityEstimate* estimate = nullptr) {
    Table t;
    t.comments.push_back("lattice: " + orbit.spec.name);
    t.comments.push_back("center: " + format_complex(orbit.center.z1) + " " +
                         format_complex(orbit.center.z2));
    t.comments.push_back("base: " + format_complex(orbit.base.z1) + " " +
                         format_complex(orbit.base.z2));
    t.comments.push_back("max_word_length: " + std::to_string(orbit.max_word_length));
    t.comments.push_back("truncation_radius: " + format_double(orbit.truncation_radius));
    if (estimate)
        t.comments.push_back("injectivity_estimate: " + format_double(estimate->value) +
                             (estimate->torsion_suspected ? " (torsion suspected)" : ""));
    t.columns = {"word", "dist", "image1", "image2"};
    for (const auto& e : orbit.elements)
        t.rows.push_back({Cell::of(word_to_string(e.word)), Cell::of(e.dist),
                          Cell::of(e.image.z1), Cell::of(e.image.z2)});
    return t;
}

// Write-to-temp-then-rename so partially written output never replaces a
// previous result.
inline void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw io_error("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw io_error("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace picard
