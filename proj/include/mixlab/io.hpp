#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixlab/bounds.hpp"
#include "mixlab/diagnostics.hpp"
#include "mixlab/fields.hpp"

namespace mixlab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSeriesHeader =
    "t,m,l,E,D,eps_diss,interp_lhs,interp_rhs,res_energy,res_lwidth,min_omega,"
    "boundary_contamination";

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_series_csv(const std::string& path,
                             const std::vector<DiagnosticsRecord>& series) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-identical reruns
    if (!out) throw std::runtime_error("cannot write " + path);
    out << kSeriesHeader << "\n";
    for (const auto& r : series) {
        out << format_double(r.t) << ',' << format_double(r.m) << ',' << format_double(r.l)
            << ',' << format_double(r.E) << ',' << format_double(r.D) << ','
            << format_double(r.eps_diss) << ',' << format_double(r.interp_lhs) << ','
            << format_double(r.interp_rhs) << ',' << format_double(r.res_energy) << ','
            << format_double(r.res_lwidth) << ',' << format_double(r.min_omega) << ','
            << format_double(r.boundary_contamination) << "\n";
    }
}

inline std::vector<DiagnosticsRecord> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (line != kSeriesHeader)
        throw std::runtime_error(path + ": unexpected CSV header");
    std::vector<DiagnosticsRecord> series;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        if (vals.size() != 12)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 12 columns");
        DiagnosticsRecord r;
        r.t = vals[0];
        r.m = vals[1];
        r.l = vals[2];
        r.E = vals[3];
        r.D = vals[4];
        r.eps_diss = vals[5];
        r.interp_lhs = vals[6];
        r.interp_rhs = vals[7];
        r.res_energy = vals[8];
        r.res_lwidth = vals[9];
        r.min_omega = vals[10];
        r.boundary_contamination = vals[11];
        series.push_back(r);
    }
    return series;
}

inline std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline nlohmann::json verdicts_to_json(const std::vector<BoundVerdict>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) {
        arr.push_back({{"quantity", v.quantity},
                       {"observed", v.observed},
                       {"bound", v.bound},
                       {"tolerance", v.tolerance},
                       {"margin", v.margin},
                       {"pass", v.pass},
                       {"window", {v.window_lo, v.window_hi}}});
    }
    return arr;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return nlohmann::json::parse(in);
}

// --- field snapshots: JSON header + little-endian float64 payload ----------

inline void write_snapshot(const std::string& dir, int sample_index, const ScalarField& omega,
                           double t, double U, std::uint64_t config_hash) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    char stem[32];
    std::snprintf(stem, sizeof(stem), "snap_%06d", sample_index);
    const Grid& g = omega.grid();
    nlohmann::json hdr = {{"schema_version", kSchemaVersion},
                          {"t", t},
                          {"U", U},
                          {"L", g.L()},
                          {"H", g.H()},
                          {"Ny", g.ny()},
                          {"Nz", g.nz()},
                          {"field", "omega"},
                          {"layout", "z-major rows of Ny float64 (little-endian), j = 0 at z = -H"},
                          {"data_file", std::string(stem) + ".bin"},
                          {"config_hash", config_hash}};
    write_json_file(dir + "/" + stem + ".json", hdr);
    std::ofstream bin(dir + "/" + stem + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write snapshot payload");
    bin.write(reinterpret_cast<const char*>(omega.values().data()),
              static_cast<std::streamsize>(omega.values().size() * sizeof(double)));
}

struct Snapshot {
    double t = 0.0, U = 0.0;
    GridPtr grid;
    ScalarField omega;
};

inline Snapshot read_snapshot(const std::string& header_path) {
    nlohmann::json hdr = read_json_file(header_path);
    Snapshot s;
    s.t = hdr.at("t").get<double>();
    s.U = hdr.at("U").get<double>();
    s.grid = std::make_shared<Grid>(hdr.at("L").get<double>(), hdr.at("H").get<double>(),
                                    hdr.at("Ny").get<int>(), hdr.at("Nz").get<int>());
    s.omega = ScalarField(s.grid);
    const std::string dir = std::filesystem::path(header_path).parent_path().string();
    const std::string bin_path =
        (dir.empty() ? std::string(".") : dir) + "/" + hdr.at("data_file").get<std::string>();
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw std::runtime_error("cannot read snapshot payload " + bin_path);
    bin.read(reinterpret_cast<char*>(s.omega.values().data()),
             static_cast<std::streamsize>(s.omega.values().size() * sizeof(double)));
    if (!bin) throw std::runtime_error("snapshot payload truncated: " + bin_path);
    return s;
}

// --- minimal SVG line charts ------------------------------------------------

struct SvgSeries {
    std::string name;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

inline void write_svg_chart(const std::string& path, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel,
                            const std::vector<SvgSeries>& series) {
    const int W = 860, Hpx = 520, ml = 70, mr = 180, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double y) { return Hpx - mb - (y - ymin) / (ymax - ymin) * (Hpx - mt - mb); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hpx
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";
    // axes with 5 ticks each
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        out << "<line x1=\"" << X(xv) << "\" y1=\"" << Y(ymin) << "\" x2=\"" << X(xv)
            << "\" y2=\"" << Y(ymax) << "\" stroke=\"#eeeeee\"/>\n";
        out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(yv) << "\" x2=\"" << X(xmax)
            << "\" y2=\"" << Y(yv) << "\" stroke=\"#eeeeee\"/>\n";
        char tb[32];
        std::snprintf(tb, sizeof(tb), "%.4g", xv);
        out << "<text x=\"" << X(xv) << "\" y=\"" << Hpx - mb + 18
            << "\" text-anchor=\"middle\">" << tb << "</text>\n";
        std::snprintf(tb, sizeof(tb), "%.4g", yv);
        out << "<text x=\"" << ml - 8 << "\" y=\"" << Y(yv) + 4
            << "\" text-anchor=\"end\">" << tb << "</text>\n";
    }
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
        << "\" height=\"" << Hpx - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << Hpx - 12
        << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + Hpx - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + Hpx - mb) / 2
        << ")\">" << ylabel << "</text>\n";

    int legend_row = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
        }
        out << "\"/>\n";
        const int ly = mt + 14 + 18 * legend_row++;
        out << "<line x1=\"" << W - mr + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - mr + 40
            << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) out << " stroke-dasharray=\"6 4\"";
        out << "/>\n<text x=\"" << W - mr + 46 << "\" y=\"" << ly + 4 << "\">" << s.name
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace mixlab
