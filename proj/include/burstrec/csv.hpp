#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "burstrec/experiment.hpp"
#include "burstrec/sensing.hpp"

namespace burstrec {

/// Shortest representation that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    return out;
}

}  // namespace detail

/// One sweep series as rows of sweep metrics next to the theoretical bounds.
inline void emit_sweep_csv(const std::vector<PointResult>& points, SweepVariable variable,
                           std::size_t n_samplers, const std::string& path) {
    if (points.empty()) throw config_error("emit_sweep_csv: no results");
    std::ofstream out = detail::open_output(path);
    out << "sweep_var,value,ne_time,te_time";
    for (std::size_t s = 0; s < n_samplers; ++s) out << ",ne_coeff_g" << (s + 1);
    out << ",te_coeff,detected,miss,admissible\n";
    const char* name = sweep_variable_name(variable);
    for (const auto& r : points) {
        out << name << ',' << format_double(r.value) << ',' << format_double(r.ne_time) << ','
            << format_double(r.te_time);
        for (std::size_t s = 0; s < n_samplers; ++s)
            out << ',' << format_double(s < r.ne_coeff.size() ? r.ne_coeff[s] : 0.0);
        out << ',' << format_double(r.te_coeff) << ',' << r.detected << ',' << r.miss << ','
            << (r.admissible ? 1 : 0) << '\n';
    }
    if (!out) throw config_error("failed while writing " + path);
}

/// Raw comma-split CSV reader used for round-trip checks and plotting.
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string::size_type start = 0;
        while (true) {
            const std::string::size_type pos = line.find(',', start);
            if (pos == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

/// Ground truth and recovered burst locations with per-sampler coefficients,
/// one labelled series per parameter choice.
struct ScatterRow {
    std::string series;
    long index = 0;
    double t = 0.0;
    std::vector<complex> coeffs;
};

inline void emit_scatter_csv(const std::vector<ScatterRow>& rows, std::size_t n_samplers,
                             const std::string& path) {
    if (rows.empty()) throw config_error("emit_scatter_csv: no rows");
    std::ofstream out = detail::open_output(path);
    out << "series,burst,t";
    for (std::size_t s = 0; s < n_samplers; ++s)
        out << ",g" << (s + 1) << "_re,g" << (s + 1) << "_im";
    out << '\n';
    for (const auto& r : rows) {
        out << r.series << ',' << r.index << ',' << format_double(r.t);
        for (std::size_t s = 0; s < n_samplers; ++s) {
            const complex c = s < r.coeffs.size() ? r.coeffs[s] : complex(0.0);
            out << ',' << format_double(c.real()) << ',' << format_double(c.imag());
        }
        out << '\n';
    }
    if (!out) throw config_error("failed while writing " + path);
}

/// Paired measurement stream as one row per sampling instant.
inline void emit_direct_csv(const DirectMeasurements& dm, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    const std::size_t n_samplers = dm.m.size();
    out << "n,t";
    for (std::size_t s = 0; s < n_samplers; ++s)
        out << ",g" << (s + 1) << "_m_re,g" << (s + 1) << "_m_im,g" << (s + 1) << "_mp_re,g"
            << (s + 1) << "_mp_im";
    out << '\n';
    for (std::size_t n = 0; n <= dm.n_max; ++n) {
        out << n << ',' << format_double(static_cast<double>(n) * dm.beta);
        for (std::size_t s = 0; s < n_samplers; ++s)
            out << ',' << format_double(dm.m[s][n].real()) << ','
                << format_double(dm.m[s][n].imag()) << ',' << format_double(dm.mp[s][n].real())
                << ',' << format_double(dm.mp[s][n].imag());
        out << '\n';
    }
    if (!out) throw config_error("failed while writing " + path);
}

/// Windowed measurements as one row per window, all modes side by side.
inline void emit_fourier_csv(const FourierMeasurements& fm, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    const std::size_t n_samplers = fm.mhat.size();
    out << "ell";
    for (std::size_t s = 0; s < n_samplers; ++s)
        for (int k = 0; k <= 2; ++k)
            out << ",g" << (s + 1) << "_k" << k << "_re,g" << (s + 1) << "_k" << k << "_im";
    out << '\n';
    for (std::size_t ell = 1; ell <= fm.ell_max; ++ell) {
        out << ell;
        for (std::size_t s = 0; s < n_samplers; ++s)
            for (int k = 0; k <= 2; ++k) {
                const complex c = fm.mhat[s][static_cast<std::size_t>(k)][ell - 1];
                out << ',' << format_double(c.real()) << ',' << format_double(c.imag());
            }
        out << '\n';
    }
    if (!out) throw config_error("failed while writing " + path);
}

}  // namespace burstrec
