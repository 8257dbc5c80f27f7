#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "fcs/counting.hpp"
#include "fcs/errors.hpp"
#include "fcs/overlap.hpp"

namespace fcs {

// Shortest decimal string that parses back to the same double. NaN prints
// as "nan" (used for undefined fermion columns).
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    return out;
}

inline void write_comments(std::ofstream& out, const std::vector<std::string>& comments) {
    for (const auto& line : comments) out << "# " << line << "\n";
}

} // namespace detail

inline void write_csv(const std::string& path, const std::vector<std::string>& comments,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out = detail::open_output(path);
    detail::write_comments(out, comments);
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw dimension_error("csv row width does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << "\n";
    }
}

inline void write_distribution_csv(const std::string& path,
                                   const std::vector<std::string>& comments,
                                   const CountingDistribution& dist) {
    std::ofstream out = detail::open_output(path);
    detail::write_comments(out, comments);
    out << "# kind = " << to_string(dist.kind) << ", particles = " << dist.num_particles
        << ", norm_residual = " << format_double(dist.norm_residual) << "\n";
    for (std::size_t m = 1; m <= dist.num_channels; ++m) out << "n_" << m << ",";
    out << "probability\n";
    for (const auto& [n, w] : dist.prob) {
        for (int v : n) out << v << ",";
        out << format_double(w) << "\n";
    }
}

inline void write_overlaps_csv(const std::string& path, const OverlapSet& ov) {
    std::ofstream out = detail::open_output(path);
    out << "# overlap matrices in the sorted mode basis; matrix 0 is the input "
           "Gram matrix, matrix m >= 1 is the outgoing matrix for channel m\n";
    out << "# quadrature: nodes = " << ov.report.nodes
        << ", doubling_residual = " << format_double(ov.report.doubling_residual)
        << ", completeness_residual = " << format_double(ov.report.unitarity_residual)
        << ", energy window = [" << format_double(ov.report.energy_lo) << ", "
        << format_double(ov.report.energy_hi) << "]\n";
    out << "# mode order (row index: source mode, channel, effective time):\n";
    for (std::size_t i = 0; i < ov.mode_order.size(); ++i)
        out << "#   " << i << ": mode " << ov.mode_order[i].original_index + 1 << ", channel "
            << ov.mode_order[i].channel + 1 << ", time " << format_double(ov.mode_order[i].time)
            << "\n";
    out << "matrix,row,col,re,im\n";
    auto dump = [&](int id, const ComplexMatrix& m) {
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                out << id << "," << r << "," << c << "," << format_double(m(r, c).real()) << ","
                    << format_double(m(r, c).imag()) << "\n";
    };
    dump(0, ov.input);
    for (std::size_t m = 0; m < ov.outgoing.size(); ++m) dump(int(m) + 1, ov.outgoing[m]);
}

namespace detail {

inline std::string channel_label(const std::vector<int>& channels) {
    std::string s;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (i) s += "+";
        s += std::to_string(channels[i] + 1);
    }
    return s;
}

} // namespace detail

inline void write_audit_csv(const std::string& path, const std::vector<std::string>& comments,
                            const InequalityReport& report) {
    std::ofstream out = detail::open_output(path);
    detail::write_comments(out, comments);
    out << "# input_max_dev = " << format_double(report.input_offdiag_max)
        << ", uncorrelated = " << (report.uncorrelated ? 1 : 0)
        << ", bounds_asserted = " << (report.asserted ? 1 : 0)
        << ", fermion_defined = " << (report.fermion_defined ? 1 : 0) << "\n";
    out << "bound,channels,boson,dp,fermion,boson_margin,fermion_margin,holds\n";
    for (const auto& e : report.entries) {
        out << (e.all_particles ? "all" : "none") << "," << detail::channel_label(e.channels)
            << "," << format_double(e.boson) << "," << format_double(e.dp) << ","
            << format_double(e.fermion) << "," << format_double(e.boson_margin) << ","
            << format_double(e.fermion_margin) << "," << (e.holds() ? 1 : 0) << "\n";
    }
}

inline std::string audit_table(const InequalityReport& report) {
    std::ostringstream out;
    out << "input max deviation from identity: " << format_double(report.input_offdiag_max)
        << (report.uncorrelated ? " (uncorrelated: bounds asserted)"
                                : " (correlated: bounds reported only)")
        << "\n";
    if (!report.fermion_defined)
        out << "fermion functional is singular here; fermion columns are nan\n";
    out << std::left << std::setw(6) << "bound" << std::setw(10) << "channels" << std::right
        << std::setw(14) << "boson" << std::setw(14) << "dp" << std::setw(14) << "fermion"
        << std::setw(14) << "b_margin" << std::setw(14) << "f_margin" << "  holds\n";
    for (const auto& e : report.entries) {
        out << std::left << std::setw(6) << (e.all_particles ? "all" : "none") << std::setw(10)
            << detail::channel_label(e.channels) << std::right << std::fixed
            << std::setprecision(8) << std::setw(14) << e.boson << std::setw(14) << e.dp
            << std::setw(14) << e.fermion << std::setw(14) << e.boson_margin << std::setw(14)
            << e.fermion_margin << "  " << (e.holds() ? "yes" : "NO") << "\n";
        out.unsetf(std::ios::fixed);
    }
    return out.str();
}

} // namespace fcs
