#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "fcs/matrix.hpp"

namespace fcs {

// Single isolated resonance coupled equally to all N channels:
//   S_mk(E) = e^{i delta} [ delta_mk - (i Gamma / N) / ((E - E_res) + i Gamma/2) ].
// Exactly unitary at every real energy. Energies in units of eps0.
struct BreitWigner {
    double resonance_energy = 0.0;
    double width = 0.0; // Gamma
    double global_phase = 0.0;
};

// Energy-independent unitary matrix, e.g. a beam splitter.
struct ConstantUnitary {
    ComplexMatrix u;
};

// Pure per-channel phases; no mixing at all.
struct DiagonalPhases {
    std::vector<double> phases;
};

using ScattererModel = std::variant<BreitWigner, ConstantUnitary, DiagonalPhases>;

inline double unitarity_defect(const ComplexMatrix& s) {
    return max_abs_diff_from_identity(s.adjoint() * s);
}

inline void validate_scatterer(const ScattererModel& model, std::size_t num_channels) {
    if (const auto* bw = std::get_if<BreitWigner>(&model)) {
        if (!(bw->width > 0.0)) throw config_error("Breit-Wigner width must be positive");
        return;
    }
    if (const auto* cu = std::get_if<ConstantUnitary>(&model)) {
        if (!cu->u.is_square() || cu->u.rows() != num_channels)
            throw config_error("constant scatterer matrix must be N x N");
        if (unitarity_defect(cu->u) > 1e-12)
            throw config_error("constant scatterer matrix is not unitary within 1e-12");
        return;
    }
    const auto& dp = std::get<DiagonalPhases>(model);
    if (dp.phases.size() != num_channels)
        throw config_error("diagonal scatterer needs one phase per channel");
}

// S-matrix at total energy e_total (units of eps0).
inline ComplexMatrix s_matrix(const ScattererModel& model, double e_total,
                              std::size_t num_channels) {
    if (const auto* bw = std::get_if<BreitWigner>(&model)) {
        const cd phase = std::polar(1.0, bw->global_phase);
        const cd lorentz = cd(0.0, bw->width / double(num_channels)) /
                           cd(e_total - bw->resonance_energy, 0.5 * bw->width);
        ComplexMatrix s(num_channels, num_channels);
        for (std::size_t m = 0; m < num_channels; ++m)
            for (std::size_t k = 0; k < num_channels; ++k)
                s(m, k) = phase * ((m == k ? cd(1.0) : cd(0.0)) - lorentz);
        return s;
    }
    if (const auto* cu = std::get_if<ConstantUnitary>(&model)) {
        if (cu->u.rows() != num_channels)
            throw dimension_error("constant scatterer has the wrong channel count");
        return cu->u;
    }
    const auto& dp = std::get<DiagonalPhases>(model);
    if (dp.phases.size() != num_channels)
        throw dimension_error("diagonal scatterer has the wrong channel count");
    ComplexMatrix s(num_channels, num_channels);
    for (std::size_t k = 0; k < num_channels; ++k) s(k, k) = std::polar(1.0, dp.phases[k]);
    return s;
}

// Width of the S-matrix pole nearest the real axis, if the model has one.
// The quadrature node budget uses it to resolve the resonance structure.
inline std::optional<double> pole_width(const ScattererModel& model) {
    if (const auto* bw = std::get_if<BreitWigner>(&model)) return bw->width;
    return std::nullopt;
}

} // namespace fcs
