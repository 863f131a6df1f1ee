#pragma once

#include <stdexcept>
#include <vector>

namespace zsm {

// Physical constants for a run. Natural units hbar = m = 1 by default;
// the Bohr-atom experiments override with SI values.
struct Constants {
    double hbar = 1.0;
    std::vector<double> masses = {1.0};
    double G = 1.0;   // gravitational coupling
    double k_e = 1.0; // electrostatic coupling
    double c = 1.0;   // enters rest-energy and noise-kernel terms only

    double mass(int i) const { return masses.at(static_cast<std::size_t>(i)); }

    void validate() const {
        if (!(hbar > 0) || !(G > 0) || !(k_e > 0) || !(c > 0))
            throw std::invalid_argument("constants: all couplings must be strictly positive");
        for (double m : masses)
            if (!(m > 0))
                throw std::invalid_argument("constants: masses must be strictly positive");
    }
};

// SI values used by the Bohr-atom module (CODATA 2018).
struct SiConstants {
    static constexpr double hbar = 1.054571817e-34;    // J s
    static constexpr double m_e = 9.1093837015e-31;    // kg
    static constexpr double e = 1.602176634e-19;       // C
    static constexpr double eps0 = 8.8541878128e-12;   // F/m
    static constexpr double eV = 1.602176634e-19;      // J
    static constexpr double c = 2.99792458e8;          // m/s
};

} // namespace zsm
