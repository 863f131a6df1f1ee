#pragma once

#include <map>
#include <string>

#include "zsm/constants.hpp"
#include "zsm/fft.hpp"
#include "zsm/wavefunction.hpp"

namespace zsm {

// Post-Newtonian correction terms of the two-particle interaction numerator:
// T_i = (grad_i S)^2 / 2 m_i and Q_i = -(hbar^2/2 m_i) lap_i sqrt(rho)/sqrt(rho)
// combined as m_i T_j / c^2, m_i Q_j / c^2, T_1 T_2 / c^4, T_i Q_j / c^4 and
// Q_1 Q_2 / c^4. ratio = max |sum of corrections| / (m_1 m_2).
struct CorrectionFields {
    std::map<std::string, dvec> terms;
    dvec sum;                 // all correction terms pointwise
    double leading_ratio = 0; // max |sum| / (m1 m2)
    std::vector<bool> floored;
};

CorrectionFields nonlinear_corrections(const WaveState& two_particle, const Constants& c,
                                       double floor_rel = 1e-12);

} // namespace zsm
