/// \file atomic_structure.hpp
/// 87Rb D2-line hyperfine structure: sublevel transition strengths,
/// steady-state sublevel distributions under polarized pumping, average
/// dipole moments, and the saturation intensities they imply.

#pragma once

#include <array>
#include <vector>

namespace cloudshape {

/// Squared dipole matrix elements |<F m|e r_q|F' m+q>|^2 between one ground
/// and one excited hyperfine level, in units of the total line strength.
struct TransitionTable {
    int F = 0;   ///< ground hyperfine number
    int Fp = 0;  ///< excited hyperfine number

    /// Strength for ground sublevel m and photon polarization q in {-1,0,1}.
    double strength(int m, int q) const;

    /// Row index helpers for the dense storage.
    std::size_t index(int m, int q) const {
        return static_cast<std::size_t>(m + F) * 3 +
               static_cast<std::size_t>(q + 1);
    }

    std::vector<double> values;  ///< (2F+1) x 3, m-major
};

/// Beam power fractions of the three polarization components, ordered
/// (sigma+, pi, sigma-). Components are non-negative and sum to one.
struct PumpScheme {
    std::array<double, 3> pq{0.5, 0.0, 0.5};

    double fraction(int q) const { return pq[static_cast<std::size_t>(1 - q)]; }
};

/// Probability distribution over the ground sublevels m = -F..F.
struct SublevelPopulations {
    int F = 0;
    std::vector<double> p;  ///< index m + F

    double at(int m) const { return p[static_cast<std::size_t>(m + F)]; }
};

/// How spontaneous decay into the other ground hyperfine level is treated
/// when computing sublevel steady states: fold the branching back into the
/// driven level (renormalize) or keep it as loss and return the
/// survival-conditioned quasi-stationary distribution (include_loss).
enum class LossTreatment { renormalize, include_loss };

/// Initial-distribution choices for effective_isat.
enum class PopulationsMode { uniform, stretched, steady_state };

/// Dipole strengths of the F -> F' transition; valid inputs are F in {1,2}
/// and F' in {0,1,2,3} with |F - F'| <= 1, else InvalidQuantumNumbers.
TransitionTable transition_strengths(int F, int Fp);

/// Average squared dipole moment seen by an ensemble with the given
/// sublevel distribution illuminated by the given polarization mix, in
/// units of the total line strength.
double average_dipole(const TransitionTable& table,
                      const SublevelPopulations& pops,
                      const PumpScheme& scheme);

/// Stationary sublevel distribution of the pumping rate equations. Throws
/// NoSteadyState when the scheme leaves the distribution undetermined
/// (zero coupling or a reducible rate matrix with several fixed points).
SublevelPopulations steady_state_populations(
    int F, int Fp, const PumpScheme& scheme,
    LossTreatment loss = LossTreatment::renormalize);

/// Saturation intensity [W/m^2] for an average squared dipole moment given
/// in line-strength units; the reference transition (strength 1/2) defines
/// 16.7 W/m^2. Throws ZeroCoupling for dbar_sq <= 0.
double saturation_intensity(double dbar_sq);

/// Composition: saturation intensity of F -> F' under the scheme, with the
/// sublevel distribution chosen by mode. [W/m^2]
double effective_isat(int F, int Fp, const PumpScheme& scheme,
                      PopulationsMode mode,
                      LossTreatment loss = LossTreatment::renormalize);

}  // namespace cloudshape
