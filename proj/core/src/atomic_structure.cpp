/// \file atomic_structure.cpp
/// Hyperfine transition strengths and pumping steady states on the 87Rb D2
/// line (J = 1/2 -> J' = 3/2, nuclear spin 3/2).

#include "cloudshape/atomic_structure.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>

#include "cloudshape/errors.hpp"
#include "cloudshape/wigner.hpp"

namespace cloudshape {

namespace {

constexpr double kJg = 0.5;        // ground electronic angular momentum
constexpr double kJe = 1.5;        // excited electronic angular momentum
constexpr double kNuclearSpin = 1.5;
constexpr double kIsatReference = 16.7;  // cycling-transition value [W/m^2]
constexpr double kReferenceDipoleSq = 0.5;

void check_levels(int F, int Fp) {
    if (F < 1 || F > 2 || Fp < 0 || Fp > 3 || std::abs(F - Fp) > 1) {
        throw InvalidQuantumNumbers(
            "atomic_structure: level pair outside the D2 manifold");
    }
}

/// Relative line strength of the F -> F' pair within the D2 line.
double pair_strength(int F, int Fp) {
    const double sixj = wigner_6j(kJg, kJe, 1.0, Fp, F, kNuclearSpin);
    return (2.0 * Fp + 1.0) * (2.0 * kJg + 1.0) * sixj * sixj;
}

/// Raw sublevel strength |<F m|e r_q|F' m+q>|^2 in line-strength units.
double sublevel_strength(int F, int Fp, int m, int q) {
    if (std::abs(m) > F || std::abs(m + q) > Fp) return 0.0;
    const double threej = wigner_3j(Fp, 1.0, F, m + q, -q, -m);
    return pair_strength(F, Fp) * (2.0 * F + 1.0) * threej * threej;
}

/// Pumping generator over the ground sublevels of F: excitation per the
/// scheme, spontaneous return per the branching of the chosen treatment.
/// Rates are per unit line strength; only ratios matter for fixed points.
Eigen::MatrixXd pump_generator(int F, int Fp, const PumpScheme& scheme,
                               LossTreatment loss, bool& any_coupling) {
    const int n = 2 * F + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
    const int other_f = (F == 2) ? 1 : 2;
    any_coupling = false;

    for (int m = -F; m <= F; ++m) {
        for (int q = -1; q <= 1; ++q) {
            const double exc = scheme.fraction(q) * sublevel_strength(F, Fp, m, q);
            if (exc <= 0.0) continue;
            any_coupling = true;
            const int mp = m + q;

            double back_total = 0.0;
            for (int n2 = -F; n2 <= F; ++n2) {
                back_total += sublevel_strength(F, Fp, n2, mp - n2);
            }
            double denom = back_total;
            if (loss == LossTreatment::include_loss) {
                for (int n1 = -other_f; n1 <= other_f; ++n1) {
                    denom += sublevel_strength(other_f, Fp, n1, mp - n1);
                }
            }
            if (denom <= 0.0) continue;

            gen(m + F, m + F) -= exc;
            for (int n2 = -F; n2 <= F; ++n2) {
                const double back = sublevel_strength(F, Fp, n2, mp - n2);
                if (back > 0.0) gen(n2 + F, m + F) += exc * back / denom;
            }
        }
    }
    return gen;
}

SublevelPopulations normalize(int F, Eigen::VectorXd v) {
    // A stationary distribution must be single-signed; fix the sign and
    // reject vectors with genuinely mixed components.
    double pos = 0.0, neg = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        pos = std::max(pos, v(i));
        neg = std::min(neg, v(i));
    }
    if (-neg > pos) v = -v;
    const double scale = v.sum();
    if (scale <= 0.0) {
        throw NoSteadyState("steady_state_populations: degenerate kernel");
    }
    v /= scale;
    SublevelPopulations pops;
    pops.F = F;
    pops.p.resize(static_cast<std::size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) {
        if (v(i) < -1e-10) {
            throw NoSteadyState(
                "steady_state_populations: mixed-sign stationary vector");
        }
        pops.p[static_cast<std::size_t>(i)] = std::max(0.0, v(i));
    }
    return pops;
}

}  // namespace

double TransitionTable::strength(int m, int q) const {
    if (std::abs(m) > F || q < -1 || q > 1) return 0.0;
    return values[index(m, q)];
}

TransitionTable transition_strengths(int F, int Fp) {
    check_levels(F, Fp);
    TransitionTable table;
    table.F = F;
    table.Fp = Fp;
    table.values.assign(static_cast<std::size_t>(2 * F + 1) * 3, 0.0);
    for (int m = -F; m <= F; ++m) {
        for (int q = -1; q <= 1; ++q) {
            table.values[table.index(m, q)] = sublevel_strength(F, Fp, m, q);
        }
    }
    return table;
}

double average_dipole(const TransitionTable& table,
                      const SublevelPopulations& pops,
                      const PumpScheme& scheme) {
    if (pops.F != table.F) {
        throw InvalidQuantumNumbers(
            "average_dipole: population distribution for a different F");
    }
    double sum = 0.0;
    for (int m = -table.F; m <= table.F; ++m) {
        for (int q = -1; q <= 1; ++q) {
            sum += pops.at(m) * scheme.fraction(q) * table.strength(m, q);
        }
    }
    return sum;
}

SublevelPopulations steady_state_populations(int F, int Fp,
                                             const PumpScheme& scheme,
                                             LossTreatment loss) {
    check_levels(F, Fp);
    bool any_coupling = false;
    const Eigen::MatrixXd gen =
        pump_generator(F, Fp, scheme, loss, any_coupling);
    if (!any_coupling) {
        throw NoSteadyState("steady_state_populations: no optical coupling");
    }

    if (loss == LossTreatment::renormalize) {
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(gen);
        const Eigen::MatrixXd kernel = lu.kernel();
        if (lu.dimensionOfKernel() != 1) {
            throw NoSteadyState(
                "steady_state_populations: reducible rate matrix, fixed "
                "point not unique");
        }
        return normalize(F, kernel.col(0));
    }

    const Eigen::EigenSolver<Eigen::MatrixXd> solver(gen);
    int best = 0;
    for (int i = 1; i < gen.rows(); ++i) {
        if (solver.eigenvalues()(i).real() >
            solver.eigenvalues()(best).real()) {
            best = i;
        }
    }
    const auto column = solver.eigenvectors().col(best);
    Eigen::VectorXd v(gen.rows());
    for (int i = 0; i < gen.rows(); ++i) {
        if (std::abs(column(i).imag()) > 1e-9 * std::abs(column(i).real()) &&
            std::abs(column(i).imag()) > 1e-12) {
            throw NoSteadyState(
                "steady_state_populations: complex dominant mode");
        }
        v(i) = column(i).real();
    }
    return normalize(F, v);
}

double saturation_intensity(double dbar_sq) {
    if (dbar_sq <= 0.0) {
        throw ZeroCoupling("saturation_intensity: vanishing dipole moment");
    }
    return kIsatReference * kReferenceDipoleSq / dbar_sq;
}

double effective_isat(int F, int Fp, const PumpScheme& scheme,
                      PopulationsMode mode, LossTreatment loss) {
    check_levels(F, Fp);
    SublevelPopulations pops;
    pops.F = F;
    const std::size_t n = static_cast<std::size_t>(2 * F + 1);
    switch (mode) {
        case PopulationsMode::uniform:
            pops.p.assign(n, 1.0 / static_cast<double>(n));
            break;
        case PopulationsMode::stretched:
            pops.p.assign(n, 0.0);
            pops.p[n - 1] = 1.0;
            break;
        case PopulationsMode::steady_state:
            pops = steady_state_populations(F, Fp, scheme, loss);
            break;
    }
    const TransitionTable table = transition_strengths(F, Fp);
    return saturation_intensity(average_dipole(table, pops, scheme));
}

}  // namespace cloudshape
