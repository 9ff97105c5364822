/// \file test_atoms.cpp
/// Tests for the angular-momentum coefficients and the hyperfine pumping
/// model: Wigner symbols, sublevel transition strengths, steady-state
/// sublevel distributions, and effective saturation intensities. Exact
/// fractions were derived independently with computer algebra.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "cloudshape/atomic_structure.hpp"
#include "cloudshape/errors.hpp"
#include "cloudshape/wigner.hpp"
#include "test_util.hpp"

using namespace cloudshape;
using testutil::rel_err;

namespace {

PumpScheme scheme_sigma_pm() { return PumpScheme{{0.5, 0.0, 0.5}}; }
PumpScheme scheme_sigma_plus() { return PumpScheme{{1.0, 0.0, 0.0}}; }
PumpScheme scheme_pi() { return PumpScheme{{0.0, 1.0, 0.0}}; }

SublevelPopulations delta_pops(int F, int m) {
    SublevelPopulations pops;
    pops.F = F;
    pops.p.assign(static_cast<std::size_t>(2 * F + 1), 0.0);
    pops.p[static_cast<std::size_t>(m + F)] = 1.0;
    return pops;
}

}  // namespace

TEST_CASE("Wigner 3j matches exact algebraic references") {
    struct Ref {
        double j1, j2, j3, m1, m2, m3, value;
    };
    const Ref refs[] = {
        {1, 1, 0, 0, 0, 0, -0.5773502691896257},            // -1/sqrt(3)
        {1, 1, 2, 1, -1, 0, 0.18257418583505536},           // sqrt(30)/30
        {2, 1, 2, 2, -1, -1, 0.2581988897471611},           // sqrt(15)/15
        {1.5, 1, 0.5, 0.5, 0, -0.5, 0.408248290463863},     // sqrt(6)/6
    };
    for (const Ref& r : refs) {
        const double got = wigner_3j(r.j1, r.j2, r.j3, r.m1, r.m2, r.m3);
        CAPTURE(r.j1);
        CAPTURE(r.m1);
        CHECK(rel_err(got, r.value) < 1e-13);
    }
    CHECK(std::abs(wigner_3j(3, 2, 1, 1, 1, -2)) < 1e-15);
}

TEST_CASE("Wigner 3j respects selection rules") {
    CHECK(wigner_3j(1, 1, 1, 1, 1, -2) == 0.0);   // m sum nonzero
    CHECK(wigner_3j(1, 1, 3, 0, 0, 0) == 0.0);    // triangle violated
    CHECK(wigner_3j(1, 1, 1, 0, 0, 0) == 0.0);    // odd parity, all m zero
    CHECK(wigner_3j(0.5, 0.5, 2, 0.5, -0.5, 0) == 0.0);
}

TEST_CASE("Wigner 3j symmetry relations") {
    const double base = wigner_3j(2, 1, 2, 2, -1, -1);
    // Even (cyclic) column permutation leaves the symbol unchanged.
    CHECK(rel_err(wigner_3j(1, 2, 2, -1, -1, 2), base) < 1e-13);
    // Odd permutation and m negation both flip the sign for odd j1+j2+j3.
    CHECK(rel_err(wigner_3j(1, 2, 2, -1, 2, -1), -base) < 1e-13);
    CHECK(rel_err(wigner_3j(2, 1, 2, -2, 1, 1), -base) < 1e-13);
}

TEST_CASE("Wigner 3j rejects malformed quantum numbers") {
    CHECK_THROWS_AS(wigner_3j(-1, 1, 1, 0, 0, 0), InvalidQuantumNumbers);
    CHECK_THROWS_AS(wigner_3j(1, 1, 1, 2, 0, -2), InvalidQuantumNumbers);
    CHECK_THROWS_AS(wigner_3j(1, 1, 1, 0.3, 0, -0.3), InvalidQuantumNumbers);
    CHECK_THROWS_AS(wigner_3j(1, 1, 1, 0.5, 0, -0.5), InvalidQuantumNumbers);
}

TEST_CASE("Wigner 6j matches exact algebraic references") {
    struct Ref {
        double j1, j2, j3, j4, j5, j6, value;
    };
    const Ref refs[] = {
        {1, 1, 1, 1, 1, 1, 1.0 / 6.0},
        {2, 2, 2, 2, 2, 2, -3.0 / 70.0},
        {0.5, 1.5, 1, 3, 2, 1.5, 0.22360679774997896},    // sqrt(5)/10
        {0.5, 1.5, 1, 2, 2, 1.5, -0.15811388300841897},   // -sqrt(10)/20
        {1, 2, 1, 2, 1, 2, 0.15275252316519466},          // sqrt(21)/30
    };
    for (const Ref& r : refs) {
        const double got = wigner_6j(r.j1, r.j2, r.j3, r.j4, r.j5, r.j6);
        CAPTURE(r.j1);
        CAPTURE(r.j4);
        CHECK(rel_err(got, r.value) < 1e-13);
    }
}

TEST_CASE("Wigner 6j symmetry and triangle conditions") {
    const double base = wigner_6j(0.5, 1.5, 1, 3, 2, 1.5);
    CHECK(rel_err(wigner_6j(1.5, 0.5, 1, 2, 3, 1.5), base) < 1e-13);
    CHECK(rel_err(wigner_6j(3, 2, 1, 0.5, 1.5, 1.5), base) < 1e-13);
    CHECK(wigner_6j(1, 1, 3, 1, 1, 1) == 0.0);
    CHECK_THROWS_AS(wigner_6j(1, 1, 1, 1, 1, 0.3), InvalidQuantumNumbers);
}

TEST_CASE("transition strengths reproduce the known sublevel tables") {
    const TransitionTable t23 = transition_strengths(2, 3);
    const double row23[] = {1.0 / 30.0, 0.1, 0.2, 1.0 / 3.0, 0.5};
    for (int m = -2; m <= 2; ++m) {
        CHECK(rel_err(t23.strength(m, +1), row23[m + 2]) < 1e-12);
    }

    const TransitionTable t22 = transition_strengths(2, 2);
    const double row22[] = {1.0 / 12.0, 0.125, 0.125, 1.0 / 12.0, 0.0};
    for (int m = -2; m <= 1; ++m) {
        CHECK(rel_err(t22.strength(m, +1), row22[m + 2]) < 1e-12);
    }
    CHECK(t22.strength(2, +1) == 0.0);

    // Cycling transition carries half the line strength.
    CHECK(rel_err(t23.strength(2, +1), 0.5) < 1e-12);
}

TEST_CASE("transition strengths are symmetric and respect sublevel bounds") {
    for (int Fp : {1, 2, 3}) {
        const TransitionTable t = transition_strengths(2, Fp);
        for (int m = -2; m <= 2; ++m) {
            for (int q = -1; q <= 1; ++q) {
                CHECK(t.strength(m, q) == t.strength(-m, -q));
                if (std::abs(m + q) > Fp) CHECK(t.strength(m, q) == 0.0);
            }
        }
    }
    const TransitionTable t21 = transition_strengths(2, 1);
    CHECK(rel_err(t21.strength(0, 0), 1.0 / 60.0) < 1e-12);
    CHECK(t21.strength(-2, 0) == 0.0);
    CHECK(t21.strength(2, 0) == 0.0);
}

TEST_CASE("strengths summed over excited levels exhaust the line") {
    for (int m = -2; m <= 2; ++m) {
        double total = 0.0;
        for (int Fp : {1, 2, 3}) {
            const TransitionTable t = transition_strengths(2, Fp);
            for (int q = -1; q <= 1; ++q) total += t.strength(m, q);
        }
        CHECK(rel_err(total, 1.0) < 1e-12);
    }
    for (int m = -1; m <= 1; ++m) {
        double total = 0.0;
        for (int Fp : {0, 1, 2}) {
            const TransitionTable t = transition_strengths(1, Fp);
            for (int q = -1; q <= 1; ++q) total += t.strength(m, q);
        }
        CHECK(rel_err(total, 1.0) < 1e-12);
    }
}

TEST_CASE("per-level branching fraction is independent of the sublevel") {
    struct Branch {
        int F, Fp;
        double fraction;
    };
    const Branch branches[] = {
        {2, 1, 0.05}, {2, 2, 0.25}, {2, 3, 0.7},
        {1, 0, 1.0 / 6.0}, {1, 1, 5.0 / 12.0}, {1, 2, 5.0 / 12.0},
    };
    for (const Branch& b : branches) {
        const TransitionTable t = transition_strengths(b.F, b.Fp);
        for (int m = -b.F; m <= b.F; ++m) {
            double sum = 0.0;
            for (int q = -1; q <= 1; ++q) sum += t.strength(m, q);
            CAPTURE(b.Fp);
            CAPTURE(m);
            CHECK(rel_err(sum, b.fraction) < 1e-12);
        }
    }
}

TEST_CASE("transition table rejects levels outside the D2 manifold") {
    CHECK_THROWS_AS(transition_strengths(3, 3), InvalidQuantumNumbers);
    CHECK_THROWS_AS(transition_strengths(2, 0), InvalidQuantumNumbers);
    CHECK_THROWS_AS(transition_strengths(0, 1), InvalidQuantumNumbers);
    CHECK_THROWS_AS(transition_strengths(1, 3), InvalidQuantumNumbers);
}

TEST_CASE("average dipole moment for simple distributions") {
    const TransitionTable t22 = transition_strengths(2, 2);
    const TransitionTable t23 = transition_strengths(2, 3);

    SublevelPopulations uniform;
    uniform.F = 2;
    uniform.p.assign(5, 0.2);
    CHECK(rel_err(average_dipole(t22, uniform, scheme_sigma_pm()),
                  1.0 / 12.0) < 1e-12);

    const SublevelPopulations stretched = delta_pops(2, 2);
    CHECK(rel_err(average_dipole(t22, stretched, scheme_sigma_pm()),
                  1.0 / 24.0) < 1e-12);
    CHECK(rel_err(average_dipole(t23, stretched, scheme_sigma_plus()), 0.5) <
          1e-12);

    const SublevelPopulations wrong_f = delta_pops(1, 0);
    CHECK_THROWS_AS(average_dipole(t22, wrong_f, scheme_sigma_pm()),
                    InvalidQuantumNumbers);
}

TEST_CASE("steady state of balanced pumping on the F2 to F'3 line") {
    const SublevelPopulations pops =
        steady_state_populations(2, 3, scheme_sigma_pm());
    CHECK(pops.F == 2);
    CHECK(rel_err(pops.at(2), 477.0 / 1307.0) < 1e-10);
    CHECK(rel_err(pops.at(1), 120.0 / 1307.0) < 1e-10);
    CHECK(rel_err(pops.at(0), 113.0 / 1307.0) < 1e-10);
    CHECK(rel_err(pops.at(-1), pops.at(1)) < 1e-12);
    CHECK(rel_err(pops.at(-2), pops.at(2)) < 1e-12);
    double sum = 0.0;
    for (double v : pops.p) sum += v;
    CHECK(rel_err(sum, 1.0) < 1e-12);
}

TEST_CASE("steady state of balanced pumping on the F2 to F'2 line") {
    const SublevelPopulations pops =
        steady_state_populations(2, 2, scheme_sigma_pm());
    CHECK(rel_err(pops.at(2), 3.0 / 11.0) < 1e-10);
    CHECK(rel_err(pops.at(1), 3.0 / 22.0) < 1e-10);
    CHECK(rel_err(pops.at(0), 2.0 / 11.0) < 1e-10);
    CHECK(rel_err(pops.at(-1), pops.at(1)) < 1e-12);
    CHECK(rel_err(pops.at(-2), pops.at(2)) < 1e-12);
}

TEST_CASE("loss-conditioned steady state on the open F2 to F'2 line") {
    const SublevelPopulations pops = steady_state_populations(
        2, 2, scheme_sigma_pm(), LossTreatment::include_loss);
    CHECK(std::abs(pops.at(2) - 0.383770) < 1e-5);
    CHECK(std::abs(pops.at(1) - 0.054115) < 1e-5);
    CHECK(std::abs(pops.at(0) - 0.124230) < 1e-5);
    CHECK(rel_err(pops.at(-2), pops.at(2)) < 1e-10);
}

TEST_CASE("loss treatment is irrelevant on the closed F2 to F'3 line") {
    const SublevelPopulations a = steady_state_populations(
        2, 3, scheme_sigma_pm(), LossTreatment::renormalize);
    const SublevelPopulations b = steady_state_populations(
        2, 3, scheme_sigma_pm(), LossTreatment::include_loss);
    for (int m = -2; m <= 2; ++m) {
        CHECK(std::abs(a.at(m) - b.at(m)) < 1e-12);
    }
}

TEST_CASE("one-sided pumping drives the population into dark sublevels") {
    const SublevelPopulations cycling =
        steady_state_populations(2, 3, scheme_sigma_plus());
    CHECK(rel_err(cycling.at(2), 1.0) < 1e-12);

    const SublevelPopulations edge =
        steady_state_populations(2, 2, scheme_sigma_plus());
    CHECK(rel_err(edge.at(2), 1.0) < 1e-12);

    const SublevelPopulations center =
        steady_state_populations(2, 2, scheme_pi());
    CHECK(rel_err(center.at(0), 1.0) < 1e-12);
}

TEST_CASE("steady state is refused when the fixed point is undetermined") {
    CHECK_THROWS_AS(steady_state_populations(2, 3, PumpScheme{{0.0, 0.0, 0.0}}),
                    NoSteadyState);
    // Pi pumping on F2 -> F'1 leaves both m = +-2 sublevels dark, so the
    // stationary distribution depends on the initial condition.
    CHECK_THROWS_AS(steady_state_populations(2, 1, scheme_pi()), NoSteadyState);
}

TEST_CASE("saturation intensity scales inversely with the dipole moment") {
    CHECK(rel_err(saturation_intensity(0.5), 16.7) < 1e-12);
    CHECK(rel_err(saturation_intensity(1.0 / 12.0), 100.2) < 1e-12);
    CHECK(rel_err(saturation_intensity(1.0 / 24.0), 200.4) < 1e-12);
    CHECK_THROWS_AS(saturation_intensity(0.0), ZeroCoupling);
    CHECK_THROWS_AS(saturation_intensity(-1.0), ZeroCoupling);
}

TEST_CASE("effective saturation intensities of the pumping configurations") {
    // W/m^2 throughout; 10 W/m^2 = 1 mW/cm^2.
    CHECK(rel_err(effective_isat(2, 3, scheme_sigma_plus(),
                                 PopulationsMode::stretched),
                  16.7) < 1e-12);
    CHECK(rel_err(effective_isat(2, 3, scheme_sigma_pm(),
                                 PopulationsMode::steady_state),
                  33.17158054711245) < 1e-10);
    CHECK(rel_err(effective_isat(2, 2, scheme_sigma_pm(),
                                 PopulationsMode::uniform),
                  100.2) < 1e-12);
    CHECK(rel_err(effective_isat(2, 2, scheme_sigma_pm(),
                                 PopulationsMode::steady_state),
                  113.04615384615385) < 1e-10);
    CHECK(rel_err(effective_isat(2, 2, scheme_sigma_pm(),
                                 PopulationsMode::stretched),
                  200.4) < 1e-12);
    CHECK(rel_err(effective_isat(2, 2, scheme_sigma_pm(),
                                 PopulationsMode::steady_state,
                                 LossTreatment::include_loss),
                  142.04650836622745) < 1e-9);
}

TEST_CASE("true saturation extremes over ground sublevel mixtures") {
    // The averaged coupling is linear in the populations, so the extreme
    // saturation intensities over all mixtures sit on the simplex vertices.
    const TransitionTable t22 = transition_strengths(2, 2);
    const double vertex[] = {1.0 / 24.0, 5.0 / 48.0, 0.125, 5.0 / 48.0,
                             1.0 / 24.0};
    double isat_min = 1e300;
    double isat_max = 0.0;
    for (int m = -2; m <= 2; ++m) {
        const double coupling =
            average_dipole(t22, delta_pops(2, m), scheme_sigma_pm());
        CHECK(rel_err(coupling, vertex[m + 2]) < 1e-12);
        const double isat = saturation_intensity(coupling);
        isat_min = std::min(isat_min, isat);
        isat_max = std::max(isat_max, isat);
    }
    CHECK(rel_err(isat_min, 66.8) < 1e-12);
    CHECK(rel_err(isat_max, 200.4) < 1e-12);
}

TEST_CASE("balanced pumping on F2 to F'2 stays in the claimed interval") {
    // Claimed bracket for the effective saturation intensity over sublevel
    // mixtures: 10 to 20 mW/cm^2. The true simplex minimum (all population
    // at m = 0, coupling 1/8) lies below the quoted floor, so that bound is
    // recorded here as a known failure rather than widened.
    const TransitionTable t22 = transition_strengths(2, 2);
    double isat_min = 1e300;
    double isat_max = 0.0;
    for (int m = -2; m <= 2; ++m) {
        const double coupling =
            average_dipole(t22, delta_pops(2, m), scheme_sigma_pm());
        const double isat_mw = saturation_intensity(coupling) / 10.0;
        isat_min = std::min(isat_min, isat_mw);
        isat_max = std::max(isat_max, isat_mw);
    }
    CHECK(isat_max <= 20.0 + 0.05);
    CHECK(isat_min >= 10.0 - 0.05);
}
