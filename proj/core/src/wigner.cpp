/// \file wigner.cpp
/// Racah factorial-sum evaluation of 3-j and 6-j symbols. All angular
/// momenta handled here are small (j <= 4), so plain double factorials keep
/// every intermediate exact or near-exact.

#include "cloudshape/wigner.hpp"

#include <array>
#include <cmath>

#include "cloudshape/errors.hpp"

namespace cloudshape {

namespace {

constexpr int kMaxFact = 40;

const std::array<double, kMaxFact + 1>& factorials() {
    static const auto table = [] {
        std::array<double, kMaxFact + 1> f{};
        f[0] = 1.0;
        for (int i = 1; i <= kMaxFact; ++i) f[i] = f[i - 1] * i;
        return f;
    }();
    return table;
}

double fact(int n) {
    if (n < 0 || n > kMaxFact) {
        throw InvalidQuantumNumbers("wigner: factorial argument out of range");
    }
    return factorials()[n];
}

/// True if x is integer or half-integer; writes 2x rounded.
bool as_twice(double x, int& twice) {
    const double t = 2.0 * x;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) return false;
    twice = static_cast<int>(r);
    return true;
}

bool triangle_ok(int tj1, int tj2, int tj3) {
    return tj3 >= std::abs(tj1 - tj2) && tj3 <= tj1 + tj2 &&
           (tj1 + tj2 + tj3) % 2 == 0;
}

/// sqrt of the triangle coefficient Delta(j1 j2 j3), arguments twice-j.
double sqrt_triangle(int tj1, int tj2, int tj3) {
    const double num = fact((tj1 + tj2 - tj3) / 2) *
                       fact((tj1 - tj2 + tj3) / 2) *
                       fact((-tj1 + tj2 + tj3) / 2);
    return std::sqrt(num / fact((tj1 + tj2 + tj3) / 2 + 1));
}

}  // namespace

double wigner_3j(double j1, double j2, double j3, double m1, double m2,
                 double m3) {
    int tj1, tj2, tj3, tm1, tm2, tm3;
    if (!as_twice(j1, tj1) || !as_twice(j2, tj2) || !as_twice(j3, tj3) ||
        !as_twice(m1, tm1) || !as_twice(m2, tm2) || !as_twice(m3, tm3)) {
        throw InvalidQuantumNumbers("wigner_3j: non half-integer argument");
    }
    if (tj1 < 0 || tj2 < 0 || tj3 < 0) {
        throw InvalidQuantumNumbers("wigner_3j: negative angular momentum");
    }
    if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 ||
        (tj3 + tm3) % 2 != 0) {
        throw InvalidQuantumNumbers(
            "wigner_3j: projection and momentum differ in integerness");
    }
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) {
        throw InvalidQuantumNumbers("wigner_3j: |m| exceeds j");
    }
    if (tm1 + tm2 + tm3 != 0 || !triangle_ok(tj1, tj2, tj3)) return 0.0;

    // Factorial arguments of the Racah sum, all guaranteed integral here.
    const int a1 = (tj1 + tj2 - tj3) / 2;
    const int a2 = (tj1 - tm1) / 2;
    const int a3 = (tj2 + tm2) / 2;
    const int b1 = (tj3 - tj2 + tm1) / 2;
    const int b2 = (tj3 - tj1 - tm2) / 2;

    const int k_lo = std::max({0, -b1, -b2});
    const int k_hi = std::min({a1, a2, a3});
    if (k_lo > k_hi) return 0.0;

    double sum = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double term = fact(k) * fact(b1 + k) * fact(b2 + k) *
                            fact(a1 - k) * fact(a2 - k) * fact(a3 - k);
        sum += ((k % 2 == 0) ? 1.0 : -1.0) / term;
    }

    const double scale =
        sqrt_triangle(tj1, tj2, tj3) *
        std::sqrt(fact((tj1 + tm1) / 2) * fact((tj1 - tm1) / 2) *
                  fact((tj2 + tm2) / 2) * fact((tj2 - tm2) / 2) *
                  fact((tj3 + tm3) / 2) * fact((tj3 - tm3) / 2));
    const int phase_exp = (tj1 - tj2 - tm3) / 2;
    const double phase = (((phase_exp % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
    return phase * scale * sum;
}

double wigner_6j(double j1, double j2, double j3, double j4, double j5,
                 double j6) {
    int t[6];
    const double js[6] = {j1, j2, j3, j4, j5, j6};
    for (int i = 0; i < 6; ++i) {
        if (!as_twice(js[i], t[i])) {
            throw InvalidQuantumNumbers("wigner_6j: non half-integer argument");
        }
        if (t[i] < 0) {
            throw InvalidQuantumNumbers("wigner_6j: negative angular momentum");
        }
    }
    // The four triads that must satisfy the triangle conditions.
    const int triads[4][3] = {{t[0], t[1], t[2]},
                              {t[0], t[4], t[5]},
                              {t[3], t[1], t[5]},
                              {t[3], t[4], t[2]}};
    for (const auto& tr : triads) {
        if (!triangle_ok(tr[0], tr[1], tr[2])) return 0.0;
    }

    const int s1 = (t[0] + t[1] + t[2]) / 2;
    const int s2 = (t[0] + t[4] + t[5]) / 2;
    const int s3 = (t[3] + t[1] + t[5]) / 2;
    const int s4 = (t[3] + t[4] + t[2]) / 2;
    const int q1 = (t[0] + t[1] + t[3] + t[4]) / 2;
    const int q2 = (t[1] + t[2] + t[4] + t[5]) / 2;
    const int q3 = (t[2] + t[0] + t[5] + t[3]) / 2;

    const int k_lo = std::max({s1, s2, s3, s4});
    const int k_hi = std::min({q1, q2, q3});
    if (k_lo > k_hi) return 0.0;

    double sum = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double term = fact(k + 1) /
                            (fact(k - s1) * fact(k - s2) * fact(k - s3) *
                             fact(k - s4) * fact(q1 - k) * fact(q2 - k) *
                             fact(q3 - k));
        sum += ((k % 2 == 0) ? 1.0 : -1.0) * term;
    }

    const double scale = sqrt_triangle(t[0], t[1], t[2]) *
                         sqrt_triangle(t[0], t[4], t[5]) *
                         sqrt_triangle(t[3], t[1], t[5]) *
                         sqrt_triangle(t[3], t[4], t[2]);
    return scale * sum;
}

}  // namespace cloudshape
