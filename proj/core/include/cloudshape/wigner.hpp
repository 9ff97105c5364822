/// \file wigner.hpp
/// Wigner 3-j and 6-j coefficients for small angular momenta, evaluated
/// from the Racah factorial sums in double precision.

#pragma once

namespace cloudshape {

/// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3). Arguments may be half-integer;
/// violated selection rules give 0, malformed quantum numbers (negative j,
/// non-half-integer values, |m| > j, mismatched integerness of j and m)
/// throw InvalidQuantumNumbers.
double wigner_3j(double j1, double j2, double j3, double m1, double m2,
                 double m3);

/// Wigner 6-j symbol {j1 j2 j3; j4 j5 j6}. Same conventions as wigner_3j;
/// violated triangle conditions give 0.
double wigner_6j(double j1, double j2, double j3, double j4, double j5,
                 double j6);

}  // namespace cloudshape
