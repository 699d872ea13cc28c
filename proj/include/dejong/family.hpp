#ifndef DEJONG_FAMILY_HPP
#define DEJONG_FAMILY_HPP

#include <vector>

#include "dejong/model.hpp"
#include "dejong/rational.hpp"

// Deterministic spec generators used by the verification batteries and the
// sweep fixtures.
namespace dejong::family {

// All C(n,p) product kernels over Rademacher variables with the equal
// coefficient 1/sqrt(C(n,p)); C(n,p) must be a perfect square so the
// coefficient stays rational. Unit variance, completely degenerate of order p.
UStatisticSpec<Rational> symmetric_rademacher(int n, int p);

// W = sum a_i X_i over Rademacher variables; requires sum a_i^2 = 1.
UStatisticSpec<Rational> weighted_rademacher(const std::vector<Rational>& weights);

// W = n^{-1/2} sum X_i over Rademacher variables in double mode (any n >= 1);
// E[W^4] = 3 - 2/n.
UStatisticSpec<double> p1_rademacher_real(int n);

// Centered unit-variance three-point law {-1: 1/3, 0: 1/2, 2: 1/6};
// E[X^3] = 1, E[X^4] = 3.
Variable<Rational> three_point();

// W = a X1X2 + (b/2)(X3X4 + X4X5 + X5X6 + X6X3) over six Rademacher
// variables, with (a, b) = ((1-t^2)/(1+t^2), 2t/(1+t^2)) so a^2 + b^2 = 1.
// E[W^4] - 3 = b^4 - 2a^4, which vanishes as t approaches ~0.4657 while
// rho^2 = max(a^2, b^2/2) stays above 1/3: the fourth-moment gap can shrink
// to zero with the law staying far from normal.
UStatisticSpec<Rational> cycle_mix(const Rational& t);

// Parameter sequence for cycle_mix driving E[W^4] -> 3 monotonically with
// d_K bounded below along the way.
std::vector<Rational> cycle_mix_parameters();

}  // namespace dejong::family

#endif
