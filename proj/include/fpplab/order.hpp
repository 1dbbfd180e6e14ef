#pragma once

#include <string>

namespace fpplab {

// Growth regimes of the maximal edge weight order f_{d,r}(N), split by the
// tail exponent r relative to the dimension d. Natural logarithms throughout.
enum class OrderRegime {
  kRZero,        // r = 0:            log N / log log N
  kBelowDm1,     // 0 < r < d-1:      (log N)^(1/(1+r))
  kAtDm1,        // r = d-1:          (log N)^(1/d) (log log N)^((d-2)/d)
  kBetweenDm1D,  // d-1 < r < d:      (log N)^(1/d)
  kAtD,          // r = d:            (log N)^(1/d) (log log N)^(-1/d)
  kAboveD,       // r > d:            (log N)^(1/r)
};

const char* regime_name(OrderRegime regime);

// Rejects d < 2 or r < 0.
OrderRegime order_regime(int d, double r);

// f_{d,r}(N). Requires N >= 16 uniformly so that log log N > 0 in every branch.
double order_f(int d, double r, double N);

// Large-deviation exponent g(r,d,L,k1) for restricted passage times:
// L^r for 1<r<d, L^d/(log L)^(d-1) at r=d, L^d for d<r<d+1, L^(d+1)/k1 at
// r=d+1. Rejects r <= 1, r > d+1 (out of range), L < 2, k1 < 1.
double ldp_exponent_g(double r, int d, double L, double k1);

}  // namespace fpplab
