#pragma once

// Slow direct evaluations used as reference values in tests.

#include <complex>
#include <vector>

#include "ellq/params.hpp"

namespace oracle {

using ellq::cplx;

// plain product, no logs
inline cplx poch(cplx z, cplx b, int n) {
    cplx v = 1, t = z;
    for (int i = 0; i <= n; ++i, t *= b) v *= 1.0 - t;
    return v;
}

// (z; p, q4) by a double loop over the full square, not the simplex
inline cplx poch2(cplx z, cplx a, cplx b, int n) {
    cplx v = 1, ta = z;
    for (int i = 0; i <= n; ++i, ta *= a) {
        cplx t = ta;
        for (int k = 0; k <= n; ++k, t *= b) v *= 1.0 - t;
    }
    return v;
}

// Jacobi triple product summation
inline cplx theta_sum(cplx z, cplx p, int m) {
    cplx s = 0;
    for (int n = -m; n <= m; ++n) {
        const cplx t = std::exp(double(n) * double(n - 1) / 2.0 * std::log(p) + double(n) * std::log(z));
        s += (n % 2 == 0) ? t : -t;
    }
    return s;
}

// [u] from the summation form
inline cplx bracket(cplx u, const ellq::elliptic_params& prm) {
    const cplx p = prm.p();
    const cplx pp = poch(p, p, 200);
    return prm.qpow(u * u / prm.r() - u) * theta_sum(prm.qpow(2.0 * u), p, 40) / (pp * pp * pp);
}

inline ellq::elliptic_params default_params(double c = 1.0) { return ellq::elliptic_params({0.35, 0.05}, {2.3, 0.15}, c); }

}  // namespace oracle
