#pragma once

#include <complex>

namespace weilgap {

using cplx = std::complex<double>;
using cplx_ld = std::complex<long double>;

/// log Gamma(s) up to a multiple of 2 pi i; throws std::domain_error at poles.
cplx clgamma(cplx s);

/// Euler Gamma(s).
cplx cgamma(cplx s);

/**
 * Upper incomplete Gamma(s, x) for real x > 0: Legendre continued fraction
 * when x is large relative to s, otherwise Gamma(s) minus the lower series,
 * with downward recurrence for Re s < 1/2. Throws std::domain_error for
 * x <= 0 and std::overflow_error when the result is not representable.
 */
cplx upper_incomplete_gamma(cplx s, double x);

/// Extended-precision variants of the three functions above.
cplx_ld clgamma_ld(cplx_ld s);
cplx_ld cgamma_ld(cplx_ld s);
cplx_ld upper_incomplete_gamma_ld(cplx_ld s, long double x);

} // namespace weilgap
