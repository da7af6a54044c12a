#pragma once

#include <cstdint>

namespace urdiv::sf {

/// Arguments of the complementary Marcum-Q function P_order(noncentrality, x),
/// the CDF of a unit-scale non-central gamma law evaluated at x.
struct MarcumArgs {
    double order;          // gamma index, >= 1 (antenna count in channel use)
    double noncentrality;  // >= 0 (sum of Rician K-factors in channel use)
    double x;              // evaluation point, >= 0 (gain / diffuse power)

    void validate() const;
};

/// Modified Bessel function of the first kind I_nu(z) for nu >= 0, z >= 0.
/// Overflows double range near z ~ 713; use log_bessel_i beyond.
double bessel_i(double nu, double z);

/// ln I_nu(z); finite for arbitrarily large z (no intermediate overflow).
double log_bessel_i(double nu, double z);

/// Regularized lower incomplete gamma P(shape, x) = gamma(shape, x)/Gamma(shape).
double reg_lower_gamma(double shape, double x);

/// ln P(shape, x); finite down to the deep left tail (~ -1e5 nats).
double log_reg_lower_gamma(double shape, double x);

/// Complementary Marcum-Q P_mu(x', y'): Poisson mixture of regularized lower
/// gammas summed outward from the Poisson mode. Equals reg_lower_gamma(order, x)
/// exactly when noncentrality == 0 (same code path).
double marcum_p(const MarcumArgs& args);
double marcum_p(double order, double noncentrality, double x);

/// ln of the above via log-sum-exp over the mixture; usable where the linear
/// value underflows double range. Returns -inf at x == 0.
double marcum_p_log(const MarcumArgs& args);
double marcum_p_log(double order, double noncentrality, double x);

}  // namespace urdiv::sf
