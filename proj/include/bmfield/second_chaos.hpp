#pragma once

#include <string>

#include "bmfield/covariance.hpp"
#include "bmfield/functional.hpp"
#include "bmfield/linalg.hpp"
#include "bmfield/quadrature.hpp"
#include "bmfield/spectral.hpp"

namespace bm {

// Symmetric matrix of second-order projection coefficients of a functional:
// off-diagonal entries are the x_j x_k moments against G, diagonal entries the
// (x_j^2 - 1) moments.
struct SecondChaosMatrix {
    Mat c;
};

SecondChaosMatrix c_matrix(const Functional& g, int m, int quadrature_order = 64,
                           Exec exec = Exec::Parallel);

// Second-chaos limit variance through the trace formula:
// one half of the integral of Tr[r(x) C r(x) C] over [-R, R]^n.
double v2_trace(const CovarianceModel& model, const SecondChaosMatrix& cm, double box_radius,
                const BoxQuadratureOptions& opts = {});

// Same quantity through the frequency domain. With the density convention
// r(x) = integral e^{i<t,x>} f(t) dt and amplitudes alpha = sqrt(f), the
// value is (2pi)^n / 2 times the squared L^2 norm of
// H(t) = alpha(-t)^T C alpha(t). (A transform normalization that folds
// (2pi)^{-n} into the forward transform moves that factor onto the alphas and
// flips the constant to (2pi)^{-n}; the trace route is normalization-free and
// pins the value.)
double v2_spectral(const SpectralModel& spec, const SecondChaosMatrix& cm,
                   int freq_points = 8193);

std::string second_chaos_report_json(double v2_trace_value, double v2_spectral_value,
                                     double v2_chaos_value, const SecondChaosMatrix& cm);

}  // namespace bm
