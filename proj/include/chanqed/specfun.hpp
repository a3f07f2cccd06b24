#pragma once

#include <complex>
#include <cstddef>

namespace chanqed {

/// Bessel function of the first kind J_n(x) for |n| <= 80, |x| <= 50.
double bessel_j(int n, double x);

namespace detail {
double bessel_j_series(int n, double x);
double bessel_j_miller(int n, double x);
}  // namespace detail

/// Arguments of Lambda_r(N, alpha, beta) = (2 pi)^-1 Int_{-pi}^{pi} cos^r(t)
///   exp[i (alpha sin t - beta sin 2t - N t)] dt, r in {0, 1, 2}.
struct LambdaArgs {
    int r = 0;
    int N = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

struct QuadratureOptions {
    double tolerance = 1e-12;
    std::size_t max_nodes = std::size_t{1} << 22;
};

struct LambdaTriple {
    double l0;
    double l1;
    double l2;
};

/// Node count used for a first trapezoid pass: next power of two >= 64 + 8 (|N| + |alpha| + 2|beta|).
std::size_t quadrature_nodes(int N, double alpha, double beta);

/// Plain periodic trapezoid sum with M nodes, no convergence control.
std::complex<double> lambda_trapezoid(const LambdaArgs& args, std::size_t nodes);

/// Quadrature evaluation. Throws NumericError when refinement does not settle below the
/// tolerance or when the imaginary part is not negligible.
double lambda_r(const LambdaArgs& args, const QuadratureOptions& opt = {});
LambdaTriple lambda_all(int N, double alpha, double beta, const QuadratureOptions& opt = {});

/// Lambda_0 via sum_k J_{N+2k}(alpha) J_k(beta).
double lambda0_series(int N, double alpha, double beta);

/// Any r through the series: cos t e^{-iNt} and cos^2 t e^{-iNt} shift N by +-1, +-2.
double lambda_series(const LambdaArgs& args);

}  // namespace chanqed
