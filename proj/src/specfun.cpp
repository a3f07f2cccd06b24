#include "chanqed/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "chanqed/errors.hpp"
#include "chanqed/units.hpp"

namespace chanqed {

namespace {

constexpr int max_order = 80;
constexpr double max_argument = 50.0;
constexpr double series_limit = 12.0;

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace

namespace detail {

// Power series, summed in long double: at |x| = 12 the largest term is ~4e3 times J_n.
double bessel_j_series(int n, double x) {
    const int sign = n < 0 ? parity_sign(n) : 1;
    n = std::abs(n);
    const long double half = 0.5L * static_cast<long double>(x);
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= half / k;
    long double sum = 0.0L;
    long double largest = 0.0L;
    const long double q = -half * half;
    for (int k = 0; k < 500; ++k) {
        sum += term;
        largest = std::max(largest, std::abs(term));
        if (term == 0.0L || (k > half && std::abs(term) < 1e-21L * largest)) break;
        term *= q / (static_cast<long double>(k + 1) * (k + 1 + n));
    }
    return sign * static_cast<double>(sum);
}

// Miller's backward recurrence normalized with J_0 + 2 sum_k J_2k = 1.
double bessel_j_miller(int n, double x) {
    const int sign = (n < 0 ? parity_sign(n) : 1) * (x < 0 ? parity_sign(n) : 1);
    n = std::abs(n);
    const long double ax = std::abs(static_cast<long double>(x));
    if (ax == 0.0L) return n == 0 ? 1.0 : 0.0;
    const double scale = std::max<double>(n, static_cast<double>(ax));
    int start = static_cast<int>(scale + 30.0 + 3.0 * std::sqrt(scale));
    start += start % 2;

    long double j_next = 0.0L;  // J_{k+1}
    long double j = 1e-30L;     // J_k at k = start
    long double result = (start == n) ? j : 0.0L;
    long double norm = 2.0L * j;
    for (int k = start; k >= 1; --k) {
        const long double j_prev = (2.0L * k / ax) * j - j_next;
        j_next = j;
        j = j_prev;
        const int i = k - 1;
        if (i == n) result = j;
        if (i % 2 == 0) norm += (i == 0 ? j : 2.0L * j);
        if (std::abs(j) > 1e300L) {
            j *= 1e-300L;
            j_next *= 1e-300L;
            result *= 1e-300L;
            norm *= 1e-300L;
        }
    }
    return sign * static_cast<double>(result / norm);
}

}  // namespace detail

double bessel_j(int n, double x) {
    if (!std::isfinite(x) || std::abs(x) > max_argument || std::abs(n) > max_order) {
        throw NumericError("bessel_j: (n=" + std::to_string(n) + ", x=" + std::to_string(x) +
                           ") outside the validated range |n| <= 80, |x| <= 50");
    }
    if (std::abs(x) <= series_limit) {
        const double v = detail::bessel_j_series(std::abs(n), std::abs(x));
        const int s = (n < 0 ? parity_sign(n) : 1) * (x < 0 ? parity_sign(n) : 1);
        return s * v;
    }
    return detail::bessel_j_miller(n, x);
}

std::size_t quadrature_nodes(int N, double alpha, double beta) {
    const double want = 64.0 + 8.0 * (std::abs(N) + std::abs(alpha) + 2.0 * std::abs(beta));
    std::size_t m = 64;
    while (static_cast<double>(m) < want) m *= 2;
    return m;
}

namespace {

struct TrapezoidSums {
    std::complex<double> full[3];
    std::complex<double> half[3];  // even-index nodes = the M/2 rule
};

TrapezoidSums trapezoid(int N, double alpha, double beta, std::size_t M) {
    TrapezoidSums s{};
    const double h = 2.0 * constants::pi / static_cast<double>(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double t = -constants::pi + h * static_cast<double>(j);
        const double phase = alpha * std::sin(t) - beta * std::sin(2.0 * t) - N * t;
        const std::complex<double> e(std::cos(phase), std::sin(phase));
        const double c = std::cos(t);
        const std::complex<double> v[3] = {e, c * e, c * c * e};
        for (int r = 0; r < 3; ++r) {
            s.full[r] += v[r];
            if (j % 2 == 0) s.half[r] += v[r];
        }
    }
    for (int r = 0; r < 3; ++r) {
        s.full[r] /= static_cast<double>(M);
        s.half[r] /= static_cast<double>(M / 2);
    }
    return s;
}

void check_args(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw DomainError("lambda: non-finite alpha or beta");
}

}  // namespace

std::complex<double> lambda_trapezoid(const LambdaArgs& a, std::size_t nodes) {
    if (a.r < 0 || a.r > 2) throw DomainError("lambda: r must be 0, 1 or 2");
    check_args(a.alpha, a.beta);
    if (nodes < 2 || nodes % 2 != 0) throw DomainError("lambda: node count must be even");
    return trapezoid(a.N, a.alpha, a.beta, nodes).full[a.r];
}

LambdaTriple lambda_all(int N, double alpha, double beta, const QuadratureOptions& opt) {
    check_args(alpha, beta);
    double estimate = 0.0;
    for (std::size_t M = quadrature_nodes(N, alpha, beta); M <= opt.max_nodes; M *= 2) {
        const auto s = trapezoid(N, alpha, beta, M);
        estimate = 0.0;
        for (int r = 0; r < 3; ++r) estimate = std::max(estimate, std::abs(s.full[r] - s.half[r]));
        if (estimate > opt.tolerance) continue;
        for (int r = 0; r < 3; ++r) {
            const double re = s.full[r].real();
            const double im = s.full[r].imag();
            if (std::abs(im) > 1e-12 * (1.0 + std::abs(re))) {
                throw NumericError("lambda: imaginary part " + std::to_string(im) + " not negligible", std::abs(im));
            }
        }
        return {s.full[0].real(), s.full[1].real(), s.full[2].real()};
    }
    throw NumericError("lambda: trapezoid rule did not converge within max_nodes", estimate);
}

double lambda_r(const LambdaArgs& a, const QuadratureOptions& opt) {
    if (a.r < 0 || a.r > 2) throw DomainError("lambda: r must be 0, 1 or 2");
    const auto t = lambda_all(a.N, a.alpha, a.beta, opt);
    return a.r == 0 ? t.l0 : (a.r == 1 ? t.l1 : t.l2);
}

double lambda0_series(int N, double alpha, double beta) {
    check_args(alpha, beta);
    // Orders past the validated range only enter when |J_n(x)| <= (|x|/2)^n / n! is negligible.
    const auto J = [](int n, double x) {
        const int an = std::abs(n);
        if (an > max_order) {
            const double ax = std::abs(x);
            if (ax == 0.0 || an * std::log(0.5 * ax) - std::lgamma(an + 1.0) < -70.0) return 0.0;
        }
        return bessel_j(n, x);
    };
    // Terms may still grow until both N + 2k -> 0 and k pass the Bessel turning points.
    const double quiet_from = 0.5 * std::abs(N) + std::abs(alpha) + std::abs(beta) + 1.0;
    double sum = J(N, alpha) * J(0, beta);
    int quiet = 0;
    for (int k = 1; k <= 200; ++k) {
        double pair = 0.0;
        try {
            pair = J(N + 2 * k, alpha) * J(k, beta) + J(N - 2 * k, alpha) * J(-k, beta);
        } catch (const NumericError&) {
            throw NumericError("lambda0_series: truncation bound exceeded at k = " + std::to_string(k));
        }
        sum += pair;
        quiet = (k > quiet_from && std::abs(pair) < 1e-16) ? quiet + 1 : 0;
        if (quiet == 5) return sum;
    }
    throw NumericError("lambda0_series: no convergence within 200 terms");
}

double lambda_series(const LambdaArgs& a) {
    if (a.r < 0 || a.r > 2) throw DomainError("lambda: r must be 0, 1 or 2");
    const auto L = [&](int N) { return lambda0_series(N, a.alpha, a.beta); };
    switch (a.r) {
        case 0: return L(a.N);
        case 1: return 0.5 * (L(a.N - 1) + L(a.N + 1));
        default: return 0.25 * (L(a.N - 2) + 2.0 * L(a.N) + L(a.N + 2));
    }
}

}  // namespace chanqed
