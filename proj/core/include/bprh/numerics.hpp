#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bprh {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point rule; results are cached per order.
const GaussLegendreRule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre quadrature of f on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n = 128);

/// Adaptive Simpson quadrature to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_depth = 48);

/**
 * Bisection root find for a monotone function on [lo, hi].
 * Requires f(lo) and f(hi) to bracket zero; refines until the interval
 * width drops below xtol. Returns the midpoint of the final bracket.
 */
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-12, int max_iter = 200);

/**
 * Survival function of the Kolmogorov distribution,
 *   Q(lambda) = 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
 * with the series truncated at 100 terms. Clamped to [0, 1].
 */
double kolmogorov_sf(double lambda);

/**
 * Runs fn(i) for i in [0, n). Work is split across threads; fn must write
 * results keyed by index so the outcome is independent of scheduling.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bprh
