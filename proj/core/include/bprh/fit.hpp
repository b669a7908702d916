#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bprh/model.hpp"
#include "bprh/simulate.hpp"

namespace bprh {

struct FitOptions {
    int starts = 5;
    int max_iterations = 4000;
    double tolerance = 1e-8;  // simplex function-value spread
    std::uint64_t seed = 12345;
    bool standard_errors = false;
};

struct FitResult {
    Model model;
    double log_likelihood = 0.0;
    double aic = 0.0;
    int k = 0;  // number of free parameters
    int iterations = 0;
    bool converged = false;
    // Per-parameter standard errors from the inverse finite-difference
    // Hessian; present only when requested and the Hessian is positive
    // definite at the optimum.
    std::optional<std::vector<double>> standard_errors;
};

/**
 * Left-censored log likelihood. Each pair contributes
 *   - both observed, y1 != y2: the joint density,
 *   - both observed, tied (family 1): the diagonal density,
 *   - one censored: the partial derivative of the joint cdf in the
 *     observed coordinate, evaluated at (censoring point, observation),
 *   - both censored: the joint cdf.
 * Ties are detected at |y1-y2| < 1e-9 * max(1, |y1|, |y2|). A nonpositive
 * contribution yields -infinity rather than an error.
 */
double log_likelihood(const Model& model, const CensoredSample& sample);

/**
 * Maximum likelihood fit over log-reparameterized positive parameters via
 * Nelder-Mead with multistart restarts. Start 0 uses moment-style initial
 * values (baseline from a univariate fit of F0^theta to the max sample,
 * dependence parameters from region frequencies); later starts jitter them.
 */
FitResult mle_fit(ModelFamily family, BaselineFamily baseline_family,
                  const CensoredSample& sample, const FitOptions& options = {});

struct AicRow {
    std::size_t fit_index = 0;  // position in the input vector
    double aic = 0.0;
    double delta = 0.0;  // AIC - min AIC
};

/// Rows sorted ascending by AIC (stable for ties).
std::vector<AicRow> aic_table(const std::vector<FitResult>& fits);

}  // namespace bprh
