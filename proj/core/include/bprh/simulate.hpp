#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bprh/model.hpp"
#include "bprh/rng.hpp"

namespace bprh {

/**
 * Left-censoring plan: per-coordinate censoring times are uniform on
 * (0, z_i), with z_i calibrated so that P(T_i < C_i) equals p.
 * p = 0 disables censoring.
 */
struct CensoringPlan {
    double p = 0.0;
    double z1 = 0.0;
    double z2 = 0.0;
    bool enabled() const { return p > 0.0; }
};

struct CensoredPair {
    double y1 = 0.0;
    double y2 = 0.0;
    bool delta1 = true;  // true = event observed, false = left-censored
    bool delta2 = true;
};

struct CensoredSample {
    std::vector<CensoredPair> pairs;
    std::uint64_t seed = 0;
    CensoringPlan plan;
};

enum class SamplerKind {
    conditional,    // max coordinate plus the family's exact conditional law
    paper_literal,  // conditional step through the marginal quantile transform
    oracle,         // independent reference construction
};

/**
 * Solves (1/z) * Integral_0^z F_{Y_i}(c) dc = p for z by bisection. The left
 * side is the average of a nondecreasing function, hence monotone in z, and
 * the root is unique when attainable. Throws std::runtime_error with the
 * attainable range when p cannot be reached (e.g. baselines supported on
 * negative reals).
 */
double censoring_threshold(const Model& model, int i, double p);

CensoringPlan make_censoring_plan(const Model& model, double p);

/**
 * One draw of the latent pair (t1, t2) via the max-coordinate algorithm:
 * pick the region by comparing a uniform against the region probabilities,
 * draw the max as F0^{-1}(U^{1/theta}), then the other coordinate from its
 * conditional law. With literal = true the conditional step instead routes
 * through the marginal quantile, exactly as the printed recipe does; that
 * variant cannot produce the family-1 diagonal ties.
 */
std::pair<double, double> draw_pair_paper(const Model& model, RngStream& rng,
                                          bool literal = false);

/// Independent reference sampler. Family 1 takes componentwise maxima of
/// three independent power-law draws, which reproduces the joint law
/// including the diagonal mass. Family 2 uses the region/max/ratio steps.
std::pair<double, double> draw_pair_oracle(const Model& model, RngStream& rng);

/**
 * n independent censored pairs. Each pair index owns the RNG stream
 * (seed, index), so the sample is reproducible bit for bit and independent
 * of any parallel scheduling. y_i = max(t_i, c_i); delta_i = 1 iff t_i >= c_i.
 */
CensoredSample simulate_sample(const Model& model, std::size_t n, double p, std::uint64_t seed,
                               SamplerKind kind = SamplerKind::conditional);

}  // namespace bprh
