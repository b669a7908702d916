#pragma once

#include <string>

#include "bprh/baseline.hpp"

namespace bprh {

enum class ModelFamily { bprhm1, bprhm2 };

struct Bprhm1Params {
    double alpha1 = 0, alpha2 = 0, alpha3 = 0;
};

struct Bprhm2Params {
    double theta1 = 0, theta2 = 0, theta1p = 0, theta2p = 0;
};

struct RegionProbabilities {
    double y1_greater = 0;  // P(Y1 > Y2)
    double y1_less = 0;     // P(Y1 < Y2)
    double tie = 0;         // P(Y1 = Y2)
};

/// Roy-style two-component reversed hazard vector.
struct RhrRoy {
    double lambda1 = 0;  // d/dy1 ln F(y1, y2)
    double lambda2 = 0;  // d/dy2 ln F(y1, y2)
};

/// Three-component reversed hazard vector with a diagonal sum rate and two
/// conditional off-diagonal rates. The diagonal component is evaluated at
/// y = max(y1, y2). A conditional component is NaN where its defining
/// constraint (that coordinate strictly below the other) fails and no
/// closed form extends it.
struct RhrConditional {
    double diagonal_sum = 0;   // r_{10}(y) + r_{20}(y) at y = max(y1, y2)
    double conditional12 = 0;  // rate of Y1 given {Y1 <= y1, Y2 = y2}
    double conditional21 = 0;  // rate of Y2 given {Y2 <= y2, Y1 = y1}
};

/**
 * A bivariate proportional reversed hazards model over a baseline F0.
 *
 * Family 1:  F(y1,y2) = F0(y1)^a1 * F0(y2)^a2 * F0(min(y1,y2))^a3.
 * The distribution carries a singular component on the diagonal with total
 * mass a3 / (a1+a2+a3); its density along the diagonal is exposed through
 * diagonal_density().
 *
 * Family 2 has the piecewise density
 *   t1' t2 f0(y1) f0(y2) F0(y1)^(t1'-1) F0(y2)^(t1+t2-t1'-1)   for y1 < y2,
 *   t1 t2' f0(y1) f0(y2) F0(y1)^(t1+t2-t2'-1) F0(y2)^(t2'-1)   for y2 < y1,
 * and is absolutely continuous. Its marginals are two-term mixtures of
 * powers of F0; the removable singularity at t1+t2 = ti' switches to a
 * logarithmic branch when |t1+t2-ti'| < 1e-9.
 *
 * Both families give Max{Y1,Y2} the distribution F0^theta_max. Instances
 * are immutable values; all member functions are pure.
 */
class Model {
  public:
    static Model bprhm1(Baseline baseline, double alpha1, double alpha2, double alpha3);
    static Model bprhm2(Baseline baseline, double theta1, double theta2, double theta1p,
                        double theta2p);

    ModelFamily family() const { return family_; }
    const Baseline& baseline() const { return baseline_; }
    const Bprhm1Params& params1() const;
    const Bprhm2Params& params2() const;

    /// a1+a2+a3 (family 1) or t1+t2 (family 2); the exponent of the max law.
    double theta_max() const { return theta_; }

    double joint_cdf(double y1, double y2) const;
    double log_joint_cdf(double y1, double y2) const;

    /// Density of the absolutely continuous part; requires y1 != y2.
    double joint_density(double y1, double y2) const;
    double log_joint_density(double y1, double y2) const;

    /// Density along the diagonal y1 = y2 = y (family 1 only).
    double diagonal_density(double y) const;
    double log_diagonal_density(double y) const;

    double marginal_cdf(int i, double y) const;
    double marginal_pdf(int i, double y) const;
    double marginal_quantile(int i, double u) const;

    double max_cdf(double y) const;

    RegionProbabilities region_probabilities() const;

    RhrRoy rhr_vector_roy(double y1, double y2) const;
    RhrConditional rhr_vector_cond(double y1, double y2) const;

    /// Partial derivative dF/dy_i of the joint cdf; the contribution of a
    /// pair with coordinate i observed and the other left-censored. Ties
    /// resolve to the y_i <= y_other branch.
    double cdf_partial(int i, double y1, double y2) const;
    double log_cdf_partial(int i, double y1, double y2) const;

    /// Marginal mixture evaluated at u = F0(y); exposed for tests.
    double marginal_cdf_from_u(int i, double u) const;

    std::string describe() const;

  private:
    Model(Baseline baseline, ModelFamily family) : baseline_(std::move(baseline)), family_(family) {}

    bool degenerate_branch(int i) const;  // family 2: t1+t2 == ti' within 1e-9

    Baseline baseline_;
    ModelFamily family_;
    Bprhm1Params p1_;
    Bprhm2Params p2_;
    double theta_ = 0;
};

}  // namespace bprh
