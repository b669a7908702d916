#include "bprh/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bprh/numerics.hpp"
#include "bprh/rng.hpp"

namespace bprh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_tie(double y1, double y2) {
    double scale = std::max({1.0, std::abs(y1), std::abs(y2)});
    return std::abs(y1 - y2) < 1e-9 * scale;
}

struct NelderMeadOutcome {
    std::vector<double> x;
    double fmin = kInf;
    int iterations = 0;
    bool converged = false;
};

NelderMeadOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                              std::vector<double> x0, double step, double tol, int max_iter) {
    const std::size_t n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t j = 0; j < n; ++j) x[j + 1][j] += step;
    std::vector<double> fx(n + 1);
    for (std::size_t j = 0; j <= n; ++j) fx[j] = f(x[j]);

    auto order = [&]() {
        std::vector<std::size_t> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> x2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            x2[k] = x[idx[k]];
            f2[k] = fx[idx[k]];
        }
        x.swap(x2);
        fx.swap(f2);
    };

    NelderMeadOutcome out;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        order();
        if (std::isfinite(fx[0]) && fx[n] - fx[0] < tol) {
            out.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) centroid[i] += x[j][i];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + coef * (centroid[i] - x[n][i]);
            return p;
        };

        std::vector<double> xr = blend(alpha);
        double fr = f(xr);
        if (fr < fx[0]) {
            std::vector<double> xe = blend(gamma);
            double fe = f(xe);
            if (fe < fr) {
                x[n] = std::move(xe);
                fx[n] = fe;
            } else {
                x[n] = std::move(xr);
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = std::move(xr);
            fx[n] = fr;
        } else {
            bool outside = fr < fx[n];
            std::vector<double> xc(n);
            const std::vector<double>& base = outside ? xr : x[n];
            for (std::size_t i = 0; i < n; ++i) xc[i] = centroid[i] + rho * (base[i] - centroid[i]);
            double fc = f(xc);
            if (fc < (outside ? fr : fx[n])) {
                x[n] = std::move(xc);
                fx[n] = fc;
            } else {
                for (std::size_t j = 1; j <= n; ++j) {
                    for (std::size_t i = 0; i < n; ++i) {
                        x[j][i] = x[0][i] + sigma * (x[j][i] - x[0][i]);
                    }
                    fx[j] = f(x[j]);
                }
            }
        }
    }
    order();
    out.x = x[0];
    out.fmin = fx[0];
    out.iterations = iter;
    return out;
}

Model build_model(ModelFamily family, BaselineFamily bf, const std::vector<double>& params) {
    std::size_t nb = baseline_parameter_count(bf);
    std::vector<double> bp(params.begin(), params.begin() + nb);
    Baseline base = make_baseline(bf, bp);
    if (family == ModelFamily::bprhm1) {
        return Model::bprhm1(std::move(base), params[nb], params[nb + 1], params[nb + 2]);
    }
    return Model::bprhm2(std::move(base), params[nb], params[nb + 1], params[nb + 2],
                         params[nb + 3]);
}

// Rough per-family starting values for fitting F0^theta to the max sample.
std::vector<double> baseline_start(BaselineFamily bf, const std::vector<double>& maxima) {
    double mean = std::accumulate(maxima.begin(), maxima.end(), 0.0) / maxima.size();
    double mean_sq = 0.0;
    for (double m : maxima) mean_sq += m * m;
    mean_sq /= maxima.size();
    double top = *std::max_element(maxima.begin(), maxima.end());
    switch (bf) {
        case BaselineFamily::weibull: return {1.0 / std::max(mean, 1e-12), 1.0};
        case BaselineFamily::exponential: return {1.0 / std::max(mean, 1e-12)};
        case BaselineFamily::rayleigh: return {1.0 / std::max(mean_sq, 1e-12)};
        case BaselineFamily::inverse_weibull: return {1.0};
        case BaselineFamily::inverse_exponential: return {};
        case BaselineFamily::power: return {1.0, top * 1.05};
        case BaselineFamily::reflected_weibull: return {1.0 / std::max(mean_sq, 1e-12)};
        case BaselineFamily::linear_failure_rate:
            return {1.0 / std::max(mean, 1e-12), 1.0 / std::max(mean_sq, 1e-12)};
        case BaselineFamily::exp_form: return {1.0 / std::max(mean, 1e-12), top * 1.05};
    }
    return {};
}

// Univariate MLE of (baseline params, theta) for the max-law F0^theta.
std::vector<double> fit_max_law(BaselineFamily bf, const std::vector<double>& maxima) {
    std::size_t nb = baseline_parameter_count(bf);
    std::vector<double> start = baseline_start(bf, maxima);
    start.push_back(1.0);  // theta
    std::vector<double> log_start(start.size());
    for (std::size_t i = 0; i < start.size(); ++i) log_start[i] = std::log(start[i]);

    auto objective = [&](const std::vector<double>& lp) {
        std::vector<double> p(lp.size());
        for (std::size_t i = 0; i < lp.size(); ++i) p[i] = std::exp(lp[i]);
        double theta = p.back();
        Baseline base = [&]() {
            std::vector<double> bp(p.begin(), p.begin() + nb);
            return make_baseline(bf, bp);
        }();
        double ll = 0.0;
        for (double m : maxima) {
            double lc = base.log_cdf(m);
            double lpdf = base.log_pdf(m);
            if (lc == -kInf || lpdf == -kInf) return kInf;
            ll += std::log(theta) + lpdf + (theta - 1.0) * lc;
        }
        return std::isfinite(ll) ? -ll : kInf;
    };
    auto res = nelder_mead(objective, log_start, 0.3, 1e-10, 2000);
    std::vector<double> out(res.x.size());
    for (std::size_t i = 0; i < res.x.size(); ++i) out[i] = std::exp(res.x[i]);
    return out;  // baseline params followed by theta
}

std::vector<std::vector<double>> hessian_fd(const std::function<double(const std::vector<double>&)>& f,
                                            const std::vector<double>& x) {
    std::size_t n = x.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = 1e-4 * std::max(std::abs(x[i]), 1e-3);
    std::vector<std::vector<double>> hess(n, std::vector<double>(n, 0.0));
    double f0 = f(x);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            std::vector<double> a = x;
            if (i == j) {
                a[i] = x[i] + h[i];
                double fp = f(a);
                a[i] = x[i] - h[i];
                double fm = f(a);
                hess[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
            } else {
                a = x;
                a[i] += h[i]; a[j] += h[j];
                double fpp = f(a);
                a = x;
                a[i] += h[i]; a[j] -= h[j];
                double fpm = f(a);
                a = x;
                a[i] -= h[i]; a[j] += h[j];
                double fmp = f(a);
                a = x;
                a[i] -= h[i]; a[j] -= h[j];
                double fmm = f(a);
                hess[i][j] = hess[j][i] = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            }
        }
    }
    return hess;
}

// Cholesky-based inverse; returns false when the matrix is not positive definite.
bool invert_spd(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
    std::size_t n = a.size();
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (sum <= 0.0 || !std::isfinite(sum)) return false;
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    // Solve L L^T X = I column by column.
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double sum = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) sum -= l[i][k] * y[k];
            y[i] = sum / l[i][i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double sum = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) sum -= l[k][ii] * inv[k][col];
            inv[ii][col] = sum / l[ii][ii];
        }
    }
    return true;
}

}  // namespace

double log_likelihood(const Model& model, const CensoredSample& sample) {
    double total = 0.0;
    for (const auto& pair : sample.pairs) {
        double contrib;
        if (pair.delta1 && pair.delta2) {
            if (is_tie(pair.y1, pair.y2)) {
                if (model.family() == ModelFamily::bprhm1) {
                    contrib = model.log_diagonal_density(0.5 * (pair.y1 + pair.y2));
                } else {
                    return -kInf;  // family 2 assigns ties probability zero
                }
            } else {
                contrib = model.log_joint_density(pair.y1, pair.y2);
            }
        } else if (pair.delta1 && !pair.delta2) {
            contrib = model.log_cdf_partial(1, pair.y1, pair.y2);
        } else if (!pair.delta1 && pair.delta2) {
            contrib = model.log_cdf_partial(2, pair.y1, pair.y2);
        } else {
            contrib = model.log_joint_cdf(pair.y1, pair.y2);
        }
        if (!std::isfinite(contrib)) return -kInf;
        total += contrib;
    }
    return total;
}

FitResult mle_fit(ModelFamily family, BaselineFamily baseline_family,
                  const CensoredSample& sample, const FitOptions& options) {
    std::size_t nb = baseline_parameter_count(baseline_family);
    std::size_t k = nb + (family == ModelFamily::bprhm1 ? 3 : 4);
    if (sample.pairs.size() < 2 * (k + 1)) {
        throw std::invalid_argument("mle_fit: sample too small for the parameter count");
    }

    auto objective = [&](const std::vector<double>& lp) {
        std::vector<double> p(lp.size());
        for (std::size_t i = 0; i < lp.size(); ++i) {
            p[i] = std::exp(lp[i]);
            if (!std::isfinite(p[i]) || p[i] <= 0.0) return kInf;
        }
        try {
            Model m = build_model(family, baseline_family, p);
            double ll = log_likelihood(m, sample);
            return std::isfinite(ll) ? -ll : kInf;
        } catch (const std::exception&) {
            return kInf;
        }
    };

    // Moment-style initial point: baseline and theta from the max-law fit,
    // dependence split from the observed region frequencies.
    std::vector<double> maxima;
    maxima.reserve(sample.pairs.size());
    std::size_t n_gt = 0, n_lt = 0, n_tie = 0;
    for (const auto& pair : sample.pairs) {
        maxima.push_back(std::max(pair.y1, pair.y2));
        if (is_tie(pair.y1, pair.y2)) {
            ++n_tie;
        } else if (pair.y1 > pair.y2) {
            ++n_gt;
        } else {
            ++n_lt;
        }
    }
    std::vector<double> max_fit = fit_max_law(baseline_family, maxima);
    double theta_hat = max_fit.back();
    double n_total = static_cast<double>(sample.pairs.size());
    double floor_frac = 0.02;
    double f_gt = std::max(n_gt / n_total, floor_frac);
    double f_lt = std::max(n_lt / n_total, floor_frac);
    double f_tie = std::max(n_tie / n_total, floor_frac);

    std::vector<double> start(max_fit.begin(), max_fit.end() - 1);
    if (family == ModelFamily::bprhm1) {
        double norm = f_gt + f_lt + f_tie;
        start.push_back(theta_hat * f_gt / norm);
        start.push_back(theta_hat * f_lt / norm);
        start.push_back(theta_hat * f_tie / norm);
    } else {
        double norm = f_gt + f_lt;
        double t1 = theta_hat * f_gt / norm;
        double t2 = theta_hat * f_lt / norm;
        start.push_back(t1);
        start.push_back(t2);
        start.push_back(t1);  // independence-style guesses for the primed pair
        start.push_back(t2);
    }

    std::vector<double> log_start(start.size());
    for (std::size_t i = 0; i < start.size(); ++i) log_start[i] = std::log(start[i]);

    NelderMeadOutcome best;
    for (int s = 0; s < std::max(1, options.starts); ++s) {
        std::vector<double> x0 = log_start;
        if (s > 0) {
            RngStream rng(options.seed, static_cast<std::uint64_t>(s));
            for (auto& xi : x0) {
                // Box-Muller jitter, sd 0.3 in log space.
                double u1 = rng.next_unit(), u2 = rng.next_unit();
                xi += 0.3 * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            }
        }
        auto outcome = nelder_mead(objective, x0, 0.25, options.tolerance, options.max_iterations);
        if (outcome.fmin < best.fmin) best = outcome;
    }
    if (!std::isfinite(best.fmin)) {
        throw std::runtime_error("mle_fit: no start produced a finite likelihood");
    }

    std::vector<double> estimate(best.x.size());
    for (std::size_t i = 0; i < best.x.size(); ++i) estimate[i] = std::exp(best.x[i]);
    Model fitted = build_model(family, baseline_family, estimate);

    FitResult result{fitted};
    result.log_likelihood = -best.fmin;
    result.k = static_cast<int>(k);
    result.aic = 2.0 * static_cast<double>(k) - 2.0 * result.log_likelihood;
    result.iterations = best.iterations;
    result.converged = best.converged;

    if (options.standard_errors) {
        auto neg_ll_natural = [&](const std::vector<double>& p) {
            try {
                Model m = build_model(family, baseline_family, p);
                double ll = log_likelihood(m, sample);
                return std::isfinite(ll) ? -ll : kInf;
            } catch (const std::exception&) {
                return kInf;
            }
        };
        auto hess = hessian_fd(neg_ll_natural, estimate);
        std::vector<std::vector<double>> inv;
        if (invert_spd(hess, inv)) {
            std::vector<double> se(estimate.size());
            bool ok = true;
            for (std::size_t i = 0; i < se.size(); ++i) {
                if (inv[i][i] <= 0.0 || !std::isfinite(inv[i][i])) {
                    ok = false;
                    break;
                }
                se[i] = std::sqrt(inv[i][i]);
            }
            if (ok) result.standard_errors = se;
        }
    }
    return result;
}

std::vector<AicRow> aic_table(const std::vector<FitResult>& fits) {
    if (fits.size() < 2) {
        throw std::invalid_argument("aic_table: need at least two fits to rank");
    }
    std::vector<AicRow> rows(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
        rows[i].fit_index = i;
        rows[i].aic = fits[i].aic;
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const AicRow& a, const AicRow& b) { return a.aic < b.aic; });
    for (auto& row : rows) row.delta = row.aic - rows.front().aic;
    return rows;
}

}  // namespace bprh
