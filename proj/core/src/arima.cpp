#include "tsclean/arima.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "tsclean/errors.hpp"
#include "tsclean/numeric.hpp"

namespace tsclean {

namespace {

// One-step CSS residuals of an ARMA(p,q) on a demeaned series, zero-seeded
// before the start.
std::vector<double> filter_residuals(std::span<const double> w, std::span<const double> phi,
                                     std::span<const double> theta) {
    const std::size_t n = w.size();
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    std::vector<double> e(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 1; i <= std::min(p, t); ++i) {
            pred += phi[i - 1] * w[t - i];
        }
        for (std::size_t j = 1; j <= std::min(q, t); ++j) {
            pred += theta[j - 1] * e[t - j];
        }
        e[t] = w[t] - pred;
    }
    return e;
}

// Reflects MA roots inside the unit circle to the invertible region and
// rebuilds the coefficients. The reflected polynomial has the same
// autocorrelation shape.
std::vector<double> coerce_invertible(std::vector<double> theta) {
    if (theta.empty() || ma_polynomial_invertible(theta)) return theta;

    std::vector<double> poly(theta.size() + 1);
    poly[0] = 1.0;
    for (std::size_t j = 0; j < theta.size(); ++j) poly[j + 1] = theta[j];

    std::vector<std::complex<double>> roots = polynomial_roots(poly);
    for (auto& r : roots) {
        const double mag = std::abs(r);
        if (mag < 1.0 && mag > 1e-300) {
            r = 1.0 / std::conj(r);
        }
    }

    // Rebuild from the product of (1 - z / r_i); the constant term stays 1.
    std::vector<std::complex<double>> acc{std::complex<double>(1.0, 0.0)};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(acc.size() + 1);
        const std::complex<double> factor = -1.0 / r;
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] += acc[i] * factor;
        }
        acc = std::move(next);
    }

    std::vector<double> out(theta.size(), 0.0);
    for (std::size_t j = 1; j < acc.size() && j <= theta.size(); ++j) {
        out[j - 1] = acc[j].real();
    }
    return out;
}

// Solves the symmetric positive-definite system A x = b in place (Cholesky).
std::vector<double> solve_spd(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= a[i][k] * a[j][k];
            if (i == j) {
                if (sum <= 0.0) {
                    throw NumericalSingularity("solve_spd: matrix not positive definite");
                }
                a[i][i] = std::sqrt(sum);
            } else {
                a[i][j] = sum / a[j][j];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= a[i][k] * b[k];
        b[i] = sum / a[i][i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) sum -= a[k][i] * b[k];
        b[i] = sum / a[i][i];
    }
    return b;
}

struct CssResult {
    std::vector<double> phi;
    std::vector<double> theta;
    double mean = 0.0;
    double sigma2 = 0.0;
};

// Damped Gauss-Newton minimization of the conditional sum of squares over
// (mean, phi, theta). Steps that leave the stationary/invertible region or
// fail to reduce the SSE are halved away.
CssResult css_refine(std::span<const double> z, std::vector<double> phi,
                     std::vector<double> theta, double mu, int iterations) {
    const std::size_t p = phi.size();
    const std::size_t q = theta.size();
    const std::size_t dim = 1 + p + q;
    const std::size_t n = z.size();
    const std::size_t burn = std::min(p + q, n / 2);  // startup transient of the recursion

    auto pack = [&](const std::vector<double>& ph, const std::vector<double>& th, double m) {
        std::vector<double> v(dim);
        v[0] = m;
        std::copy(ph.begin(), ph.end(), v.begin() + 1);
        std::copy(th.begin(), th.end(), v.begin() + 1 + static_cast<std::ptrdiff_t>(p));
        return v;
    };
    auto residuals_of = [&](const std::vector<double>& v) {
        std::vector<double> w(n);
        for (std::size_t t = 0; t < n; ++t) w[t] = z[t] - v[0];
        return filter_residuals(w, std::span<const double>(v).subspan(1, p),
                                std::span<const double>(v).subspan(1 + p, q));
    };
    auto admissible = [&](const std::vector<double>& v) {
        return ar_polynomial_stationary(std::span<const double>(v).subspan(1, p)) &&
               ma_polynomial_invertible(std::span<const double>(v).subspan(1 + p, q));
    };
    auto sse_of = [burn](const std::vector<double>& e) {
        double s = 0.0;
        for (std::size_t t = burn; t < e.size(); ++t) s += e[t] * e[t];
        return s;
    };

    std::vector<double> params = pack(phi, theta, mu);
    std::vector<double> e = residuals_of(params);
    double sse = sse_of(e);

    for (int iter = 0; iter < iterations; ++iter) {
        // Finite-difference Jacobian of the residual vector.
        std::vector<std::vector<double>> jac(dim, std::vector<double>(n));
        for (std::size_t i = 0; i < dim; ++i) {
            std::vector<double> bumped = params;
            const double h = 1e-5 * (1.0 + std::abs(params[i]));
            bumped[i] += h;
            std::vector<double> e2 = residuals_of(bumped);
            for (std::size_t t = 0; t < n; ++t) jac[i][t] = (e2[t] - e[t]) / h;
        }

        std::vector<std::vector<double>> jtj(dim, std::vector<double>(dim, 0.0));
        std::vector<double> jte(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < n; ++t) s += jac[i][t] * jac[j][t];
                jtj[i][j] = jtj[j][i] = s;
            }
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) s += jac[i][t] * e[t];
            jte[i] = s;
        }
        double trace = 0.0;
        for (std::size_t i = 0; i < dim; ++i) trace += jtj[i][i];
        for (std::size_t i = 0; i < dim; ++i) jtj[i][i] += 1e-10 * (trace + 1.0);

        std::vector<double> delta;
        try {
            delta = solve_spd(std::move(jtj), std::move(jte));
        } catch (const NumericalSingularity&) {
            break;
        }

        double step = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 10; ++halving, step *= 0.5) {
            std::vector<double> trial = params;
            for (std::size_t i = 0; i < dim; ++i) trial[i] -= step * delta[i];
            if (!admissible(trial)) continue;
            std::vector<double> e_trial = residuals_of(trial);
            const double sse_trial = sse_of(e_trial);
            if (sse_trial < sse) {
                const double gain = (sse - sse_trial) / (sse + 1e-300);
                params = std::move(trial);
                e = std::move(e_trial);
                sse = sse_trial;
                improved = gain > 1e-10;
                break;
            }
        }
        if (!improved) break;
    }

    CssResult out;
    out.mean = params[0];
    out.phi.assign(params.begin() + 1, params.begin() + 1 + static_cast<std::ptrdiff_t>(p));
    out.theta.assign(params.begin() + 1 + static_cast<std::ptrdiff_t>(p), params.end());
    out.sigma2 = sse / static_cast<double>(n - burn);
    return out;
}

}  // namespace

ArimaModel::ArimaModel(int p, int d, int q, std::vector<double> phi, std::vector<double> theta,
                       double mean, double sigma2, double aic, std::size_t n_train)
    : p_(p),
      d_(d),
      q_(q),
      phi_(std::move(phi)),
      theta_(std::move(theta)),
      mean_(mean),
      sigma2_(sigma2),
      aic_(aic),
      n_train_(n_train) {
    if (p_ < 0 || d_ < 0 || q_ < 0) {
        throw DataError("ArimaModel: orders must be non-negative");
    }
    if (phi_.size() != static_cast<std::size_t>(p_) ||
        theta_.size() != static_cast<std::size_t>(q_)) {
        throw DataError("ArimaModel: coefficient count does not match the stated order");
    }
    if (!(sigma2_ >= 0.0) || !std::isfinite(sigma2_) || !std::isfinite(mean_)) {
        throw DataError("ArimaModel: non-finite or negative parameters");
    }
    for (double c : phi_) {
        if (!std::isfinite(c)) throw DataError("ArimaModel: non-finite AR coefficient");
    }
    for (double c : theta_) {
        if (!std::isfinite(c)) throw DataError("ArimaModel: non-finite MA coefficient");
    }
    if (n_train_ <= static_cast<std::size_t>(p_ + q_ + 1)) {
        throw DataError("ArimaModel: training length must exceed the parameter count");
    }
    if (!ar_polynomial_stationary(phi_)) {
        throw DataError("ArimaModel: AR polynomial has roots inside the unit circle");
    }
}

ArFit fit_ar(std::span<const double> series, int p) {
    if (p < 0) {
        throw OrderTooHigh("fit_ar: negative order");
    }
    const std::size_t n = series.size();
    if (n <= static_cast<std::size_t>(p) + 2) {
        throw SeriesTooShort("fit_ar: series of length " + std::to_string(n) +
                             " cannot support AR(" + std::to_string(p) + ")");
    }

    ArFit fit;
    fit.mean = mean(series);

    std::vector<double> w(n);
    for (std::size_t t = 0; t < n; ++t) w[t] = series[t] - fit.mean;

    if (p > 0) {
        std::vector<double> cov = autocovariance(series, static_cast<std::size_t>(p));
        if (!(cov[0] > 0.0)) {
            throw DegenerateSeries("fit_ar: zero-variance series");
        }
        LevinsonResult lev = levinson_durbin(cov, static_cast<std::size_t>(p));
        fit.phi = std::move(lev.ar);
        fit.yw_variance = lev.prediction_variance;
    } else {
        fit.yw_variance = variance(series);
    }

    fit.residuals.values.reserve(n - static_cast<std::size_t>(p));
    for (std::size_t t = static_cast<std::size_t>(p); t < n; ++t) {
        double pred = 0.0;
        for (int i = 1; i <= p; ++i) {
            pred += fit.phi[static_cast<std::size_t>(i - 1)] * w[t - static_cast<std::size_t>(i)];
        }
        fit.residuals.values.push_back(w[t] - pred);
    }
    fit.residuals.variance = variance(fit.residuals.values);
    return fit;
}

MaFit fit_ma_on_residuals(const Residuals& residuals, int q) {
    if (q < 0) {
        throw OrderTooHigh("fit_ma_on_residuals: negative order");
    }
    const std::size_t n = residuals.values.size();
    if (n <= static_cast<std::size_t>(q) + 2) {
        throw SeriesTooShort("fit_ma_on_residuals: residual series too short for MA(" +
                             std::to_string(q) + ")");
    }

    MaFit fit;
    if (q == 0) {
        fit.sigma2 = variance(residuals.values);
        return fit;
    }

    // Innovations algorithm run past q: theta_{m,1..q} converges to the MA
    // coefficients as m grows, so a shallow recursion would bias the
    // estimates toward the autocorrelations.
    const std::size_t m = std::min(n - 1, static_cast<std::size_t>(q) + 20);
    std::vector<double> cov = autocovariance(residuals.values, m);
    if (!(cov[0] > 0.0)) {
        throw DegenerateSeries("fit_ma_on_residuals: zero-variance residuals");
    }

    std::vector<std::vector<double>> theta(m + 1);
    std::vector<double> v(m + 1, 0.0);
    v[0] = cov[0];
    for (std::size_t k = 1; k <= m; ++k) {
        theta[k].assign(k + 1, 0.0);  // theta[k][j] = theta_{k,j}, j = 1..k
        for (std::size_t j = 0; j < k; ++j) {
            double acc = cov[k - j];
            for (std::size_t i = 0; i < j; ++i) {
                acc -= theta[j][j - i] * theta[k][k - i] * v[i];
            }
            if (!(v[j] > 0.0)) {
                throw NonConvergence("fit_ma_on_residuals: innovations recursion degenerated");
            }
            theta[k][k - j] = acc / v[j];
        }
        double vk = cov[0];
        for (std::size_t j = 0; j < k; ++j) {
            vk -= theta[k][k - j] * theta[k][k - j] * v[j];
        }
        if (!(vk > 0.0) || !std::isfinite(vk)) {
            throw NonConvergence("fit_ma_on_residuals: innovations variance went non-positive");
        }
        v[k] = vk;
    }

    fit.theta.assign(theta[m].begin() + 1, theta[m].begin() + 1 + q);
    fit.theta = coerce_invertible(std::move(fit.theta));

    // Innovation variance of the fitted MA(q): filter the residual series
    // and measure the one-step errors past the warmup.
    const double res_mean = mean(residuals.values);
    std::vector<double> w(n);
    for (std::size_t t = 0; t < n; ++t) w[t] = residuals.values[t] - res_mean;
    std::vector<double> e = filter_residuals(w, {}, fit.theta);
    std::span<const double> tail(e.data() + q, n - static_cast<std::size_t>(q));
    fit.sigma2 = variance(tail);
    return fit;
}

double aic(double sigma2, std::size_t n, int k_params) {
    if (!(sigma2 > 0.0)) {
        throw DegenerateVariance("aic: innovation variance must be positive");
    }
    if (n == 0) {
        throw DataError("aic: empty sample");
    }
    return static_cast<double>(n) * std::log(sigma2) + 2.0 * static_cast<double>(k_params);
}

Residuals arma_residuals(const ArimaModel& model, std::span<const double> series_values) {
    const std::size_t d = static_cast<std::size_t>(model.d());
    if (series_values.size() <= d + 1) {
        throw SeriesTooShort("arma_residuals: series shorter than the differencing order");
    }
    std::vector<double> z(series_values.begin(), series_values.end());
    for (std::size_t i = 0; i < d; ++i) z = diff_once(z);

    for (double& x : z) x -= model.mean();
    std::vector<double> e = filter_residuals(z, model.phi(), model.theta());

    const std::size_t burn = std::min<std::size_t>(static_cast<std::size_t>(model.p()), e.size());
    Residuals out;
    out.values.assign(e.begin() + static_cast<std::ptrdiff_t>(burn), e.end());
    out.variance = variance(out.values);
    return out;
}

WhitenessReport residual_diagnostics(const ArimaModel& model,
                                     std::span<const double> series_values,
                                     std::size_t checked_lags, double min_inside_fraction) {
    Residuals res = arma_residuals(model, series_values);
    const std::size_t n = res.values.size();
    if (n < 3) {
        throw SeriesTooShort("residual_diagnostics: too few residuals");
    }
    const std::size_t lags = std::min(checked_lags, n - 1);
    CorrelogramResult corr = acf(res.values, lags);

    WhitenessReport report;
    report.lags = lags;
    report.band = corr.band;
    std::size_t inside = 0;
    for (std::size_t k = 1; k <= lags; ++k) {
        if (std::abs(corr.at(k)) < corr.band) ++inside;
    }
    report.inside_fraction = static_cast<double>(inside) / static_cast<double>(lags);
    report.pass = report.inside_fraction >= min_inside_fraction;
    return report;
}

ModelSelection select_model(const TimeSeries& series, const SelectionBounds& bounds,
                            const SelectionOptions& options) {
    if (series.size() < options.min_train) {
        throw SeriesTooShort("select_model: " + std::to_string(series.size()) +
                             " samples, minimum training length is " +
                             std::to_string(options.min_train));
    }

    const int d = select_d(series, bounds.d_max, options.stationarity);
    const std::vector<double> z = difference(series, d, bounds.d_max).values;
    const std::size_t n = z.size();

    // Stage one: AR order by AIC over 0..p_max. Ascending iteration with a
    // strict comparison breaks ties toward the smaller order.
    int best_p = -1;
    double best_p_aic = std::numeric_limits<double>::infinity();
    ArFit best_ar;
    for (int p = 0; p <= bounds.p_max; ++p) {
        if (n <= static_cast<std::size_t>(p) + 2) break;
        try {
            ArFit fit = fit_ar(z, p);
            const double score = aic(fit.yw_variance, n, p + 1);
            if (score < best_p_aic) {
                best_p_aic = score;
                best_p = p;
                best_ar = std::move(fit);
            }
        } catch (const Error&) {
            continue;  // candidate failed, try the next order
        }
    }
    if (best_p < 0) {
        throw AllFitsFailed("select_model: every AR candidate failed");
    }

    // Stage two: MA order on the AR residuals.
    const std::size_t n_res = best_ar.residuals.values.size();
    int best_q = -1;
    double best_q_aic = std::numeric_limits<double>::infinity();
    MaFit best_ma;
    for (int q = 0; q <= bounds.q_max; ++q) {
        if (n_res <= static_cast<std::size_t>(q) + 2) break;
        try {
            MaFit fit = fit_ma_on_residuals(best_ar.residuals, q);
            const double score = aic(fit.sigma2, n_res, best_p + q + 1);
            if (score < best_q_aic) {
                best_q_aic = score;
                best_q = q;
                best_ma = std::move(fit);
            }
        } catch (const Error&) {
            continue;
        }
    }
    if (best_q < 0) {
        throw AllFitsFailed("select_model: every MA candidate failed");
    }

    std::vector<double> phi = best_ar.phi;
    std::vector<double> theta = best_ma.theta;
    double mu = best_ar.mean;
    double sigma2 = best_ma.sigma2;

    if (options.css_refine) {
        CssResult polished = css_refine(z, phi, theta, mu, options.css_iterations);
        phi = std::move(polished.phi);
        theta = std::move(polished.theta);
        mu = polished.mean;
        sigma2 = polished.sigma2;
    }

    const double total_aic = aic(sigma2, n_res, best_p + best_q + 1);
    ArimaModel model(best_p, d, best_q, std::move(phi), std::move(theta), mu, sigma2, total_aic,
                     series.size());
    WhitenessReport whiteness = residual_diagnostics(model, series.values);
    return ModelSelection{std::move(model), whiteness};
}

std::vector<double> psi_weights(const ArimaModel& model, std::size_t count) {
    std::vector<double> psi(count, 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    const auto phi = model.phi();
    const auto theta = model.theta();
    for (std::size_t j = 1; j < count; ++j) {
        double value = j <= theta.size() ? theta[j - 1] : 0.0;
        for (std::size_t i = 1; i <= std::min(j, phi.size()); ++i) {
            value += phi[i - 1] * psi[j - i];
        }
        psi[j] = value;
    }
    return psi;
}

Forecast forecast(const ArimaModel& model, const TimeSeries& history, int h) {
    if (h < 1 || h > kMaxForecastHorizon) {
        throw HorizonTooLarge("forecast: horizon " + std::to_string(h) + " outside 1.." +
                              std::to_string(kMaxForecastHorizon));
    }
    const std::size_t p = static_cast<std::size_t>(model.p());
    const std::size_t q = static_cast<std::size_t>(model.q());
    const std::size_t d = static_cast<std::size_t>(model.d());
    const std::size_t need = std::max<std::size_t>(std::max(p, q) + d, d + 2);
    if (history.size() < need) {
        throw InsufficientHistory("forecast: history of length " +
                                  std::to_string(history.size()) + " cannot seed the recursion");
    }

    // Differencing ladder; stage[i] is the series after i differences.
    std::vector<std::vector<double>> stage(d + 1);
    stage[0] = history.values;
    for (std::size_t i = 1; i <= d; ++i) stage[i] = diff_once(stage[i - 1]);

    std::vector<double> w = stage[d];
    for (double& x : w) x -= model.mean();
    const std::size_t m = w.size();

    std::vector<double> e = filter_residuals(w, model.phi(), model.theta());

    // ARMA recursion on the demeaned differenced scale; future shocks are
    // zero, past values come from the observed series.
    std::vector<double> fc(static_cast<std::size_t>(h), 0.0);
    auto w_at = [&](std::size_t t) { return t < m ? w[t] : fc[t - m]; };
    const auto phi = model.phi();
    const auto theta = model.theta();
    for (std::size_t k = 0; k < static_cast<std::size_t>(h); ++k) {
        const std::size_t t = m + k;
        double value = 0.0;
        for (std::size_t i = 1; i <= std::min(p, t); ++i) {
            value += phi[i - 1] * w_at(t - i);
        }
        for (std::size_t j = k + 1; j <= q && j <= t; ++j) {
            value += theta[j - 1] * e[t - j];
        }
        fc[k] = value;
    }

    std::vector<double> points(fc.size());
    for (std::size_t k = 0; k < fc.size(); ++k) points[k] = fc[k] + model.mean();

    // Integrate back to the original scale, level by level, anchored on the
    // last observed value of each stage.
    for (std::size_t level = d; level-- > 0;) {
        double running = stage[level].back();
        for (double& x : points) {
            running += x;
            x = running;
        }
    }

    // psi-weights, prefix-summed once per integration level.
    std::vector<double> psi = psi_weights(model, static_cast<std::size_t>(h));
    for (std::size_t level = 0; level < d; ++level) {
        for (std::size_t j = 1; j < psi.size(); ++j) psi[j] += psi[j - 1];
    }

    Forecast out;
    out.horizon = h;
    out.points = std::move(points);
    out.std_errors.resize(static_cast<std::size_t>(h));
    double acc = 0.0;
    for (std::size_t k = 0; k < static_cast<std::size_t>(h); ++k) {
        acc += psi[k] * psi[k];
        out.std_errors[k] = std::sqrt(model.sigma2() * acc);
    }
    out.origin_index = history.size() - 1;
    return out;
}

}  // namespace tsclean
