// SPDX-License-Identifier: Apache-2.0
//
// ectcap - capacity bounds for noncoherent underspread OFDM WSSUS fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ectcap/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "ectcap/conditional.hpp"
#include "ectcap/errors.hpp"
#include "ectcap/quadrature.hpp"
#include "ectcap/special.hpp"

namespace ectcap {

static const double kLog4 = std::log(4.0);

void QuadratureSpec::validate() const {
    if (order < 16) throw Error(ErrorCode::InvalidArgument, "quadrature order must be >= 16");
    if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "abs_tol must be positive");
}

static double log1p_exp(double z) {
    // log(1 + e^z) without overflow
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

static double c_qpsk_at_order(double rho, int order) {
    const QuadRule &gh = gauss_hermite(order);
    const double sq2rho = std::sqrt(2.0 * rho);
    double acc = 0.0;
    for (int i = 0; i < order; ++i)
        acc += gh.weights[i] * log1p_exp(-2.0 * (rho + sq2rho * gh.nodes[i]));
    return kLog4 - 2.0 / std::sqrt(M_PI) * acc;
}

double c_qpsk(double rho, const QuadratureSpec &q) {
    q.validate();
    if (rho < 0.0) throw Error(ErrorCode::InvalidArgument, "c_qpsk requires rho >= 0");
    if (rho == 0.0) return 0.0;
    if (rho > 700.0) return kLog4; // integrand underflows
    int order = q.order;
    double v = c_qpsk_at_order(rho, order);
    while (order * 2 <= q.max_order) {
        double v2 = c_qpsk_at_order(rho, order * 2);
        if (std::fabs(v2 - v) <= q.abs_tol) { v = v2; break; }
        v = v2;
        order *= 2;
    }
    return std::clamp(v, 0.0, kLog4);
}

// E[C_QPSK(scale * T)] with T ~ Exp(1), by Gauss-Laguerre
static double expect_cqpsk_exp(double scale, const QuadratureSpec &q) {
    if (scale <= 0.0) return 0.0;
    const QuadRule &gl = gauss_laguerre(q.order);
    double acc = 0.0;
    for (size_t i = 0; i < gl.nodes.size(); ++i)
        acc += gl.weights[i] * c_qpsk(scale * gl.nodes[i], q);
    return acc;
}

double ub_coherent_moments(double p_x, double mean_sq, double var, const QuadratureSpec &q) {
    q.validate();
    if (p_x <= 0.0) return 0.0;
    if (var <= 0.0) return std::log1p(p_x * mean_sq);
    if (mean_sq <= 0.0) return expect_log1p_exp(p_x * var);
    return expect_log1p_noncentral(p_x * var, mean_sq / var, q.order);
}

double ub_coherent(const ChannelSpec &spec, double p_x, const QuadratureSpec &q) {
    return ub_coherent_moments(p_x, spec.taps.los_power(), 1.0, q);
}

double ub_low_peak(const ChannelSpec &spec, double p_x, const TcFn &tc) {
    if (p_x <= 0.0) return 0.0;
    const double n = spec.n_bins;
    double mean_term = p_x * spec.taps.los_power(); // N p |E[h~00]|^2
    double g = 1.0 + 0.5 * p_x * (tc(p_x) - n);
    return mean_term + p_x - std::log1p(n * p_x / g) / n;
}

double ub_low_quad(const ChannelSpec &spec, double p_x, double alpha, const TcFn &tc) {
    if (p_x <= 0.0) return 0.0;
    if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 1");
    const double n = spec.n_bins;
    double d = tc(p_x) - n;
    return p_x * spec.taps.los_power() + alpha * p_x * p_x * d / (2.0 + p_x * d) +
           0.5 * alpha * n * p_x * p_x;
}

static void check_beta(double beta, const PowerConstraint &constraint) {
    if (constraint.is_peak()) {
        if (beta != 1.0)
            throw Error(ErrorCode::InvalidBeta, "peak constraint requires beta = 1");
    } else if (!(beta >= 1.0 && beta <= constraint.alpha + 1e-12)) {
        throw Error(ErrorCode::InvalidBeta, "quadratic constraint requires 1 <= beta <= alpha");
    }
}

double lb_qpsk(const ChannelSpec &spec, double p_x, int r, double beta,
               const PowerConstraint &constraint, const TcFn &tc, const QuadratureSpec &q,
               int mc_samples, std::uint64_t mc_seed) {
    if (r < 1 || r > spec.n_bins) throw Error(ErrorCode::InvalidArgument, "need 1 <= r <= N");
    check_beta(beta, constraint);
    if (p_x <= 0.0) return 0.0;
    const double n = spec.n_bins;
    const double l_taps = spec.taps.n_taps();

    double est, den_inv_snr, prefactor;
    if (r < spec.n_bins) {
        est = (beta / r) * 0.5 * p_x * (tc(beta * p_x / r) - n);
        den_inv_snr = (double(r) / n) / (beta * p_x);
        prefactor = double(r) / (n * beta);
    } else {
        est = (beta / l_taps) * 0.5 * p_x * (tc(beta * p_x) - n);
        den_inv_snr = 1.0 / (beta * p_x);
        prefactor = 1.0 / beta;
    }
    est = std::max(est, 0.0);
    const double g = 1.0 + est;

    if (spec.zero_mean()) {
        // E[C_QPSK(scale |u|^2)] with the fading folded into an Exp(1) variable
        double scale = (1.0 - 1.0 / g) / (den_inv_snr + 1.0 / g);
        return prefactor * expect_cqpsk_exp(scale, q);
    }

    // Rician case: fixed-seed Monte Carlo over the conditional-mean variable
    const double mean = std::sqrt(n * spec.mean_bin_power()); // |sqrt(N) E[h~00]|
    const double sigma = std::sqrt(std::max(1.0 - 1.0 / g, 0.0));
    const double den = den_inv_snr + 1.0 / g;
    std::mt19937_64 rng(mc_seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    double acc = 0.0;
    for (int i = 0; i < mc_samples; ++i) {
        double re = mean + sigma * normal(rng);
        double im = sigma * normal(rng);
        acc += c_qpsk((re * re + im * im) / den, q);
    }
    return prefactor * acc / mc_samples;
}

static void require_zero_mean(const ChannelSpec &spec, const char *what) {
    if (!spec.zero_mean())
        throw Error(ErrorCode::NonZeroMean,
                    std::string(what) + " requires a zero-mean channel; "
                                        "use lb_tg_alternative for LOS channels");
}

double lb_tg_quad(const ChannelSpec &spec, double p_x, int r, double beta, double eta,
                  const TcFn &tc) {
    require_zero_mean(spec, "lb_tg_quad");
    if (r < 1 || r > spec.n_bins) throw Error(ErrorCode::InvalidArgument, "need 1 <= r <= N");
    if (!(eta > 0.0)) throw Error(ErrorCode::InvalidThreshold, "eta must be positive");
    if (!(beta >= 1.0)) throw Error(ErrorCode::InvalidBeta, "beta must be >= 1");
    const double n = spec.n_bins;
    const double penalty = double(r) / (n * beta) * eta;
    if (p_x <= 0.0) return -penalty;
    const double nu = (1.0 + eta) * std::log1p(1.0 / eta);
    double est, snr, prefactor;
    if (r == spec.n_bins) {
        double arg = beta * p_x / nu;
        est = (arg / (2.0 * spec.taps.n_taps())) * (tc(arg) - n);
        snr = beta * p_x;
        prefactor = 1.0 / beta;
    } else {
        double arg = beta * p_x / (double(r) * nu);
        est = (beta * p_x / nu) / (2.0 * r) * (tc(arg) - n);
        snr = (n / double(r)) * beta * p_x;
        prefactor = double(r) / (n * beta);
    }
    if (est <= 0.0) return -penalty;
    double a_eff = snr / (1.0 + (1.0 + snr) / est);
    return prefactor * expect_log1p_exp(a_eff) - penalty;
}

double lb_tg_peak(const ChannelSpec &spec, double p_x, int r, double eta, double xi,
                  const TcFn &tc) {
    require_zero_mean(spec, "lb_tg_peak");
    if (r < 1 || r > spec.n_bins) throw Error(ErrorCode::InvalidArgument, "need 1 <= r <= N");
    if (!(eta > 0.0) || !(xi > eta) || std::isinf(xi))
        throw Error(ErrorCode::InvalidThreshold, "peak branch needs 0 < eta < xi < inf");
    const double n = spec.n_bins;
    TruncGaussParams tg = TruncGaussParams::make(eta, xi);
    const double penalty = -double(r) / n * std::log(tg.theta); // positive loss
    if (p_x <= 0.0) return -penalty;
    const double nu = xi * std::log1p(1.0 / eta) / (1.0 - std::exp(eta - xi));
    double est, snr, prefactor;
    if (r == spec.n_bins) {
        double arg = p_x / nu;
        est = (arg / (2.0 * spec.taps.n_taps())) * (tc(arg) - n);
        snr = (p_x / xi) * tg.p_z;
        prefactor = 1.0;
    } else {
        double arg = p_x / (double(r) * nu);
        est = (p_x / nu) / (2.0 * r) * (tc(arg) - n);
        snr = (n / double(r)) * (p_x / xi) * tg.p_z;
        prefactor = double(r) / n;
    }
    if (est <= 0.0) return -penalty;
    double a_eff = snr / (1.0 + (1.0 + snr) / est);
    return prefactor * expect_log1p_exp(a_eff) - penalty;
}

double lb_tg_alternative(const ChannelSpec &spec, double p_x, int r, double beta, double eta,
                         double xi, const PowerConstraint &constraint, const TcFn &tc,
                         const QuadratureSpec &q) {
    if (r < 1 || r > spec.n_bins) throw Error(ErrorCode::InvalidArgument, "need 1 <= r <= N");
    if (!(eta > 0.0)) throw Error(ErrorCode::InvalidThreshold, "eta must be positive");
    const double n = spec.n_bins;
    const bool peak = constraint.is_peak();
    double penalty, snr, full_budget, prefactor;
    if (peak) {
        if (!(xi > eta) || std::isinf(xi))
            throw Error(ErrorCode::InvalidThreshold, "peak branch needs eta < xi < inf");
        beta = 1.0;
        TruncGaussParams tg = TruncGaussParams::make(eta, xi);
        penalty = -double(r) / n * std::log(tg.theta);
        snr = (n / double(r)) * (p_x / xi) * tg.p_z;
        full_budget = p_x * eta / xi; // minimal allowed symbol power
        prefactor = double(r) / n;
    } else {
        if (!(beta >= 1.0)) throw Error(ErrorCode::InvalidBeta, "beta must be >= 1");
        xi = std::numeric_limits<double>::infinity();
        penalty = double(r) / (n * beta) * eta;
        snr = (n / double(r)) * beta * p_x;
        full_budget = beta * p_x * eta / (1.0 + eta);
        prefactor = double(r) / (n * beta);
    }
    if (p_x <= 0.0) return -penalty;
    double est;
    if (r == spec.n_bins) {
        est = (full_budget / (2.0 * spec.taps.n_taps())) * (tc(full_budget) - n);
    } else {
        est = (full_budget / (2.0 * r)) * (tc(full_budget / double(r)) - n);
    }
    if (est <= 0.0) est = 0.0;
    double g = 1.0 + est;
    double frac = 1.0 - 1.0 / g; // variance share of the conditional mean
    double den = 1.0 + snr / g;
    if (spec.zero_mean()) {
        double a_eff = snr * frac / den;
        return prefactor * expect_log1p_exp(a_eff) - penalty;
    }
    double mean_sq = n * spec.mean_bin_power(); // |los|^2
    if (frac <= 1e-300)
        return prefactor * std::log1p(snr * mean_sq / den) - penalty;
    double a = snr * frac / den;            // scale on |CN(m,1)|^2
    double s = mean_sq / frac;              // noncentrality
    return prefactor * expect_log1p_noncentral(a, s, q.order) - penalty;
}

const char *family_name(LowerBoundFamily f) {
    switch (f) {
    case LowerBoundFamily::None: return "none";
    case LowerBoundFamily::Qpsk: return "qpsk";
    case LowerBoundFamily::TruncGauss: return "tg";
    case LowerBoundFamily::TruncGaussAlt: return "tg_alt";
    }
    return "?";
}

static std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    if (n <= 1 || hi <= lo) {
        g.push_back(lo);
        return g;
    }
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) g.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    return g;
}

static std::vector<int> default_r_grid(int n_bins, int l_taps) {
    std::vector<int> rs;
    if (n_bins <= 64) {
        for (int r = 1; r <= n_bins; ++r) rs.push_back(r);
        return rs;
    }
    rs = {1, l_taps, n_bins};
    for (double r = 2.0; r < n_bins; r *= 2.0) rs.push_back(int(r));
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    return rs;
}

// deterministic golden-section maximization on [lo, hi]
template <typename F> static double golden_max(F f, double lo, double hi, int iters = 40) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

static double tg_beta_cap(double alpha, int r, double eta) {
    double t = r * (1.0 + eta) * (1.0 + eta);
    return alpha * t / (1.0 + t);
}

OptimizedLowerBound optimize_lower_bound(const ChannelSpec &spec, double p_x,
                                         const PowerConstraint &constraint, const TcFn &tc,
                                         const QuadratureSpec &q, const SearchSpec &search) {
    OptimizedLowerBound best;
    if (p_x <= 0.0) return best;
    const double alpha = constraint.is_peak() ? 1.0 : constraint.alpha;
    const bool zero_mean = spec.zero_mean();
    std::vector<int> rs =
        search.r_grid.empty() ? default_r_grid(spec.n_bins, spec.taps.n_taps()) : search.r_grid;
    std::vector<double> betas =
        constraint.is_peak() ? std::vector<double>{1.0} : log_grid(1.0, alpha, search.n_beta);

    auto consider = [&](double v, LowerBoundFamily fam, int r, double beta, double eta,
                        double xi) {
        if (v > best.value) {
            best.value = v;
            best.argmax = {fam, r, beta, eta, xi};
        }
    };

    // QPSK family
    for (int r : rs)
        for (double b : betas)
            consider(lb_qpsk(spec, p_x, r, b, constraint, tc, q), LowerBoundFamily::Qpsk, r, b,
                     0.0, std::numeric_limits<double>::infinity());

    // eta grid plus the vanishing-threshold schedule point
    std::vector<double> etas = log_grid(1e-4, 1.0, search.n_eta);
    {
        double sched = 1.0 / std::expm1(std::sqrt(tc(p_x)));
        etas.push_back(std::max(sched, 1e-12));
    }
    std::vector<double> xis = log_grid(0.5, 20.0, search.n_xi);

    if (zero_mean) {
        if (constraint.is_peak()) {
            for (int r : rs)
                for (double eta : etas)
                    for (double xi : xis) {
                        if (xi <= eta * (1.0 + 1e-9)) continue;
                        consider(lb_tg_peak(spec, p_x, r, eta, xi, tc),
                                 LowerBoundFamily::TruncGauss, r, 1.0, eta, xi);
                    }
        } else {
            for (int r : rs)
                for (double eta : etas) {
                    double cap = tg_beta_cap(alpha, r, eta);
                    if (cap < 1.0) continue;
                    for (double b : log_grid(1.0, cap, std::max(search.n_beta / 2, 2)))
                        consider(lb_tg_quad(spec, p_x, r, b, eta, tc),
                                 LowerBoundFamily::TruncGauss, r, b, eta,
                                 std::numeric_limits<double>::infinity());
                }
        }
    }

    if (search.include_alternative) {
        for (int r : rs)
            for (double eta : etas) {
                if (constraint.is_peak()) {
                    for (double xi : xis) {
                        if (xi <= eta * (1.0 + 1e-9)) continue;
                        consider(lb_tg_alternative(spec, p_x, r, 1.0, eta, xi, constraint, tc, q),
                                 LowerBoundFamily::TruncGaussAlt, r, 1.0, eta, xi);
                    }
                } else {
                    double cap = tg_beta_cap(alpha, r, eta);
                    if (cap < 1.0) continue;
                    for (double b : log_grid(1.0, cap, std::max(search.n_beta / 2, 2)))
                        consider(lb_tg_alternative(spec, p_x, r, b, eta,
                                                   std::numeric_limits<double>::infinity(),
                                                   constraint, tc, q),
                                 LowerBoundFamily::TruncGaussAlt, r, b, eta,
                                 std::numeric_limits<double>::infinity());
                }
            }
    }

    // one local refinement pass on the winner's continuous parameters
    if (search.refine && best.value > 0.0) {
        auto ax = best.argmax;
        auto eval = [&](double beta, double eta, double xi) -> double {
            try {
                switch (ax.family) {
                case LowerBoundFamily::Qpsk:
                    return lb_qpsk(spec, p_x, ax.r, beta, constraint, tc, q);
                case LowerBoundFamily::TruncGauss:
                    return constraint.is_peak() ? lb_tg_peak(spec, p_x, ax.r, eta, xi, tc)
                                                : lb_tg_quad(spec, p_x, ax.r, beta, eta, tc);
                case LowerBoundFamily::TruncGaussAlt:
                    return lb_tg_alternative(spec, p_x, ax.r, beta, eta, xi, constraint, tc, q);
                default: return 0.0;
                }
            } catch (const Error &) {
                return -std::numeric_limits<double>::infinity();
            }
        };
        const double phi_lo = 1.0 / 2.2, phi_hi = 2.2; // one grid step each way
        if (!constraint.is_peak() && ax.family != LowerBoundFamily::None) {
            double cap = alpha;
            if (ax.family != LowerBoundFamily::Qpsk) cap = tg_beta_cap(alpha, ax.r, ax.eta);
            double lo = std::max(1.0, ax.beta * phi_lo), hi = std::min(cap, ax.beta * phi_hi);
            if (hi > lo)
                ax.beta = golden_max([&](double b) { return eval(b, ax.eta, ax.xi); }, lo, hi);
        }
        if (ax.family == LowerBoundFamily::TruncGauss ||
            ax.family == LowerBoundFamily::TruncGaussAlt) {
            double lo = ax.eta * phi_lo, hi = ax.eta * phi_hi;
            ax.eta = golden_max([&](double e) { return eval(ax.beta, e, ax.xi); }, lo, hi);
            if (constraint.is_peak()) {
                double xlo = std::max(ax.eta * (1.0 + 1e-6), ax.xi * phi_lo);
                double xhi = ax.xi * phi_hi;
                if (xhi > xlo)
                    ax.xi = golden_max([&](double x) { return eval(ax.beta, ax.eta, x); }, xlo,
                                       xhi);
            }
        }
        double v = eval(ax.beta, ax.eta, ax.xi);
        if (v > best.value) {
            best.value = v;
            best.argmax = ax;
        }
    }

    if (best.value <= 0.0) {
        best.value = 0.0;
        best.argmax = {};
    }
    return best;
}

std::vector<BoundPoint> bound_curve(const ChannelSpec &spec, const PowerConstraint &constraint,
                                    const std::vector<double> &snr_db_grid,
                                    const EctOptions &ect, const QuadratureSpec &q,
                                    const SearchSpec &search, int n_threads) {
    TcFn tc = make_interp_tc(spec.corr, spec.n_bins, ect);
    const int n_pts = int(snr_db_grid.size());
    std::vector<BoundPoint> out(n_pts);
    std::atomic<int> next(0);
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_pts) return;
            BoundPoint &bp = out[i];
            bp.snr_db = snr_db_grid[i];
            bp.p_x = std::pow(10.0, snr_db_grid[i] / 10.0);
            bp.ub_coh = ub_coherent(spec, bp.p_x, q);
            bp.ub_low = constraint.is_peak() ? ub_low_peak(spec, bp.p_x, tc)
                                             : ub_low_quad(spec, bp.p_x, constraint.alpha, tc);
            bp.ub = std::min(bp.ub_coh, bp.ub_low);

            // the three named lower-bound curves
            std::vector<double> betas = constraint.is_peak()
                                            ? std::vector<double>{1.0}
                                            : log_grid(1.0, constraint.alpha, search.n_beta);
            double nw = 0.0, wd = 0.0;
            for (double b : betas) {
                nw = std::max(nw, lb_qpsk(spec, bp.p_x, 1, b, constraint, tc, q));
                wd = std::max(wd, lb_qpsk(spec, bp.p_x, spec.n_bins, b, constraint, tc, q));
            }
            double tg = 0.0;
            if (spec.zero_mean()) {
                for (double eta : log_grid(1e-4, 1.0, search.n_eta)) {
                    if (constraint.is_peak()) {
                        for (double xi : log_grid(0.5, 20.0, search.n_xi)) {
                            if (xi <= eta * (1.0 + 1e-9)) continue;
                            tg = std::max(tg, lb_tg_peak(spec, bp.p_x, spec.n_bins, eta, xi, tc));
                        }
                    } else {
                        tg = std::max(tg, lb_tg_quad(spec, bp.p_x, spec.n_bins, 1.0, eta, tc));
                    }
                }
            }
            bp.lb_qpsk_nw = std::max(nw, 0.0);
            bp.lb_qpsk_wd = std::max(wd, 0.0);
            bp.lb_tg_wd = std::max(tg, 0.0);

            OptimizedLowerBound opt = optimize_lower_bound(spec, bp.p_x, constraint, tc, q, search);
            bp.lb = opt.value;
            bp.argmax = opt.argmax;
        }
    };
    int nt = n_threads > 0 ? n_threads : int(std::thread::hardware_concurrency());
    nt = std::max(1, std::min(nt, n_pts));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto &th : pool) th.join();
    return out;
}

} // namespace ectcap
