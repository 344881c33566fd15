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

#include "ectcap/coherence.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>

#include "ectcap/errors.hpp"

namespace ectcap {

void EctOptions::validate() const {
    if (k_max < 2) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 2");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw Error(ErrorCode::InvalidArgument, "rel_tol must be in (0,1)");
    if (k_step < 2) throw Error(ErrorCode::InvalidArgument, "k_step must be >= 2");
    if (k_start < 1) throw Error(ErrorCode::InvalidArgument, "k_start must be >= 1");
}

// History sizes to probe. A probe of size k touches lags up to k, so Custom
// sequences cap the schedule at their last defined lag instead of padding.
// BlockFadingMiddle is exact at its d usable past symbols: one probe.
static std::vector<long> probe_schedule(const TemporalCorrelation &corr, const EctOptions &opts) {
    if (corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle) {
        long m = corr.block_window();
        return m >= 1 ? std::vector<long>{m} : std::vector<long>{};
    }
    long cap = opts.k_max;
    if (corr.kind() == TemporalCorrelation::Kind::Custom)
        cap = std::min<long>(cap, corr.max_lag());
    std::vector<long> ks;
    long k = std::min<long>(opts.k_start, cap);
    if (k < 1) return ks;
    for (;;) {
        ks.push_back(k);
        if (k >= cap) break;
        k = std::min<long>(k * opts.k_step, cap);
    }
    return ks;
}

// Definition-route quadratic form: 2N D^T (N p [Delta - D D^T] + I)^{-1} D + N,
// solved by Cholesky with a single jitter retry.
static double tc_value_dense(const TemporalCorrelation &corr, int n_bins, double p_x, long k) {
    Eigen::MatrixXd delta = build_delta(corr, k);
    Eigen::VectorXd d = build_d_vector(corr, k);
    if (d.size() == 0) return double(n_bins);
    Eigen::MatrixXd m = (double(n_bins) * p_x) * (delta - d * d.transpose());
    m.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        m.diagonal().array() += 1e-12;
        llt.compute(m);
        if (llt.info() != Eigen::Success)
            throw Error(ErrorCode::Numerical, "Cholesky failed on the coherence-time matrix");
    }
    Eigen::VectorXd z = llt.solve(d);
    return 2.0 * double(n_bins) * d.dot(z) + double(n_bins);
}

// Levinson-Durbin solve for a symmetric positive definite Toeplitz system
// T x = b, with T given by its first column.
static Eigen::VectorXd levinson_solve(const Eigen::VectorXd &t, const Eigen::VectorXd &b) {
    const long n = t.size();
    Eigen::VectorXd x(n), f(n), f_prev(n);
    if (t[0] <= 0.0) throw Error(ErrorCode::Numerical, "Toeplitz matrix not positive definite");
    f.setZero();
    x.setZero();
    f[0] = 1.0 / t[0];
    x[0] = b[0] / t[0];
    for (long m = 1; m < n; ++m) {
        // forward vector update
        double ef = 0.0;
        for (long i = 0; i < m; ++i) ef += t[m - i] * f[i];
        double denom = 1.0 - ef * ef;
        if (denom <= 0.0)
            throw Error(ErrorCode::Numerical, "Levinson recursion lost positive definiteness");
        f_prev.head(m) = f.head(m);
        f[m] = 0.0;
        double c1 = 1.0 / denom, c2 = -ef / denom;
        for (long i = 0; i <= m; ++i) {
            double fwd = i < m ? f_prev[i] : 0.0;
            double bwd = i >= 1 ? f_prev[m - i] : 0.0;
            f[i] = c1 * fwd + c2 * bwd;
        }
        // solution update
        double ex = 0.0;
        for (long i = 0; i < m; ++i) ex += t[m - i] * x[i];
        double coef = b[m] - ex;
        for (long i = 0; i <= m; ++i) x[i] += coef * f[m - i];
    }
    return x;
}

// Matrix-inversion-lemma route: q = N p D^T (I + N p Delta)^{-1} D.
static double tc_value_toeplitz(const TemporalCorrelation &corr, int n_bins, double p_x, long k) {
    const double s = double(n_bins) * p_x;
    Eigen::VectorXd d = build_d_vector(corr, k);
    const long kk = d.size();
    if (kk == 0) return double(n_bins);
    Eigen::VectorXd t(kk);
    if (corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle) {
        // the block construction is constant off the diagonal, hence Toeplitz
        Eigen::MatrixXd delta = build_delta(corr, k);
        t.setConstant(kk > 1 ? s * delta(0, 1) : 0.0);
        t[0] = s * delta(0, 0);
    } else {
        for (long i = 0; i < kk; ++i) t[i] = s * corr.rho(i);
    }
    t[0] += 1.0;
    Eigen::VectorXd z = levinson_solve(t, d);
    double q = s * d.dot(z);
    if (1.0 - q <= 1e-14)
        throw Error(ErrorCode::DegenerateEstimation,
                    "channel perfectly estimable at this precision (1 - q <= 1e-14)");
    return double(n_bins) + (2.0 / p_x) * q / (1.0 - q);
}

using TcValueFn = double (*)(const TemporalCorrelation &, int, double, long);

static EctResult run_limit(const TemporalCorrelation &corr, int n_bins, double p_x,
                           const EctOptions &opts, TcValueFn value_at) {
    opts.validate();
    if (!(p_x > 0.0)) throw Error(ErrorCode::InvalidArgument, "p_x must be positive");
    if (corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle &&
        corr.block_window() > 2048) {
        // the construction makes the bracketed matrix orthogonal to D, so
        // the value is N(2d+1) at every SNR; skip the large solve
        EctResult res;
        res.value = double(n_bins) * corr.block_symbols();
        res.k_used = corr.block_window();
        res.converged = true;
        return res;
    }
    auto ks = probe_schedule(corr, opts);
    EctResult res;
    res.value = double(n_bins);
    if (ks.empty()) { // no history at all: the quadratic form is empty
        res.converged = true;
        return res;
    }
    double prev = 0.0;
    bool have_prev = false;
    for (long k : ks) {
        double v = value_at(corr, n_bins, p_x, k);
        if (have_prev && v < prev - 1e-9 * std::fabs(prev))
            throw Error(ErrorCode::Numerical,
                        "coherence-time quadratic form decreased with history size");
        res.value = v;
        res.k_used = k;
        if (have_prev) {
            res.last_rel_change = std::fabs(v - prev) / std::max(prev, 1e-300);
            if (res.last_rel_change < opts.rel_tol) {
                res.converged = true;
                return res;
            }
        }
        prev = v;
        have_prev = true;
    }
    // the block construction is exact at its single probe; anything else
    // that exhausted the schedule is a genuine truncation
    res.converged = corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle;
    return res;
}

EctResult effective_coherence_time(const TemporalCorrelation &corr, int n_bins, double p_x,
                                   const EctOptions &opts) {
    return run_limit(corr, n_bins, p_x, opts, tc_value_dense);
}

EctResult effective_coherence_time_alt(const TemporalCorrelation &corr, int n_bins, double p_x,
                                       const EctOptions &opts) {
    return run_limit(corr, n_bins, p_x, opts, tc_value_toeplitz);
}

EctResult tc0_low_snr(const TemporalCorrelation &corr, int n_bins, const EctOptions &opts) {
    opts.validate();
    auto ks = probe_schedule(corr, opts);
    EctResult res;
    res.value = double(n_bins);
    if (ks.empty()) {
        res.converged = true;
        return res;
    }
    double prev = 0.0;
    bool have_prev = false;
    double sum = 0.0;
    long done = 0;
    for (long k : ks) {
        if (corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle) {
            sum = corr.block_history(); // D^T D = d exactly
        } else {
            for (long lag = done + 1; lag <= k; ++lag) {
                double r = corr.rho(lag);
                sum += r * r;
            }
            done = k;
        }
        double v = 2.0 * double(n_bins) * sum + double(n_bins);
        res.value = v;
        res.k_used = k;
        if (have_prev) {
            res.last_rel_change = std::fabs(v - prev) / std::max(prev, 1e-300);
            if (res.last_rel_change < opts.rel_tol) {
                res.converged = true;
                return res;
            }
        }
        prev = v;
        have_prev = true;
    }
    res.converged = corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle;
    return res;
}

std::vector<EctSweepPoint> tc_sweep(const TemporalCorrelation &corr, int n_bins,
                                    const std::vector<double> &p_grid, const EctOptions &opts,
                                    EctEngine engine) {
    std::vector<EctSweepPoint> out(p_grid.size());
    for (size_t i = 0; i < p_grid.size(); ++i) {
        out[i].p_x = p_grid[i];
        try {
            out[i].result = engine == EctEngine::Dense
                                ? effective_coherence_time(corr, n_bins, p_grid[i], opts)
                                : effective_coherence_time_alt(corr, n_bins, p_grid[i], opts);
        } catch (const Error &e) {
            out[i].error = std::string(Error::code_name(e.code())) + ": " + e.what();
        }
    }
    return out;
}

TcFn make_exact_tc(const TemporalCorrelation &corr, int n_bins, const EctOptions &opts) {
    auto memo = std::make_shared<std::map<double, double>>();
    auto mtx = std::make_shared<std::mutex>();
    return [corr, n_bins, opts, memo, mtx](double p) -> double {
        if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "p_x must be positive");
        {
            std::lock_guard<std::mutex> lock(*mtx);
            auto it = memo->find(p);
            if (it != memo->end()) return it->second;
        }
        double v = effective_coherence_time_alt(corr, n_bins, p, opts).value;
        std::lock_guard<std::mutex> lock(*mtx);
        (*memo)[p] = v;
        return v;
    };
}

TcFn make_interp_tc(const TemporalCorrelation &corr, int n_bins, const EctOptions &opts,
                    int points_per_decade) {
    if (points_per_decade < 1)
        throw Error(ErrorCode::InvalidArgument, "points_per_decade must be >= 1");
    const double step = std::log(10.0) / points_per_decade;

    // low-SNR plateau: once a node lands within 0.1% of Tc0, all smaller p
    // are clamped to it (the curve is monotone and bounded by Tc0)
    double plateau = -1.0;
    {
        EctOptions topts = opts;
        topts.k_max = std::max(opts.k_max, 1 << 16);
        try {
            EctResult t0 = tc0_low_snr(corr, n_bins, topts);
            if (t0.converged) plateau = t0.value;
        } catch (const Error &) {
        }
    }

    struct State {
        std::map<long, double> memo; // grid index -> ln Tc
        long floor_idx = std::numeric_limits<long>::min();
        std::mutex mtx;
    };
    auto st = std::make_shared<State>();
    auto node = [corr, n_bins, opts, st, step, plateau](long i) -> double {
        {
            std::lock_guard<std::mutex> lock(st->mtx);
            if (i <= st->floor_idx) i = st->floor_idx;
            auto it = st->memo.find(i);
            if (it != st->memo.end()) return it->second;
        }
        double v = std::log(
            effective_coherence_time_alt(corr, n_bins, std::exp(double(i) * step), opts).value);
        std::lock_guard<std::mutex> lock(st->mtx);
        st->memo[i] = v;
        if (plateau > 0.0 && std::exp(v) >= 0.999 * plateau)
            st->floor_idx = std::max(st->floor_idx, i);
        return v;
    };
    return [node, st, step](double p) -> double {
        if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "p_x must be positive");
        double u = std::log(p) / step;
        long i = long(std::floor(u));
        {
            std::lock_guard<std::mutex> lock(st->mtx);
            if (i < st->floor_idx) return std::exp(st->memo.at(st->floor_idx));
        }
        double w = u - double(i);
        double lo = node(i);
        if (w == 0.0) return std::exp(lo);
        double hi = node(i + 1);
        return std::exp(lo + w * (hi - lo));
    };
}

} // namespace ectcap
