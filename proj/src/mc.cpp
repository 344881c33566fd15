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

#include "ectcap/mc.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "ectcap/conditional.hpp"
#include "ectcap/errors.hpp"
#include "ectcap/special.hpp"

namespace ectcap {

void McConfig::validate() const {
    if (n_symbols < 2 || n_trials < 2)
        throw Error(ErrorCode::InvalidArgument, "need n_symbols >= 2 and n_trials >= 2");
}

double gaussian_rate_approximation(const ChannelSpec &spec, double p_x, const TcFn &tc) {
    if (!spec.zero_mean())
        throw Error(ErrorCode::NonZeroMean, "Gaussian rate forms assume a zero-mean channel");
    if (p_x <= 0.0) return 0.0;
    const double n = spec.n_bins;
    double eps = wideband_ca_error(spec, p_x, 1.0, tc).per_bin;
    double a = n * p_x * (1.0 / n - eps) / (1.0 + n * p_x * eps);
    return expect_log1p_exp(a);
}

namespace {

// AR representation of the tap temporal dynamics: h_{k+1} = sum a_j h_{k+1-j} + e
struct ArModel {
    std::vector<double> coef; // a_1 .. a_p
    double innov = 0.0;       // innovation variance of the normalized tap
};

// Levinson-Durbin fit of an AR(p) model to rho(0..p)
ArModel yule_walker(const TemporalCorrelation &corr, int p) {
    ArModel m;
    m.coef.assign(size_t(p), 0.0);
    std::vector<double> r(size_t(p) + 1);
    for (int i = 0; i <= p; ++i) r[size_t(i)] = corr.rho(i);
    double e = r[0];
    std::vector<double> a(size_t(p) + 1, 0.0), tmp(size_t(p) + 1, 0.0);
    for (int i = 1; i <= p; ++i) {
        double acc = r[size_t(i)];
        for (int j = 1; j < i; ++j) acc -= a[size_t(j)] * r[size_t(i - j)];
        double k = acc / e;
        k = std::clamp(k, -1.0 + 1e-12, 1.0 - 1e-12);
        tmp = a;
        a[size_t(i)] = k;
        for (int j = 1; j < i; ++j) a[size_t(j)] = tmp[size_t(j)] - k * tmp[size_t(i - j)];
        e *= (1.0 - k * k);
    }
    for (int j = 1; j <= p; ++j) m.coef[size_t(j - 1)] = a[size_t(j)];
    m.innov = std::max(e, 0.0);
    return m;
}

ArModel ar_model_for(const TemporalCorrelation &corr) {
    using Kind = TemporalCorrelation::Kind;
    switch (corr.kind()) {
    case Kind::Ar1: {
        double g = corr.gamma();
        return {{g}, 1.0 - g * g};
    }
    case Kind::BlockFadingMiddle:
        if (corr.block_history() < 1) return {{0.0}, 1.0};
        return {{1.0}, 0.0}; // channel constant within the block
    case Kind::Clarke:
    case Kind::Custom: {
        int p = std::clamp(corr.default_window(), 1, 96);
        p = int(std::min<long>(p, std::max<long>(corr.max_lag(), 1)));
        return yule_walker(corr, p);
    }
    }
    return {{0.0}, 1.0};
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

McRate gaussian_rate_simulation(const ChannelSpec &spec, double p_x, const McConfig &cfg) {
    cfg.validate();
    if (!spec.zero_mean())
        throw Error(ErrorCode::NonZeroMean, "Gaussian rate simulation assumes a zero-mean channel");
    if (!(p_x > 0.0)) throw Error(ErrorCode::InvalidArgument, "p_x must be positive");

    const int n = spec.n_bins;
    const int l_taps = spec.taps.n_taps();
    const ArModel model = ar_model_for(spec.corr);
    const int p_ord = int(model.coef.size());
    const int dim = p_ord * l_taps;

    int burn = cfg.window > 0 ? cfg.window : spec.corr.default_window();
    burn = std::min(burn, cfg.n_symbols / 4);

    // frequency response columns of the L taps: Psi = F^dagger[:, 0:L]
    Eigen::MatrixXcd psi(n, l_taps);
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < l_taps; ++l) {
            double ph = 2.0 * M_PI * double(m) * double(l) / double(n);
            psi(m, l) = cplx(std::cos(ph), std::sin(ph)) / std::sqrt(double(n));
        }

    // stationary prior of the stacked state [h_{k-p+1} .. h_k]
    Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < p_ord; ++i)
        for (int j = 0; j < p_ord; ++j) {
            double rho = spec.corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle
                             ? 1.0
                             : spec.corr.rho(std::labs(i - j));
            for (int l = 0; l < l_taps; ++l)
                p0(i * l_taps + l, j * l_taps + l) = rho * spec.taps.powers[l];
        }

    const Eigen::MatrixXcd q_innov =
        model.innov * spec.taps.powers.asDiagonal().toDenseMatrix().cast<cplx>();

    std::vector<double> trial_rate(size_t(cfg.n_trials), 0.0);
    std::atomic<int> next(0);
    auto run_trials = [&]() {
        Eigen::MatrixXcd cov(dim, dim), m_freq(n, n), s(n, n);
        Eigen::MatrixXcd cross(dim, n), gain(dim, n);
        Eigen::VectorXcd x(n);
        for (;;) {
            int trial = next.fetch_add(1);
            if (trial >= cfg.n_trials) return;
            std::mt19937_64 rng(splitmix64(cfg.seed + std::uint64_t(trial)));
            std::normal_distribution<double> normal(0.0, 1.0);
            cov = p0;
            double acc = 0.0;
            long cnt = 0;
            for (int k = 0; k < cfg.n_symbols; ++k) {
                const auto last = Eigen::seq(dim - l_taps, dim - 1);
                // frequency-domain conditional covariance of the current symbol
                m_freq.noalias() = psi * cov(last, last) * psi.adjoint();
                if (k >= burn) {
                    double term = 0.0;
                    for (int m = 0; m < n; ++m) {
                        double lam = std::max(m_freq(m, m).real(), 0.0);
                        double a = n * p_x * std::max(1.0 / n - lam, 0.0) /
                                   (1.0 + n * p_x * lam);
                        term += expect_log1p_exp(a);
                    }
                    acc += term / n;
                    ++cnt;
                }
                // draw the input symbol and condition on it (outputs do not
                // enter the covariance)
                double sd = std::sqrt(p_x / 2.0);
                for (int m = 0; m < n; ++m) x[m] = cplx(sd * normal(rng), sd * normal(rng));
                for (int rr = 0; rr < n; ++rr)
                    for (int cc = 0; cc < n; ++cc)
                        s(rr, cc) = double(n) * x[rr] * std::conj(x[cc]) * m_freq(rr, cc);
                s.diagonal().array() += 1.0;
                cross.noalias() = cov(Eigen::all, last) * psi.adjoint();
                for (int cc = 0; cc < n; ++cc)
                    cross.col(cc) *= std::sqrt(double(n)) * std::conj(x[cc]);
                Eigen::LDLT<Eigen::MatrixXcd> ldlt(s);
                gain.noalias() = ldlt.solve(cross.adjoint()).adjoint();
                cov.noalias() -= gain * cross.adjoint();
                // advance one symbol through the AR dynamics
                if (p_ord == 1) {
                    double a2 = model.coef[0] * model.coef[0];
                    cov = a2 * cov + q_innov;
                } else {
                    Eigen::MatrixXcd shifted(dim, dim);
                    const int head = dim - l_taps;
                    // new block row: sum_j a_j h_{k+1-j}
                    Eigen::MatrixXcd pred_cross(l_taps, dim);
                    pred_cross.setZero();
                    for (int j = 0; j < p_ord; ++j)
                        pred_cross += model.coef[size_t(j)] *
                                      cov.block((p_ord - 1 - j) * l_taps, 0, l_taps, dim);
                    Eigen::MatrixXcd pred_var = Eigen::MatrixXcd::Zero(l_taps, l_taps);
                    for (int j = 0; j < p_ord; ++j)
                        pred_var += model.coef[size_t(j)] *
                                    pred_cross.block(0, (p_ord - 1 - j) * l_taps, l_taps, l_taps);
                    pred_var = 0.5 * (pred_var + pred_var.adjoint()).eval();
                    shifted.topLeftCorner(head, head) = cov.bottomRightCorner(head, head);
                    shifted.block(head, 0, l_taps, head) =
                        pred_cross.block(0, l_taps, l_taps, head);
                    shifted.block(0, head, head, l_taps) =
                        shifted.block(head, 0, l_taps, head).adjoint();
                    shifted.block(head, head, l_taps, l_taps) = pred_var + q_innov;
                    cov = shifted;
                }
            }
            trial_rate[size_t(trial)] = cnt > 0 ? acc / double(cnt) : 0.0;
        }
    };
    int nt = cfg.n_threads > 0 ? cfg.n_threads : int(std::thread::hardware_concurrency());
    nt = std::max(1, std::min(nt, cfg.n_trials));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(run_trials);
    run_trials();
    for (auto &th : pool) th.join();

    // jackknife standard error of the trial mean
    const int t_n = cfg.n_trials;
    double sum = 0.0;
    for (double v : trial_rate) sum += v;
    double mean = sum / t_n;
    double jk_mean = 0.0;
    std::vector<double> loo(size_t(t_n), 0.0);
    for (int i = 0; i < t_n; ++i) {
        loo[size_t(i)] = (sum - trial_rate[size_t(i)]) / double(t_n - 1);
        jk_mean += loo[size_t(i)];
    }
    jk_mean /= t_n;
    double var = 0.0;
    for (int i = 0; i < t_n; ++i) {
        double d = loo[size_t(i)] - jk_mean;
        var += d * d;
    }
    var *= double(t_n - 1) / double(t_n);
    return {mean, std::sqrt(var)};
}

} // namespace ectcap
