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

#include "ectcap/conditional.hpp"

#include <cmath>

#include "ectcap/errors.hpp"

namespace ectcap {

ConditionalState ConditionalState::prior(const ChannelSpec &spec) {
    ConditionalState s;
    s.mu = spec.mean_freq();
    s.cov = freq_tap_covariance(spec);
    s.history_len = 0;
    return s;
}

ConditionalState conditional_distribution(const ChannelSpec &spec,
                                          const std::vector<Eigen::VectorXcd> &past_inputs,
                                          const std::vector<Eigen::VectorXcd> &past_outputs) {
    const long n = spec.n_bins;
    if (past_inputs.size() != past_outputs.size())
        throw Error(ErrorCode::DimensionMismatch, "input/output history lengths differ");
    for (const auto &v : past_inputs)
        if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "input vector length != N");
    for (const auto &v : past_outputs)
        if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "output vector length != N");

    long k = long(past_inputs.size());
    if (k == 0) return ConditionalState::prior(spec);

    // correlation structure over the usable window (block fading caps it)
    Eigen::MatrixXd delta = build_delta(spec.corr, k);
    Eigen::VectorXd dvec = build_d_vector(spec.corr, k);
    const long kw = delta.rows();
    const long first = k - kw; // condition on the kw most recent symbols
    if (kw == 0) return ConditionalState::prior(spec);

    const Eigen::MatrixXcd c_freq = freq_tap_covariance(spec);
    const Eigen::VectorXcd mean_bin = spec.mean_freq();
    const double sqn = std::sqrt(double(n));

    // stacked input diagonal, past covariance Delta (x) C, cross D (x) C
    Eigen::VectorXcd xs(kw * n);
    for (long i = 0; i < kw; ++i) xs.segment(i * n, n) = past_inputs[size_t(first + i)];

    Eigen::MatrixXcd a(kw * n, kw * n);
    for (long i = 0; i < kw; ++i)
        for (long j = 0; j < kw; ++j)
            a.block(i * n, j * n, n, n) = delta(i, j) * c_freq;
    // A = N diag(xs) C_past diag(xs)^dagger + I, formed as a Hadamard scale
    for (long rr = 0; rr < kw * n; ++rr)
        for (long cc = 0; cc < kw * n; ++cc)
            a(rr, cc) *= double(n) * xs[rr] * std::conj(xs[cc]);
    a.diagonal().array() += 1.0;

    Eigen::MatrixXcd cross(kw * n, n);
    for (long i = 0; i < kw; ++i) cross.block(i * n, 0, n, n) = dvec[i] * c_freq;
    // diag(xs) * cross
    Eigen::MatrixXcd cross_x = xs.asDiagonal() * cross;

    Eigen::VectorXcd b(kw * n);
    for (long i = 0; i < kw; ++i)
        b.segment(i * n, n) =
            past_outputs[size_t(first + i)] -
            sqn * past_inputs[size_t(first + i)].cwiseProduct(mean_bin);

    Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw Error(ErrorCode::Numerical, "conditioning matrix factorization failed");

    ConditionalState s;
    s.mu = mean_bin + sqn * (cross_x.adjoint() * ldlt.solve(b));
    Eigen::MatrixXcd lam = c_freq - double(n) * (cross_x.adjoint() * ldlt.solve(cross_x));
    s.cov = 0.5 * (lam + lam.adjoint());
    s.history_len = k;
    return s;
}

ConditionalState recursive_update(const ConditionalState &state, const ChannelSpec &spec,
                                  const Eigen::VectorXcd &x_k, const Eigen::VectorXcd &y_k,
                                  int window) {
    if (x_k.size() != spec.n_bins || y_k.size() != spec.n_bins)
        throw Error(ErrorCode::DimensionMismatch, "symbol vector length != N");
    int w = window > 0 ? window : std::max(spec.corr.default_window(), 1);

    ConditionalState next;
    next.win_x_ = state.win_x_;
    next.win_y_ = state.win_y_;
    next.win_x_.push_back(x_k);
    next.win_y_.push_back(y_k);
    while (long(next.win_x_.size()) > w) {
        next.win_x_.pop_front();
        next.win_y_.pop_front();
    }
    std::vector<Eigen::VectorXcd> xs(next.win_x_.begin(), next.win_x_.end());
    std::vector<Eigen::VectorXcd> ys(next.win_y_.begin(), next.win_y_.end());
    ConditionalState batch = conditional_distribution(spec, xs, ys);
    next.mu = std::move(batch.mu);
    next.cov = std::move(batch.cov);
    next.history_len = state.history_len + 1;
    return next;
}

WidebandCaError wideband_ca_error(const ChannelSpec &spec, double p, double beta,
                                  const TcFn &tc) {
    if (!(p > 0.0) || !(beta > 0.0))
        throw Error(ErrorCode::InvalidArgument, "p and beta must be positive");
    const double n = spec.n_bins;
    const int l_taps = spec.taps.n_taps();
    WidebandCaError out;
    out.per_tap = Eigen::VectorXd::Zero(l_taps);
    double acc = 0.0;
    for (int l = 0; l < l_taps; ++l) {
        double c = spec.taps.powers[l];
        if (c <= 0.0) continue; // zero-power taps carry no error mass
        double err = 1.0 / (1.0 / c + 0.5 * beta * p * (tc(beta * p * c) - n));
        out.per_tap[l] = err;
        acc += err;
    }
    out.per_bin = acc / n;
    // never above the single-tap-concentration bound of the same budget
    double cap = (1.0 / n) / (1.0 + (beta * p / (2.0 * l_taps)) * (tc(beta * p) - n));
    if (out.per_bin > cap * (1.0 + 1e-9) + 1e-300)
        throw Error(ErrorCode::Numerical, "wideband error exceeded its concentration bound");
    return out;
}

double narrowband_ca_error(const ChannelSpec &spec, double p, const TcFn &tc) {
    if (!(p > 0.0)) throw Error(ErrorCode::InvalidArgument, "p must be positive");
    const double n = spec.n_bins;
    return (1.0 / n) / (1.0 + 0.5 * p * (tc(p) - n));
}

double peak_error_floor(const ChannelSpec &spec, double p_x, const TcFn &tc) {
    return narrowband_ca_error(spec, p_x, tc);
}

double quad_moment_bound(const ChannelSpec &spec, double p_x, double alpha, const TcFn &tc) {
    if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 1");
    if (!(p_x > 0.0)) return 0.0;
    const double n = spec.n_bins;
    double g = 1.0 - 1.0 / (1.0 + 0.5 * p_x * (tc(p_x) - n));
    return alpha * g * g;
}

TruncGaussParams TruncGaussParams::make(double eta, double xi) {
    if (!(eta >= 0.0) || !(xi > eta))
        throw Error(ErrorCode::InvalidThreshold, "need 0 <= eta < xi");
    TruncGaussParams t;
    t.eta = eta;
    t.xi = xi;
    double ee = std::exp(-eta);
    double ex = std::isinf(xi) ? 0.0 : std::exp(-xi);
    t.theta = ee - ex;
    if (!(t.theta > 0.0))
        throw Error(ErrorCode::InvalidThreshold, "empty truncation interval");
    double xe = std::isinf(xi) ? 0.0 : xi * ex;
    t.p_z = 1.0 + (eta * ee - xe) / t.theta;
    double xe2 = std::isinf(xi) ? 0.0 : (xi * xi + 2.0 * xi) * ex;
    t.m4 = 2.0 + ((eta * eta + 2.0 * eta) * ee - xe2) / t.theta;
    return t;
}

double tg_error_bound(const ChannelSpec &spec, double p_x, int r, double beta,
                      const TruncGaussParams &tg, PowerConstraint::Kind kind, const TcFn &tc) {
    const double n = spec.n_bins;
    if (r < 1 || r > spec.n_bins)
        throw Error(ErrorCode::InvalidArgument, "need 1 <= r <= N");
    if (!(p_x > 0.0)) throw Error(ErrorCode::InvalidArgument, "p_x must be positive");
    double zeta; // effective per-bin estimation budget
    if (kind == PowerConstraint::Kind::Quadratic) {
        if (!(tg.eta > 0.0))
            throw Error(ErrorCode::InvalidThreshold,
                        "quadratic truncated-Gaussian bound requires eta > 0");
        if (!std::isinf(tg.xi))
            throw Error(ErrorCode::InvalidThreshold,
                        "quadratic truncated-Gaussian bound uses xi = inf");
        double nu = (1.0 + tg.eta) * std::log1p(1.0 / tg.eta);
        zeta = beta * (n / r) * p_x / nu;
    } else {
        if (!(tg.eta > 0.0) || std::isinf(tg.xi))
            throw Error(ErrorCode::InvalidThreshold,
                        "peak truncated-Gaussian bound requires 0 < eta < xi < inf");
        double nu = tg.xi * std::log1p(1.0 / tg.eta) / (1.0 - std::exp(tg.eta - tg.xi));
        zeta = (n / r) * p_x / nu;
    }
    if (r == int(spec.n_bins)) {
        // per-tap sum, the same diagonalization as the constant-amplitude case
        double acc = 0.0;
        for (int l = 0; l < spec.taps.n_taps(); ++l) {
            double c = spec.taps.powers[l];
            if (c <= 0.0) continue;
            acc += 1.0 / (1.0 / c + 0.5 * zeta * (tc(zeta * c) - n));
        }
        return acc / n;
    }
    return (1.0 / n) / (1.0 + (zeta / (2.0 * n)) * (tc(zeta / n) - n));
}

} // namespace ectcap
