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

#include "ectcap/correlation.hpp"

#include <cmath>

#include "ectcap/errors.hpp"
#include "ectcap/special.hpp"

namespace ectcap {

TemporalCorrelation TemporalCorrelation::ar1(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw Error(ErrorCode::InvalidArgument, "AR1 requires 0 <= gamma < 1");
    TemporalCorrelation c;
    c.kind_ = Kind::Ar1;
    c.gamma_ = gamma;
    return c;
}

TemporalCorrelation TemporalCorrelation::clarke(double normalized_doppler) {
    if (!(normalized_doppler >= 0.0) || !std::isfinite(normalized_doppler))
        throw Error(ErrorCode::InvalidArgument, "Clarke requires fd*Ts >= 0");
    TemporalCorrelation c;
    c.kind_ = Kind::Clarke;
    c.fd_ts_ = normalized_doppler;
    return c;
}

TemporalCorrelation TemporalCorrelation::block_fading_middle(int block_symbols) {
    if (block_symbols < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "BlockFadingMiddle requires a positive block length in symbols");
    TemporalCorrelation c;
    c.kind_ = Kind::BlockFadingMiddle;
    c.block_symbols_ = block_symbols;
    return c;
}

TemporalCorrelation TemporalCorrelation::custom(std::vector<double> rho) {
    if (rho.empty() || rho[0] != 1.0)
        throw Error(ErrorCode::InvalidArgument, "Custom sequence must start with rho(0) = 1");
    for (double r : rho) {
        if (!std::isfinite(r) || std::fabs(r) > 1.0 + 1e-12)
            throw Error(ErrorCode::InvalidArgument, "Custom sequence requires |rho| <= 1");
    }
    TemporalCorrelation c;
    c.kind_ = Kind::Custom;
    c.rho_ = std::move(rho);
    return c;
}

int TemporalCorrelation::block_window() const {
    double d = block_history();
    if (d <= 0.0) return 0;
    if (d == std::floor(d)) return int(d);
    return std::max(int(std::ceil(d)), 2);
}

double TemporalCorrelation::rho(long lag) const {
    if (lag < 0) lag = -lag;
    if (lag == 0) return 1.0;
    switch (kind_) {
    case Kind::Ar1:
        return gamma_ == 0.0 ? 0.0 : std::pow(gamma_, double(lag));
    case Kind::Clarke:
        return bessel_j0(2.0 * M_PI * fd_ts_ * double(lag));
    case Kind::BlockFadingMiddle:
        return double(lag) <= block_history() ? 1.0 : 0.0;
    case Kind::Custom:
        if (lag >= long(rho_.size()))
            throw Error(ErrorCode::NoSuchLag, "Custom correlation has no lag " +
                                                  std::to_string(lag) + " (length " +
                                                  std::to_string(rho_.size()) + ")");
        return rho_[size_t(lag)];
    }
    return 0.0;
}

long TemporalCorrelation::max_lag() const {
    if (kind_ == Kind::Custom) return long(rho_.size()) - 1;
    return std::numeric_limits<long>::max();
}

int TemporalCorrelation::default_window(double tail_tol, int cap) const {
    switch (kind_) {
    case Kind::Ar1: {
        if (gamma_ == 0.0) return 0;
        // tail sum_{l>W} gamma^{2l} = gamma^{2(W+1)}/(1-gamma^2)
        double w = std::log(tail_tol * (1.0 - gamma_ * gamma_)) / (2.0 * std::log(gamma_)) - 1.0;
        int iw = int(std::ceil(std::max(0.0, w)));
        return std::min(iw, cap);
    }
    case Kind::BlockFadingMiddle:
        return std::min(block_window(), cap);
    case Kind::Clarke:
    case Kind::Custom: {
        // walk backwards over the partial tail sums
        long last = std::min<long>(max_lag(), cap);
        double tail = 0.0;
        for (long lag = last; lag >= 1; --lag) {
            double r = rho(lag);
            tail += r * r;
            if (tail >= tail_tol) return std::min<int>(int(lag), cap);
        }
        return 0;
    }
    }
    return cap;
}

std::string TemporalCorrelation::describe() const {
    char buf[96];
    switch (kind_) {
    case Kind::Ar1: snprintf(buf, sizeof buf, "ar1(gamma=%g)", gamma_); break;
    case Kind::Clarke: snprintf(buf, sizeof buf, "clarke(fd_ts=%g)", fd_ts_); break;
    case Kind::BlockFadingMiddle:
        snprintf(buf, sizeof buf, "block_middle(block_symbols=%d)", block_symbols_);
        break;
    case Kind::Custom: snprintf(buf, sizeof buf, "custom(len=%zu)", rho_.size()); break;
    }
    return buf;
}

Eigen::MatrixXd build_delta(const TemporalCorrelation &corr, long k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "build_delta requires k >= 0");
    if (corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle) {
        const double d = corr.block_history();
        const long m = corr.block_window();
        const long mm = std::min<long>(k, m);
        if (d == std::floor(d)) return Eigen::MatrixXd::Ones(mm, mm);
        // weighted construction: Delta = (d/m) 11^T + b (I - 11^T/m)
        double a2 = d / double(m);
        double b = (1.0 - a2) * double(m) / double(m - 1);
        Eigen::MatrixXd delta = Eigen::MatrixXd::Constant(mm, mm, a2 - b / double(m));
        delta.diagonal().array() = a2 + b * (1.0 - 1.0 / double(m));
        return delta;
    }
    Eigen::VectorXd col(k);
    for (long i = 0; i < k; ++i) col[i] = corr.rho(i);
    Eigen::MatrixXd delta(k, k);
    for (long i = 0; i < k; ++i)
        for (long j = 0; j < k; ++j) delta(i, j) = col[std::labs(i - j)];
    if (corr.kind() == TemporalCorrelation::Kind::Custom && k > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(delta, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw Error(ErrorCode::NonPSD, "Custom correlation sequence is not PSD at k = " +
                                               std::to_string(k));
    }
    return delta;
}

Eigen::VectorXd build_d_vector(const TemporalCorrelation &corr, long k) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "build_d_vector requires k >= 0");
    if (corr.kind() == TemporalCorrelation::Kind::BlockFadingMiddle) {
        const double d = corr.block_history();
        const long m = corr.block_window();
        const long mm = std::min<long>(k, m);
        if (d == std::floor(d)) return Eigen::VectorXd::Ones(mm);
        return Eigen::VectorXd::Constant(mm, std::sqrt(d / double(m)));
    }
    Eigen::VectorXd v(k);
    for (long i = 0; i < k; ++i) v[i] = corr.rho(k - i);
    return v;
}

} // namespace ectcap
