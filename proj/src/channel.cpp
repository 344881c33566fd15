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

#include "ectcap/channel.hpp"

#include <cmath>

#include <json.hpp>

#include "ectcap/errors.hpp"

namespace ectcap {

TapProfile TapProfile::equal(int n_taps) {
    if (n_taps < 1) throw Error(ErrorCode::InvalidArgument, "need at least one tap");
    TapProfile t;
    t.powers = Eigen::VectorXd::Constant(n_taps, 1.0 / n_taps);
    return t;
}

TapProfile TapProfile::from_powers(std::vector<double> powers, std::optional<cplx> los) {
    TapProfile t;
    t.powers = Eigen::Map<Eigen::VectorXd>(powers.data(), long(powers.size()));
    t.los_mean = los;
    t.validate();
    return t;
}

void TapProfile::validate() const {
    if (powers.size() < 1) throw Error(ErrorCode::InvalidArgument, "need at least one tap");
    if (powers.minCoeff() < 0.0)
        throw Error(ErrorCode::InvalidArgument, "tap powers must be nonnegative");
    if (std::fabs(powers.sum() - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidArgument, "tap powers must sum to 1");
}

ChannelSpec::ChannelSpec(int n, TapProfile t, TemporalCorrelation c)
    : n_bins(n), taps(std::move(t)), corr(std::move(c)) {
    if (n_bins < 1) throw Error(ErrorCode::InvalidArgument, "n_bins must be positive");
    taps.validate();
    if (taps.n_taps() > n_bins)
        throw Error(ErrorCode::InvalidArgument, "delay spread L must not exceed n_bins");
}

Eigen::VectorXcd ChannelSpec::mean_freq() const {
    // LOS mean sits on tap 0, so the frequency response of the mean is flat
    Eigen::VectorXcd m = Eigen::VectorXcd::Zero(n_bins);
    if (taps.los_mean) m.setConstant(*taps.los_mean / std::sqrt(double(n_bins)));
    return m;
}

Eigen::MatrixXcd freq_tap_covariance(const ChannelSpec &spec) {
    const int n = spec.n_bins;
    const int l_taps = spec.taps.n_taps();
    // (F^dagger diag(c) F)_{m,q} = (1/N) sum_l c_l e^{2 pi j l (m-q) / N};
    // depends on m-q only, so compute one column of phases
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
    for (int d = 0; d < n; ++d) {
        cplx acc = 0.0;
        for (int l = 0; l < l_taps; ++l) {
            double ph = 2.0 * M_PI * double(l) * double(d) / double(n);
            acc += spec.taps.powers[l] * cplx(std::cos(ph), std::sin(ph));
        }
        g[d] = acc / double(n);
    }
    Eigen::MatrixXcd cov(n, n);
    for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) {
            int d = m - q;
            cov(m, q) = d >= 0 ? g[d] : std::conj(g[-d]);
        }
    return cov;
}

PowerConstraint PowerConstraint::quadratic(double alpha) {
    if (!(alpha >= 1.0))
        throw Error(ErrorCode::InvalidArgument, "quadratic constraint requires alpha >= 1");
    return {Kind::Quadratic, alpha};
}

static TemporalCorrelation corr_from_json(const nlohmann::json &j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ar1") return TemporalCorrelation::ar1(j.at("gamma").get<double>());
    if (kind == "clarke") return TemporalCorrelation::clarke(j.at("fd_ts").get<double>());
    if (kind == "block_middle")
        return TemporalCorrelation::block_fading_middle(j.at("block_symbols").get<int>());
    if (kind == "custom")
        return TemporalCorrelation::custom(j.at("rho").get<std::vector<double>>());
    throw Error(ErrorCode::InvalidArgument, "unknown correlation kind '" + kind + "'");
}

ChannelSpec channel_spec_from_json_text(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int n_bins = j.at("n_bins").get<int>();
    const auto &jt = j.at("taps");
    TapProfile taps;
    if (jt.contains("powers")) {
        auto p = jt.at("powers").get<std::vector<double>>();
        taps.powers = Eigen::Map<Eigen::VectorXd>(p.data(), long(p.size()));
    } else {
        taps = TapProfile::equal(jt.at("n_taps").get<int>());
    }
    if (jt.contains("los_mean") && !jt.at("los_mean").is_null()) {
        auto lm = jt.at("los_mean").get<std::vector<double>>();
        if (lm.size() != 2)
            throw Error(ErrorCode::InvalidArgument, "los_mean must be [re, im]");
        taps.los_mean = cplx(lm[0], lm[1]);
    }
    return ChannelSpec(n_bins, std::move(taps), corr_from_json(j.at("corr")));
}

} // namespace ectcap
