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

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ectcap/correlation.hpp"

namespace ectcap {

using cplx = std::complex<double>;

/// Tap powers (diagonal of the tap covariance, trace normalized to 1) plus
/// an optional line-of-sight mean carried by tap 0.
struct TapProfile {
    Eigen::VectorXd powers;
    std::optional<cplx> los_mean;

    static TapProfile equal(int n_taps);
    static TapProfile from_powers(std::vector<double> powers, std::optional<cplx> los = {});

    int n_taps() const { return int(powers.size()); }
    /// |E[h_0]|^2 of the LOS tap (0 when absent).
    double los_power() const { return los_mean ? std::norm(*los_mean) : 0.0; }
    void validate() const;
};

/// Full WSSUS channel description: N subcarriers, tap profile, temporal
/// autocorrelation shared by all taps.
struct ChannelSpec {
    int n_bins;
    TapProfile taps;
    TemporalCorrelation corr;

    ChannelSpec(int n, TapProfile t, TemporalCorrelation c);

    bool zero_mean() const { return taps.los_power() == 0.0; }

    /// Squared magnitude of the (frequency-flat) channel mean per bin,
    /// |E[h~_{0,m}]|^2 = |los_mean|^2 / N.
    double mean_bin_power() const { return taps.los_power() / n_bins; }

    /// Frequency-domain channel mean vector, length N.
    Eigen::VectorXcd mean_freq() const;
};

/// Frequency-domain tap covariance C_{H~0} = F^dagger diag(powers) F.
/// Hermitian PSD with every diagonal entry 1/N.
Eigen::MatrixXcd freq_tap_covariance(const ChannelSpec &spec);

/// Peak (per-symbol energy cap) or quadratic (second/fourth moment) power
/// constraint; alpha >= 1 applies to the quadratic kind only.
struct PowerConstraint {
    enum class Kind { Peak, Quadratic };
    Kind kind = Kind::Peak;
    double alpha = 1.0;

    static PowerConstraint peak() { return {Kind::Peak, 1.0}; }
    static PowerConstraint quadratic(double alpha);
    bool is_peak() const { return kind == Kind::Peak; }
};

/// Parse a channel spec from its JSON configuration representation
/// (keys: n_bins, taps.powers, taps.los_mean, corr.kind and parameters).
ChannelSpec channel_spec_from_json_text(const std::string &text);

} // namespace ectcap
