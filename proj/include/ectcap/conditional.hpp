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

#include <deque>
#include <limits>
#include <utility>

#include "ectcap/channel.hpp"
#include "ectcap/coherence.hpp"

namespace ectcap {

/// Gaussian posterior of the current frequency-domain channel vector given
/// past transmitted and received symbols. Immutable; updates return a new
/// state. The retained input/output window backs the sequential update.
class ConditionalState {
  public:
    Eigen::VectorXcd mu;  // conditional mean, length N
    Eigen::MatrixXcd cov; // conditional covariance, N x N Hermitian PSD
    long history_len = 0;

    static ConditionalState prior(const ChannelSpec &spec);

    const std::deque<Eigen::VectorXcd> &window_inputs() const { return win_x_; }
    const std::deque<Eigen::VectorXcd> &window_outputs() const { return win_y_; }

    friend ConditionalState recursive_update(const ConditionalState &, const ChannelSpec &,
                                             const Eigen::VectorXcd &, const Eigen::VectorXcd &,
                                             int);

  private:
    std::deque<Eigen::VectorXcd> win_x_, win_y_;
};

/// Exact batch MMSE conditioning of the current channel on k past symbols.
/// BlockFadingMiddle histories are truncated to the d usable past symbols
/// of the middle-symbol construction.
ConditionalState conditional_distribution(const ChannelSpec &spec,
                                          const std::vector<Eigen::VectorXcd> &past_inputs,
                                          const std::vector<Eigen::VectorXcd> &past_outputs);

/// Sequential form: appends one symbol to the sliding window (default width
/// from the correlation tail, capped at 4096) and reconditions. Matches the
/// batch answer over the same window.
ConditionalState recursive_update(const ConditionalState &state, const ChannelSpec &spec,
                                  const Eigen::VectorXcd &x_k, const Eigen::VectorXcd &y_k,
                                  int window = 0);

struct WidebandCaError {
    Eigen::VectorXd per_tap; // limiting tap-domain MSE, length L
    double per_bin = 0.0;    // every frequency-domain diagonal entry
};

/// Limiting estimation error under wideband constant-amplitude history with
/// duty-cycle scale beta: per tap 1 / (1/c_l + (beta p/2)(Tc(beta p c_l) - N)),
/// per bin the tap average over N.
WidebandCaError wideband_ca_error(const ChannelSpec &spec, double p, double beta,
                                  const TcFn &tc);

/// Limiting error of the active bin under single-bin constant-amplitude
/// pilots: (1/N) / (1 + (p/2)(Tc(p) - N)).
double narrowband_ca_error(const ChannelSpec &spec, double p, const TcFn &tc);

/// Lower floor on any conditional-covariance diagonal entry under the peak
/// constraint; same expression as the narrowband error.
double peak_error_floor(const ChannelSpec &spec, double p_x, const TcFn &tc);

/// Upper bound on E[{1 - N min diag}^2] under the quadratic constraint:
/// alpha (1 - 1/(1 + (p/2)(Tc(p) - N)))^2.
double quad_moment_bound(const ChannelSpec &spec, double p_x, double alpha, const TcFn &tc);

/// Truncated complex Gaussian modulation parameters: thresholds eta <= |u|^2
/// <= xi with acceptance probability theta, second moment p_z and fourth
/// moment m4 of the truncated distribution.
struct TruncGaussParams {
    double eta = 0.0;
    double xi = std::numeric_limits<double>::infinity();
    double theta = 1.0;
    double p_z = 1.0;
    double m4 = 2.0;

    static TruncGaussParams make(double eta, double xi);
};

/// Upper bound on the limiting E[diag] under truncated-Gaussian inputs
/// (quadratic constraint fixes xi = inf; peak uses finite xi with beta = 1).
double tg_error_bound(const ChannelSpec &spec, double p_x, int r, double beta,
                      const TruncGaussParams &tg, PowerConstraint::Kind kind, const TcFn &tc);

} // namespace ectcap
