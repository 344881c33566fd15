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

#include <cstdint>
#include <string>
#include <vector>

#include "ectcap/channel.hpp"
#include "ectcap/coherence.hpp"

namespace ectcap {

/// Gauss-Hermite order for the QPSK mutual-information integral, with
/// order-doubling fallback until successive values agree within abs_tol.
struct QuadratureSpec {
    int order = 128;
    double abs_tol = 1e-9;
    int max_order = 1024;
    void validate() const;
};

/// Mutual information of QPSK over AWGN at SNR rho, in nats.
double c_qpsk(double rho, const QuadratureSpec &q = {});

/// Coherent-channel upper bound E[log(1 + N p_x |h~00|^2)].
double ub_coherent(const ChannelSpec &spec, double p_x, const QuadratureSpec &q = {});

/// Coherent bound from the moments alone: mean_sq = N |E[h~00]|^2 and
/// var = N Var[h~00] (1 under the unit-trace normalization).
double ub_coherent_moments(double p_x, double mean_sq, double var, const QuadratureSpec &q = {});

/// Low-SNR upper bound, peak constraint.
double ub_low_peak(const ChannelSpec &spec, double p_x, const TcFn &tc);

/// Low-SNR upper bound, quadratic constraint with peakiness alpha.
double ub_low_quad(const ChannelSpec &spec, double p_x, double alpha, const TcFn &tc);

/// QPSK lower bound at duty cycle 1/beta over r active bins. Zero-mean
/// channels integrate exactly over the fading variable; channels with a
/// LOS mean fall back to a fixed-seed Monte Carlo expectation.
double lb_qpsk(const ChannelSpec &spec, double p_x, int r, double beta,
               const PowerConstraint &constraint, const TcFn &tc, const QuadratureSpec &q = {},
               int mc_samples = 200000, std::uint64_t mc_seed = 0x1d2c3b4a);

/// Truncated-Gaussian lower bound, quadratic constraint (zero mean only).
/// Returns the bound contribution including the -r eta/(N beta) penalty.
double lb_tg_quad(const ChannelSpec &spec, double p_x, int r, double beta, double eta,
                  const TcFn &tc);

/// Truncated-Gaussian lower bound, peak constraint (zero mean only),
/// including the (r/N) log(e^-eta - e^-xi) penalty.
double lb_tg_peak(const ChannelSpec &spec, double p_x, int r, double eta, double xi,
                  const TcFn &tc);

/// Alternative truncated-Gaussian bound valid for any channel mean; less
/// tight than the zero-mean form at equal parameters.
double lb_tg_alternative(const ChannelSpec &spec, double p_x, int r, double beta, double eta,
                         double xi, const PowerConstraint &constraint, const TcFn &tc,
                         const QuadratureSpec &q = {});

enum class LowerBoundFamily { None, Qpsk, TruncGauss, TruncGaussAlt };

struct LowerBoundArgmax {
    LowerBoundFamily family = LowerBoundFamily::None;
    int r = 0;
    double beta = 1.0;
    double eta = 0.0;
    double xi = std::numeric_limits<double>::infinity();
};

struct SearchSpec {
    std::vector<int> r_grid;      // empty: full 1..N when N <= 64, else log subset
    int n_beta = 16;              // log-spaced duty-cycle points
    int n_eta = 13;               // log grid over [1e-4, 1] plus the schedule point
    int n_xi = 9;                 // log grid over [0.5, 20]
    bool refine = true;           // golden-section pass around the grid winner
    bool include_alternative = true;
};

struct OptimizedLowerBound {
    double value = 0.0;
    LowerBoundArgmax argmax;
};

/// Outer maximization of Theorems 2-3 (plus the alternative bound) over
/// (family, r, beta, eta, xi). Deterministic for a given search spec;
/// negative raw values floor at zero.
OptimizedLowerBound optimize_lower_bound(const ChannelSpec &spec, double p_x,
                                         const PowerConstraint &constraint, const TcFn &tc,
                                         const QuadratureSpec &q = {},
                                         const SearchSpec &search = {});

/// Per-SNR record of all bounds and the winning lower-bound parameters.
struct BoundPoint {
    double p_x = 0.0;
    double snr_db = 0.0;
    double ub_coh = 0.0;
    double ub_low = 0.0;
    double ub = 0.0;
    double lb_qpsk_nw = 0.0;
    double lb_qpsk_wd = 0.0;
    double lb_tg_wd = 0.0;
    double lb = 0.0;
    LowerBoundArgmax argmax;
};

/// Assemble the bound curve over an SNR grid given in dB.
std::vector<BoundPoint> bound_curve(const ChannelSpec &spec, const PowerConstraint &constraint,
                                    const std::vector<double> &snr_db_grid,
                                    const EctOptions &ect = {}, const QuadratureSpec &q = {},
                                    const SearchSpec &search = {}, int n_threads = 0);

const char *family_name(LowerBoundFamily f);

} // namespace ectcap
