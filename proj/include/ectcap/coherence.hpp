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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ectcap/correlation.hpp"

namespace ectcap {

/// Truncation control for the k -> infinity limit of the effective
/// coherence time. History sizes are probed geometrically (k_step) up to
/// k_max; convergence is declared on the relative change of the full value.
struct EctOptions {
    int k_max = 4096;
    double rel_tol = 1e-6;
    int k_step = 2;
    int k_start = 64;
    void validate() const;
};

struct EctResult {
    double value = 0.0;
    long k_used = 0;
    bool converged = false;
    double last_rel_change = 0.0;
};

/// Effective coherence time T_c(p_x): truncated evaluation of
///   2N lim_k D_k^T (N p_x [Delta_{k-1} - D_k D_k^T] + I)^{-1} D_k + N
/// by dense Cholesky solves at growing history sizes. The value is
/// nondecreasing in k and always >= N; a run that exhausts k_max returns
/// the partial value with converged = false.
EctResult effective_coherence_time(const TemporalCorrelation &corr, int n_bins, double p_x,
                                   const EctOptions &opts = {});

/// Same limit through the matrix-inversion-lemma route:
/// q = N p_x D_k^T (I + N p_x Delta_{k-1})^{-1} D_k (a Toeplitz solve),
/// then T_c = N + (2/p_x) q / (1 - q). Cross-check of the dense path and
/// the fast evaluator behind the bound curves.
EctResult effective_coherence_time_alt(const TemporalCorrelation &corr, int n_bins, double p_x,
                                       const EctOptions &opts = {});

/// Low-SNR limit T_c0 = 2N sum_{lag>=1} rho(lag)^2 + N under the same
/// convergence policy. Diverging sums report converged = false.
EctResult tc0_low_snr(const TemporalCorrelation &corr, int n_bins, const EctOptions &opts = {});

struct EctSweepPoint {
    double p_x = 0.0;
    EctResult result;
    std::optional<std::string> error;
};

enum class EctEngine { Dense, Toeplitz };

/// Evaluate the effective coherence time over an SNR grid (linear p_x).
/// Per-point failures are recorded without aborting the sweep.
std::vector<EctSweepPoint> tc_sweep(const TemporalCorrelation &corr, int n_bins,
                                    const std::vector<double> &p_grid,
                                    const EctOptions &opts = {},
                                    EctEngine engine = EctEngine::Dense);

/// Effective-coherence-time evaluator used by the bound formulas.
using TcFn = std::function<double(double)>;

/// Memoizing evaluator backed by the Toeplitz route. Thread-safe.
TcFn make_exact_tc(const TemporalCorrelation &corr, int n_bins, const EctOptions &opts = {});

/// Log-log interpolating evaluator: T_c is sampled on a fixed logarithmic
/// p grid (points_per_decade), computed lazily and memoized; queries
/// interpolate between the two bracketing grid nodes. Thread-safe.
TcFn make_interp_tc(const TemporalCorrelation &corr, int n_bins, const EctOptions &opts = {},
                    int points_per_decade = 32);

} // namespace ectcap
