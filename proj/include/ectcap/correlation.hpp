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

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ectcap {

/// Per-tap symbol-lag autocorrelation sequence rho(lag), rho(0) = 1.
///
/// Kinds:
///  - Ar1: rho(lag) = gamma^lag
///  - Clarke: rho(lag) = J0(2 pi fdTs lag)
///  - BlockFadingMiddle: middle symbol of a block of block_symbols OFDM
///    symbols; only encodes the d = (block_symbols-1)/2 usable past symbols
///  - Custom: explicit finite sequence, no zero padding beyond its length
class TemporalCorrelation {
  public:
    enum class Kind { Ar1, Clarke, BlockFadingMiddle, Custom };

    static TemporalCorrelation ar1(double gamma);
    static TemporalCorrelation clarke(double normalized_doppler);
    static TemporalCorrelation block_fading_middle(int block_symbols);
    static TemporalCorrelation custom(std::vector<double> rho);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double normalized_doppler() const { return fd_ts_; }
    int block_symbols() const { return block_symbols_; }
    /// Usable past history of the middle symbol, d = (block_symbols-1)/2.
    /// Half-integer for even block lengths.
    double block_history() const { return 0.5 * (block_symbols_ - 1); }
    /// Size of the D/Delta construction that realizes the block history
    /// (equals d for integer d; the smallest workable size otherwise).
    int block_window() const;

    /// rho(lag); throws NoSuchLag for Custom sequences beyond their length.
    double rho(long lag) const;

    /// Largest lag with a defined rho. Unbounded except for Custom.
    long max_lag() const;

    /// Smallest W with sum_{lag>W} rho(lag)^2 < tail_tol, capped at `cap`.
    int default_window(double tail_tol = 1e-6, int cap = 4096) const;

    std::string describe() const;

  private:
    TemporalCorrelation() = default;
    Kind kind_ = Kind::Ar1;
    double gamma_ = 0.0;
    double fd_ts_ = 0.0;
    int block_symbols_ = 1;
    std::vector<double> rho_;
};

/// Toeplitz correlation matrix (Delta)_{i,j} = rho(|i-j|) of size k x k.
/// BlockFadingMiddle returns the all-ones matrix capped at d x d; even
/// block lengths use the weighted middle-symbol construction with
/// Delta - D D^T orthogonal to D, preserving T_c = N (2d + 1) exactly.
/// Custom sequences are checked for positive semidefiniteness: an eigenvalue
/// below -1e-10 raises NonPSD.
Eigen::MatrixXd build_delta(const TemporalCorrelation &corr, long k);

/// Correlation of the current symbol with each of k past symbols:
/// entries rho(k - i) for i = 0..k-1. BlockFadingMiddle caps at its
/// construction window.
Eigen::VectorXd build_d_vector(const TemporalCorrelation &corr, long k);

} // namespace ectcap
