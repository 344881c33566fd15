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

#include "ectcap/bounds.hpp"
#include "ectcap/channel.hpp"
#include "ectcap/coherence.hpp"

namespace ectcap {

struct McConfig {
    int n_symbols = 4000;
    int n_trials = 64;
    std::uint64_t seed = 0x5eed5eed5eed5eedULL;
    int window = 0;    // 0: derive from the correlation tail
    int n_threads = 0; // 0: hardware concurrency
    void validate() const;
};

struct McRate {
    double rate = 0.0;    // nats per channel sample
    double std_err = 0.0; // jackknife standard error over trials
};

/// Achievable-rate simulation for proper complex Gaussian inputs: per
/// symbol the exact conditional channel covariance is advanced from the
/// drawn inputs alone (outputs never enter the covariance) and the
/// per-bin Gaussian-codebook rate terms are accumulated after a burn-in.
/// AR1 and block fading use their exact Markov recursion; other
/// correlation kinds use a Yule-Walker AR fit of the window.
/// Deterministic for a fixed (seed, config).
McRate gaussian_rate_simulation(const ChannelSpec &spec, double p_x, const McConfig &cfg = {});

/// Same rate expression with the conditional covariance replaced by its
/// limiting wideband constant-amplitude value (deterministic).
double gaussian_rate_approximation(const ChannelSpec &spec, double p_x, const TcFn &tc);

} // namespace ectcap
