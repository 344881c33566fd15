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

namespace ectcap {

/// Exponential integral E1(x) for x > 0, accurate to about 1e-14.
double exp_integral_e1(double x);

/// Scaled exponential integral e^x E1(x), safe for very large x.
double e1_scaled(double x);

/// E[log(1 + a*T)] for T ~ Exp(1), i.e. e^{1/a} E1(1/a). Returns 0 for a <= 0.
double expect_log1p_exp(double a);

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

/// Exponentially scaled modified Bessel function e^{-|x|} I0(x).
double bessel_i0_scaled(double x);

/// E[log(1 + a*t)] where t = |u|^2 and u ~ CN(m, 1) with s = |m|^2
/// (noncentral chi-square with 2 degrees of freedom, scaled to mean 1+s).
double expect_log1p_noncentral(double a, double s, int quad_order = 128);

} // namespace ectcap
