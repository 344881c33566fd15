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

#include "ectcap/special.hpp"

#include <cmath>
#include <limits>

#include "ectcap/errors.hpp"
#include "ectcap/quadrature.hpp"

namespace ectcap {

static constexpr double kEulerGamma = 0.57721566490153286060651209;

// Continued fraction for e^x E1(x), modified Lentz. Valid for x >= 1.
static double e1_scaled_cf(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        double a = -double(i) * double(i);
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 4e-15) return h;
    }
    throw Error(ErrorCode::Numerical, "E1 continued fraction did not converge");
}

// Power series for E1(x), 0 < x <= 1.
static double e1_series(double x) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= -x / k;
        double add = term / k;
        sum += add;
        if (std::fabs(add) < 1e-18 * (std::fabs(sum) + 1.0)) break;
    }
    return -kEulerGamma - std::log(x) - sum;
}

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "E1 requires x > 0");
    if (x <= 1.0) return e1_series(x);
    return std::exp(-x) * e1_scaled_cf(x);
}

double e1_scaled(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "e1_scaled requires x > 0");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return e1_scaled_cf(x);
}

double expect_log1p_exp(double a) {
    if (a <= 0.0) return 0.0;
    return e1_scaled(1.0 / a);
}

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::fabs(x)); }

double bessel_i0_scaled(double x) {
    x = std::fabs(x);
    if (x < 600.0) return std::exp(-x) * std::cyl_bessel_i(0.0, x);
    // asymptotic tail (truncation error far below 1e-12 this far out)
    double r = 1.0 / (8.0 * x);
    double s = 1.0 + r * (1.0 + r * (4.5 + r * (37.5 + r * 442.96875)));
    return s / std::sqrt(2.0 * M_PI * x);
}

double expect_log1p_noncentral(double a, double s, int quad_order) {
    if (a <= 0.0) return 0.0;
    if (s <= 0.0) return expect_log1p_exp(a);
    // density of t: e^{-(t+s)} I0(2 sqrt(s t)). Against the e^{-t} Laguerre
    // weight the factor is e^{2 sqrt(s t) - s} i0e(2 sqrt(s t)), with the
    // exponent bounded by t so it stays representable.
    const QuadRule &gl = gauss_laguerre(quad_order);
    double acc = 0.0;
    for (int i = 0; i < quad_order; ++i) {
        double t = gl.nodes[i];
        double w = gl.weights[i];
        if (!(w > 0.0)) continue;
        // the integrand mass sits at e^{-(sqrt(t)-sqrt(s))^2}; far out the
        // true contribution is negligible while the extreme eigenvector
        // weights carry only rounding noise, so cut the tail off
        double d = std::sqrt(t) - std::sqrt(s);
        if (d * d > 60.0) continue;
        double arg = 2.0 * std::sqrt(s * t);
        double lg = std::log(w) + arg - s + std::log(bessel_i0_scaled(arg));
        acc += std::exp(lg) * std::log1p(a * t);
    }
    return acc;
}

} // namespace ectcap
