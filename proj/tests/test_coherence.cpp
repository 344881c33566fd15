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

#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "ectcap/coherence.hpp"
#include "ectcap/errors.hpp"

using namespace ectcap;

// brute-force dense evaluation of the definition at a fixed history size
static double tc_dense_oracle(const TemporalCorrelation &corr, int n, double p, long k) {
    Eigen::MatrixXd delta = build_delta(corr, k);
    Eigen::VectorXd d = build_d_vector(corr, k);
    Eigen::MatrixXd m = double(n) * p * (delta - d * d.transpose());
    m.diagonal().array() += 1.0;
    Eigen::VectorXd z = m.fullPivLu().solve(d);
    return 2.0 * double(n) * d.dot(z) + double(n);
}

TEST_CASE("block fading middle symbol gives T_c = Tc exactly at any SNR") {
    for (int bs : {3, 11, 31}) {
        auto corr = TemporalCorrelation::block_fading_middle(bs);
        for (double p : {1e-6, 1.0, 1e3}) {
            EctResult r = effective_coherence_time(corr, 30, p);
            CHECK(r.converged);
            CHECK(r.value == doctest::Approx(30.0 * bs).epsilon(1e-9));
            EctResult ra = effective_coherence_time_alt(corr, 30, p);
            CHECK(ra.value == doctest::Approx(30.0 * bs).epsilon(1e-9));
        }
    }
    // degenerate block: one symbol per block, no usable history
    EctResult r1 = effective_coherence_time(TemporalCorrelation::block_fading_middle(1), 30, 1.0);
    CHECK(r1.value == doctest::Approx(30.0));
    CHECK(r1.converged);
}

TEST_CASE("memoryless channel pins T_c at N") {
    auto corr = TemporalCorrelation::ar1(0.0);
    for (double p : {1e-4, 1.0, 1e8}) {
        CHECK(effective_coherence_time(corr, 7, p).value == doctest::Approx(7.0));
        CHECK(effective_coherence_time_alt(corr, 7, p).value == doctest::Approx(7.0));
    }
}

TEST_CASE("AR1 value against a frozen dense-solve oracle") {
    // dense k = 200 direct solve of the definition, gamma = 0.5, N = 2, p = 1
    auto corr = TemporalCorrelation::ar1(0.5);
    CHECK(tc_dense_oracle(corr, 2, 1.0, 200) ==
          doctest::Approx(2.415650255319866).epsilon(1e-12));
    EctOptions opts;
    EctResult r = effective_coherence_time(corr, 2, 1.0, opts);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.415650255319866).epsilon(1e-9));
}

TEST_CASE("low SNR limit reproduces the AR1 closed form") {
    EctOptions opts;
    for (double g : {0.5, 0.9, 0.9672}) {
        auto corr = TemporalCorrelation::ar1(g);
        double closed = 30.0 * (1.0 + g * g) / (1.0 - g * g);
        EctResult r = tc0_low_snr(corr, 30, opts);
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(closed).epsilon(1e-5));
    }
    // paper's gamma = 0.9851 corresponds to 2000
    EctResult r = tc0_low_snr(TemporalCorrelation::ar1(0.9851), 30, opts);
    CHECK(r.value == doctest::Approx(2000.0).epsilon(0.005));
    // no memory beyond lag 0
    CHECK(tc0_low_snr(TemporalCorrelation::ar1(0.0), 30, opts).value == doctest::Approx(30.0));
}

TEST_CASE("definition and inversion-lemma routes agree") {
    EctOptions opts;
    for (double g : {0.3, 0.9, 0.9672}) {
        auto corr = TemporalCorrelation::ar1(g);
        for (double p : {1e-6, 1e-2, 1.0, 100.0}) {
            double a = effective_coherence_time(corr, 30, p, opts).value;
            double b = effective_coherence_time_alt(corr, 30, p, opts).value;
            CHECK(a == doctest::Approx(b).epsilon(1e-6));
        }
    }
    auto clarke = TemporalCorrelation::clarke(0.04);
    double a = effective_coherence_time(clarke, 16, 0.5, opts).value;
    double b = effective_coherence_time_alt(clarke, 16, 0.5, opts).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("monotone and scaling properties in SNR") {
    auto corr = TemporalCorrelation::ar1(0.9672);
    EctOptions opts;
    double prev = 0.0;
    bool have_prev = false;
    for (double p = 1e-5; p < 1e3; p *= 7.0) {
        double v = effective_coherence_time_alt(corr, 30, p, opts).value;
        CHECK(v >= 30.0);
        if (have_prev) {
            CHECK(v <= prev * (1.0 + 1e-6)); // nonincreasing
            // scaling floor over one grid step (lambda = 7)
            CHECK(v >= prev / 7.0 - 1e-9);
        }
        prev = v;
        have_prev = true;
    }
}

TEST_CASE("low SNR consistency and the regular-channel limit") {
    EctOptions opts;
    for (double g : {0.5, 0.9, 0.99}) {
        auto corr = TemporalCorrelation::ar1(g);
        double t0 = tc0_low_snr(corr, 30, opts).value;
        double tlow = effective_coherence_time_alt(corr, 30, 1e-9, opts).value;
        CHECK(tlow == doctest::Approx(t0).epsilon(1e-3));
        // prediction error positive => T_c -> N as p -> infinity
        double thigh = effective_coherence_time_alt(corr, 30, 1e12, opts).value;
        CHECK(thigh - 30.0 <= 0.01 * 30.0);
    }
}

TEST_CASE("value is nondecreasing in the history size") {
    auto corr = TemporalCorrelation::ar1(0.97);
    double prev = 0.0;
    for (long k : {8L, 16L, 32L, 64L, 128L}) {
        double v = tc_dense_oracle(corr, 10, 0.01, k);
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
}

TEST_CASE("non-decaying correlations report failure to converge") {
    // Clarke at fd Ts = 0 never decorrelates; the sum diverges
    auto c0 = TemporalCorrelation::clarke(0.0);
    EctOptions opts;
    opts.k_max = 512;
    EctResult r = tc0_low_snr(c0, 4, opts);
    CHECK_FALSE(r.converged);
    EctResult r2 = effective_coherence_time(c0, 4, 1e-3, opts);
    CHECK_FALSE(r2.converged);
    CHECK(r2.value > 4.0); // partial result still carried
    // short Custom sequences cap the probe schedule and cannot claim a limit
    auto cu = TemporalCorrelation::custom({1.0, 0.9, 0.81, 0.729, 0.6561});
    EctResult r3 = effective_coherence_time(cu, 4, 1.0, opts);
    CHECK_FALSE(r3.converged);
    CHECK(r3.k_used == 4); // d vector needs rho(k), so k caps at max lag
}

TEST_CASE("sweep propagates per-point errors without aborting") {
    auto cu = TemporalCorrelation::custom({1.0, 0.9, 0.81, 0.729});
    auto pts = tc_sweep(cu, 4, {1.0, -1.0, 2.0});
    REQUIRE(pts.size() == 3);
    CHECK_FALSE(pts[0].error);
    CHECK(pts[1].error); // p <= 0
    CHECK_FALSE(pts[2].error);
}

TEST_CASE("interpolating provider stays close to the exact route") {
    auto corr = TemporalCorrelation::ar1(0.9672);
    EctOptions opts;
    TcFn interp = make_interp_tc(corr, 30, opts);
    TcFn exact = make_exact_tc(corr, 30, opts);
    for (double p : {3.1e-4, 0.002, 0.5, 2.7}) {
        CHECK(interp(p) == doctest::Approx(exact(p)).epsilon(2e-4));
    }
    CHECK_THROWS_AS(interp(0.0), Error);
}

TEST_CASE("options are validated") {
    EctOptions bad;
    bad.k_max = 1;
    CHECK_THROWS_AS(effective_coherence_time(TemporalCorrelation::ar1(0.5), 4, 1.0, bad), Error);
    EctOptions bad2;
    bad2.rel_tol = 2.0;
    CHECK_THROWS_AS(effective_coherence_time(TemporalCorrelation::ar1(0.5), 4, 1.0, bad2), Error);
    CHECK_THROWS_AS(effective_coherence_time(TemporalCorrelation::ar1(0.5), 4, 0.0), Error);
}
