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

#include "ectcap/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>

#include "ectcap/errors.hpp"

namespace ectcap {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 * (first eigenvector component)^2.
static QuadRule golub_welsch(const Eigen::VectorXd &diag, const Eigen::VectorXd &offdiag,
                             double mu0) {
    const int n = int(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = diag[i];
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::Numerical, "Golub-Welsch eigensolver failed");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()[i];
        double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

static QuadRule make_hermite(int n) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd e(n - 1 > 0 ? n - 1 : 0);
    for (int i = 0; i + 1 < n; ++i) e[i] = std::sqrt(0.5 * (i + 1));
    return golub_welsch(d, e, std::sqrt(M_PI));
}

static QuadRule make_laguerre(int n) {
    Eigen::VectorXd d(n);
    Eigen::VectorXd e(n - 1 > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) d[i] = 2.0 * i + 1.0;
    for (int i = 0; i + 1 < n; ++i) e[i] = double(i + 1);
    return golub_welsch(d, e, 1.0);
}

template <QuadRule (*Maker)(int)> static const QuadRule &cached_rule(int order) {
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "quadrature order must be >= 1");
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, Maker(order)).first;
    return it->second;
}

const QuadRule &gauss_hermite(int order) { return cached_rule<make_hermite>(order); }
const QuadRule &gauss_laguerre(int order) { return cached_rule<make_laguerre>(order); }

} // namespace ectcap
