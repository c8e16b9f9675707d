# Copyright 2026 The smcfdr Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values for the unit tests.

Everything here is evaluated with mpmath at 40 digits, without touching the
C++ library, and written to tests/unit/oracle_values.hpp. Rerun after changing a
reference case:

    python3 tools/derive_oracle_values.py > tests/unit/oracle_values.hpp
"""

import numpy as np
from mpmath import mp, mpf, exp, sqrt, atanh, pi, quad, inf

mp.dps = 40


def logistic(s):
    return 1 / (1 + exp(-s))


def npdf(z, mu, sigma):
    return exp(-((z - mu) ** 2) / (2 * sigma**2)) / (sigma * sqrt(2 * pi))


BETA = (mpf(-3.5), sqrt(2) / 2, sqrt(2) / 2)


def prior(x):
    return logistic(BETA[0] + BETA[1] * x[0] + BETA[2] * x[1])


def posterior(z, x):
    c = prior(x)
    s = c * npdf(z, 3, mpf("0.5"))
    return s / (s + (1 - c) * npdf(z, 0, 1))


def expected_signal_fraction_mc(samples=10_000_000, seed=20260101):
    rng = np.random.default_rng(seed)
    total = 0.0
    chunk = 1_000_000
    for _ in range(samples // chunk):
        x = rng.standard_normal((chunk, 2))
        s = -3.5 + (x @ np.array([np.sqrt(0.5), np.sqrt(0.5)]))
        total += float(np.sum(1.0 / (1.0 + np.exp(-s))))
    return total / samples


def main():
    v = {}
    v["kPriorAtOrigin"] = prior((0, 0))
    v["kHalfPriorCovariate"] = mpf("3.5") / sqrt(2)
    v["kStdNormalAtZero"] = npdf(0, 0, 1)
    v["kStdNormalAtThree"] = npdf(3, 0, 1)
    v["kAltAtMode"] = npdf(3, 3, mpf("0.5"))
    v["kTwoComponentAtZero"] = (npdf(0, -1, 1) + npdf(0, 1, 1)) / 2
    c = prior((0, 0))
    v["kMarginalAtThree"] = c * npdf(3, 3, mpf("0.5")) + (1 - c) * npdf(3, 0, 1)
    v["kPosteriorAtThree"] = posterior(3, (0, 0))
    v["kPosteriorAtOneHalf"] = posterior(mpf("1.5"), (0, 0))
    v["kPosteriorAtZero"] = posterior(0, (0, 0))
    v["kLinearPredictorAtFive"] = BETA[0] + 5 * BETA[1] + 5 * BETA[2]
    v["kPriorAtFive"] = prior((5, 5))

    # Null update, n0 = 9, mu0 = 0, sigma0 = 1, z = 1, sequential semantics.
    a0 = 1 / mpf(10)
    mu0 = a0 * 1
    v["kNullUpdateMu"] = mu0
    v["kNullUpdateSigma"] = sqrt((1 - a0) * 1 + a0 * (1 - mu0) ** 2)
    # Null update with the mean held at zero.
    v["kNullUpdateSigmaFixedMean"] = sqrt((1 - a0) * 1 + a0 * 1)

    # Matched alternative update: mu = 3, sigma = 0.5, w = 1, n1 = 1, z = 4.2.
    a1 = mpf(1) / 2
    w = (1 - a1) * 1 + a1
    rho = a1 / (a1 + w)
    mu1 = (1 - rho) * 3 + rho * mpf("4.2")
    v["kAltUpdateRho"] = rho
    v["kAltUpdateMu"] = mu1
    v["kAltUpdateSigma"] = sqrt((1 - rho) * mpf("0.25") + rho * (mpf("4.2") - mu1) ** 2)

    d, m = 3, 10_000
    b = (mpf(4) / ((d + 2) * m)) ** (mpf(1) / (d + 4))
    v["kBandwidthB"] = b
    v["kBandwidthA"] = sqrt(1 - b * b)

    w4 = [mpf("0.5"), mpf("0.25"), mpf("0.125"), mpf("0.125")]
    v["kEssFourWeights"] = 1 / sum(x * x for x in w4)

    v["kFisherHalf103"] = atanh(mpf("0.5")) * 10

    v["kSignalFractionQuadrature"] = quad(lambda u: logistic(-mpf("3.5") + u) * npdf(u, 0, 1), [-inf, inf])
    mc = expected_signal_fraction_mc()

    print("// Copyright 2026 The smcfdr Authors.")
    print("//")
    print('// Licensed under the Apache License, Version 2.0 (the "License");')
    print("// you may not use this file except in compliance with the License.")
    print("// You may obtain a copy of the License at")
    print("//")
    print("//     http://www.apache.org/licenses/LICENSE-2.0")
    print("//")
    print("// Unless required by applicable law or agreed to in writing, software")
    print('// distributed under the License is distributed on an "AS IS" BASIS,')
    print("// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.")
    print("// See the License for the specific language governing permissions and")
    print("// limitations under the License.")
    print()
    print("// Generated by tools/derive_oracle_values.py. Do not edit by hand.")
    print()
    print("#ifndef SMCFDR_TESTS_ORACLE_VALUES_HPP")
    print("#define SMCFDR_TESTS_ORACLE_VALUES_HPP")
    print()
    print("namespace smcfdr::oracle_values {")
    print()
    for name, value in v.items():
        print(f"inline constexpr double {name} = {mp.nstr(value, 17, min_fixed=-30, max_fixed=30)};")
    print(f"inline constexpr double kSignalFractionMonteCarlo = {mc!r};  // 1e7 draws")
    print()
    print("}  // namespace smcfdr::oracle_values")
    print()
    print("#endif  // SMCFDR_TESTS_ORACLE_VALUES_HPP")


if __name__ == "__main__":
    main()
