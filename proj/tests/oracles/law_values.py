# SPDX-License-Identifier: Apache-2.0
"""Reference loss values at 40 significant digits; frozen into test_laws.cpp."""
from mpmath import mp, mpf

mp.dps = 40


def kaplan(n, d, alpha_n=mpf("0.076"), alpha_d=mpf("0.103"), n_c=mpf("6.4e13"), d_c=mpf("1.8e13")):
    return ((n_c / n) ** (alpha_n / alpha_d) + d_c / d) ** alpha_d


def hoffmann(n, d, e=mpf("1.69"), a=mpf("406.4"), b=mpf("410.7"), alpha=mpf("0.34"), beta=mpf("0.28")):
    return e + a / n**alpha + b / d**beta


def frantar(n, d, s):
    a_s, b_s, c_s, b_n = mpf("16.8"), mpf("0.722"), mpf("45"), mpf("0.245")
    a_d, b_d, c = mpf("6.90e8"), mpf("0.203"), mpf("0.651")
    return (a_s * (1 - s) ** b_s + c_s) * (1 / n) ** b_n + (a_d / d) ** b_d + c


def abnar(n, d, s):
    e, a, b, c, dc = mpf("0.94"), mpf("16612.50"), mpf("5455.67"), mpf("0.4598"), mpf("17.26")
    alpha, beta, lam, delta, gamma = mpf("0.5962"), mpf("0.3954"), mpf("-0.1666"), mpf("0.1603"), mpf("0.1595")
    dense = 1 - s
    return e + a / n**alpha + b / d**beta + c / dense**lam + dc / (dense**delta * n**gamma)


def generalized(n, d, s):
    e, a, b, c = mpf("1.69"), mpf("406.4"), mpf("410.7"), mpf("93.45")
    alpha, beta, gamma = mpf("0.34"), mpf("0.28"), mpf("1e-2")
    return e * (1 - s) ** gamma + (a * (1 - s) ** alpha + c * s) / n**alpha + b / d**beta


if __name__ == "__main__":
    rows = {
        "kaplan(1e9, 1e10)": kaplan(mpf("1e9"), mpf("1e10")),
        "kaplan(N_C, D_C)": kaplan(mpf("6.4e13"), mpf("1.8e13")),
        "hoffmann(70e9, 1.4e12)": hoffmann(mpf("70e9"), mpf("1.4e12")),
        "frantar(85e6, 65e9, 0.875)": frantar(mpf("85e6"), mpf("65e9"), mpf("0.875")),
        "abnar(1e9, 100e9, 0.98)": abnar(mpf("1e9"), mpf("100e9"), mpf("0.98")),
        "generalized(1e9, 20e9, 0.9)": generalized(mpf("1e9"), mpf("20e9"), mpf("0.9")),
        "6.90e8^0.203": mpf("6.90e8") ** mpf("0.203"),
        "(671e9 - 37e9) / 671e9": (mpf("671e9") - mpf("37e9")) / mpf("671e9"),
    }
    for name, value in rows.items():
        print(f"{name:32s} {mp.nstr(value, 20)}")
