"""Regenerates the frozen reference values used by tests/specfun.rs.

    python3 gen_specfun.py

Requires mpmath. Values are printed as Rust float literals.
"""
import mpmath as mp

mp.mp.dps = 50


def lit(x):
    return mp.nstr(mp.mpf(x), 20, min_fixed=-1, max_fixed=-1)


b09 = 2 - mp.mpf(1) / mp.mpf("0.9")
rows = {
    "GAMMA_NEG_0_564": mp.gamma(mp.mpf("-0.564")),
    "GAMMA_NEG_3_5": mp.gamma(mp.mpf("-3.5")),
    "LN_GAMMA_150_3": mp.loggamma(mp.mpf("150.3")),
    "HYP_NORM_09": mp.hyper([], [1, b09, b09], 1 / mp.mpf("0.81")),
    "HYP_NEG_B": mp.hyper([], [1, mp.mpf("-0.5"), mp.mpf("-0.5")], 7),
    "HYP_NEG_X": mp.hyper([], [mp.mpf("1.5"), 2, 3], -40),
    "MEIJER_THIRD_1": mp.meijerg([[], []], [[0, 0, mp.mpf(1) / 3, mp.mpf(1) / 3], []], 1),
    "MEIJER_THIRD_25": mp.meijerg([[], []], [[0, 0, mp.mpf(1) / 3, mp.mpf(1) / 3], []], 25),
    "MEIJER_09_2_5": mp.meijerg([[], []], [[0, 0, b09 - 1, b09 - 1], []], mp.mpf("2.5")),
    "BESSEL_I1_7": mp.besseli(1, 7),
}
for k, v in rows.items():
    print(f"const {k}: f64 = {lit(v)};")
