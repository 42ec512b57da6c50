"""Independent reference values for the test suite.

Everything here is computed with mpmath at 50 significant digits, with
no shared code path with the Rust implementation. Run with
`python3 tools/oracle.py` to regenerate the constants frozen into tests.
"""
import csv
import os

import mpmath as mp

mp.mp.dps = 50
HERE = os.path.dirname(os.path.abspath(__file__))


def load():
    with open(os.path.join(HERE, "..", "data", "orellano_a5_pm25_allcause.csv")) as fh:
        rows = list(csv.DictReader(fh))
    return [mp.mpf(r["LnEE"]) for r in rows], [mp.mpf(r["SELnEE"]) for r in rows]


def two_sided_p(z):
    return mp.erfc(abs(z) / mp.sqrt(2))


def ols(xs, ys):
    n = len(xs)
    xm = mp.fsum(xs) / n
    ym = mp.fsum(ys) / n
    sxx = mp.fsum((x - xm) ** 2 for x in xs)
    sxy = mp.fsum((x - xm) * (y - ym) for x, y in zip(xs, ys))
    slope = sxy / sxx
    icpt = ym - slope * xm
    sse = mp.fsum((y - icpt - slope * x) ** 2 for x, y in zip(xs, ys))
    sst = mp.fsum((y - ym) ** 2 for y in ys)
    return slope, icpt, sse, 1 - sse / sst


def kolmogorov_sf(lam):
    return 2 * mp.nsum(lambda j: (-1) ** (j - 1) * mp.exp(-2 * j * j * lam * lam), [1, mp.inf])


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


def main():
    x, s = load()
    k = len(x)
    p = sorted(two_sided_p(a / b) for a, b in zip(x, s))
    ranks = [mp.mpf(i + 1) for i in range(k)]

    print("# erfc(z / sqrt 2) grid")
    for i in range(41):
        z = mp.mpf(i) / 2
        print(f"({float(z)}, {mp.nstr(two_sided_p(z), 17)}),")

    show("quantile_0.975", mp.sqrt(2) * mp.erfinv(mp.mpf("0.95")))
    show("quantile_0.9999999", mp.sqrt(2) * mp.erfinv(1 - 2 * mp.mpf("1e-7")))

    w = [1 / b ** 2 for b in s]
    sw = mp.fsum(w)
    fe = mp.fsum(a * b for a, b in zip(w, x)) / sw
    q = mp.fsum(a * (b - fe) ** 2 for a, b in zip(w, x))
    c = sw - mp.fsum(a * a for a in w) / sw
    tau2 = max(mp.mpf(0), (q - (k - 1)) / c)
    ws = [1 / (b ** 2 + tau2) for b in s]
    dl = mp.fsum(a * b for a, b in zip(ws, x)) / mp.fsum(ws)
    show("fe_pooled_ln", fe)
    show("fe_se", 1 / mp.sqrt(sw))
    show("cochran_q", q)
    show("tau_squared", tau2)
    show("dl_pooled_ln", dl)
    show("dl_se", 1 / mp.sqrt(mp.fsum(ws)))

    slope, icpt, sse, r2 = ols(ranks, p)
    show("single_slope", slope)
    show("single_intercept", icpt)
    show("single_sse", sse)
    show("single_r2", r2)
    best = None
    for b in range(2, k - 1):
        left = ols(ranks[:b], p[:b])
        right = ols(ranks[b:], p[b:])
        tot = left[2] + right[2]
        if best is None or tot < best[0]:
            best = (tot, b, left, right)
    print(f"two_breakpoint = {best[1]}")
    show("two_total_sse", best[0])
    show("two_left_slope", best[2][0])
    show("two_right_slope", best[3][0])

    d = max(max(mp.mpf(i + 1) / k - v, v - mp.mpf(i) / k) for i, v in enumerate(p))
    show("ks_d", d)
    show("ks_p", kolmogorov_sf(mp.sqrt(k) * d))

    # Median two-sided p of a study whose z ~ Normal(mu, 1).
    for n in (100, 1000, 10000):
        mu = mp.mpf("0.5") * mp.sqrt(n) / 10
        m = mp.findroot(lambda t: mp.ncdf(t - mu) - mp.ncdf(-t - mu) - mp.mpf("0.5"), mu + 0.7)
        show(f"bias_median_p_n{n}", two_sided_p(m))

    for qq in (1, 10, 100, 10000):
        show(f"min_p_median_q{qq}", 1 - mp.mpf("0.5") ** (mp.mpf(1) / qq))


if __name__ == "__main__":
    main()
