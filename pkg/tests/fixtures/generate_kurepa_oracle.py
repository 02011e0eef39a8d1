"""One-time oracle for Kurepa's function values used as frozen test fixtures.

Brute-force composite Gauss-Legendre quadrature in mpmath at 45 digits:

* [0, 1] is split geometrically toward t = 0 (panels [2^-(k+1), 2^-k],
  k < 150) so the t^x endpoint behaviour is resolved panel by panel;
* [1, 100] is split into uniform panels of width 1/4;
* the tail beyond t = 100 is below e^-100 and is dropped.

This deliberately shares no code with ``minimaxproof.specfun``.  Run it
from the repository root to regenerate ``kurepa_oracle.json``::

    python tests/fixtures/generate_kurepa_oracle.py
"""

import json
from pathlib import Path

import mpmath as mp

DPS = 45
NODES = 24


def _gl_rule(n):
    xs, ws = [], []
    for k in range(1, n + 1):
        x = mp.cos(mp.pi * (k - mp.mpf(1) / 4) / (n + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** (-DPS - 5):
                break
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    return xs, ws


def _panels():
    panels = [(mp.mpf(2) ** -(k + 1), mp.mpf(2) ** -k) for k in range(150)]
    panels.reverse()
    panels += [(1 + mp.mpf(j) / 4, 1 + mp.mpf(j + 1) / 4) for j in range(396)]
    return panels


def composite(integrand):
    xs, ws = _gl_rule(NODES)
    total = mp.mpf(0)
    for lo, hi in _panels():
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        total += half * mp.fsum(w * integrand(mid + half * x) for x, w in zip(xs, ws))
    return total


def main():
    mp.mp.dps = DPS
    out = {"dps": DPS, "nodes": NODES, "K": {}}
    for text in ["0.1", "0.2", "0.25", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9", "0.999"]:
        x = mp.mpf(text)
        val = composite(lambda t: mp.exp(-t) * (mp.power(t, x) - 1) / (t - 1))
        out["K"][text] = mp.nstr(val, 30)
        print(text, out["K"][text])
    k1 = composite(lambda t: mp.exp(-t) * mp.log(t) / (t - 1))
    k2 = composite(lambda t: mp.exp(-t) * mp.log(t) ** 2 / (t - 1))
    out["K_prime_0"] = mp.nstr(k1, 30)
    out["K_double_prime_0"] = mp.nstr(k2, 30)
    out["alpha"] = mp.nstr(-k2 / 2, 30)
    print("K'(0)", out["K_prime_0"], "alpha", out["alpha"])
    path = Path(__file__).with_name("kurepa_oracle.json")
    path.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
