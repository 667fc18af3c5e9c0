"""Writes the sample inputs in this directory."""
import json
import math
import pathlib

here = pathlib.Path(__file__).parent


def log_linear(x_min, x_max, n, scale):
    u = lambda x: math.log(x) + x / scale
    a, b = u(x_min), u(x_max)
    out, x = [], x_min
    for i in range(n):
        t = a + (b - a) * i / (n - 1)
        for _ in range(100):
            dx = (u(x) - t) / (1 / x + 1 / scale)
            x = max(x - dx, 0.5 * x)
            if abs(dx) <= 1e-15 * x:
                break
        out.append(x)
    out[0], out[-1] = x_min, x_max
    return out


def write(name, f, nodes, decay):
    with open(here / name, "w") as fh:
        fh.write("x,re,im\n")
        for x in nodes:
            fh.write(f"{x:.17g},{f(x):.17g},0\n")
    with open(here / (name + ".decay.json"), "w") as fh:
        json.dump(decay, fh, indent=2)
        fh.write("\n")


grid = log_linear(1e-3, 60, 200, 3.0)
write("x.csv", lambda x: x, [math.exp(math.log(1e-3) + i * (math.log(1e3) - math.log(1e-3)) / 199) for i in range(200)],
      {"power_at_zero": 1, "power_at_infinity": 1, "rate_at_infinity": 0})
for n in range(3):
    p = 1.5 + n
    write(f"h_lebedev{n}.csv", lambda x, p=p: x**p * math.exp(-x), grid,
          {"power_at_zero": p, "power_at_infinity": p, "rate_at_infinity": 1})
    with open(here / f"lebedev{n}.json", "w") as fh:
        json.dump({"nu": 0, "theta": {"kind": "lebedev", "n": n}, "h": f"h_lebedev{n}.csv",
                   "grid": {"x_min": 0.01, "x_max": 30, "nodes": 40, "scale": 3}}, fh, indent=2)
        fh.write("\n")

fine = log_linear(1e-4, 60, 240, 3.0)
write("f_pair.csv", lambda x: x**3 * math.exp(-x), fine, {"power_at_zero": 3, "power_at_infinity": 3, "rate_at_infinity": 1})
write("g_pair.csv", lambda x: x**2.5 * math.exp(-2 * x), fine,
      {"power_at_zero": 2.5, "power_at_infinity": 2.5, "rate_at_infinity": 2})

# 1 + transform of theta vanishes at tau = 0 for this lambda
a, beta = 1.0, 2.5
lam = -math.gamma(beta) / math.gamma(beta - a) ** 2
with open(here / "unsolvable.json", "w") as fh:
    json.dump({"a": a, "nu": 0, "theta": {"kind": "power", "lambda": lam, "beta": beta}, "h": "f_pair.csv",
               "grid": {"x_min": 0.01, "x_max": 30, "nodes": 20, "scale": 3}}, fh, indent=2)
    fh.write("\n")
