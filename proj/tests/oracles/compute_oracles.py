"""Independent high-precision oracles for the frozen expected values in the
C++ test suite. Each value is computed from an integral representation with
mpmath quadrature at 40 digits; library special functions are only used as a
secondary cross-check and never feed the frozen number.

Run:  python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp

mp.mp.dps = 40
inf = mp.inf


def psi_quad(a, b, x):
    a, b, x = mp.mpmathify(a), mp.mpmathify(b), mp.mpf(x)
    integ = mp.quad(lambda t: mp.e**(-x * t) * t**(a - 1) * (1 + t)**(b - a - 1), [0, 1, inf])
    return integ / mp.gamma(a)


def whittaker_quad(alpha, nu, x):
    alpha, nu, x = mp.mpmathify(alpha), mp.mpmathify(nu), mp.mpf(x)
    integ = mp.quad(lambda s: mp.e**(-s) * s**(-0.5 - alpha + nu) * (1 + s / x)**(-0.5 + alpha + nu), [0, 1, inf])
    return mp.e**(-x / 2) * x**alpha / mp.gamma(0.5 - alpha + nu) * integ


def parabolic_quad(mu, z):
    mu, z = mp.mpmathify(mu), mp.mpf(z)
    integ = mp.quad(lambda s: mp.e**(-s) * s**(-(1 + mu) / 2) * (1 + 2 * s / z**2)**(mu / 2), [0, 1, inf])
    return z**mu * mp.e**(-z**2 / 4) / mp.gamma((1 - mu) / 2) * integ


def bessel_k_quad(nu, x):
    nu, x = mp.mpmathify(nu), mp.mpf(x)
    # e^{-x cosh t} is below 1e-80 beyond t = 7 for the x used here
    return mp.quad(lambda t: mp.e**(-x * mp.cosh(t)) * mp.cosh(nu * t), [0, 1, 2, 4, 7])


def kernel_k_closed(alpha, x, y, xi):
    alpha = mp.mpmathify(alpha)
    x, y, xi = mp.mpf(x), mp.mpf(y), mp.mpf(xi)
    w = x * y + x * xi + y * xi
    z = w / mp.sqrt(2 * x * y * xi)
    return (2**(-1 - alpha) / mp.sqrt(mp.pi) * mp.sqrt(x * y * xi)
            * mp.e**(x / 2 + y / 2 + xi / 2 - w**2 / (8 * x * y * xi)) * parabolic_quad(2 * alpha, z))


def lebedev_eta(n, x):
    x = mp.mpf(x)
    s = 0
    for k in range(n + 1):
        s += (-1)**(k + 1) / ((mp.mpf(1) / 2 + k) * mp.factorial(k) * mp.factorial(n - k)) * psi_quad(0.5, 1 - k, x)
    return mp.pi**(-1.5) * mp.factorial(n) * mp.gamma(1.5 + n) * x**(1.5 + n) * s


def show(name, v, check=None):
    v = mp.mpmathify(v)
    line = f"{name:40s} re={mp.nstr(mp.re(v), 20):>26s} im={mp.nstr(mp.im(v), 20):>26s}"
    if check is not None:
        line += f"   |oracle-lib|={mp.nstr(abs(v - check), 3)}"
    print(line, flush=True)


if __name__ == "__main__":
    show("Psi(0.5,1;1)", psi_quad(0.5, 1, 1), mp.hyperu(0.5, 1, 1))
    show("W_{-0.3,0.4i}(1.5)", whittaker_quad(-0.3, 0.4j, 1.5), mp.whitw(-0.3, 0.4j, 1.5))
    show("D_{-0.6}(1.2)", parabolic_quad(-0.6, 1.2), mp.pcfd(-0.6, 1.2))
    show("K_{2i}(1)", bessel_k_quad(2j, 1), mp.besselk(2j, 1))
    show("k_{-0.5}(1,2,3)", kernel_k_closed(-0.5, 1, 2, 3))
    show("eta_1(1)", lebedev_eta(1, 1))
    show("eta_0(1)", lebedev_eta(0, 1), -mp.hyperu(0.5, 1, 1) / mp.pi)
    # closed form of int_0^inf (2/pi) tau sinh(pi tau) exp(-2 pi tau) dtau
    show("index example integral", mp.quad(lambda t: 2 / mp.pi * t * mp.sinh(mp.pi * t) * mp.e**(-2 * mp.pi * t), [0, inf]),
         8 / (9 * mp.pi**3))
    # classical transform of x^{3/2} e^{-x/2} at alpha = 0, via K_{i tau}
    # (outer quadrature at 20 digits; the inner K uses mpmath's own besselk)
    mp.mp.dps = 20
    for tau in (0.5, 1.0):
        v = mp.quad(lambda x: x**1.5 * mp.e**(-x / 2) * mp.sqrt(x / mp.pi) * mp.besselk(1j * tau, x / 2) * x**-2, [0, 1, 10, inf])
        show(f"classical g=x^1.5e^-x/2 tau={tau}", v, 2 * mp.sqrt(mp.pi) * tau / mp.sinh(mp.pi * tau))
    # large-index kernel value; mpmath's hyperu is the only practical oracle here
    mp.mp.dps = 30
    show("K(a=0.5,tau=20,x=40)", mp.mpf(40)**(0.5 + 20j) * mp.hyperu(0.5 + 20j, 1 + 40j, 40))
    show("Psi(1.5+2i,1+4i;3)", psi_quad(1.5 + 2j, 1 + 4j, 3), mp.hyperu(1.5 + 2j, 1 + 4j, 3))
    show("Gamma check |G(1/2+i)|^2", abs(mp.gamma(0.5 + 1j))**2, mp.pi / mp.cosh(mp.pi))
