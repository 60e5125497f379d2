"""Symbolic curvature of the Fubini-Study metric in the class 2*pi*c1.

Potential (s/2) log(1 + |z|^2) with s = 2(n+1); metric W_kl = 2 d_k dbar_l Phi.
Prints the values frozen into tests/test_tensor_kernel.cpp.
"""
import sympy as sp


def curvature(n, point):
    z = sp.symbols(f"z0:{n}")
    zb = sp.symbols(f"w0:{n}")  # conj(z), independent
    s = 2 * (n + 1)
    phi = sp.Rational(s, 2) * sp.log(1 + sum(z[i] * zb[i] for i in range(n)))
    W = sp.Matrix(n, n, lambda k, l: 2 * sp.diff(phi, z[k], zb[l]))
    logdet = sp.log(sp.simplify(W.det()))
    ric = sp.Matrix(n, n, lambda k, l: -2 * sp.diff(logdet, z[k], zb[l]))
    subs = {}
    for i, p in enumerate(point):
        subs[z[i]] = p
        subs[zb[i]] = sp.conjugate(p)
    Wv = W.subs(subs).evalf(30)
    Winv = Wv.inv()
    ricv = ric.subs(subs).evalf(30)
    scal = sp.re((2 * (Winv * ricv).trace()).evalf(30))
    # 2R_{jk l m} = d_j dbar_k W_lm - d_j W_lp W^{pq} dbar_k W_qm
    R = {}
    for j in range(n):
        for k in range(n):
            ddb = sp.Matrix(n, n, lambda l, m: sp.diff(W[l, m], z[j], zb[k])).subs(subs)
            dj = sp.Matrix(n, n, lambda l, m: sp.diff(W[l, m], z[j])).subs(subs)
            dk = sp.Matrix(n, n, lambda l, m: sp.diff(W[l, m], zb[k])).subs(subs)
            T = (ddb - dj * Winv * dk).evalf(30)
            for l in range(n):
                for m in range(n):
                    R[(j, k, l, m)] = sp.N(T[l, m] / 2, 20)
    return Wv, ricv, scal, R


if __name__ == "__main__":
    cases = [(1, [0]), (1, [sp.Rational(3, 10) + sp.Rational(2, 10) * sp.I]),
             (2, [sp.Rational(3, 10) + sp.Rational(2, 10) * sp.I, -sp.Rational(1, 10) + sp.Rational(4, 10) * sp.I])]
    for n, pt in cases:
        Wv, ricv, scal, R = curvature(n, pt)
        print(f"n={n} point={pt}")
        print("  W =", [[sp.N(Wv[a, b], 17) for b in range(n)] for a in range(n)])
        print("  Ric =", [[sp.N(ricv[a, b], 17) for b in range(n)] for a in range(n)])
        print("  Scal =", sp.N(scal, 17))
        for key, v in sorted(R.items()):
            print("  R", key, sp.N(sp.re(v), 17), sp.N(sp.im(v), 17))
