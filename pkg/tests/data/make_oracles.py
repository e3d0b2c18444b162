"""Independent oracle: sympy computations frozen into tests/data/oracles.json."""
import json, itertools
import sympy as sp
a, b, t, s = sp.symbols("a b t s")
out = {}
G = sp.groebner([a + b - 5, a * b - 6], a, b, order="grevlex")
out["gb_ab"] = [str(sp.expand(g)) for g in G.exprs]
out["nf_a2"] = str(G.reduce(a**2)[1])
# minimal polynomials by elimination
for v, other in ((a, b), (b, a)):
    Gl = sp.groebner([a + b - 5, a * b - 6, t - v], other, v, t, order="lex")
    out[f"minpoly_{v}"] = [str(e) for e in Gl.exprs if e.free_symbols <= {t}]
out["sqf_t3_t2"] = str(sp.sqf_part(t**3 - t**2))
out["sqf_t2"] = str(sp.sqf_part((t - 2) ** 2))
out["rank_1132"] = sp.Matrix([[1, 1], [3, 2]]).rank()
out["rank_f7"] = sp.Matrix([[1, 2], [2, 4]]).rank(iszerofunc=lambda x: x % 7 == 0)
# 2-state IO equation: edge 1->0 rate k, leak at 0 rate l, input 0, output 0
k, l = sp.symbols("k l")
A = sp.Matrix([[-l, k], [0, -k]])
M = s * sp.eye(2) - A
out["io2_lhs"] = str(sp.expand(M.det()))
out["io2_rhs_u0"] = str(sp.expand(M.minor_submatrix(0, 0).det()))
# Figure 2: edges 0->2, 1->2 with rates p, q
p, q = sp.symbols("p q")
A = sp.Matrix([[-p, 0, 0], [0, -q, 0], [p, q, 0]])
out["fig2_charpoly"] = str(sp.factor((s * sp.eye(3) - A).det()))
# Jacobian examples
for name, cs in {"sum_prod": [a + b, a * b], "prod": [a * b], "a_prod": [a, a * b]}.items():
    J = sp.Matrix([[sp.diff(c, v) for v in (a, b)] for c in cs]).subs({a: 2, b: 3})
    verdict = []
    for e in (sp.Matrix([[1, 0]]), sp.Matrix([[0, 1]])):
        verdict.append(J.col_join(e).rank() == J.rank())
    out[f"jac_{name}"] = verdict
out["total_n_le_3"] = 32 + 920
json.dump(out, open(__file__.replace("make_oracles.py", "oracles.json"), "w"), indent=1, sort_keys=True)
print(json.dumps(out, indent=1))
