"""Grid convergence for the two treatments of the Coulomb log.

"product" integrates the ln|k - k'| part exactly against the interpolant;
"lande" uses the classic subtraction.  Both should settle to the same
binding, product integration faster.
"""
from relhydro import channel_block, converge, preset

cfg = preset("equal-mass")     # alpha = 0.3, strongly relativistic
blk = channel_block(0, "A")
sizes = (24, 32, 48, 64, 96)

for method in ("product", "lande"):
    rep = converge(cfg, blk, n_sequence=sizes, singular=method)
    print(method)
    for n, b, d in zip(sizes, rep.binding, [float("nan")] + rep.deltas):
        print(f"   N={n:4d}  B1 = {b[0]:.12f}   rel. change {d:.2e}")
