"""Generate the packaged stand-in social graph (run from repo root).

Deterministic: same seed, same file. Produces an edge list with the texture
of a small ego-network export: numeric ids 1..100, a handful of isolated
ids that appear only as self-loop lines, four dense friend circles joined
by sparse bridges, and one thin chain that stretches the diameter.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import aoinet as A  # noqa: E402

SEED = 20260817


def build():
    rng = np.random.default_rng(SEED)
    ids = list(range(1, 101))
    isolated = sorted(rng.choice(ids, size=15, replace=False).tolist())
    active = [i for i in ids if i not in isolated]
    # four circles plus a 3-node tail carved off the end
    tail = active[-3:]
    core = active[:-3]
    sizes = [28, 22, 18, len(core) - 68]
    circles, at = [], 0
    for s in sizes:
        circles.append(core[at:at + s])
        at += s
    edges = set()

    def add(u, v):
        if u != v:
            edges.add((min(u, v), max(u, v)))

    for c in circles:
        hub = c[0]
        # every member knows the hub, then preferential extras
        for v in c[1:]:
            add(hub, v)
        for v in c[1:]:
            extra = rng.integers(2, 6)
            others = [w for w in c if w != v]
            for w in rng.choice(others, size=min(extra, len(others)), replace=False):
                add(v, w)
    # sparse bridges between consecutive circles (not via hubs)
    bridge_pairs = [(circles[0][5], circles[1][7]),
                    (circles[0][9], circles[1][2]),
                    (circles[1][3], circles[2][6]),
                    (circles[2][4], circles[3][2])]
    for u, v in bridge_pairs:
        add(u, v)
    # thin chain off the last circle stretches the diameter
    chain = [circles[3][-1]] + tail
    for u, v in zip(chain, chain[1:]):
        add(u, v)
    return sorted(edges), isolated


def main():
    edges, isolated = build()
    lines = [f"{u} {v}" for u, v in edges] + [f"{i} {i}" for i in isolated]
    rng = np.random.default_rng(SEED + 1)
    rng.shuffle(lines)
    out = Path(__file__).resolve().parents[1] / "src" / "aoinet" / "data" / "social_circles.txt"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")

    with open(out, "r", encoding="utf-8") as fh:
        g = A.load_edge_list(fh, drop_isolated=True)
    dm = A.all_pairs_distances(g)
    n = g.node_count
    mean_dist = dm.dist[np.triu_indices(n, 1)].mean()
    print(f"n={n} m={len(g.edges)} diam={dm.max_distance()} mean_dist={mean_dist:.3f}")
    for delta in (1, 2):
        plan = A.cyclic_plan(g, delta, dm=dm)
        print(f"delta={delta}: mu={plan.mu} sigma={plan.sigma} candidates={len(plan.positions)}")


if __name__ == "__main__":
    main()
