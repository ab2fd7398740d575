"""Exhaustive policy enumeration over the reachable belief tree of a small
pomdp document (expectation only).

Every deterministic assignment of controls to reachable nodes is scored; a
node's value is the minimum over assignments of its own recursive cost.
Writes values.csv and policy.csv in the layout of `riskdp solve-pomdp`.
"""
import itertools
import json
import sys
from pathlib import Path


def main(doc_path, out_dir):
    body = json.loads(Path(doc_path).read_text())["body"]
    assert body.get("risk", {"kind": "expectation"})["kind"] == "expectation"
    X, Y, U, T = body["obs_states"], body["hidden_states"], body["controls"], body["horizon"]
    tables = body["stages"] if "stages" in body else [body["transitions"]] * T
    b0 = body.get("initial_belief", {y: 1.0 / len(Y) for y in Y})
    belief0 = tuple(float(b0.get(y, 0.0)) for y in Y)
    roots = [X.index(x) for x in body.get("initial_states", X)]

    def admissible(t, x):
        return [u for u in U if u in tables[t][X[x]]]

    def joint(t, x, u, belief):
        acc = [[0.0] * len(Y) for _ in X]
        nxt = tables[t][X[x]][u]["next"]
        for k, y in enumerate(Y):
            for xn, row in nxt[y].items():
                for yn, p in row.items():
                    acc[X.index(xn)][Y.index(yn)] += belief[k] * float(p)
        return acc

    def children(t, x, u, belief):
        out = []
        for xn, col in enumerate(joint(t, x, u, belief)):
            total = sum(col)
            if total > 0.0:
                out.append((total, (t + 1, xn, tuple(w / total for w in col))))
        return out

    nodes, frontier = set(), [(0, x, belief0) for x in roots]
    while frontier:
        node = frontier.pop()
        if node in nodes:
            continue
        nodes.add(node)
        t, x, b = node
        if t + 1 < T:
            for u in admissible(t, x):
                frontier.extend(child for _, child in children(t, x, u, b))
    order = sorted(nodes)
    choices = [admissible(t, x) for t, x, _ in order]

    best = {}
    for assignment in itertools.product(*choices):
        pick = dict(zip(order, assignment))
        value = {}
        for node in sorted(order, key=lambda n: -n[0]):
            t, x, b = node
            u = pick[node]
            v = float(tables[t][X[x]][u]["cost"])
            if t + 1 < T:
                v += sum(p * value[c] for p, c in children(t, x, u, b))
            value[node] = v
        for node in order:
            cand = (value[node], U.index(pick[node]))
            if node not in best or cand < best[node]:
                best[node] = cand

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = "t,state," + ",".join("belief_" + y for y in Y)
    with open(out / "values.csv", "w", newline="\n") as fv, open(out / "policy.csv", "w", newline="\n") as fp:
        fv.write(header + ",value\n")
        fp.write(header + ",control\n")
        for node in order:
            t, x, b = node
            key = "%d,%s,%s" % (t + 1, X[x], ",".join("%.17g" % w for w in b))
            fv.write("%s,%.17g\n" % (key, best[node][0]))
            fp.write("%s,%s\n" % (key, U[best[node][1]]))
    print("policies enumerated:", len(list(itertools.product(*choices))))


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
