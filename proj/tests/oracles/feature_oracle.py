#!/usr/bin/env python3
"""Reference feature matrix for small arrest fixtures.

Straight set-builder evaluation in exact fractions: shortest paths by
enumeration, groups by exhaustive modularity search, shells by repeated
peeling, diffusion by synchronous rounds. Slow on purpose; only meant for
fixtures of a handful of nodes.

usage: feature_oracle.py arrests.csv out.csv [--masked]
"""

import csv
import itertools
import sys
from collections import defaultdict
from datetime import date
from fractions import Fraction

COLUMNS = [
    "degree", "degree_violent", "frac_1hop_violent", "frac_2hop_violent",
    "maj_1hop_and_2hop_violent", "minority_1hop_majority_2hop_violent",
    "component_size_without_v", "largest_violent_component_without_v",
    "group_size", "group_edges", "group_violent_members", "group_triangles",
    "group_transitivity", "group_boundary_nodes", "gang_boundary_nodes",
    "betweenness", "betweenness_violent", "closeness", "closeness_violent",
    "shell", "shell_violent",
    "propagation_k2", "propagation_k3", "propagation_k4", "propagation_k5", "propagation_k6",
    "district_frequency", "beat_frequency", "beat_violence", "district_violence",
    "avg_interval_days", "violent_groups",
]


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    for r in rows:
        r["date"] = date.fromisoformat(r["date"])
        r["violent"] = r["violent"] == "1"
        r["arrest"] = r["crime"] != ""
    return rows


def build_graph(rows):
    events = defaultdict(set)
    for r in rows:
        events[r["arrest_id"]].add(r["offender_id"])
    adj = defaultdict(set)
    for members in events.values():
        for a, b in itertools.combinations(sorted(members), 2):
            adj[a].add(b)
            adj[b].add(a)
    return sorted(adj), adj


def distances(nodes, adj, src, allowed=None):
    allowed = set(nodes) if allowed is None else allowed
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w in allowed and w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def all_shortest_paths(adj, s, t, length):
    out = []

    def walk(path):
        if len(path) - 1 == length:
            if path[-1] == t:
                out.append(list(path))
            return
        for w in sorted(adj[path[-1]]):
            if w not in path:
                path.append(w)
                walk(path)
                path.pop()

    walk([s])
    return out


def betweenness(nodes, adj, endpoints, v):
    total = Fraction(0)
    ends = sorted(e for e in endpoints if e != v)
    for u, w in itertools.combinations(ends, 2):
        d = distances(nodes, adj, u)
        if w not in d:
            continue
        paths = all_shortest_paths(adj, u, w, d[w])
        through = sum(1 for p in paths if v in p)
        total += Fraction(through, len(paths))
    return total


def closeness(nodes, adj, members, v):
    d = distances(nodes, adj, v)
    reach = [u for u in members if u in d]
    if v in members and v not in reach:
        reach.append(v)
    s = sum(d[u] for u in reach)
    if len(reach) <= 1 or s == 0:
        return Fraction(0)
    return Fraction(len(reach) - 1, s)


def shell(adj, keep, v):
    best = 0
    for k in itertools.count(1):
        alive = set(keep)
        changed = True
        while changed:
            changed = False
            for x in sorted(alive):
                if len(adj[x] & alive) < k:
                    alive.discard(x)
                    changed = True
        if v not in alive:
            return best
        best = k


def tipping(nodes, adj, seeds, kappa):
    active = set(seeds)
    while True:
        new = {x for x in nodes if x not in active and len(adj[x] & active) >= kappa}
        if not new:
            return active
        active |= new


def modularity(sub_nodes, sub_adj, blocks):
    m2 = sum(len(sub_adj[u]) for u in sub_nodes)
    q = Fraction(0)
    for b in blocks:
        for i in b:
            for j in b:
                a = 1 if j in sub_adj[i] else 0
                q += a - Fraction(len(sub_adj[i]) * len(sub_adj[j]), m2)
    return q / m2


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


def gang_groups(members, adj):
    sub_adj = {u: adj[u] & members for u in members}
    linked = sorted(u for u in members if sub_adj[u])
    groups = [[u] for u in sorted(members) if not sub_adj[u]]
    if linked:
        scored = [(modularity(linked, sub_adj, p), p) for p in set_partitions(linked)]
        best = max(s for s, _ in scored)
        winners = [p for s, p in scored if s == best]
        if len(winners) != 1:
            raise SystemExit("fixture gang has several optimal partitions; pick a less symmetric one")
        groups += winners[0]
    return [sorted(g) for g in groups]


def fmt(x):
    if x == 0:
        return "0"
    return "%.12g" % float(x)


def main():
    src, dst = sys.argv[1], sys.argv[2]
    masked = "--masked" in sys.argv[3:]
    rows = load(src)
    nodes, adj = build_graph(rows)
    by_offender = defaultdict(list)
    for r in rows:
        by_offender[r["offender_id"]].append(r)
    for h in by_offender.values():
        h.sort(key=lambda r: r["date"])
    violent_all = {o for o, h in by_offender.items() if any(r["violent"] for r in h)}

    def latest(o, field):
        vals = [r[field] for r in by_offender[o] if r[field]]
        return vals[-1] if vals else ""

    gang = {o: latest(o, "gang") for o in nodes}
    group_of = {}
    for g in sorted({x for x in gang.values() if x}):
        members = {o for o in nodes if gang[o] == g}
        for grp in gang_groups(members, adj):
            for o in grp:
                group_of[o] = (g, grp)

    out_rows = []
    for v in nodes:
        V = violent_all - {v} if masked else violent_all
        d = distances(nodes, adj, v)
        n1 = [u for u in nodes if d.get(u) == 1]
        n2 = [u for u in nodes if d.get(u) == 2]
        f = {}
        f["degree"] = len(n1)
        f["degree_violent"] = sum(u in V for u in n1)
        f["frac_1hop_violent"] = Fraction(f["degree_violent"], len(n1)) if n1 else 0
        f["frac_2hop_violent"] = Fraction(sum(u in V for u in n2), len(n2)) if n2 else 0

        def maj(pool):
            return bool(pool) and 2 * sum(u in V for u in pool) >= len(pool)

        m1, m2 = maj(n1), maj(n1 + n2)
        f["maj_1hop_and_2hop_violent"] = int(m1 and m2)
        f["minority_1hop_majority_2hop_violent"] = int(not m1 and m2)

        rest = set(d) - {v}
        pieces = []
        while rest:
            s = min(rest)
            piece = set(distances(nodes, adj, s, rest))
            pieces.append(piece)
            rest -= piece
        f["component_size_without_v"] = max((len(p) for p in pieces), default=0)
        f["largest_violent_component_without_v"] = max((len(p) for p in pieces if p & V), default=0)

        if v in group_of:
            g, grp = group_of[v]
            gs = set(grp)
            inner = {u: adj[u] & gs for u in grp}
            edges = sum(len(x) for x in inner.values()) // 2
            tri = sum(1 for a, b, c in itertools.combinations(grp, 3)
                      if b in adj[a] and c in adj[a] and c in adj[b])
            triples = sum(len(inner[u]) * (len(inner[u]) - 1) // 2 for u in grp)
            f["group_size"] = len(grp)
            f["group_edges"] = edges
            f["group_violent_members"] = sum(u in V for u in grp)
            f["group_triangles"] = tri
            f["group_transitivity"] = Fraction(3 * tri, triples) if triples else 0
            f["group_boundary_nodes"] = sum(1 for u in grp if adj[u] - gs)
            gang_members = {o for o in nodes if gang[o] == g}
            f["gang_boundary_nodes"] = sum(1 for u in gang_members if adj[u] - gang_members)
        else:
            for k in ["group_size", "group_edges", "group_violent_members", "group_triangles",
                      "group_transitivity", "group_boundary_nodes", "gang_boundary_nodes"]:
                f[k] = 0

        f["betweenness"] = betweenness(nodes, adj, nodes, v)
        f["betweenness_violent"] = betweenness(nodes, adj, [u for u in nodes if u in V], v)
        f["closeness"] = closeness(nodes, adj, nodes, v)
        f["closeness_violent"] = closeness(nodes, adj, [u for u in nodes if u in V], v)
        f["shell"] = shell(adj, set(nodes), v)
        f["shell_violent"] = shell(adj, {u for u in nodes if u in V} | {v}, v)
        for k in range(2, 7):
            f["propagation_k%d" % k] = int(v in tipping(nodes, adj, {u for u in nodes if u in V}, k))

        arrests = [r for r in by_offender[v] if r["arrest"]]
        all_arrests = [r for r in rows if r["arrest"]]
        dists = {r["district"] for r in arrests if r["district"]}
        beats = {r["beat"] for r in arrests if r["beat"]}
        f["district_frequency"] = sum(1 for r in all_arrests if r["district"] in dists)
        f["beat_frequency"] = sum(1 for r in all_arrests if r["beat"] in beats)

        def violent_row(r):
            return r["violent"] and not (masked and r["offender_id"] == v)

        f["beat_violence"] = sum(1 for r in all_arrests if r["beat"] in beats and violent_row(r))
        f["district_violence"] = sum(1 for r in all_arrests if r["district"] in dists and violent_row(r))

        days = [r["date"] for r in arrests]
        if len(days) > 1:
            gaps = [(days[i] - days[i - 1]).days for i in range(1, len(days))]
            f["avg_interval_days"] = Fraction(sum(gaps), len(days))
        else:
            f["avg_interval_days"] = 0
        f["violent_groups"] = sum(
            1 for r in arrests
            if any(o["violent"] for o in rows
                   if o["arrest_id"] == r["arrest_id"] and o["offender_id"] != v))

        out_rows.append([v] + [fmt(f[c]) for c in COLUMNS] + [str(int(v in violent_all))])

    with open(dst, "w", newline="") as out:
        out.write(",".join(["offender_id"] + COLUMNS + ["label"]) + "\n")
        for r in out_rows:
            out.write(",".join(r) + "\n")


if __name__ == "__main__":
    main()
