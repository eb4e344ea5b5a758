#!/usr/bin/env python3
"""Deterministically generates the bundled synthetic 113-bus case.

The grid is not a physical system: a random spanning tree over 113 buses plus
mesh chords (149 lines total), 29 generating units of which 10 need cranking
power, and loads spread over roughly two thirds of the buses. Line ratings are
sized generously so the case is useful for format/loader coverage and large
model construction, not for tuned optimization studies.

Run from the repository root:  python3 tools/gen_case113.py
"""
import json
import random
from pathlib import Path

N_BUSES = 113
N_LINES = 149
N_GENS = 29
N_NBS = 10
SEED = 1137

OUT = Path(__file__).resolve().parent.parent / "data"


def main() -> None:
    rng = random.Random(SEED)
    bus_ids = [str(i) for i in range(1, N_BUSES + 1)]

    # Spanning tree first (guarantees connectivity), then chords.
    edges = set()
    lines = []

    def add_line(a: str, b: str) -> None:
        cap = rng.choice([200, 250, 300, 400, 500, 600])
        lines.append({
            "id": f"{a}-{b}",
            "from": a,
            "to": b,
            "f_min": -cap,
            "f_max": cap,
        })
        edges.add((a, b))

    for i in range(2, N_BUSES + 1):
        j = rng.randint(max(1, i - 12), i - 1)  # mostly local structure
        add_line(str(j), str(i))
    while len(lines) < N_LINES:
        a, b = rng.randint(1, N_BUSES), rng.randint(1, N_BUSES)
        if a == b:
            continue
        lo, hi = (str(min(a, b)), str(max(a, b)))
        if (lo, hi) in edges:
            continue
        add_line(lo, hi)

    # Generators: the first unit is always black-start so the system can boot.
    gen_buses = rng.sample(range(1, N_BUSES + 1), N_GENS)
    gens = []
    nbs_hosts = set()
    for k, host in enumerate(gen_buses):
        p_max = rng.choice([150, 200, 250, 300, 350, 400, 450])
        is_nbs = 0 < k <= N_NBS
        gens.append({
            "id": f"G{host}",
            "bus": str(host),
            "kind": "NBS" if is_nbs else "BS",
            "p_min": 0,
            "p_max": p_max,
        })
        if is_nbs:
            nbs_hosts.add(host)

    total_cap = sum(g["p_max"] for g in gens)
    demands = {b: 0 for b in bus_ids}
    load_buses = [i for i in range(1, N_BUSES + 1) if i not in nbs_hosts]
    picked = rng.sample(load_buses, 72)
    budget_mw = int(total_cap * 0.78)
    for i in picked:
        if budget_mw <= 0:
            break
        d = rng.choice([10, 20, 30, 40, 50, 60, 80, 100])
        d = min(d, budget_mw)
        demands[str(i)] = d
        budget_mw -= d

    case = {
        "name": "case113",
        "description": (
            "Synthetic 113-bus grid generated by tools/gen_case113.py "
            "(seed 1137); sized for loader and model-construction coverage."
        ),
        "buses": [{"id": b, "demand": demands[b]} for b in bus_ids],
        "lines": lines,
        "generators": gens,
    }

    damaged = [l["id"] for l in lines if rng.random() < 0.42]
    scenario = {
        "damaged_lines": damaged,
        "budget": 30,
        "horizon": 10,
        "demand_profile": {
            picked_bus: {"1": 0, "2": demands[picked_bus] / 2}
            for picked_bus in (str(picked[0]), str(picked[1]))
        },
    }

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "case113.json").write_text(json.dumps(case, indent=2) + "\n")
    (OUT / "scenario113.json").write_text(json.dumps(scenario, indent=2) + "\n")
    print(f"wrote case113.json ({len(lines)} lines, {len(gens)} units, "
          f"{sum(demands.values()):.0f} MW) and scenario113.json "
          f"({len(damaged)} damaged)")


if __name__ == "__main__":
    main()
