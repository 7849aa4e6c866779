#!/usr/bin/env python3
"""Construct the shipped hierarchy fixtures and verify their structural
properties against the targets, plus a first-order distortion estimate.

Run from the repo root:  python3 tools/build_fixtures.py
"""
import math
from collections import deque

# ---------------------------------------------------------------- pizza
PIZZA = {
    "pizza": ["named_pizza", "pizza_topping", "pizza_base", "spiciness"],
    "named_pizza": [
        "margherita", "napoletana", "marinara", "quattro_stagioni",
        "capricciosa", "diavola", "calzone", "quattro_formaggi",
        "prosciutto_e_funghi", "ortolana", "italian", "american",
    ],
    "italian": ["regional", "roman_style", "neapolitan_style"],
    "regional": ["southern", "northern_style", "central_style"],
    "southern": ["sicilian_style", "calabrian_style"],
    "sicilian_style": ["classic_sicilian", "palermo_style"],
    "classic_sicilian": ["sfincione", "scaccia"],
    "american": ["new_york_slice", "chicago_deep_dish", "detroit_square", "california_thin"],
    "pizza_topping": [
        "vegetable_topping", "meat_topping", "cheese_topping", "seafood_topping",
        "herb_topping", "sauce_topping", "fruit_topping",
        "olive", "onion", "garlic", "mushroom", "artichoke", "spinach",
        "arugula", "caper", "sun_dried_tomato", "roasted_eggplant",
        "zucchini", "sweetcorn", "leek", "asparagus", "broccoli", "rocket",
    ],
    "vegetable_topping": ["pepper_topping", "cherry_tomato", "red_onion"],
    "pepper_topping": ["hot_pepper", "bell_pepper", "sweet_pepper"],
    "hot_pepper": ["chili_family", "jalapeno"],
    "chili_family": ["capsicum_group", "cayenne"],
    "capsicum_group": ["habanero", "scotch_bonnet"],
    "meat_topping": ["pepperoni", "ham", "salami", "chicken", "bacon", "sausage", "ground_beef"],
    "cheese_topping": ["mozzarella", "gorgonzola", "parmesan", "ricotta", "provolone", "pecorino"],
    "seafood_topping": ["anchovy", "tuna", "shrimp", "smoked_salmon"],
    "herb_topping": ["basil", "oregano", "rosemary", "thyme"],
    "sauce_topping": ["tomato_sauce", "pesto_sauce", "white_sauce"],
    "fruit_topping": ["pineapple", "fig"],
    "pizza_base": ["deep_pan", "thin_and_crispy", "stuffed_crust"],
    "spiciness": ["mild", "medium", "hot"],
}

PIZZA_RESTRUCTURED = {
    "pizza": [
        "named_pizza", "pizza_topping", "pizza_base", "spiciness",
        "deep_pan", "thin_and_crispy", "stuffed_crust", "mild", "medium", "hot",
    ],
    "named_pizza": [
        "margherita", "napoletana", "marinara", "quattro_stagioni",
        "capricciosa", "diavola", "calzone", "quattro_formaggi",
        "prosciutto_e_funghi", "ortolana", "new_york_slice",
        "chicago_deep_dish", "detroit_square", "california_thin",
        "roman_style", "neapolitan_style", "northern_style",
        "central_style", "calabrian_style", "palermo_style",
        "sfincione", "scaccia",
    ],
    "pizza_topping": [
        "vegetable_topping", "meat_topping", "cheese_topping", "seafood_topping",
        "herb_topping",
        "olive", "onion", "garlic", "mushroom", "artichoke", "spinach",
        "arugula", "caper", "sun_dried_tomato", "roasted_eggplant",
        "zucchini", "sweetcorn", "leek", "asparagus", "broccoli", "rocket",
        "basil", "oregano", "rosemary", "thyme",
        "tomato_sauce", "pesto_sauce", "white_sauce",
        "pineapple", "fig", "jalapeno", "cayenne",
        "bacon", "sausage", "ground_beef", "provolone", "pecorino",
        "smoked_salmon", "shrimp",
    ],
    "vegetable_topping": ["pepper_topping", "cherry_tomato", "red_onion"],
    "pepper_topping": ["bell_pepper", "sweet_pepper", "habanero", "scotch_bonnet"],
    "meat_topping": ["pepperoni", "ham", "salami", "chicken"],
    "cheese_topping": ["mozzarella", "gorgonzola", "parmesan", "ricotta"],
    "seafood_topping": ["anchovy", "tuna"],
}

CORE50_CATS = {
    "mobile_phones": "mobile_phone",
    "remote_controls": "remote_control",
    "light_bulbs": "light_bulb",
    "plug_adapters": "plug_adapter",
    "cans": "can",
    "cups": "cup",
    "markers": "marker",
    "scissors": "scissors",
    "balls": "ball",
    "glasses": "glasses",
}

def core50_tree():
    t = {
        "core50": [
            "portable_electronics", "home_electronics", "kitchen_objects",
            "office_objects", "play_objects", "vision_objects",
        ],
        "portable_electronics": ["mobile_phones", "remote_controls"],
        "home_electronics": ["electric_fittings"],
        "electric_fittings": ["light_bulbs", "plug_adapters"],
        "kitchen_objects": ["containers"],
        "containers": ["cans", "cups"],
        "office_objects": ["desk_tools"],
        "desk_tools": ["markers", "scissors"],
        "play_objects": ["balls"],
        "vision_objects": ["glasses"],
    }
    for cat, stem in CORE50_CATS.items():
        t[cat] = [f"{stem}_{i}" for i in range(1, 6)]
    return t


def close(tree):
    """Adds empty child lists for leaves; returns (tree, root)."""
    full = dict(tree)
    children = {c for cs in tree.values() for c in cs}
    for cs in tree.values():
        for c in cs:
            full.setdefault(c, [])
    roots = [n for n in full if n not in children]
    assert len(roots) == 1, f"roots: {roots}"
    return full, roots[0]


def props(tree):
    full, root = close(tree)
    names = list(full)
    depth = {root: 0}
    order = [root]
    q = deque([root])
    while q:
        u = q.popleft()
        for v in full[u]:
            depth[v] = depth[u] + 1
            order.append(v)
            q.append(v)
    assert len(order) == len(names), "disconnected"
    n = len(names)
    leaves = [u for u in names if not full[u]]
    internal = n - len(leaves)
    bf = math.floor((n - 1) / internal * 10) / 10
    return {
        "nodes": n,
        "edges": n - 1,
        "depth": max(depth.values()),
        "leaves": len(leaves),
        "max_children": max(len(full[u]) for u in names),
        "avg_bf": bf,
    }


def pair_stats(tree):
    """(mean over ordered pairs of 1/d, diameter) via BFS per node."""
    full, root = close(tree)
    names = list(full)
    adj = {u: list(full[u]) for u in names}
    parent = {}
    for u in names:
        for v in full[u]:
            parent[v] = u
    for u in names:
        if u in parent:
            adj[u].append(parent[u])
    total_inv = 0.0
    diameter = 0
    for s in names:
        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        for u, d in dist.items():
            if u != s:
                total_inv += 1.0 / d
                diameter = max(diameter, d)
    n = len(names)
    return total_inv / (n * (n - 1)), diameter


def tau(depth):
    eps = 2.0 ** -52
    return math.log((2 - eps / 2) / (eps / 2)) / (1.3 * depth)


def model(tree, label, d_avg_target, d_wc_target):
    p = props(tree)
    m, diam = pair_stats(tree)
    t = tau(p["depth"])
    k = math.log(2) / t
    d_avg = k * (1 - m)
    d_wc = 1 / (1 - (diam - 1) / diam * k)
    print(f"{label}: {p}")
    print(f"  diameter={diam} mean(1/d)={m:.4f} tau={t:.4f}")
    print(f"  model D_avg={d_avg:.4f} (target {d_avg_target})  model D_wc={d_wc:.4f} (target {d_wc_target})")
    return p


def serialize(tree, root=None):
    full, r = close(tree)
    if root is None:
        root = r
    lines = []
    def rec(u, depth):
        lines.append("  " * depth + u)
        for v in full[u]:
            rec(v, depth + 1)
    rec(root, 0)
    return "\n".join(lines) + "\n"


def check(label, got, want):
    status = "ok" if got == want else f"MISMATCH (want {want})"
    print(f"  {label}: {got} {status}")
    assert got == want, f"{label}: {got} != {want}"


if __name__ == "__main__":
    p = model(PIZZA, "pizza", 0.126, 1.180)
    check("nodes", p["nodes"], 100)
    check("edges", p["edges"], 99)
    check("depth", p["depth"], 7)
    check("leaves", p["leaves"], 78)
    check("max_children", p["max_children"], 23)
    check("avg_bf", p["avg_bf"], 4.5)

    r = model(PIZZA_RESTRUCTURED, "pizza_restructured", 0.065, 1.090)
    check("nodes", r["nodes"], 89)
    check("edges", r["edges"], 88)
    check("depth", r["depth"], 4)
    check("leaves", r["leaves"], 81)
    check("max_children", r["max_children"], 39)
    check("avg_bf", r["avg_bf"], 11.0)

    c = model(core50_tree(), "core50", 0.075, 1.092)
    check("nodes", c["nodes"], 70)
    check("edges", c["edges"], 69)
    check("depth", c["depth"], 4)
    check("leaves", c["leaves"], 50)
    check("max_children", c["max_children"], 6)
    check("avg_bf", c["avg_bf"], 3.4)

    # Leaf retention + label subset: restructured vs original pizza.
    pf, _ = close(PIZZA)
    rf, _ = close(PIZZA_RESTRUCTURED)
    pizza_leaves = {u for u in pf if not pf[u]}
    missing = pizza_leaves - set(rf)
    invented = set(rf) - set(pf)
    print(f"pizza leaves missing from restructured: {sorted(missing) or 'none'}")
    print(f"invented labels in restructured: {sorted(invented) or 'none'}")
    assert not missing and not invented

    import pathlib
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
    out.mkdir(exist_ok=True)
    (out / "pizza.txt").write_text(serialize(PIZZA))
    (out / "pizza_restructured.txt").write_text(serialize(PIZZA_RESTRUCTURED))
    (out / "core50.txt").write_text(serialize(core50_tree()))
    print(f"fixtures written to {out}")
