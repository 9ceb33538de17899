"""Writes go_subset.obo and the four organism annotation files.

Deterministic: rerunning produces byte-identical files.
"""

import random
from pathlib import Path

HERE = Path(__file__).parent

TERMS = [
    ("GO:0008150", "biological_process", "biological_process", []),
    ("GO:0000003", "reproduction", "biological_process", ["GO:0008150"]),
    ("GO:0022414", "reproductive process", "biological_process", ["GO:0000003"]),
    ("GO:0007568", "aging", "biological_process", ["GO:0008150"]),
    ("GO:0010259", "multicellular organism aging", "biological_process", ["GO:0007568"]),
    ("GO:0008340", "determination of adult lifespan", "biological_process", ["GO:0010259"]),
    ("GO:0006950", "response to stress", "biological_process", ["GO:0008150"]),
    ("GO:0006979", "response to oxidative stress", "biological_process", ["GO:0006950"]),
    ("GO:0008152", "metabolic process", "biological_process", ["GO:0008150"]),
    ("GO:0006112", "energy reserve metabolic process", "biological_process", ["GO:0008152"]),
    ("GO:0003674", "molecular_function", "molecular_function", []),
    ("GO:0016209", "antioxidant activity", "molecular_function", ["GO:0003674"]),
    ("GO:0003824", "catalytic activity", "molecular_function", ["GO:0003674"]),
    ("GO:0016491", "oxidoreductase activity", "molecular_function", ["GO:0003824"]),
    ("GO:0004601", "peroxidase activity", "molecular_function", ["GO:0016209", "GO:0016491"]),
    ("GO:0009055", "electron carrier activity", "molecular_function", ["GO:0003674"]),
    ("GO:0005198", "structural molecule activity", "molecular_function", ["GO:0003674"]),
    ("GO:0004872", "receptor activity", "molecular_function", ["GO:0003674"]),
    ("GO:0005488", "binding", "molecular_function", ["GO:0003674"]),
    ("GO:0005515", "protein binding", "molecular_function", ["GO:0005488"]),
    ("GO:0005575", "cellular_component", "cellular_component", []),
    ("GO:0045202", "synapse", "cellular_component", ["GO:0005575"]),
    ("GO:0005739", "mitochondrion", "cellular_component", ["GO:0005575"]),
    ("GO:0005634", "nucleus", "cellular_component", ["GO:0005575"]),
]

ROOTS = {"GO:0008150", "GO:0003674", "GO:0005575"}

# Terms more frequent among pro-longevity genes in each organism.
SIGNALS = {
    "worm": ["GO:0000003", "GO:0016209"],
    "fly": ["GO:0009055", "GO:0005198"],
    "mouse": ["GO:0005198", "GO:0016209"],
    "yeast": ["GO:0004872", "GO:0022414"],
}
GENES = {"worm": 24, "fly": 22, "mouse": 26, "yeast": 20}


def write_obo():
    lines = [
        "format-version: 1.2",
        "data-version: synthetic-subset",
        "ontology: go",
        "",
    ]
    for tid, name, ns, parents in TERMS:
        lines += ["[Term]", f"id: {tid}", f"name: {name}", f"namespace: {ns}"]
        names = {t[0]: t[1] for t in TERMS}
        lines += [f"is_a: {p} ! {names[p]}" for p in parents]
        lines.append("")
    lines += [
        "[Term]",
        "id: GO:0000004",
        "name: biological_process unknown",
        "namespace: biological_process",
        "is_obsolete: true",
        "",
        "[Typedef]",
        "id: part_of",
        "name: part of",
        "",
    ]
    (HERE / "go_subset.obo").write_text("\n".join(lines))


def write_organism(rng, organism):
    by_ns = {}
    for tid, _, ns, _ in TERMS:
        if tid not in ROOTS:
            by_ns.setdefault(ns, []).append(tid)
    rows = [f"# {organism}: gene_id\tgo_id\tclass"]
    for n in range(1, GENES[organism] + 1):
        gene = f"{organism}-g{n:02d}"
        label = "pro" if n % 2 else "anti"
        terms = set()
        for sig in SIGNALS[organism]:
            if rng.random() < (0.8 if label == "pro" else 0.2):
                terms.add(sig)
        for ns, pool in sorted(by_ns.items()):
            if not any(t in pool for t in terms):
                terms.add(rng.choice(pool))
            for t in pool:
                if rng.random() < 0.15:
                    terms.add(t)
        rows += [f"{gene}\t{t}\t{label}" for t in sorted(terms)]
    (HERE / f"{organism}.tsv").write_text("\n".join(rows) + "\n")


def main():
    write_obo()
    rng = random.Random(20240611)
    for organism in ["worm", "fly", "mouse", "yeast"]:
        write_organism(rng, organism)


if __name__ == "__main__":
    main()
