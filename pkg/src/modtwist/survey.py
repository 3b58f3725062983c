"""Count projective representations of H, up to PGL2 conjugacy, whose twist descends."""

from __future__ import annotations

from collections import defaultdict

from . import fp_linalg as fl
from .descent import decide
from .reps import DescentProblem, ProjRep, all_homomorphisms


def conjugacy_classes(H, p: int, det_sign: dict) -> list:
    """
    One representative per PGL2(F_p)-orbit of homomorphisms H -> PGL2(F_p)
    with the prescribed det classes.  Representatives are the first orbit
    members in enumeration order.
    """
    gens = H.generators
    seen = set()
    reps = []
    group = fl.enumerate_projective(p, "PGL")
    for rho in all_homomorphisms(H, p, det_sign=det_sign):
        key = tuple(rho(s) for s in gens)
        if key in seen:
            continue
        reps.append(rho)
        for a in group:
            seen.add(tuple(fl.pgl_conj(a, m, p) for m in key))
    return reps


def survey(G, H, eps: tuple, p: int, v=None) -> list:
    """
    Rows sorted by image order: image_order, classes, descend, fail.
    The descent verdict is constant on conjugacy classes, so one
    representative per class suffices.
    """
    det_sign = {x: eps[x] for x in H.members}
    tally = defaultdict(lambda: [0, 0])
    for rho in conjugacy_classes(H, p, det_sign):
        prob = DescentProblem(G, H, eps, ProjRep(H, rho.images, p), p, v)
        ok = decide(prob).defined_over_Q
        tally[len(rho.image_set())][0 if ok else 1] += 1
    return [{"image_order": k, "classes": a + b, "descend": a, "fail": b}
            for k, (a, b) in sorted(tally.items())]


def survey_tsv(rows: list, header: str = "") -> str:
    lines = [f"# {header}"] if header else []
    lines.append("image_order\tclasses\tdescend\tfail")
    for r in rows:
        lines.append(f"{r['image_order']}\t{r['classes']}\t{r['descend']}\t{r['fail']}")
    total = [sum(r[k] for r in rows) for k in ("classes", "descend", "fail")]
    lines.append("total\t" + "\t".join(map(str, total)))
    return "\n".join(lines) + "\n"
