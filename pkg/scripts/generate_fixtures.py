"""Regenerate the bundled JSON fixtures with PARI/GP.

Offline stand-in for a live database pull: the newform spaces, isogeny-class
ranks and L-function zeros are recomputed from scratch with PARI (``cypari``
wheel) and written in the same record layout the client caches.

    pip install cypari
    python scripts/generate_fixtures.py [--out src/weilneg/data]

Not imported by the package; PARI is a development-only dependency.
"""
import argparse
import json
import math
import time
from pathlib import Path

from cypari import pari

TABLE1_WEIGHTS = (2, 4, 6, 8, 10, 12)
TABLE1_LEVELS = range(1, 16)
WEIGHT2_EXTRA_LEVELS = range(16, 22)
RANK1_MAX_CONDUCTOR = 121
RANK2_MAX_CONDUCTOR = 1147
TRACE_TERMS = 100
# conductors named in the source tables that carry no rank-2 class
EXTRA_CONDUCTORS = (994,)


def _letters(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(ord("a") + r) + s
    return s


def _is_rational(x):
    return str(pari.type(x)).strip('"') in ("t_INT", "t_FRAC")


def newform_orbits(N, k, nterms=TRACE_TERMS):
    """Galois orbits of S_k^new(Gamma0(N)), sorted the way LMFDB labels them."""
    mf = pari(f"mfinit([{N},{k}],0)")
    if int(pari.mfdim(mf)) == 0:
        return mf, []
    forms = pari.mfeigenbasis(mf)
    fields = pari.mffields(mf)
    orbits = []
    for F, pol in zip(forms, fields):
        dim = int(pari.poldegree(pol))
        coefs = pari.mfcoefs(F, nterms)
        if dim == 1:
            ints = [int(c) for c in coefs[1:]]
            traces = ints
            a2_emb = [float(ints[1])]
        else:
            traces = [int(pari.trace(c)) for c in coefs[1:]]
            roots = pari.polroots(pol)
            a2 = pari.lift(coefs[2])
            a2_emb = sorted(float(pari.real(pari.subst(a2, "y", r))) for r in roots)
        orbits.append({"dim": dim, "traces": traces, "a2": coefs[2],
                       "a2_embeddings": a2_emb, "form": F})
    orbits.sort(key=lambda o: (o["dim"], o["traces"]))
    return mf, orbits


def newform_records(k, N):
    _, orbits = newform_orbits(N, k)
    scale = 2 ** ((k - 1) / 2)
    out = []
    for i, o in enumerate(orbits):
        a2 = o["a2"]
        if o["dim"] == 1 or _is_rational(pari.lift(a2)):
            value = int(pari.lift(a2)) if o["dim"] > 1 else int(o["traces"][1])
            sign = "Negative" if value < 0 else "Zero" if value == 0 else "Positive"
            norm = value / scale
        else:
            sign, norm = "NonRational", None
        out.append({
            "label": f"{N}.{k}.a.{_letters(i)}",
            "weight": k,
            "level": N,
            "dim": o["dim"],
            "a2_sign": sign,
            "a2_normalized": norm,
            "a2_embeddings_normalized": [x / scale for x in o["a2_embeddings"]],
        })
    return out


def isogeny_classes(N):
    mf, orbits = newform_orbits(N, 2)
    rational = [o for o in orbits if o["dim"] == 1]
    out = []
    for i, o in enumerate(rational):
        L = pari.lfunmf(mf, o["form"])
        rank = int(pari.lfunorderzero(L))
        out.append({
            "conductor": N,
            "class_label": f"{N}.{_letters(i)}",
            "rank": rank,
            "classes_at_conductor": len(rational),
            "a2": o["traces"][1],
        })
    return out


def zeros_11a(height):
    E = pari.ellinit([0, -1, 1, -10, -20])
    L = pari.lfuncreate(E)
    zs = [float(z) for z in pari.lfunzeros(L, height)]
    return zs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                         / "src" / "weilneg" / "data"))
    ap.add_argument("--zeros-height", type=float, default=400.0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    pari.allocatemem(2 * 10**9)
    stamp = time.strftime("%Y-%m-%d")
    source = f"PARI/GP {'.'.join(str(v) for v in pari.version())} (mfinit/lfunmf/lfunzeros)"

    forms = []
    for k in TABLE1_WEIGHTS:
        for N in TABLE1_LEVELS:
            forms.extend(newform_records(k, N))
    for N in WEIGHT2_EXTRA_LEVELS:
        forms.extend(newform_records(2, N))
    cells = [[k, N] for k in TABLE1_WEIGHTS for N in TABLE1_LEVELS]
    cells += [[2, N] for N in WEIGHT2_EXTRA_LEVELS]
    (out / "table1.json").write_text(json.dumps(
        {"version": 1, "source": source, "generated": stamp,
         "complete_cells": cells, "newforms": forms}, indent=1) + "\n")
    print("table1:", len(forms), "orbits")

    rank1 = []
    for N in range(1, RANK1_MAX_CONDUCTOR + 1):
        rank1.extend(isogeny_classes(N))
    (out / "rank1_classes.json").write_text(json.dumps(
        {"version": 1, "source": source, "generated": stamp,
         "complete_conductors": [1, RANK1_MAX_CONDUCTOR],
         "classes": rank1}, indent=1) + "\n")
    print("rank1:", len(rank1), "classes")

    rank2 = []
    for N in range(RANK1_MAX_CONDUCTOR + 1, RANK2_MAX_CONDUCTOR + 1):
        classes = isogeny_classes(N)
        if any(c["rank"] >= 2 for c in classes) or N in EXTRA_CONDUCTORS:
            rank2.extend(classes)
            print("  rank 2 at", N, [c["class_label"] for c in classes if c["rank"] >= 2],
                  flush=True)
    (out / "rank2_classes.json").write_text(json.dumps(
        {"version": 1, "source": source, "generated": stamp,
         "rank2_complete_conductors": [RANK1_MAX_CONDUCTOR + 1, RANK2_MAX_CONDUCTOR],
         "extra_conductors": list(EXTRA_CONDUCTORS),
         "classes": rank2}, indent=1) + "\n")
    print("rank2:", len(rank2), "classes")

    zs = zeros_11a(args.zeros_height)
    (out / "zeros_11a.json").write_text(json.dumps(
        {"version": 1, "source": source, "generated": stamp,
         "lfunction_label": "11.2.a.a",
         "aliases": ["2-11-1.1-c1-0-0", "11.a"],
         "completeness_height": args.zeros_height,
         "positive_ordinates": zs}, indent=1) + "\n")
    print("zeros:", len(zs))


if __name__ == "__main__":
    main()
