"""Modular forms and elliptic curves as inputs to the threshold machinery.

A weight-k newform of level N has spectral parameters ``(k-1)/4, (k+1)/4``.
Its explicit-formula scale depends on how the log pi shifts inside the ell
terms are accounted for; ``QConvention`` selects between the calibrated
``sqrt(N)`` (an exact identity against zero data) and the two literal
readings ``N/pi`` and ``pi N``.
"""
from __future__ import annotations

import enum
import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .special_fn import QuadratureSpec
from .test_fn import FejerTestFunction
from .thresholds import (Classification, PredictionOutcome, ThresholdResult, classify,
                         compute_thresholds)


class QConvention(enum.Enum):
    CalibratedSqrtN = "sqrtN"
    PaperNOverPi = "N/pi"
    PaperPiN = "piN"

    @classmethod
    def parse(cls, text: str) -> "QConvention":
        for c in cls:
            if text in (c.name, c.value):
                return c
        raise ValueError(f"unknown Q convention {text!r}")


@dataclass(frozen=True)
class ModularFormContext:
    weight: int
    level: int
    q_convention: QConvention = QConvention.CalibratedSqrtN

    def __post_init__(self):
        _check_weight(self.weight)
        if self.level < 1:
            raise ValueError("level must be >= 1")

    @property
    def mu(self) -> tuple[float, float]:
        return mu_of_weight(self.weight)

    @property
    def q_eff(self) -> float:
        return q_of_level(self.level, self.q_convention)


def _check_weight(k):
    if int(k) != k or k < 2 or k % 2:
        raise ValueError(f"weight must be an even integer >= 2, got {k}")


def mu_of_weight(k: int) -> tuple[float, float]:
    _check_weight(k)
    return ((k - 1) / 4.0, (k + 1) / 4.0)


def q_of_level(N: float, convention: QConvention = QConvention.CalibratedSqrtN) -> float:
    if N <= 0:
        raise ValueError("level must be positive")
    if convention is QConvention.CalibratedSqrtN:
        return math.sqrt(N)
    if convention is QConvention.PaperNOverPi:
        return N / math.pi
    return math.pi * N


def level_of_q(q: float, convention: QConvention = QConvention.CalibratedSqrtN) -> float:
    """Inverse of :func:`q_of_level`."""
    if convention is QConvention.CalibratedSqrtN:
        return q * q
    if convention is QConvention.PaperNOverPi:
        return math.pi * q
    return q / math.pi


@dataclass
class GridPrediction:
    cells: dict[tuple[int, int], PredictionOutcome]
    convention: QConvention
    rank: int = 0

    def thresholds_for(self, k: int) -> ThresholdResult:
        return next(o.thresholds for (kk, _), o in self.cells.items() if kk == k)


def predict_grid(k_range: Iterable[int], N_range: Iterable[int], rank: int = 0,
                 convention: QConvention = QConvention.CalibratedSqrtN,
                 tf: FejerTestFunction | None = None,
                 spec: QuadratureSpec | None = None,
                 workers: int = 1) -> GridPrediction:
    """One prediction per (k, N); ell terms are shared by cells of equal weight."""
    tf = tf or FejerTestFunction()
    ks, Ns = sorted(set(k_range)), sorted(set(N_range))
    if not ks or not Ns:
        raise ValueError("empty weight or level range")

    def per_weight(k):
        mu = mu_of_weight(k)
        th = compute_thresholds(2, mu, rank, tf, spec)
        return {(k, N): classify(q_of_level(N, convention), 2, mu, rank, tf, spec, th)
                for N in Ns}

    cells: dict = {}
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            for part in pool.map(per_weight, ks):
                cells.update(part)
    else:
        for k in ks:
            cells.update(per_weight(k))
    return GridPrediction(dict(sorted(cells.items())), convention, rank)


@dataclass(frozen=True)
class RankBound:
    rank: int
    min_q: float
    min_conductor: float
    min_conductor_int: int
    convention: QConvention = QConvention.CalibratedSqrtN


def rank_conductor_bound(r: int, tf: FejerTestFunction | None = None,
                         spec: QuadratureSpec | None = None,
                         convention: QConvention = QConvention.CalibratedSqrtN) -> RankBound:
    """Smallest conductor compatible with an order-r central zero (weight 2)."""
    th = compute_thresholds(2, mu_of_weight(2), r, tf, spec)
    n_min = level_of_q(th.q0, convention)
    # an integer exactly at the threshold is classified Impossible
    n_int = math.floor(n_min) + 1
    return RankBound(r, th.q0, n_min, n_int, convention)


# --------------------------------------------------------------------------
# verification against data

SOUND, VIOLATION, MATCH, DISCREPANCY, UNVERIFIED = (
    "SOUND", "VIOLATION", "MATCH", "DISCREPANCY", "UNVERIFIED")


@dataclass
class VerificationRow:
    key: str
    check: str
    prediction: str
    observation: str
    flag: str


@dataclass
class VerificationReport:
    title: str
    rows: list[VerificationRow] = field(default_factory=list)
    claims: dict[str, bool] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def add(self, key, check, prediction, observation, flag):
        self.rows.append(VerificationRow(str(key), check, str(prediction), str(observation), flag))

    def counts(self) -> Counter:
        return Counter(r.flag for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.counts()[VIOLATION] == 0

    def to_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "counts": dict(self.counts()), "claims": self.claims, "meta": self.meta,
                "rows": [asdict(r) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        w = max([len(r.key) for r in self.rows] + [4])
        lines = [self.title, "=" * len(self.title)]
        lines.append(f"{'cell'.ljust(w)}  {'check':<10} {'prediction':<22} {'observation':<34} flag")
        for r in self.rows:
            lines.append(f"{r.key.ljust(w)}  {r.check:<10} {r.prediction:<22} "
                         f"{r.observation:<34} {r.flag}")
        for name, ok in self.claims.items():
            lines.append(f"claim {name}: {'holds' if ok else 'FAILS'}")
        c = self.counts()
        lines.append("summary: " + ", ".join(f"{k}={c[k]}" for k in sorted(c)))
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


TABLE1_WEIGHTS = (2, 4, 6, 8, 10, 12)
TABLE1_LEVELS = tuple(range(1, 16))

# printed entries: "" empty space, "n" dimension, or for a one-dimensional
# space the sign of a(2): • negative, ◦ positive, − zero
NEG, POS, ZERO = "\u2022", "\u25e6", "\u2212"
_ = ""
PAPER_TABLE1 = {
    2: [_, _, _, _, _, _, _, _, _, _, NEG, _, _, NEG, NEG],
    4: [_, _, _, _, NEG, NEG, NEG, ZERO, ZERO, POS, "2", ZERO, "3", "2", "2"],
    6: [_, _, NEG, ZERO, POS, POS, "3", "1", "1", "3", "4", _, "5", "2", "4"],
    8: [_, NEG, POS, _, "3", "1", "3", "2", "3", "1", "6", "2", "7", "4", "4"],
    10: [_, POS, "2", "1", "3", "1", "5", "2", "3", "3", "8", "1", "9", "4", "6"],
    12: [NEG, _, POS, "1", "3", "3", "5", "3", "4", "5", "8", "2", "11", "6", "8"],
}
SIGN_SYMBOL = {"Negative": NEG, "Zero": ZERO, "Positive": POS}

# (class label(s), #N) in the order printed
PAPER_TABLE2 = [
    (("37.a",), 2), (("43.a",), 1), (("53.a",), 1), (("57.a",), 3), (("58.a",), 2),
    (("61.a",), 1), (("65.a",), 1), (("77.a",), 3), (("79.a",), 1), (("82.a",), 1),
    (("88.a",), 1), (("89.a",), 2), (("91.a", "91.b"), 2), (("92.a",), 2),
    (("99.a",), 4), (("101.a",), 1), (("102.a",), 3), (("106.a",), 4), (("112.a",), 3),
    (("117.a",), 1), (("118.a",), 4), (("121.b",), 3),
]
PAPER_TABLE3 = [
    ("446.a", 4), ("571.a", 2), ("664.a", 3), ("681.a", 5), ("718.a", 3),
    ("794.a", 4), ("817.a", 2), ("916.a", 5), ("994.a", 11),
]
FIRST_RANK2_CONDUCTOR = 389
RANK2_B_CONDUCTOR = 1147


def observed_table1_entry(records) -> str:
    dim = sum(r.dim for r in records)
    if dim == 0:
        return ""
    if len(records) == 1 and records[0].dim == 1:
        return SIGN_SYMBOL.get(records[0].a2_sign, "?")
    return str(dim)


def table1_entry_matches(paper: str, records) -> bool:
    dim = sum(r.dim for r in records)
    if paper == "":
        return dim == 0
    if paper.isdigit():
        return dim == int(paper)
    return (len(records) == 1 and records[0].dim == 1
            and SIGN_SYMBOL.get(records[0].a2_sign) == paper)


def _a2_values(rec):
    if rec.a2_embeddings is not None:
        return list(rec.a2_embeddings)
    if rec.a2_normalized is not None:
        return [rec.a2_normalized]
    return None


def soundness_flag(outcome: PredictionOutcome, records) -> tuple[str, str]:
    """Flag one cell: a prediction may under-predict, never contradict data."""
    cls = outcome.classification
    if cls is Classification.Impossible:
        return (VIOLATION if records else SOUND), f"{len(records)} orbit(s)"
    if cls is Classification.ForcedNegativeA2:
        values = []
        for rec in records:
            v = _a2_values(rec)
            if v is None:
                return UNVERIFIED, f"{rec.label}: a(2) embeddings unknown"
            values.extend(v)
        bad = [v for v in values if v >= 0]
        obs = f"a2 max {max(values):+.4f}" if values else "empty"
        return (VIOLATION if bad else SOUND), obs
    return SOUND, f"{len(records)} orbit(s)"


def verify_table1(newforms_by_cell, grid: GridPrediction | None = None,
                  extra_weight2_levels: Sequence[int] = range(16, 22)) -> VerificationReport:
    """Compare newform data with the printed table and with the grid predictions.

    ``newforms_by_cell`` maps (k, N) to a list of NewformRecord.
    """
    rep = VerificationReport("Table 1: signs of a(2) for newforms of weight k, level N")
    for k in TABLE1_WEIGHTS:
        for N in TABLE1_LEVELS:
            recs = newforms_by_cell[(k, N)]
            paper = PAPER_TABLE1[k][N - 1]
            ok = table1_entry_matches(paper, recs)
            rep.add(f"k={k},N={N}", "table", f"printed '{paper}'",
                    f"data '{observed_table1_entry(recs)}'", MATCH if ok else DISCREPANCY)
            if grid is not None:
                out = grid.cells[(k, N)]
                flag, obs = soundness_flag(out, recs)
                rep.add(f"k={k},N={N}", "soundness", out.classification.name, obs, flag)
    small = [newforms_by_cell[(2, N)] for N in list(range(1, 16)) + list(extra_weight2_levels)]
    w2 = [r for recs in small for r in recs]
    rep.claims["weight2_a2_negative_N<=21"] = all(r.a2_sign == "Negative" for r in w2)
    rep.claims["weight2_a2_nonpositive_N<=21"] = all(r.a2_sign in ("Negative", "Zero") for r in w2)
    for r in w2:
        rep.add(r.label, "claim", "a2 < 0", f"a2 {r.a2_sign}",
                MATCH if r.a2_sign == "Negative" else DISCREPANCY)
    rep.meta["cells"] = len(TABLE1_WEIGHTS) * len(TABLE1_LEVELS)
    if grid is not None:
        rep.meta["convention"] = grid.convention.name
    return rep


def _by_conductor(classes):
    out: dict[int, list] = {}
    for c in classes:
        out.setdefault(c.conductor, []).append(c)
    for v in out.values():
        v.sort(key=lambda c: _letter_index(c.class_label))
    return out


def _letter_index(label: str) -> int:
    s = label.split(".")[1]
    n = 0
    for ch in s:
        n = n * 26 + (ord(ch) - ord("a") + 1)
    return n - 1


def _rank_soundness(rep, classes, bounds: dict[int, RankBound], tf, spec, convention):
    for c in classes:
        b = bounds.get(c.rank)
        if b is None:
            continue
        ok = c.conductor >= b.min_conductor_int
        rep.add(c.class_label, "rankbound", f"N >= {b.min_conductor_int}",
                f"N = {c.conductor}, rank {c.rank}", SOUND if ok else VIOLATION)
        if c.a2 is not None:
            out = classify(q_of_level(c.conductor, convention), 2, mu_of_weight(2), c.rank,
                           tf, spec)
            forced = out.classification is Classification.ForcedNegativeA2
            flag = VIOLATION if forced and c.a2 >= 0 else SOUND
            rep.add(c.class_label, "a2sign", out.classification.name, f"a2 = {c.a2}", flag)


def verify_rank1(classes, tf=None, spec=None,
                 convention: QConvention = QConvention.CalibratedSqrtN) -> VerificationReport:
    """Table 2 against isogeny-class data for every conductor up to 121."""
    rep = VerificationReport("Table 2: first elliptic curves of rank 1")
    byN = _by_conductor(classes)
    bounds = {r: rank_conductor_bound(r, tf, spec, convention) for r in (0, 1)}
    printed = set()
    checked = 0
    for labels, nclasses in PAPER_TABLE2:
        N = int(labels[0].split(".")[0])
        obs = {c.class_label: c for c in byN.get(N, [])}
        for lab in labels:
            printed.add(lab)
            checked += 1
            c = obs.get(lab)
            ok = c is not None and c.rank == 1
            rep.add(lab, "label", "rank 1", f"rank {c.rank}" if c else "absent",
                    MATCH if ok else DISCREPANCY)
        got = len(obs)
        rep.add(f"{N}", "#N", nclasses, got, MATCH if got == nclasses else DISCREPANCY)
    max_n = max(int(ls[0].split(".")[0]) for ls, _ in PAPER_TABLE2)
    rank1 = [c for c in classes if c.rank == 1 and c.conductor <= max_n]
    for c in rank1:
        if c.class_label not in printed:
            rep.add(c.class_label, "label", "not printed", "rank 1", DISCREPANCY)
    # the first rank-1 classes sharing a conductor with a class of another rank
    firsts = []
    for N in sorted(byN):
        cs = byN[N]
        r1 = [c for c in cs if c.rank == 1]
        if r1 and len(cs) > 1 and len(r1) == 1:
            firsts.append(r1[0].class_label)
    a_run = 0
    for lab in firsts:
        if not lab.endswith(".a"):
            break
        a_run += 1
    rep.claims["first_11_shared_rank1_labelled_a"] = a_run >= 11
    rep.claims["rank1_labels_match_table"] = all(
        any(c.class_label == lab and c.rank == 1 for c in classes)
        for labels, _ in PAPER_TABLE2 for lab in labels)
    _rank_soundness(rep, [c for c in classes if c.rank <= 1], bounds, tf, spec, convention)
    rep.meta.update({"rank1_classes_checked": checked, "first_a_run": a_run,
                     "shared_conductor_sequence": firsts[:14],
                     "min_conductor_rank1": bounds[1].min_conductor_int})
    return rep


def verify_rank2(classes, tf=None, spec=None,
                 convention: QConvention = QConvention.CalibratedSqrtN) -> VerificationReport:
    """Table 3 and the "label a until conductor 1147" run against rank-2 data."""
    rep = VerificationReport("Table 3: first elliptic curves of rank 2 sharing a conductor")
    byN = _by_conductor(classes)
    bound = rank_conductor_bound(2, tf, spec, convention)
    for lab, nclasses in PAPER_TABLE3:
        N = int(lab.split(".")[0])
        obs = {c.class_label: c for c in byN.get(N, [])}
        c = obs.get(lab)
        rep.add(lab, "label", "rank 2", f"rank {c.rank}" if c else "absent",
                MATCH if c is not None and c.rank == 2 else DISCREPANCY)
        rep.add(f"{N}", "#N", nclasses, len(obs), MATCH if len(obs) == nclasses else DISCREPANCY)
    rank2 = sorted((c for c in classes if c.rank == 2), key=lambda c: c.conductor)
    shared = [c for c in rank2 if c.classes_at_conductor > 1]
    below = [c for c in shared if c.conductor < RANK2_B_CONDUCTOR]
    printed = {lab for lab, _ in PAPER_TABLE3}
    for c in shared:
        if c.conductor <= int(PAPER_TABLE3[-1][0].split(".")[0]) and c.class_label not in printed:
            rep.add(c.class_label, "label", "not printed", "rank 2", DISCREPANCY)
    # a conductor may carry several rank-2 classes; its lowest letter is the one that counts
    firsts = {}
    for c in below:
        cur = firsts.get(c.conductor)
        if cur is None or _letter_index(c.class_label) < _letter_index(cur.class_label):
            firsts[c.conductor] = c
    rep.claims["rank2_all_a_below_1147"] = all(c.class_label.endswith(".a")
                                               for c in firsts.values())
    rep.claims["rank2_b_at_1147"] = any(c.class_label == f"{RANK2_B_CONDUCTOR}.b" for c in rank2)
    rep.claims["first_rank2_is_389a"] = bool(rank2) and rank2[0].class_label == "389.a"
    _rank_soundness(rep, rank2, {2: bound}, tf, spec, convention)
    rep.meta.update({"rank2_classes_checked": len(PAPER_TABLE3),
                     "min_conductor_rank2": bound.min_conductor_int,
                     "rank2_conductors": [c.conductor for c in rank2],
                     "several_rank2_classes": sorted(
                         {c.conductor for c in rank2
                          if sum(x.conductor == c.conductor for x in rank2) > 1})})
    return rep
