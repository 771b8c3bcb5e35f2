"""LMFDB records over HTTP, with an on-disk JSON cache and bundled fixtures.

Modes:

* ``Live``: cache, then the network (results are cached), then fixtures.
* ``CacheOnly``: the cache directory only.
* ``FixtureOnly``: the JSON files shipped in ``weilneg/data`` only.

Endpoint paths and field names come from :class:`ClientConfig`, which can be
loaded from a JSON file, so a schema change upstream is a config edit.
"""
from __future__ import annotations

import enum
import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import DataUnavailable, SchemaDrift

log = logging.getLogger(__name__)

CACHE_ENV = "WEILNEG_CACHE_DIR"


class Mode(enum.Enum):
    Live = "live"
    CacheOnly = "cache"
    FixtureOnly = "fixture"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        for m in cls:
            if text.lower() in (m.name.lower(), m.value):
                return m
        raise ValueError(f"unknown data mode {text!r}")


@dataclass(frozen=True)
class NewformRecord:
    label: str
    weight: int
    level: int
    dim: int
    a2_sign: str
    a2_normalized: float | None = None
    # a(2)/2^((k-1)/2) at every real embedding of the coefficient field
    a2_embeddings: tuple[float, ...] | None = None

    SIGNS = ("Negative", "Zero", "Positive", "NonRational")

    def __post_init__(self):
        if self.a2_sign not in self.SIGNS:
            raise ValueError(f"bad a2_sign {self.a2_sign!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.a2_embeddings is not None:
            object.__setattr__(self, "a2_embeddings", tuple(float(x) for x in self.a2_embeddings))
        if self.a2_normalized is not None:
            v = self.a2_normalized
            want = "Negative" if v < 0 else "Zero" if v == 0 else "Positive"
            if self.a2_sign != want:
                raise ValueError(f"{self.label}: a2_sign {self.a2_sign} but a2 = {v}")

    def to_json(self) -> dict:
        d = asdict(self)
        if d["a2_embeddings"] is not None:
            d["a2_embeddings"] = list(d["a2_embeddings"])
        return d

    @classmethod
    def from_json(cls, d: dict) -> "NewformRecord":
        emb = d.get("a2_embeddings", d.get("a2_embeddings_normalized"))
        return cls(label=d["label"], weight=int(d["weight"]), level=int(d["level"]),
                   dim=int(d["dim"]), a2_sign=d["a2_sign"], a2_normalized=d.get("a2_normalized"),
                   a2_embeddings=tuple(emb) if emb is not None else None)


@dataclass(frozen=True)
class IsogenyClassRecord:
    conductor: int
    class_label: str
    rank: int
    classes_at_conductor: int
    a2: int | None = None

    def __post_init__(self):
        if int(self.class_label.split(".")[0]) != self.conductor:
            raise ValueError(f"label {self.class_label} does not match conductor {self.conductor}")
        if self.rank < 0 or self.classes_at_conductor < 1:
            raise ValueError("bad rank or class count")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "IsogenyClassRecord":
        return cls(int(d["conductor"]), d["class_label"], int(d["rank"]),
                   int(d["classes_at_conductor"]), d.get("a2"))


@dataclass(frozen=True)
class ZerosRecord:
    lfunction_label: str
    positive_ordinates: tuple[float, ...]
    completeness_height: float

    def __post_init__(self):
        ords = tuple(float(x) for x in self.positive_ordinates)
        object.__setattr__(self, "positive_ordinates", ords)
        if list(ords) != sorted(ords):
            raise ValueError("ordinates must be sorted")
        if ords and ords[-1] > self.completeness_height:
            raise ValueError("ordinate above the completeness height")

    def to_json(self) -> dict:
        return {"lfunction_label": self.lfunction_label,
                "positive_ordinates": list(self.positive_ordinates),
                "completeness_height": self.completeness_height}

    @classmethod
    def from_json(cls, d: dict) -> "ZerosRecord":
        return cls(d["lfunction_label"], tuple(d["positive_ordinates"]),
                   float(d["completeness_height"]))


# --------------------------------------------------------------------------
# fixtures

@lru_cache(maxsize=None)
def load_fixture(name: str) -> dict:
    """Parsed contents of ``weilneg/data/<name>``."""
    with resources.files("weilneg").joinpath("data", name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _fixture_newforms(k, N):
    data = load_fixture("table1.json")
    if [k, N] not in data["complete_cells"]:
        raise DataUnavailable(f"no fixture for newforms of weight {k}, level {N}")
    return [NewformRecord.from_json(r) for r in data["newforms"]
            if r["weight"] == k and r["level"] == N]


def _fixture_classes(N):
    r1 = load_fixture("rank1_classes.json")
    lo, hi = r1["complete_conductors"]
    if lo <= N <= hi:
        return [IsogenyClassRecord.from_json(c) for c in r1["classes"] if c["conductor"] == N]
    r2 = load_fixture("rank2_classes.json")
    rows = [IsogenyClassRecord.from_json(c) for c in r2["classes"] if c["conductor"] == N]
    if rows:
        return rows
    raise DataUnavailable(f"no fixture for isogeny classes of conductor {N}")


def _fixture_zeros(label):
    z = load_fixture("zeros_11a.json")
    if label == z["lfunction_label"] or label in z.get("aliases", []):
        return ZerosRecord(z["lfunction_label"], tuple(z["positive_ordinates"]),
                           z["completeness_height"])
    raise DataUnavailable(f"no zeros fixture for {label}")


def fixture_isogeny_classes(max_conductor: int | None = None) -> list[IsogenyClassRecord]:
    """Every isogeny class in the bundled fixtures, sorted by conductor then label."""
    out = [IsogenyClassRecord.from_json(c)
           for name in ("rank1_classes.json", "rank2_classes.json")
           for c in load_fixture(name)["classes"]]
    if max_conductor is not None:
        out = [c for c in out if c.conductor <= max_conductor]
    return sorted(out, key=lambda c: (c.conductor, len(c.class_label), c.class_label))


# --------------------------------------------------------------------------
# live client

@dataclass
class ClientConfig:
    base_url: str = "https://www.lmfdb.org"
    newforms_path: str = "/api/mf_newforms/"
    newforms_query: dict = field(default_factory=lambda: {"char_orbit_index": "1"})
    newforms_fields: dict = field(default_factory=lambda: {
        "label": "label", "weight": "weight", "level": "level", "dim": "dim",
        "traces": "traces"})
    classes_path: str = "/api/ec_classdata/"
    classes_fields: dict = field(default_factory=lambda: {
        "label": "lmfdb_iso", "conductor": "conductor", "rank": "rank", "aplist": "aplist"})
    zeros_path: str = "/api/lfunc_lfunctions/"
    zeros_fields: dict = field(default_factory=lambda: {
        "label": "label", "zeros": "positive_zeros"})
    zeros_label_aliases: dict = field(default_factory=lambda: {"11.2.a.a": "2-11-1.1-c1-0-0"})
    min_interval: float = 0.5
    retries: int = 3
    backoff: float = 0.5
    timeout: float = 20.0

    @classmethod
    def from_file(cls, path) -> "ClientConfig":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "weilneg"


class RateLimiter:
    """At most one call per ``interval`` seconds across threads."""

    def __init__(self, interval, clock=time.monotonic, sleep=time.sleep):
        self.interval = interval
        self._clock, self._sleep = clock, sleep
        self._next = 0.0
        self._lock = threading.Lock()

    def wait(self):
        with self._lock:
            now = self._clock()
            if now < self._next:
                self._sleep(self._next - now)
                now = self._next
            self._next = now + self.interval


class LmfdbClient:
    """Fetch newforms, isogeny classes and zeros.

    ``session`` needs a requests-style ``get(url, params=..., timeout=...)``;
    tests pass a stub.
    """

    def __init__(self, mode: Mode = Mode.Live, cache_dir=None, config: ClientConfig | None = None,
                 session=None, sleep=time.sleep, clock=time.monotonic):
        self.mode = mode
        self.cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        self.config = config or ClientConfig()
        self._session = session
        self._sleep = sleep
        self._limiter = RateLimiter(self.config.min_interval, clock, sleep)
        self._key_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._network_down = False
        self.requests_made = 0

    # -- public API ------------------------------------------------------

    def fetch_newforms(self, k: int, N: int) -> list[NewformRecord]:
        rows = self._fetch("newforms", {"weight": k, "level": N},
                           lambda: self._live_newforms(k, N),
                           lambda: [r.to_json() for r in _fixture_newforms(k, N)])
        return [NewformRecord.from_json(r) for r in rows]

    def fetch_isogeny_classes(self, N: int) -> list[IsogenyClassRecord]:
        if N < 11:
            # no elliptic curve over Q has conductor below 11
            return []
        rows = self._fetch("classes", {"conductor": N},
                           lambda: self._live_classes(N),
                           lambda: [c.to_json() for c in _fixture_classes(N)])
        return [IsogenyClassRecord.from_json(r) for r in rows]

    def fetch_zeros(self, label: str) -> ZerosRecord:
        row = self._fetch("zeros", {"label": label},
                          lambda: self._live_zeros(label),
                          lambda: _fixture_zeros(label).to_json())
        return ZerosRecord.from_json(row)

    # -- plumbing ----------------------------------------------------------

    def cache_path(self, endpoint: str, query: dict) -> Path:
        blob = json.dumps([endpoint, sorted(query.items())], sort_keys=True)
        digest = hashlib.sha256(blob.encode()).hexdigest()[:24]
        return self.cache_dir / endpoint / f"{digest}.json"

    def _lock_for(self, key):
        with self._locks_guard:
            return self._key_locks.setdefault(key, threading.Lock())

    def _fetch(self, endpoint, query, live, fixture):
        if self.mode is Mode.FixtureOnly:
            return fixture()
        path = self.cache_path(endpoint, query)
        with self._lock_for(str(path)):
            cached = self._read_cache(path)
            if cached is not None:
                return cached
            if self.mode is Mode.CacheOnly:
                raise DataUnavailable(f"{endpoint} {query}: not in cache {self.cache_dir}")
            try:
                payload = live()
            except DataUnavailable as exc:
                log.warning("live fetch failed (%s); falling back to fixtures", exc)
                try:
                    return fixture()
                except DataUnavailable:
                    raise exc from None
            self._write_cache(path, payload)
            return payload

    @staticmethod
    def _read_cache(path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return json.load(fh)["payload"]
        except FileNotFoundError:
            return None

    @staticmethod
    def _write_cache(path: Path, payload):
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump({"fetched": time.time(), "payload": payload}, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def _session_get(self):
        if self._session is None:
            import requests
            self._session = requests.Session()
        return self._session.get

    def _get_json(self, path: str, params: dict) -> list[dict]:
        if self._network_down:
            raise DataUnavailable("network marked unavailable earlier in this session")
        get = self._session_get()
        url = self.config.base_url.rstrip("/") + path
        params = {**params, "_format": "json"}
        last = None
        for attempt in range(self.config.retries):
            self._limiter.wait()
            self.requests_made += 1
            try:
                resp = get(url, params=params, timeout=self.config.timeout)
                resp.raise_for_status()
                body = resp.json()
                break
            except Exception as exc:  # connection, HTTP or JSON errors alike
                last = exc
                if attempt + 1 < self.config.retries:
                    self._sleep(self.config.backoff * 2**attempt)
        else:
            self._network_down = True
            raise DataUnavailable(f"GET {url} failed after {self.config.retries} tries: {last}")
        if not isinstance(body, dict) or "data" not in body:
            raise SchemaDrift(f"GET {url}: no 'data' array", self._dump_raw(path, params, body))
        return body["data"]

    def _dump_raw(self, path, params, body):
        target = self.cache_path("raw", {"path": path, **params})
        self._write_cache(target, body)
        return target

    def _need(self, row, names, path, params):
        missing = [n for n in names if n not in row]
        if missing:
            raise SchemaDrift(f"{path}: missing fields {missing}",
                              self._dump_raw(path, params, row))

    def _live_newforms(self, k, N):
        f = self.config.newforms_fields
        params = {f["weight"]: k, f["level"]: N, **self.config.newforms_query,
                  "_fields": ",".join(f.values())}
        rows = self._get_json(self.config.newforms_path, params)
        out = []
        scale = 2 ** ((k - 1) / 2)
        for row in rows:
            self._need(row, [f["label"], f["dim"], f["traces"]], self.config.newforms_path, params)
            dim = int(row[f["dim"]])
            traces = row[f["traces"]]
            if dim == 1:
                a2 = int(traces[1])
                sign = "Negative" if a2 < 0 else "Zero" if a2 == 0 else "Positive"
                rec = NewformRecord(row[f["label"]], k, N, 1, sign, a2 / scale, (a2 / scale,))
            else:
                rec = NewformRecord(row[f["label"]], k, N, dim, "NonRational")
            out.append(rec.to_json())
        out.sort(key=lambda r: r["label"])
        return out

    def _live_classes(self, N):
        f = self.config.classes_fields
        params = {f["conductor"]: N, "_fields": ",".join(f.values())}
        rows = self._get_json(self.config.classes_path, params)
        out = []
        for row in rows:
            self._need(row, [f["label"], f["rank"]], self.config.classes_path, params)
            ap = row.get(f["aplist"])
            out.append(IsogenyClassRecord(N, row[f["label"]], int(row[f["rank"]]), len(rows),
                                          int(ap[0]) if ap else None).to_json())
        out.sort(key=lambda r: (len(r["class_label"]), r["class_label"]))
        return out

    def _live_zeros(self, label):
        f = self.config.zeros_fields
        remote = self.config.zeros_label_aliases.get(label, label)
        params = {f["label"]: remote, "_fields": ",".join(f.values())}
        rows = self._get_json(self.config.zeros_path, params)
        if not rows:
            raise DataUnavailable(f"no L-function with label {remote}")
        row = rows[0]
        self._need(row, [f["zeros"]], self.config.zeros_path, params)
        zs = sorted(float(z) for z in row[f["zeros"]])
        return ZerosRecord(label, tuple(zs), zs[-1] if zs else 0.0).to_json()
