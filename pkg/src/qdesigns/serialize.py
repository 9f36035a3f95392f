"""JSON and CSV formats for designs, channels, meshes and count data.

Matrices serialize as {"rows": r, "cols": c, "data": [[re, im], ...]} in
row-major order; decimal round-trip is faithful to 1e-15 relative.  All
writers emit canonical JSON (sorted keys, fixed indentation) so identical
inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from .channels import QuantumChannel, WeightedChannelSet
from .envdim import CountsRecord, KStarFit, TomographyDataset
from .projective import WeightedStateSet
from .simplex import SimplexDesign, Triangulation
from .unitary import UnitarySet


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [[float(x.real), float(x.imag)] for x in m.reshape(-1)],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows * cols:
        raise ValueError(f"matrix data length {len(data)} != {rows}x{cols}")
    flat = np.array([complex(re, im) for re, im in data])
    return flat.reshape(rows, cols)


def _vector_to_json(v: np.ndarray) -> dict:
    return matrix_to_json(np.asarray(v, dtype=complex).reshape(-1, 1))


def _vector_from_json(obj: dict) -> np.ndarray:
    return matrix_from_json(obj).reshape(-1)


def state_set_to_json(sset: WeightedStateSet) -> dict:
    return {
        "dim": sset.dim,
        "states": [_vector_to_json(v) for v in sset.states],
        "weights": [float(w) for w in sset.weights],
    }


def state_set_from_json(obj: dict) -> WeightedStateSet:
    states = np.array([_vector_from_json(s) for s in obj["states"]])
    return WeightedStateSet(int(obj["dim"]), states, np.array(obj["weights"], dtype=float))


def unitary_set_to_json(uset: UnitarySet) -> dict:
    return {
        "dim": uset.dim,
        "elements": [matrix_to_json(u) for u in uset.elements],
        "weights": [float(w) for w in uset.weights],
    }


def unitary_set_from_json(obj: dict) -> UnitarySet:
    elements = [matrix_from_json(u) for u in obj["elements"]]
    return UnitarySet(int(obj["dim"]), elements, np.array(obj["weights"], dtype=float))


def channel_set_to_json(cset: WeightedChannelSet) -> dict:
    return {
        "dim": cset.dim,
        "channels": [{"kraus": [matrix_to_json(k) for k in c.kraus]}
                     for c in cset.channels],
        "weights": [float(w) for w in cset.weights],
    }


def channel_set_from_json(obj: dict) -> WeightedChannelSet:
    dim = int(obj["dim"])
    channels = [QuantumChannel(dim, [matrix_from_json(k) for k in c["kraus"]])
                for c in obj["channels"]]
    return WeightedChannelSet(dim, channels, np.array(obj["weights"], dtype=float))


def simplex_design_to_json(design: SimplexDesign) -> dict:
    return {
        "dim": design.dim,
        "points": [[float(x) for x in p] for p in design.points],
        "weights": [float(w) for w in design.weights],
    }


def simplex_design_from_json(obj: dict) -> SimplexDesign:
    return SimplexDesign(int(obj["dim"]),
                         np.array(obj["points"], dtype=float),
                         np.array(obj["weights"], dtype=float))


def triangulation_to_json(tri: Triangulation) -> dict:
    return {
        "vertices": [[float(x) for x in v] for v in tri.vertices],
        "simplices": [[int(i) for i in s] for s in tri.simplices],
    }


def triangulation_from_json(obj: dict) -> Triangulation:
    return Triangulation(np.array(obj["vertices"], dtype=float),
                         np.array(obj["simplices"], dtype=int))


_KINDS = {
    "state_set": (WeightedStateSet, state_set_to_json, state_set_from_json),
    "unitary_set": (UnitarySet, unitary_set_to_json, unitary_set_from_json),
    "channel_set": (WeightedChannelSet, channel_set_to_json, channel_set_from_json),
    "simplex_design": (SimplexDesign, simplex_design_to_json, simplex_design_from_json),
    "triangulation": (Triangulation, triangulation_to_json, triangulation_from_json),
}


def dumps_canonical(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def save_json(value, path: str) -> None:
    for _, (cls, to_json, _) in _KINDS.items():
        if isinstance(value, cls):
            with open(path, "w") as fh:
                fh.write(dumps_canonical(to_json(value)))
            return
    raise TypeError(f"no JSON form for {type(value).__name__}")


def load_json(path: str, kind: str):
    if kind not in _KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {sorted(_KINDS)}")
    with open(path) as fh:
        obj = json.load(fh)
    return _KINDS[kind][2](obj)


# --- polynomial specs for mesh averaging --------------------------------

def polynomial_from_json(obj: dict):
    """Sparse polynomial {"terms": [[[a1,...,am], coeff], ...]} -> callable.

    Exponents apply to the ambient mesh coordinates.  Returns (f, degree).
    """
    terms = []
    for entry in obj["terms"]:
        powers, coeff = entry
        powers = tuple(int(a) for a in powers)
        if any(a < 0 for a in powers):
            raise ValueError(f"negative exponent in term {entry}")
        terms.append((powers, float(coeff)))
    if not terms:
        raise ValueError("polynomial needs at least one term")
    degree = max(sum(p) for p, _ in terms)

    def f(x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        total = 0.0
        for powers, coeff in terms:
            if len(powers) != x.shape[0]:
                raise ValueError(
                    f"term arity {len(powers)} does not match point dimension {x.shape[0]}")
            total += coeff * math.prod(float(xi)**a for xi, a in zip(x, powers))
        return total

    return f, degree


# --- counts and fit CSV --------------------------------------------------

COUNTS_HEADER = ["delay_us", "prep_basis", "prep_index", "meas_basis", "outcome", "count"]
FITS_HEADER = ["delay_us", "k_star", "epsilon_star", "w", "model"]


def counts_to_csv(dataset: TomographyDataset, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COUNTS_HEADER)
        for r in dataset.records:
            writer.writerow([repr(float(r.delay_us)), r.prep_basis, r.prep_index,
                             r.meas_basis, r.outcome, r.count])


def counts_from_csv(path: str, shots: int | None = None) -> TomographyDataset:
    """Parse a counts CSV; malformed rows raise with their line number.

    If ``shots`` is omitted it is inferred per the declared grid from the
    first (delay, prep, meas) cell's outcome total.
    """
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != COUNTS_HEADER:
            raise ValueError(f"line 1: expected header {','.join(COUNTS_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 6:
                raise ValueError(f"line {lineno}: expected 6 fields, got {len(row)}")
            try:
                records.append(CountsRecord(float(row[0]), int(row[1]), int(row[2]),
                                            int(row[3]), int(row[4]), int(row[5])))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
    if not records:
        raise ValueError("counts file holds no records")
    if shots is None:
        first = records[0]
        shots = sum(r.count for r in records
                    if (r.delay_us, r.prep_basis, r.prep_index, r.meas_basis)
                    == (first.delay_us, first.prep_basis, first.prep_index, first.meas_basis))
    return TomographyDataset(records, shots)


def fits_to_csv(fits: list[tuple[float, KStarFit]], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FITS_HEADER)
        for delay, fit in fits:
            writer.writerow([repr(float(delay)), repr(float(fit.k_star)),
                             repr(float(fit.epsilon_star)),
                             "" if fit.w is None else repr(float(fit.w)), fit.model])


def fits_from_csv(path: str) -> list[tuple[float, KStarFit]]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != FITS_HEADER:
            raise ValueError(f"line 1: expected header {','.join(FITS_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise ValueError(f"line {lineno}: expected 5 fields, got {len(row)}")
            try:
                w = None if row[3] == "" else float(row[3])
                out.append((float(row[0]),
                            KStarFit(float(row[1]), float(row[2]), w, row[4])))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
    return out
