"""Line-oriented text formats for instances and solutions.

Both formats are whitespace-separated token lines, human-diffable, with
``#`` comments and blank lines ignored. All lengths are integer centimeters
and weights integer kilograms. Parsing is strict: unknown record tags and
malformed counts raise ``FormatError``.

Instance file:
    format instance 1
    name NAME
    alpha FLOAT / beta FLOAT / theta FLOAT
    tutype ID X Y Z Q               (one per catalog type, ordered)
    lb ID COUNT                     (optional covering lower bound, sparse)
    box ID W L H WEIGHT TXZ TYZ STACKABLE

Solution file:
    format solution 1
    instance NAME
    fitness FLOAT
    placement TU_INDEX TUTYPE_ID BOX_ID ORIENTATION_CODE X Y Z
"""

from __future__ import annotations

from pathlib import Path

from .generator import Instance
from .geometry import (
    BoxSpec,
    LoadedTu,
    ORIENTATION_CODES,
    ObjectiveParams,
    Placement,
    Solution,
    TuType,
    fitness,
)
from .lowerbound import LowerBound


class FormatError(ValueError):
    """Malformed instance or solution file."""


def _flag(v: bool) -> str:
    return "1" if v else "0"


def _parse_flag(tok: str) -> bool:
    if tok not in ("0", "1"):
        raise FormatError(f"flag must be 0 or 1, got {tok!r}")
    return tok == "1"


def dump_instance(inst: Instance) -> str:
    lines = ["format instance 1", f"name {inst.name}"]
    o = inst.objective
    lines.append(f"alpha {o.alpha!r}")
    lines.append(f"beta {o.beta!r}")
    lines.append(f"theta {o.theta!r}")
    for t in inst.catalog:
        lines.append(f"tutype {t.id} {t.x} {t.y} {t.z} {t.q}")
    if inst.lower_bound is not None:
        for t, c in zip(inst.catalog, inst.lower_bound.counts):
            if c:
                lines.append(f"lb {t.id} {c}")
    for b in inst.boxes:
        lines.append(
            f"box {b.id} {b.width} {b.length} {b.height} {b.weight} "
            f"{_flag(b.txz)} {_flag(b.tyz)} {_flag(b.stackable)}"
        )
    return "\n".join(lines) + "\n"


def _records(text: str):
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield ln, line.split()


def parse_instance(text: str) -> Instance:
    name = "unnamed"
    alpha, beta, theta = 1.0, 100.0, 100.0
    catalog: list[TuType] = []
    lb_counts: dict[str, int] = {}
    boxes: list[BoxSpec] = []
    saw_header = False
    for ln, toks in _records(text):
        tag = toks[0]
        try:
            if tag == "format":
                if toks[1] != "instance":
                    raise FormatError(f"line {ln}: not an instance file")
                saw_header = True
            elif tag == "name":
                name = toks[1]
            elif tag == "alpha":
                alpha = float(toks[1])
            elif tag == "beta":
                beta = float(toks[1])
            elif tag == "theta":
                theta = float(toks[1])
            elif tag == "tutype":
                catalog.append(
                    TuType(toks[1], int(toks[2]), int(toks[3]), int(toks[4]), int(toks[5]))
                )
            elif tag == "lb":
                lb_counts[toks[1]] = int(toks[2])
            elif tag == "box":
                boxes.append(
                    BoxSpec(
                        toks[1], int(toks[2]), int(toks[3]), int(toks[4]), int(toks[5]),
                        txz=_parse_flag(toks[6]), tyz=_parse_flag(toks[7]),
                        stackable=_parse_flag(toks[8]),
                    )
                )
            else:
                raise FormatError(f"line {ln}: unknown record {tag!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {ln}: {exc}") from exc
    if not saw_header:
        raise FormatError("missing 'format instance' header")
    if not catalog:
        raise FormatError("instance has no TU types")
    lower = None
    if lb_counts:
        unknown = set(lb_counts) - {t.id for t in catalog}
        if unknown:
            raise FormatError(f"lb records reference unknown types {sorted(unknown)}")
        counts = tuple(lb_counts.get(t.id, 0) for t in catalog)
        objective = (
            sum(c * t.volume_liters for c, t in zip(counts, catalog))
            + beta * sum(counts)
        )
        lower = LowerBound(counts, objective)
    return Instance(name, boxes, catalog, ObjectiveParams(alpha, theta, beta), lower)


def dump_solution(sol: Solution, instance_name: str, objective: ObjectiveParams) -> str:
    lines = ["format solution 1", f"instance {instance_name}"]
    lines.append(f"fitness {fitness(sol, objective)!r}")
    for ti, tu in enumerate(sol.tus):
        for p in tu.placements:
            lines.append(
                f"placement {ti} {tu.tu_type.id} {p.box.id} {p.code} {p.x} {p.y} {p.z}"
            )
    return "\n".join(lines) + "\n"


def parse_solution(text: str, inst: Instance) -> tuple[Solution, str, float]:
    """Rebuild a solution against its instance.

    Returns (solution, instance name recorded in the file, recorded fitness).
    Placement extents are re-derived from the box and orientation code, so a
    solution file cannot smuggle inconsistent geometry.
    """
    types = {t.id: t for t in inst.catalog}
    boxes = {b.id: b for b in inst.boxes}
    inst_name = ""
    recorded_fitness = float("nan")
    rows: list[tuple[int, str, str, str, int, int, int]] = []
    saw_header = False
    for ln, toks in _records(text):
        tag = toks[0]
        try:
            if tag == "format":
                if toks[1] != "solution":
                    raise FormatError(f"line {ln}: not a solution file")
                saw_header = True
            elif tag == "instance":
                inst_name = toks[1]
            elif tag == "fitness":
                recorded_fitness = float(toks[1])
            elif tag == "placement":
                rows.append(
                    (int(toks[1]), toks[2], toks[3], toks[4],
                     int(toks[5]), int(toks[6]), int(toks[7]))
                )
            else:
                raise FormatError(f"line {ln}: unknown record {tag!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {ln}: {exc}") from exc
    if not saw_header:
        raise FormatError("missing 'format solution' header")
    tus: dict[int, LoadedTu] = {}
    for (ti, type_id, box_id, code, x, y, z) in rows:
        if type_id not in types:
            raise FormatError(f"unknown TU type {type_id!r}")
        if box_id not in boxes:
            raise FormatError(f"unknown box {box_id!r}")
        if code not in ORIENTATION_CODES:
            raise FormatError(f"unknown orientation code {code!r}")
        tu = tus.get(ti)
        if tu is None:
            tu = tus[ti] = LoadedTu(types[type_id])
        elif tu.tu_type.id != type_id:
            raise FormatError(f"TU {ti} listed with two types")
        box = boxes[box_id]
        dims = {"w": box.width, "l": box.length, "h": box.height}
        w, l, h = dims[code[0]], dims[code[1]], dims[code[2]]
        tu.add(Placement(box, code, w, l, h, x, y, z))
    placed = {p.box.id for tu in tus.values() for p in tu.placements}
    unplaced = [b.id for b in inst.boxes if b.id not in placed]
    sol = Solution([tus[i] for i in sorted(tus)], unplaced)
    return sol, inst_name, recorded_fitness


def parse_catalog(text: str) -> list[TuType]:
    """Read a TU-type catalog: one ``tutype ID X Y Z Q`` record per line."""
    catalog: list[TuType] = []
    for ln, toks in _records(text):
        if toks[0] != "tutype":
            raise FormatError(f"line {ln}: catalog files hold only tutype records")
        try:
            catalog.append(
                TuType(toks[1], int(toks[2]), int(toks[3]), int(toks[4]), int(toks[5]))
            )
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {ln}: {exc}") from exc
    if not catalog:
        raise FormatError("catalog file has no tutype records")
    return catalog


def read_catalog(path: str | Path) -> list[TuType]:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


def write_instance(path: str | Path, inst: Instance):
    Path(path).write_text(dump_instance(inst), encoding="utf-8")


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def write_solution(path: str | Path, sol: Solution, inst: Instance):
    Path(path).write_text(dump_solution(sol, inst.name, inst.objective), encoding="utf-8")


def read_solution(path: str | Path, inst: Instance) -> tuple[Solution, str, float]:
    return parse_solution(Path(path).read_text(encoding="utf-8"), inst)
