"""Exact JSON serialization for spaces, maps, regions and certificates.

Rationals travel as "p/q" strings, so round-trips are lossless.  Reports
are written with sorted keys and no timestamps (metadata lives in a
sibling file), which makes equal runs byte-identical.  Every certificate
file is self-contained: it carries the space, the maps and the regions
needed to re-verify it from scratch.
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone
from fractions import Fraction

from .rational import rat, rat_str
from .space import CompactSet, Ifs, Piece, PointSet, Region
from .maps import Branch, PAHomeo, pa_homeo
from .giet import BlowUpResult, Giet, giet_from_branches
from .walk import CellMeasure
from . import certify as cert_mod
from .certify import (FiniteOrbitCertificate, InvariantMeasureCertificate,
                      MorseSmaleCertificate, PingPongCertificate, Verdict)


class SerializeError(ValueError):
    pass


def _q(x) -> str:
    return rat_str(rat(x))


# ---------------------------------------------------------------------------
# spaces, maps, regions


def space_to_obj(space: CompactSet) -> dict:
    obj = {"intervals": [[_q(l), _q(r)] for l, r in space.intervals]}
    if space.ifs is not None:
        obj["ifs"] = {"ratios": [_q(v) for v in space.ifs.ratios],
                      "offsets": [_q(v) for v in space.ifs.offsets],
                      "symbols": list(space.ifs.symbols)}
        obj["depth"] = space.depth
    return obj


def space_from_obj(obj: dict) -> CompactSet:
    if "ifs" in obj:
        ifs = Ifs(tuple(rat(v) for v in obj["ifs"]["ratios"]),
                  tuple(rat(v) for v in obj["ifs"]["offsets"]),
                  tuple(obj["ifs"]["symbols"]))
        return CompactSet.from_ifs(ifs, int(obj["depth"]))
    return CompactSet.from_intervals(
        [(rat(l), rat(r)) for l, r in obj["intervals"]])


def map_to_obj(f: PAHomeo) -> dict:
    return {"label": list(f.label),
            "branches": [{"src": [_q(b.lo), _q(b.hi)],
                          "slope": _q(b.slope), "offset": _q(b.offset)}
                         for b in f.branches]}


def map_from_obj(space: CompactSet, obj: dict, validate: bool = True) -> PAHomeo:
    branches = [Branch(rat(b["src"][0]), rat(b["src"][1]),
                       rat(b["slope"]), rat(b["offset"]))
                for b in obj["branches"]]
    return pa_homeo(space, branches, label=tuple(obj["label"]),
                    validate=validate)


def region_to_obj(reg: Region) -> dict:
    return {"pieces": [{"lo": _q(p.lo), "hi": _q(p.hi),
                        "lo_closed": p.lo_closed, "hi_closed": p.hi_closed}
                       for p in reg.pieces]}


def region_from_obj(space: CompactSet, obj: dict) -> Region:
    return Region.from_pieces(space, [
        Piece(rat(p["lo"]), rat(p["hi"]), bool(p["lo_closed"]),
              bool(p["hi_closed"])) for p in obj["pieces"]])


def giet_to_obj(g: Giet) -> dict:
    return {"interval": [_q(g.a), _q(g.b)],
            "branches": [{"src": [_q(b.lo), _q(b.hi)],
                          "slope": _q(b.slope), "offset": _q(b.offset)}
                         for b in g.branches]}


def giet_from_obj(obj: dict) -> Giet:
    return giet_from_branches(
        (rat(obj["interval"][0]), rat(obj["interval"][1])),
        [(rat(b["src"][0]), rat(b["src"][1]), rat(b["slope"]),
          rat(b["offset"])) for b in obj["branches"]])


# ---------------------------------------------------------------------------
# certificates


def certificate_to_obj(cert, gens=None) -> dict:
    """Self-contained certificate document; invariant-measure and
    finite-orbit certificates need the generator maps for re-verification."""
    if isinstance(cert, PingPongCertificate):
        return {"type": "ping-pong",
                "space": space_to_obj(cert.a1.space),
                "a1": map_to_obj(cert.a1), "a2": map_to_obj(cert.a2),
                "A1": region_to_obj(cert.A1), "B1": region_to_obj(cert.B1),
                "A2": region_to_obj(cert.A2), "B2": region_to_obj(cert.B2)}
    if isinstance(cert, InvariantMeasureCertificate):
        if gens is None:
            raise SerializeError("invariant-measure certificate needs gens")
        maps = list(gens.values()) if isinstance(gens, dict) else list(gens)
        return {"type": "invariant-measure",
                "space": space_to_obj(maps[0].space),
                "generators": [map_to_obj(g) for g in maps],
                "depth": cert.depth,
                "masses": [_q(m) for m in cert.measure.masses],
                "consistency_depth": cert.consistency_depth}
    if isinstance(cert, FiniteOrbitCertificate):
        if gens is None:
            raise SerializeError("finite-orbit certificate needs gens")
        maps = list(gens.values()) if isinstance(gens, dict) else list(gens)
        return {"type": "finite-orbit",
                "space": space_to_obj(cert.orbit.space),
                "generators": [map_to_obj(g) for g in maps],
                "orbit": [_q(p) for p in cert.orbit]}
    if isinstance(cert, MorseSmaleCertificate):
        return {"type": "morse-smale",
                "space": space_to_obj(cert.g.space),
                "g": map_to_obj(cert.g),
                "periodic": [[_q(x), per, _q(m)] for x, per, m in cert.periodic],
                "A": region_to_obj(cert.A), "B": region_to_obj(cert.B)}
    raise SerializeError(f"unknown certificate {type(cert).__name__}")


def certificate_from_obj(obj: dict):
    """(certificate, generator maps or None)."""
    kind = obj.get("type")
    space = space_from_obj(obj["space"])
    if kind == "ping-pong":
        return PingPongCertificate(
            map_from_obj(space, obj["a1"]), map_from_obj(space, obj["a2"]),
            region_from_obj(space, obj["A1"]), region_from_obj(space, obj["B1"]),
            region_from_obj(space, obj["A2"]), region_from_obj(space, obj["B2"])), None
    if kind == "invariant-measure":
        gens = [map_from_obj(space, g) for g in obj["generators"]]
        masses = tuple(rat(m) for m in obj["masses"])
        cert = InvariantMeasureCertificate(
            int(obj["depth"]), CellMeasure(int(obj["depth"]), masses, True),
            int(obj["consistency_depth"]))
        return cert, gens
    if kind == "finite-orbit":
        gens = [map_from_obj(space, g) for g in obj["generators"]]
        orbit = PointSet.of(space, [rat(p) for p in obj["orbit"]])
        return FiniteOrbitCertificate(orbit, True), gens
    if kind == "morse-smale":
        g = map_from_obj(space, obj["g"])
        periodic = tuple((rat(x), int(per), rat(m))
                         for x, per, m in obj["periodic"])
        return MorseSmaleCertificate(g, periodic,
                                     region_from_obj(space, obj["A"]),
                                     region_from_obj(space, obj["B"])), None
    raise SerializeError(f"unknown certificate type {kind!r}")


def verify_certificate(obj: dict) -> Verdict:
    """Re-verify a serialized certificate from scratch, exactly."""
    cert, gens = certificate_from_obj(obj)
    if isinstance(cert, PingPongCertificate):
        return cert_mod.verify_ping_pong(cert)
    if isinstance(cert, InvariantMeasureCertificate):
        return cert_mod.verify_invariant_measure(gens, cert)
    if isinstance(cert, FiniteOrbitCertificate):
        return cert_mod.verify_finite_orbit(gens, cert)
    res = cert_mod.check_morse_smale(cert.g, cert.A, cert.B)
    if res:
        return Verdict(True)
    return Verdict(False, res.reason)


def blowup_to_scenario(result: BlowUpResult) -> dict:
    """Space + induced maps, consumable by the walk and certify modules."""
    return {"space": space_to_obj(result.space),
            "maps": [map_to_obj(g) for g in result.induced],
            "blown_points": [[_q(c), _q(a)] for c, a in result.blown_points],
            "jumps": [[_q(c), _q(v)] for c, v in result.jumps],
            "exact": result.exact,
            "defects": list(result.defects)}


# ---------------------------------------------------------------------------
# canonical output


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json_atomic(path: str, obj) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(obj))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_meta(path: str, extra: dict = None) -> None:
    meta = {"written_at": datetime.now(timezone.utc).isoformat()}
    if extra:
        meta.update(extra)
    write_json_atomic(path, meta)
