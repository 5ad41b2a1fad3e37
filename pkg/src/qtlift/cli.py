"""Command-line driver: YAML config in, deterministic JSON report out.

Exit status is 0 iff every check in the report passed, 1 if a check failed
(or a computation raised), 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import yaml

from .dergroup import DerivationSpec, from_config_entry
from .errors import ConfigError, QTLiftError
from .glwords import GLWord, _diag_matrix, parse_word, stabilize, word_to_matrix
from .interlace import (IEContext, cocycle_check, eala_axiom_check, eala_build,
                        lie_algebra_check)
from .lift import conjugacy_pipeline, lift_int_word, special_verify
from .matlie import forms_check, lie_torus_axioms_check
from .qtorus import TorusContext, centre_check, format_element, parse_qentry, torus_laws_check
from .report import Report

COMMANDS = ("torus-info", "verify-lietorus", "build-eala", "verify-eala", "verify-cocycles",
            "reduce-word", "lift", "pipeline")

_QKEY = re.compile(r"^q(\d)(\d)$|^q(\d+)_(\d+)$")


@dataclass
class RunConfig:
    n: int = 2
    m: int = 1
    q: dict = field(default_factory=dict)  # {"q12": "2"}
    ell: int = 2
    D: Any = "degree"  # "degree" or a list of {xi, z_coeff, theta}
    tau: str = "zero"
    s: str = "1"
    form: str = "standard"
    bound: int = 2
    samples: int = 200
    seed: int = 0
    word: str | None = None
    enlarge: int = 0
    centre_radius: int = 6

    def to_dict(self) -> dict:
        return {
            "torus": {"n": self.n, "m": self.m, "q": dict(self.q)},
            "ell": self.ell,
            "D": self.D if isinstance(self.D, str) else [dict(e) for e in self.D],
            "tau": self.tau,
            "s": self.s,
            "form": self.form,
            "bound": self.bound,
            "samples": self.samples,
            "seed": self.seed,
            "word": self.word,
            "enlarge": self.enlarge,
            "centre_radius": self.centre_radius,
        }

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    # -- builders ------------------------------------------------------------
    def torus(self) -> TorusContext:
        entries = {}
        for k, v in self.q.items():
            mm = _QKEY.match(k)
            i, j = (int(a) for a in (mm.groups()[:2] if mm.group(1) else mm.groups()[2:]))
            entries[(i, j)] = v
        return TorusContext(self.n, self.m, entries)

    def derivations(self, T: TorusContext) -> list[DerivationSpec]:
        if self.D == "degree":
            return [DerivationSpec.degree(T, [int(i == k) for i in range(T.n)]) for k in range(T.n)]
        return [from_config_entry(T, e) for e in self.D]

    def ie(self, T: TorusContext | None = None) -> IEContext:
        T = T or self.torus()
        return IEContext(T, self.ell, self.derivations(T), tau=self.tau, s=T.field.parse(self.s),
                         form=self.form)


_KEYS = {"torus", "ell", "D", "tau", "s", "form", "bound", "samples", "seed", "word", "enlarge",
         "centre_radius"}


def _int(v, where: str, lo: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}", where)
    if lo is not None and v < lo:
        raise ConfigError(f"must be >= {lo}, got {v}", where)
    return v


def _scalar_text(v, where: str) -> str:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise ConfigError(f"expected a scalar string, got {v!r}", where)
    if isinstance(v, float):
        raise ConfigError("write rationals as strings such as \"1/2\", not floats", where)
    return str(v)


def parse_config(data: dict | None) -> RunConfig:
    """Validate a config mapping; errors carry a dotted location."""
    data = dict(data or {})
    unknown = sorted(set(data) - _KEYS)
    if unknown:
        raise ConfigError(f"unknown keys {unknown}", "<root>")
    cfg = RunConfig()
    torus = data.get("torus", {})
    if not isinstance(torus, dict):
        raise ConfigError("expected a table", "torus")
    bad = sorted(set(torus) - {"n", "m", "q"})
    if bad:
        raise ConfigError(f"unknown keys {bad}", "torus")
    cfg.n = _int(torus.get("n", 2), "torus.n", 1)
    cfg.m = _int(torus.get("m", 1), "torus.m", 1)
    q = torus.get("q", {}) or {}
    if not isinstance(q, dict):
        raise ConfigError("expected a table of entries like q12: \"2\"", "torus.q")
    for k, v in q.items():
        where = f"torus.q.{k}"
        mm = _QKEY.match(str(k))
        if not mm:
            raise ConfigError("keys must look like q12 or q1_2", where)
        i, j = (int(a) for a in (mm.groups()[:2] if mm.group(1) else mm.groups()[2:]))
        if not 1 <= i < j <= cfg.n:
            raise ConfigError(f"need 1 <= i < j <= n = {cfg.n}", where)
        text = _scalar_text(v, where)
        try:
            parse_qentry(text)
        except ValueError as exc:
            raise ConfigError(str(exc), where) from None
        cfg.q[str(k)] = text
    cfg.ell = _int(data.get("ell", 2), "ell", 2)
    D = data.get("D", "degree")
    if isinstance(D, str):
        if D != "degree":
            raise ConfigError("use \"degree\" or a list of {xi, z_coeff, theta} entries", "D")
        cfg.D = D
    elif isinstance(D, list):
        out = []
        for k, e in enumerate(D):
            where = f"D[{k}]"
            if not isinstance(e, dict) or "theta" not in e:
                raise ConfigError("expected a table with at least a theta entry", where)
            bad = sorted(set(e) - {"xi", "z_coeff", "theta"})
            if bad:
                raise ConfigError(f"unknown keys {bad}", where)
            theta = e["theta"]
            if not isinstance(theta, list) or len(theta) != cfg.n:
                raise ConfigError(f"theta must be a list of {cfg.n} rationals", where + ".theta")
            xi = e.get("xi", [0] * cfg.n)
            if not isinstance(xi, list) or len(xi) != cfg.n:
                raise ConfigError(f"xi must be a list of {cfg.n} integers", where + ".xi")
            ent = {"xi": [_int(v, f"{where}.xi") for v in xi],
                   "z_coeff": _scalar_text(e.get("z_coeff", "1"), where + ".z_coeff"),
                   "theta": [_scalar_text(t, f"{where}.theta") for t in theta]}
            try:
                [Fraction(t) for t in ent["theta"]]
            except ValueError as exc:
                raise ConfigError(str(exc), where + ".theta") from None
            out.append(ent)
        cfg.D = out
    else:
        raise ConfigError("expected \"degree\" or a list", "D")
    cfg.tau = data.get("tau", "zero")
    if cfg.tau not in ("zero", "bgk"):
        raise ConfigError(f"must be zero or bgk, got {cfg.tau!r}", "tau")
    cfg.form = data.get("form", "standard")
    if cfg.form not in ("standard", "degenerate"):
        raise ConfigError(f"must be standard or degenerate, got {cfg.form!r}", "form")
    cfg.s = _scalar_text(data.get("s", "1"), "s")
    cfg.bound = _int(data.get("bound", 2), "bound", 0)
    cfg.samples = _int(data.get("samples", 200), "samples", 0)
    cfg.seed = _int(data.get("seed", 0), "seed", 0)
    w = data.get("word")
    if w is not None and not isinstance(w, str):
        raise ConfigError("expected a word string such as 'E(1,2,\"x1\") D(1,\"x2\")'", "word")
    cfg.word = w
    cfg.enlarge = _int(data.get("enlarge", 0), "enlarge", 0)
    cfg.centre_radius = _int(data.get("centre_radius", 6), "centre_radius", 0)
    return cfg


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return parse_config({})
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(str(exc), path) from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}", path) from None
    if data is not None and not isinstance(data, dict):
        raise ConfigError("top level must be a table", path)
    return parse_config(data)


# -- commands ----------------------------------------------------------------

def _word(cfg: RunConfig, T: TorusContext, required: bool = True) -> GLWord:
    if cfg.word is None:
        if required:
            raise ConfigError("this command needs a word", "word")
        return GLWord(T, cfg.ell, ())
    try:
        return parse_word(T, cfg.ell, cfg.word)
    except (ValueError, QTLiftError) as exc:
        raise ConfigError(str(exc), "word") from None


def _torus_info(cfg: RunConfig, rng) -> Report:
    T = cfg.torus()
    rep = centre_check(T, cfg.centre_radius, cfg.samples, rng, cfg.bound)
    rep.title = "torus info"
    rep.data.update(T.info())
    rep.data.pop("torus", None)
    return rep


def _verify_lietorus(cfg: RunConfig, rng) -> Report:
    T = cfg.torus()
    rep = Report(f"lie torus sl_{cfg.ell}(Q)")
    rep.data["torus"] = T.info()
    rep.merge(torus_laws_check(T, cfg.samples, rng, cfg.bound), "torus: ")
    rep.merge(forms_check(T, cfg.ell, cfg.samples, rng, cfg.bound), "form: ")
    rep.merge(lie_torus_axioms_check(T, cfg.ell, cfg.bound, cfg.samples, rng), "")
    return rep


def _build_eala(cfg: RunConfig, rng) -> Report:
    ctx = cfg.ie()
    rep = Report("EALA build")
    eala = eala_build(ctx)
    rep.record("context validated (skew, closed, ev injective)", True)
    rep.data.update(eala.to_json())
    return rep


def _verify_eala(cfg: RunConfig, rng) -> Report:
    ctx = cfg.ie()
    rep = Report("EALA verification")
    rep.merge(lie_algebra_check(ctx, cfg.samples, rng, cfg.bound), "")
    rep.merge(eala_axiom_check(ctx, cfg.bound, cfg.samples, rng), "")
    rep.data["context"] = ctx.to_json()
    return rep


def _verify_cocycles(cfg: RunConfig, rng) -> Report:
    ctx = cfg.ie()
    rep = Report("cocycle verification")
    rep.merge(cocycle_check(ctx, "sigma", cfg.samples, rng, cfg.bound), "sigma: ")
    rep.merge(cocycle_check(ctx, "tau", cfg.samples, rng, cfg.bound), "tau: ")
    return rep


def _reduce_word(cfg: RunConfig, rng) -> Report:
    T = cfg.torus()
    w = _word(cfg, T)
    rep = Report("word reduction")
    u, e = stabilize(w, cfg.enlarge)
    big = w.size + cfg.enlarge
    ok = word_to_matrix(w.embed(big)) * _diag_matrix(T, big, [u]) == word_to_matrix(e)
    rep.record("diag(g, E_m) diag(u) = matrix(e)", ok, str(e))
    rep.record("certificate is elementary", e.is_elementary(), str(e))
    rep.data.update({"u": format_element(u), "elementary": e.is_elementary(), "verified": ok,
                     "m": cfg.enlarge, "certificate": str(e), "certificate_length": len(e)})
    return rep


def _lift(cfg: RunConfig, rng) -> Report:
    ctx = cfg.ie()
    w = _word(cfg, ctx.torus)
    f, lrep = lift_int_word(ctx, w, cfg.enlarge, samples=min(cfg.samples, 20), rng=rng)
    rep = Report(f"lift of Int({w})")
    rep.merge(lrep, "lift: ")
    rep.merge(special_verify(f, cfg.samples, rng, cfg.bound), "verify: ")
    rep.data.update(lrep.data)
    rep.data["word"] = str(w)
    return rep


def _pipeline(cfg: RunConfig, rng) -> Report:
    ctx = cfg.ie()
    h = _word(cfg, ctx.torus, required=False)
    return conjugacy_pipeline(ctx, h, cfg.enlarge, cfg.samples, rng)


_DISPATCH = {
    "torus-info": _torus_info,
    "verify-lietorus": _verify_lietorus,
    "build-eala": _build_eala,
    "verify-eala": _verify_eala,
    "verify-cocycles": _verify_cocycles,
    "reduce-word": _reduce_word,
    "lift": _lift,
    "pipeline": _pipeline,
}


def run(command: str, cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; returns (exit status, JSON-ready report)."""
    if command not in _DISPATCH:
        raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}", "command")
    rng = random.Random(cfg.seed)
    try:
        rep = _DISPATCH[command](cfg, rng)
    except ConfigError:
        raise
    except QTLiftError as exc:
        rep = Report(command)
        rep.fail("computation", {"error": type(exc).__name__, "message": str(exc)})
    out = rep.to_json()
    out["command"] = command
    out["config"] = cfg.to_dict()
    return (0 if rep.passed else 1), out


def render(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"


def _summary(report: dict) -> str:
    lines = [f"{report['title']}: {report['verdict'].upper()}"]
    for name, c in report["checks"].items():
        lines.append(f"  [{c['status']}] {name} ({c['checked']})")
        if c["status"] == "fail" and "witness" in c:
            lines.append(f"      witness: {json.dumps(c['witness'], default=str)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtlift", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="PATH", help="YAML config file")
    p.add_argument("--seed", type=int, help="RNG seed (default: config seed, else 0)")
    p.add_argument("--samples", type=int, help="number of random samples N")
    p.add_argument("--degree-bound", type=int, dest="bound", help="degree bound B")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here")
    p.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    p.add_argument("--timings", action="store_true",
                   help="add an elapsed_seconds field (breaks byte-identical reruns)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        for key in ("seed", "samples", "bound"):
            v = getattr(args, key)
            if v is not None:
                setattr(cfg, key, _int(v, f"--{key if key != 'bound' else 'degree-bound'}", 0))
        t0 = time.perf_counter()
        status, report = run(args.command, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.timings:
        report["elapsed_seconds"] = round(time.perf_counter() - t0, 3)
    text = render(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text if args.json else _summary(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
