"""Batch front door: TOML job configs in, deterministic JSON/CSV reports out.

Subcommands: enumerate, lift, cohom, orbits, verify.  Reports are
byte-identical across runs and worker counts; `verify` runs the
cross-module invariant suite and exits nonzero on any violation.

Exit codes: 0 ok, 1 invariant violation, 2 config/parse error,
3 budget or hard-cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cohomology import cocycle_spaces, h0_basis, lift_obstruction
from .errors import BudgetExceededError, LocsysError, WordSyntaxError
from .lifting import count_lifts_bruteforce, lift_step, lift_tower
from .orbits import groupoid_mass, orbit_decomposition
from .repvar import (
    Representation,
    burnside_closure,
    enumerate_reps,
    find_framing_subgroup,
    is_representation,
    rep_to_json,
)
from .ring import (
    RING_CAP,
    CoeffRing,
    Matrix,
    congruence_element_order,
    gl_order,
    identity,
    is_invertible,
)
from .words import Presentation, parse_word, word_to_string

DEFAULT_HARD_CAP = 10_000_000

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    pres: Presentation
    R: CoeffRing
    n: int
    levels: int
    budget: int
    out_dir: Path
    workers: int
    deterministic: bool

    def search_space(self) -> int:
        return gl_order(self.R, self.n) ** self.pres.rank


def hard_cap() -> int:
    raw = os.environ.get("LOCSYS_HARD_CAP")
    if raw is None:
        return DEFAULT_HARD_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigError(f"LOCSYS_HARD_CAP must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise ConfigError("LOCSYS_HARD_CAP must be positive")
    return cap


def load_config(path: str, args: argparse.Namespace) -> JobConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc

    group = data.get("group")
    target = data.get("target")
    if not isinstance(group, dict) or not isinstance(target, dict):
        raise ConfigError("config needs [group] and [target] tables")

    names = group.get("generators")
    if not isinstance(names, list) or not names or not all(isinstance(s, str) for s in names):
        raise ConfigError("[group].generators must be a nonempty list of names")
    relator_texts = group.get("relators", [])
    if not isinstance(relator_texts, list) or not all(isinstance(s, str) for s in relator_texts):
        raise ConfigError("[group].relators must be a list of word strings")
    relators = []
    for idx, text in enumerate(relator_texts):
        try:
            relators.append(parse_word(text, names))
        except WordSyntaxError as exc:
            raise ConfigError(f"relator {idx + 1} ({text!r}): {exc}") from exc
    pres = Presentation(len(names), tuple(relators), tuple(names))

    try:
        p = int(target["p"])
        k = int(target["k"])
        n = int(target["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"[target] needs integer fields p, k, n: {exc}") from exc
    try:
        R = CoeffRing(p, k)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if n < 1:
        raise ConfigError("[target].n must be >= 1")

    options = data.get("options", {})
    if not isinstance(options, dict):
        raise ConfigError("[options] must be a table")
    levels = int(args.levels if args.levels is not None else options.get("levels", k + 1))
    budget = int(args.budget if args.budget is not None else options.get("budget", hard_cap()))
    if budget <= 0 or levels < 1:
        raise ConfigError("budgets and level counts must be positive")
    if p ** max(k + 1, levels) > RING_CAP:
        raise ConfigError(
            f"p^{max(k + 1, levels)} exceeds the 64-bit ring cap; lower k or levels"
        )

    return JobConfig(
        pres=pres,
        R=R,
        n=n,
        levels=levels,
        budget=budget,
        out_dir=Path(args.out),
        workers=max(1, args.workers),
        deterministic=args.deterministic,
    )


# -- deterministic writers -----------------------------------------------------

def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def presentation_json(pres: Presentation) -> dict:
    return {
        "generators": list(pres.names),
        "relators": [word_to_string(w, pres.names) for w in pres.relators],
    }


def presentation_hash(pres: Presentation) -> str:
    blob = json.dumps(presentation_json(pres), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _summary(cfg: JobConfig, count: Optional[int] = None) -> dict:
    summary = {
        "ring": {"p": cfg.R.p, "k": cfg.R.k},
        "n": cfg.n,
        "presentation": presentation_json(cfg.pres),
        "presentationHash": presentation_hash(cfg.pres),
    }
    if count is not None:
        summary["count"] = count
    return summary


def _enumerate(cfg: JobConfig) -> list[Representation]:
    workers = 1 if cfg.deterministic and cfg.workers == 1 else cfg.workers
    return enumerate_reps(cfg.pres, cfg.R, cfg.n, budget=cfg.budget, workers=workers)


# -- subcommands ----------------------------------------------------------------

def cmd_enumerate(cfg: JobConfig) -> int:
    reps = _enumerate(cfg)
    report = {
        "summary": _summary(cfg, len(reps)),
        "representations": [rep_to_json(r) for r in reps],
    }
    write_json(cfg.out_dir / "enumerate.json", report)
    write_csv(
        cfg.out_dir / "enumerate.csv",
        ["count", "p", "k", "n", "presentationHash"],
        [[len(reps), cfg.R.p, cfg.R.k, cfg.n, presentation_hash(cfg.pres)]],
    )
    return EXIT_OK


def cmd_lift(cfg: JobConfig) -> int:
    root_ring = cfg.R.residue_field()
    root_cfg_space = gl_order(root_ring, cfg.n) ** cfg.pres.rank
    if root_cfg_space > cfg.budget:
        raise BudgetExceededError(f"mod-p root space {root_cfg_space} exceeds budget")
    roots = enumerate_reps(cfg.pres, root_ring, cfg.n, budget=cfg.budget)
    sampling = min(cfg.budget, 10_000)  # keeps per-level representative sets in memory
    towers = []
    for i, root in enumerate(roots):
        tower = lift_tower(root, cfg.levels, sampling_budget=sampling)
        towers.append(
            {
                "rootIndex": i,
                "levels": [
                    {
                        "k": lv.k,
                        "complete": lv.complete,
                        "fibers": [
                            {"parentIndex": f.parent_index, "status": f.status, "size": f.size}
                            for f in lv.fibers
                        ],
                    }
                    for lv in tower.levels
                ],
            }
        )
    report = {"summary": _summary(cfg, len(roots)), "towers": towers}
    write_json(cfg.out_dir / "lift.json", report)
    return EXIT_OK


def cmd_cohom(cfg: JobConfig) -> int:
    reps = _enumerate(cfg)
    records = []
    for i, rep in enumerate(reps):
        sp = cocycle_spaces(rep)
        naive = tuple(Matrix(rep.n, m.entries) for m in rep.images)
        obs = lift_obstruction(rep, naive)
        records.append(
            {
                "repIndex": i,
                "h0": sp.h0,
                "z1": sp.z1,
                "b1": sp.b1,
                "h1": sp.h1,
                "obstructionRank": obs.obstruction_space_dim,
                "liftable": obs.liftable,
            }
        )
    report = {"summary": _summary(cfg, len(reps)), "cohomology": records}
    write_json(cfg.out_dir / "cohom.json", report)
    write_csv(
        cfg.out_dir / "cohom.csv",
        ["repIndex", "h0", "z1", "b1", "h1", "obstructionRank", "liftable"],
        [
            [r["repIndex"], r["h0"], r["z1"], r["b1"], r["h1"], r["obstructionRank"], r["liftable"]]
            for r in records
        ],
    )
    return EXIT_OK


def cmd_orbits(cfg: JobConfig) -> int:
    reps = _enumerate(cfg)
    groupoid = orbit_decomposition(reps)
    index = {rep.key(): i for i, rep in enumerate(reps)}
    mass = groupoid_mass(groupoid)
    orbit_rows = [
        {
            "repIndex": index[o.representative.key()],
            "size": o.size,
            "stabilizer": o.stabilizer_order,
        }
        for o in groupoid.orbits
    ]
    report = {
        "summary": _summary(cfg, len(reps)),
        "orbitCount": len(groupoid.orbits),
        "ambientOrder": groupoid.ambient_order,
        "mass": f"{mass.numerator}/{mass.denominator}",
        "orbits": orbit_rows,
    }
    write_json(cfg.out_dir / "orbits.json", report)
    write_csv(
        cfg.out_dir / "orbits.csv",
        ["repIndex", "size", "stabilizer"],
        [[o["repIndex"], o["size"], o["stabilizer"]] for o in orbit_rows],
    )
    return EXIT_OK


def _verify_checks(cfg: JobConfig) -> list[dict]:
    checks: list[dict] = []

    def record(name: str, passed: bool, detail: str) -> None:
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    reps = _enumerate(cfg)
    ambient = gl_order(cfg.R, cfg.n)

    if cfg.pres.is_free():
        expected = ambient**cfg.pres.rank
        record(
            "free-group-count",
            len(reps) == expected,
            f"|Hom| = {len(reps)}, gl_order^r = {expected}",
        )

    sound = all(is_representation(cfg.pres, r.images, cfg.R, cfg.n) for r in reps)
    record("relator-soundness", sound, f"checked {len(reps)} representations")

    if cfg.pres.is_free():
        failures = 0
        for rep in reps:
            witness = find_framing_subgroup(rep)
            if not witness.passed:
                failures += 1
        record(
            "union-decomposition",
            failures == 0,
            f"{len(reps) - failures}/{len(reps)} framing witnesses pass",
        )

    rng = random.Random(0)
    closure_ok = True
    order_ok = True
    bound = cfg.R.p ** ((cfg.R.k - 1) * cfg.n * cfg.n)
    for _ in range(20):
        gens = []
        for _ in range(rng.randint(1, 3)):
            ent = list(identity(cfg.n).entries)
            for t in range(len(ent)):
                ent[t] = (ent[t] + cfg.R.p * rng.randrange(cfg.R.p ** (cfg.R.k - 1))) % cfg.R.q
            gens.append(Matrix(cfg.n, tuple(ent)))
        closure = burnside_closure(gens, cfg.R)
        if bound % len(closure):
            closure_ok = False
        exponent = cfg.R.p ** max(cfg.R.k - 1, 0)
        for m in closure:
            if exponent % congruence_element_order(m, cfg.R):
                order_ok = False
    record("burnside-closure-size", closure_ok, f"20 random generator sets, bound {bound}")
    record("burnside-element-orders", order_ok, "orders divide p^(k-1)")

    brute_space = cfg.R.p ** (cfg.pres.rank * cfg.n * cfg.n)
    if brute_space <= min(cfg.budget, 100_000) and len(reps) * brute_space <= cfg.budget:
        torsor_ok = True
        for rep in reps:
            fiber = lift_step(rep)
            brute = count_lifts_bruteforce(rep, budget=cfg.budget)
            sp = cocycle_spaces(rep)
            expected_size = cfg.R.p**sp.z1 if fiber.status == "torsor" else 0
            if fiber.fiber_size != brute or fiber.fiber_size != expected_size:
                torsor_ok = False
        record("torsor-fibers", torsor_ok, f"lift_step vs brute force on {len(reps)} reps")

    groupoid = orbit_decomposition(reps)
    mass = groupoid_mass(groupoid)
    mass_ok = mass == Fraction(len(reps), ambient)
    orbit_ok = all(o.size * o.stabilizer_order == ambient for o in groupoid.orbits)
    record("mass-formula", mass_ok, f"mass = {mass}, |Hom|/|GL| = {Fraction(len(reps), ambient)}")
    record("orbit-stabilizer", orbit_ok, f"{len(groupoid.orbits)} orbits")

    if cfg.R.k == 1:
        stab_ok = True
        for o in groupoid.orbits:
            basis = h0_basis(o.representative)
            units = _centralizer_unit_count(basis, cfg.R, cfg.n)
            if units != o.stabilizer_order:
                stab_ok = False
        record("stabilizer-centralizer", stab_ok, "stabilizers match centralizer units")

    return checks


def _centralizer_unit_count(basis: list[Matrix], R: CoeffRing, n: int) -> int:
    count = 0
    for coeffs in itertools.product(range(R.p), repeat=len(basis)):
        ent = [0] * (n * n)
        for c, b in zip(coeffs, basis):
            if c:
                for t, x in enumerate(b.entries):
                    ent[t] = (ent[t] + c * x) % R.q
        if is_invertible(Matrix(n, tuple(ent)), R):
            count += 1
    return count


def cmd_verify(cfg: JobConfig) -> int:
    checks = _verify_checks(cfg)
    passed = all(c["passed"] for c in checks)
    report = {"summary": _summary(cfg), "checks": checks, "passed": passed}
    write_json(cfg.out_dir / "verify.json", report)
    for c in checks:
        status = "ok" if c["passed"] else "FAIL"
        print(f"[{status}] {c['name']}: {c['detail']}")
    return EXIT_OK if passed else EXIT_VIOLATION


COMMANDS = {
    "enumerate": cmd_enumerate,
    "lift": cmd_lift,
    "cohom": cmd_cohom,
    "orbits": cmd_orbits,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="locsys",
        description="representation varieties over Z/p^k: enumerate, lift, cohom, orbits, verify",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="TOML job config")
        sp.add_argument("--out", default=".", help="output directory for reports")
        sp.add_argument("--levels", type=int, default=None, help="tower height K")
        sp.add_argument("--budget", type=int, default=None, help="search/sampling budget")
        sp.add_argument("--workers", type=int, default=1, help="worker count for enumeration")
        sp.add_argument(
            "--deterministic",
            action=argparse.BooleanOptionalAction,
            default=True,
            help="force canonical sequential output (default on)",
        )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        cfg.out_dir.mkdir(parents=True, exist_ok=True)
        cap = hard_cap()
        if cfg.search_space() > cap:
            print(
                f"error: search space {cfg.search_space()} exceeds hard cap {cap} "
                "(set LOCSYS_HARD_CAP to override)",
                file=sys.stderr,
            )
            return EXIT_BUDGET
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except LocsysError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
