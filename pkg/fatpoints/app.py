"""
fatpoints command line
Conjectural and actual Hilbert functions of fat points in P^n
"""

import argparse
import logging
import sys
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError

from fatpoints.engines.conjectural_engine import g
from fatpoints.engines.counterexample_engine import ctr_inequalities, k_of, m_of
from fatpoints.engines.interpolation_engine import InterpolationEngine, PowerIdealConfig, hpowlin_dim
from fatpoints.engines.obstruction_engine import generic_ubda
from fatpoints.engines.scan_engine import GridSpec, ScanEngine, summarize_strong, summarize_weak, write_records
from fatpoints.services.errors import FatPointsError, UsageError
from fatpoints.services.result_cache import ResultCache
from fatpoints.services.settings import Settings
from fatpoints.services.uples import Uple

logger = logging.getLogger(__name__)

CTR_KMAX = 2000


class CellRequest(BaseModel):
    n: int = Field(ge=1)
    A: str
    m: int = Field(ge=0)

    def uple(self) -> Uple:
        return Uple.parse(self.A)


class ScanRequest(BaseModel):
    n: List[int]
    dmin: int = 1
    dmax: int = 6
    kmin: int = 1
    kmax: int = 4
    mmin: int = 0
    mmax: int = 8
    d: Optional[int] = None
    k: Optional[int] = None
    m: Optional[int] = None

    def grid(self, homogeneous: bool) -> GridSpec:
        dmin, dmax = (self.d, self.d) if self.d is not None else (self.dmin, self.dmax)
        kmin, kmax = (self.k, self.k) if self.k is not None else (self.kmin, self.kmax)
        mmin, mmax = (self.m, self.m) if self.m is not None else (self.mmin, self.mmax)
        return GridSpec(n_values=self.n, d_min=dmin, d_max=dmax, k_min=kmin, k_max=kmax,
                        m_min=mmin, m_max=mmax, homogeneous=homogeneous)


class PowLinResult(BaseModel):
    n: int
    powers: List[int]
    m: int
    value: int
    modulus: int
    seed: int


class DualityResult(BaseModel):
    n: int
    A: List[int]
    m: int
    residual: int
    modulus: int
    seed: int


def status(fancy: str, plain: str):
    """Short human status line on stderr; stdout carries the JSON"""
    try:
        print(fancy, file=sys.stderr)
    except UnicodeEncodeError:
        print(plain, file=sys.stderr)


def emit(model: BaseModel):
    print(model.model_dump_json(indent=2))


def _cache(settings: Settings) -> Optional[ResultCache]:
    return ResultCache(settings.cache_path) if settings.cache_path else None


def cmd_g(args, settings: Settings) -> int:
    request = CellRequest(n=args.n, A=args.A, m=args.m)
    emit(g(request.n, request.uple(), request.m))
    return 0


def cmd_hpts(args, settings: Settings) -> int:
    request = CellRequest(n=args.n, A=args.A, m=args.m)
    engine = InterpolationEngine(settings, _cache(settings))
    value = engine.generic_hpts(request.n, request.uple(), request.m)
    status(f"🧮 hpts = {value.value} ({value.trials} trial(s) mod {value.modulus})",
           f"hpts = {value.value} ({value.trials} trial(s) mod {value.modulus})")
    emit(value)
    return 0


def cmd_hpowlin(args, settings: Settings) -> int:
    request = CellRequest(n=args.n, A=args.A, m=args.m)
    powers = request.uple()
    engine = InterpolationEngine(settings)
    forms = engine.generic_config(request.n, Uple((1,) * len(powers)), settings.seed, 0, settings.prime).points
    value = hpowlin_dim(PowerIdealConfig(request.n, forms, powers), request.m, settings.prime)
    emit(PowLinResult(n=request.n, powers=list(powers), m=request.m, value=value,
                      modulus=settings.prime, seed=settings.seed))
    return 0


def cmd_duality(args, settings: Settings) -> int:
    request = CellRequest(n=args.n, A=args.A, m=args.m)
    uple = request.uple()
    residual = InterpolationEngine(settings).duality_residual(request.n, uple, request.m)
    if residual:
        status(f"❌ duality residual {residual}", f"duality residual {residual}")
    emit(DualityResult(n=request.n, A=list(uple), m=request.m, residual=residual,
                       modulus=settings.prime, seed=settings.seed))
    return 0


def cmd_ubda(args, settings: Settings) -> int:
    request = CellRequest(n=args.n, A=args.A, m=args.m)
    report = generic_ubda(request.n, request.uple(), request.m, settings=settings)
    mark = '✅' if report.only_linear else '⚠️ '
    status(f"{mark} bound {report.bound}, direct {report.direct_h.value}",
           f"bound {report.bound}, direct {report.direct_h.value}")
    emit(report)
    return 0


def cmd_scan(args, settings: Settings) -> int:
    if args.kind == 'ctr':
        return _scan_ctr(args)
    given = {name: getattr(args, name) for name in ('dmin', 'dmax', 'kmin', 'kmax', 'mmin', 'mmax', 'd', 'k', 'm')}
    request = ScanRequest(n=args.n, **{name: value for name, value in given.items() if value is not None})
    engine = ScanEngine(settings, _cache(settings))
    if args.kind == 'weak':
        records = engine.weak_scan(request.grid(homogeneous=False))
        summary = summarize_weak(records)
        status(f"🔎 {summary.cells} cells, {len(summary.violations)} violation(s)",
               f"{summary.cells} cells, {len(summary.violations)} violation(s)")
    else:
        records = engine.strong_scan(request.grid(homogeneous=True))
        summary = summarize_strong(records)
        status(f"🔎 {summary.cells} cells, {len(summary.counterexample_candidates)} candidate(s), "
               f"{len(summary.exceptional_strict)} exceptional cell(s) strict",
               f"{summary.cells} cells, {len(summary.counterexample_candidates)} candidate(s), "
               f"{len(summary.exceptional_strict)} exceptional cell(s) strict")
    if args.out:
        write_records(records, args.out)
        status(f"💾 wrote {len(records)} records to {args.out}", f"wrote {len(records)} records to {args.out}")
    emit(summary)
    return 0


def _scan_ctr(args) -> int:
    if len(args.n) != 1:
        raise UsageError("scan ctr takes a single --n")
    n = args.n[0]
    if args.k is not None:
        m = args.m if args.m is not None else m_of(n, args.k)
        d = args.d if args.d is not None else n + 5
        emit(ctr_inequalities(n, args.k, m, d))
        return 0
    report = k_of(n, args.kmax if args.kmax is not None else CTR_KMAX)
    verdict = 'agrees' if report.agrees else ('differs' if report.agrees is False else 'no reported value')
    status(f"📐 k({n}): computed {report.computed}, rn2 cells {report.computed_rn2}, {verdict}",
           f"k({n}): computed {report.computed}, rn2 cells {report.computed_rn2}, {verdict}")
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as handle:
            handle.write(report.model_dump_json(indent=2) + "\n")
    emit(report)
    return 0


COMMANDS = {
    'g': cmd_g,
    'hpts': cmd_hpts,
    'hpowlin': cmd_hpowlin,
    'duality': cmd_duality,
    'ubda': cmd_ubda,
    'scan': cmd_scan,
}


def _cell_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--n", type=int, required=True, help="dimension of P^n")
    parser.add_argument("--A", required=True, help="multiplicities, e.g. 2,2,3 or 3x10")
    parser.add_argument("--m", type=int, required=True, help="degree")


def _run_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--prime", type=int, default=None, help="field modulus (default 1000003)")
    parser.add_argument("--seed", type=int, default=None, help="global seed (default 0)")
    parser.add_argument("--trials", type=int, default=None, help="random trials per cell (default 3)")
    parser.add_argument("--cache", default=None, help="JSON-lines result cache")
    parser.add_argument("--log-level", default=None, help="logging level (default WARNING)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fatpoints", description="Hilbert functions of fat points in P^n.")
    commands = ap.add_subparsers(dest="command", required=True)

    for name, text in (('g', "conjectural value G(A)_m"),
                       ('hpts', "generic Hilbert function by rank"),
                       ('hpowlin', "codimension of generic powers of linear forms"),
                       ('duality', "points/forms duality residual"),
                       ('ubda', "codimension-one upper bound with every step")):
        sub = commands.add_parser(name, help=text)
        _cell_flags(sub)
        _run_flags(sub)

    scan = commands.add_parser('scan', help="parameter sweeps")
    scan.add_argument("kind", choices=['weak', 'strong', 'ctr'])
    scan.add_argument("--n", type=int, nargs='+', required=True)
    scan.add_argument("--dmin", type=int, default=None, help="default 1")
    scan.add_argument("--dmax", type=int, default=None, help="default 6")
    scan.add_argument("--kmin", type=int, default=None, help="default 1")
    scan.add_argument("--kmax", type=int, default=None, help="default 4; 2000 for scan ctr")
    scan.add_argument("--mmin", type=int, default=None, help="default 0")
    scan.add_argument("--mmax", type=int, default=None, help="default 8")
    scan.add_argument("--d", type=int, default=None)
    scan.add_argument("--k", type=int, default=None)
    scan.add_argument("--m", type=int, default=None)
    scan.add_argument("--out", default=None, help="write records to a .csv or .json file")
    scan.add_argument("--cap", type=int, default=None, help="largest admissible C(n+m, n)")
    scan.add_argument("--workers", type=int, default=None)
    _run_flags(scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = Settings.from_env().override(
            prime=args.prime, seed=args.seed, trials=args.trials, cache_path=args.cache,
            log_level=args.log_level, cap=getattr(args, 'cap', None), workers=getattr(args, 'workers', None),
        )
    except ValidationError as e:
        print(f"fatpoints: bad setting: {e.errors()[0]['msg']}", file=sys.stderr)
        return 2
    logging.basicConfig(level=settings.log_level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args, settings)
    except (UsageError, ValidationError) as e:
        print(f"fatpoints: {e}", file=sys.stderr)
        return 2
    except FatPointsError as e:
        print(f"fatpoints: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"fatpoints: cannot write output: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
