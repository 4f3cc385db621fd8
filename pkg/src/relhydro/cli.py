"""Command-line front end: ``relhydro {spectrum,dump-kernel,verify,converge}``.

Settings come from built-in defaults, then an optional TOML file
(``--config``), then command-line flags.  Errors print one line of the form
``error[<kind>]: <message>`` to stderr.  Exit codes: 0 ok, 2 configuration
error, 3 numerical failure, 4 verification failure.

Human-readable energies are shown in eV when they are below 1 keV in
magnitude (1 MeV = 1e6 eV); JSON and CSV output always use MeV.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field, fields

import numpy as np

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .interaction import build_form_factors
from .kernel import ChannelBlock, channel_block, kernel_block
from .kinematics import ALPHA, MEV_TO_EV, KinPoint, TwoBodyConfig, preset
from .solver import MIN_GRID_SIZE, ConfigurationError, NumericalError, converge, spectrum
from .verify import DEFAULT_SEED, SUITES, run_suites

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY = 0, 2, 3, 4

log = logging.getLogger("relhydro")


@dataclass
class RunConfig:
    """Everything a command needs; see ``relhydro <command> --help``."""

    system: str | None = None
    m1: float | None = None
    m2: float | None = None
    Z: int | None = None
    alpha: float | None = None
    J: int = 0
    block: str = "A"
    N: int = 96
    k0: object = "auto"
    form_factors: list = field(default_factory=lambda: ["point"])
    vacuum_polarization: str = "none"
    singular: str = "product"
    output: str | None = None
    format: str = "json"
    seed: int = DEFAULT_SEED
    sizes: list = field(default_factory=lambda: [48, 64, 80, 96, 120])
    pairs: list = field(default_factory=list)
    suites: list = field(default_factory=list)
    levels: int = 5

    def two_body(self) -> TwoBodyConfig:
        try:
            base = preset(self.system) if self.system else None
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        explicit = [v is not None for v in (self.m1, self.m2)]
        if base is None and not all(explicit):
            if any(explicit):
                raise ConfigurationError("give both m1 and m2, or a --system preset")
            base = preset("hydrogen")
        m1 = self.m1 if self.m1 is not None else base.m1
        m2 = self.m2 if self.m2 is not None else base.m2
        Z = self.Z if self.Z is not None else (base.Z if base else 1)
        alpha = self.alpha if self.alpha is not None else (base.alpha if base else ALPHA)
        name = base.name if base is not None and not any(explicit) else "custom"
        try:
            return TwoBodyConfig(float(m1), float(m2), int(Z), float(alpha), name=name)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc)) from None

    def channel_block(self) -> ChannelBlock:
        try:
            return channel_block(int(self.J), self.block)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None

    def grid_scale(self, cfg: TwoBodyConfig) -> float:
        if self.k0 in (None, "auto"):
            return cfg.bohr_momentum
        try:
            k0 = float(self.k0)
        except (TypeError, ValueError):
            raise ConfigurationError(f"k0 must be a number or 'auto', got {self.k0!r}") from None
        if not k0 > 0:
            raise ConfigurationError("k0 must be positive")
        return k0

    def form_factor_set(self, cfg):
        try:
            return build_form_factors(cfg, self.form_factors, self.vacuum_polarization)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None

    def validate(self):
        if int(self.N) != self.N or self.N < MIN_GRID_SIZE:
            raise ConfigurationError(f"N must be an integer >= {MIN_GRID_SIZE}, got {self.N}")
        if self.format not in ("json", "csv"):
            raise ConfigurationError("format must be json or csv")
        if self.singular not in ("product", "lande"):
            raise ConfigurationError("singular must be product or lande")
        for n in self.sizes:
            if int(n) != n or n < MIN_GRID_SIZE:
                raise ConfigurationError(f"grid sizes must be integers >= {MIN_GRID_SIZE}")


def _split_list(v):
    if isinstance(v, str):
        return [s.strip() for s in v.split(",") if s.strip()]
    return list(v)


def _parse_pairs(v):
    # "k:kp,k:kp" (MeV) or a list of 2-element lists
    if isinstance(v, str):
        out = []
        for item in _split_list(v):
            try:
                a, b = item.split(":")
                out.append((float(a), float(b)))
            except ValueError:
                raise ConfigurationError(f"bad momentum pair {item!r}; use k:kp") from None
        return out
    try:
        return [(float(a), float(b)) for a, b in v]
    except (TypeError, ValueError):
        raise ConfigurationError("pairs must be a list of [k, kp]") from None


_LIST_KEYS = {"form_factors", "sizes", "suites"}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Defaults, then the TOML file, then non-None command-line values."""
    data = {}
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {path}: {exc.strerror}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"invalid TOML in {path}: {exc}") from None
        data = {k.replace("-", "_"): v for k, v in data.items()}
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")
    for key in _LIST_KEYS & set(data):
        data[key] = _split_list(data[key])
    if "sizes" in data:
        try:
            data["sizes"] = [int(s) for s in data["sizes"]]
        except ValueError:
            raise ConfigurationError("sizes must be integers") from None
    if "pairs" in data:
        data["pairs"] = _parse_pairs(data["pairs"])
    rc = RunConfig(**data)
    rc.validate()
    return rc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _energy_unit(values):
    if np.max(np.abs(values)) < 1e-3:
        return "eV", MEV_TO_EV
    return "MeV", 1.0


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(rc: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg = rc.two_body()
    block = rc.channel_block()
    ffs = rc.form_factor_set(cfg)
    res = spectrum(cfg, block, int(rc.N), rc.grid_scale(cfg), ffs, rc.singular)
    nb = min(rc.levels, len(res.binding))
    B = res.binding[:nb]
    b1 = cfg.bohr_binding(1)
    unit, f = _energy_unit(np.append(B, b1))
    print(f"# {cfg.name}: m1={cfg.m1:g} m2={cfg.m2:g} Z={cfg.Z} alpha={cfg.alpha:.10g}  "
          f"J={block.J} block={block.name} channels={list(block.channels)}  "
          f"N={res.grid.size} k0={res.grid.scale:.6g} MeV", file=out)
    print(f"{'#':>3} {'binding [' + unit + ']':>22} {'n':>3} {'Bohr(n) [' + unit + ']':>22} "
          f"{'ratio':>12}", file=out)
    for i, b in enumerate(B):
        n = max(1, int(round(np.sqrt(b1 / b)))) if b < 0 else 0
        ref = cfg.bohr_binding(n) if n else float("nan")
        print(f"{i + 1:>3} {b * f:>22.12g} {n if n else '-':>3} {ref * f:>22.12g} "
              f"{b / ref if n else float('nan'):>12.8f}", file=out)
    if rc.output:
        if rc.format == "json":
            d = res.to_dict(nb)
            d["form_factors"] = list(ffs.names)
            d["convergence"] = {}
            _write(json.dumps(d, indent=2) + "\n", rc.output)
        else:
            _write(_wavefunction_csv(res, nb), rc.output)
    return EXIT_OK


def _wavefunction_csv(res, nb) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = [f"phi{n}_l{ell}_S{S}" for n in range(nb) for ell, S in res.block.channels]
    w.writerow(["k", "w"] + cols)
    for i, (k, wt) in enumerate(zip(res.grid.nodes, res.grid.weights)):
        row = [res.vectors[n, c, i] for n in range(nb) for c in range(len(res.block))]
        w.writerow([repr(float(k)), repr(float(wt))] + [repr(float(v)) for v in row])
    return buf.getvalue()


KERNEL_CSV_HEADER = ["J", "S_out", "l_out", "S_in", "l_in", "k", "kp", "value"]


def kernel_csv(cfg, block, pairs, ffs) -> str:
    """CSV rows of the block kernel for each (k, kp) pair, MeV^-2."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(KERNEL_CSV_HEADER)
    for k, kp in pairs:
        if not (k > 0 and kp > 0) or k == kp:
            raise ConfigurationError(f"momentum pair ({k}, {kp}) must be positive and distinct")
        V = kernel_block(cfg, block, KinPoint(k, kp), ffs)
        for io_, (lo, so) in enumerate(block.channels):
            for ii, (li, si) in enumerate(block.channels):
                w.writerow([block.J, so, lo, si, li, repr(k), repr(kp), repr(float(V[io_, ii]))])
    return buf.getvalue()


def cmd_dump_kernel(rc: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg = rc.two_body()
    text = kernel_csv(cfg, rc.channel_block(), rc.pairs, rc.form_factor_set(cfg))
    if rc.output:
        _write(text, rc.output)
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(rc: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        results = run_suites(rc.suites or None, seed=int(rc.seed))
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    for r in results:
        print(r.line(), file=out)
    ok = all(r.passed for r in results)
    print(f"{'ALL PASS' if ok else 'FAILED'} ({sum(r.passed for r in results)}/{len(results)})",
          file=out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_converge(rc: RunConfig, out=None) -> int:
    out = out or sys.stdout
    cfg = rc.two_body()
    block = rc.channel_block()
    rep = converge(cfg, block, rc.form_factor_set(cfg), rc.sizes, rc.grid_scale(cfg),
                   singular=rc.singular)
    unit, f = _energy_unit(np.array([b[0] for b in rep.binding]))
    print(f"{'N':>5} {'B1 [' + unit + ']':>22} {'|dB1/B1|':>12}", file=out)
    for i, (n, b) in enumerate(zip(rep.sizes, rep.binding)):
        d = f"{rep.deltas[i - 1]:12.3e}" if i else f"{'':>12}"
        print(f"{n:>5} {b[0] * f:>22.14g} {d}", file=out)
    print(f"converged: {'yes' if rep.converged else 'no'} (tol {rep.tolerance:g})", file=out)
    if rc.output:
        d = {"config": {"m1": cfg.m1, "m2": cfg.m2, "Z": cfg.Z, "alpha": cfg.alpha},
             "block": {"J": block.J, "name": block.name}, "convergence": rep.to_dict()}
        _write(json.dumps(d, indent=2) + "\n", rc.output)
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "dump-kernel": cmd_dump_kernel,
    "verify": cmd_verify,
    "converge": cmd_converge,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse's own usage errors are configuration errors too
        print(f"error[config]: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("system")
    g.add_argument("--config", help="TOML file with any of the options below")
    g.add_argument("--system", help="preset: hydrogen, muonic-hydrogen, equal-mass")
    g.add_argument("--m1", type=float, help="mass of particle 1 (lepton), MeV")
    g.add_argument("--m2", type=float, help="mass of particle 2 (nucleus), MeV")
    g.add_argument("--Z", type=int, help="charge number of particle 2")
    g.add_argument("--alpha", type=float, help="fine-structure constant")
    g.add_argument("--J", type=int, help="total angular momentum")
    g.add_argument("--block", help="A/B (aliases singlet/triplet)")
    g.add_argument("--N", type=int, help="grid size")
    g.add_argument("--k0", help="grid scale in MeV or 'auto' (mu Z alpha)")
    g.add_argument("--form-factors", dest="form_factors",
                   help="comma list: point, dipole-proton, anomalous-electron, uehling")
    g.add_argument("--vacuum-polarization", dest="vacuum_polarization",
                   help="none or uehling")
    g.add_argument("--singular", help="diagonal treatment: product (default) or lande")
    g.add_argument("--output", "-o", help="output file")
    g.add_argument("--format", choices=("json", "csv"), help="output format")
    g.add_argument("--seed", type=int, help="seed of the random verification suites")
    g.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = _Parser(prog="relhydro", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("spectrum", parents=[common], help="bound-state spectrum of one block")
    s.add_argument("--levels", type=int, help="number of levels to print (default 5)")
    d = sub.add_parser("dump-kernel", parents=[common], help="kernel values as CSV")
    d.add_argument("--pairs", help="comma list of k:kp momentum pairs in MeV")
    v = sub.add_parser("verify", parents=[common], help="run oracle self-checks")
    v.add_argument("--suite", dest="suites", action="append", choices=list(SUITES),
                   help="run only this suite (repeatable)")
    c = sub.add_parser("converge", parents=[common], help="ground state versus grid size")
    c.add_argument("--sizes", help="comma list of grid sizes")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args = vars(ns)
    cmd = args.pop("command")
    path = args.pop("config")
    verbose = args.pop("verbose")
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        rc = load_config(path, args)
        return COMMANDS[cmd](rc)
    except ConfigurationError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"error[numerical]: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
