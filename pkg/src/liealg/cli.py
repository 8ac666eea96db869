"""Command-line front end: ``liealg {state,entangle,evolve,measure,sweep,selftest}``.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 Schmidt-rank error,
4 identity or agreement gate failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import dynamics as dyn
from . import entangled as ent
from . import measures as ms
from . import states as st
from .entangled import BipartiteState
from .errors import DomainError, IdentityError, LieAlgError, SchmidtRankError
from .states import StateVector

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_RANK, EXIT_GATE = 0, 1, 2, 3, 4
SWEEP_TOL = 1e-10
IDENTITY_TOL = 1e-9
SWEEP_COLUMNS = ("param", "lambda_plus", "lambda_minus", "bell_closed", "bell_numeric",
                 "entropy", "ic")
MEASURE_KEYS = ("lambda_plus", "lambda_minus", "bell_B", "bell_closed", "entropy_S1", "index_Ic")


class UsageError(Exception):
    pass


class GateError(Exception):
    pass


# -- value parsing ----------------------------------------------------------------

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PI = re.compile(rf"^([+-]?)({_NUM})?\*?pi(?:/({_NUM}))?$")


def parse_real(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/2``, ``2pi``, ``-3*pi/4``."""
    s = str(text).strip().replace(" ", "")
    m = _PI.match(s)
    if m:
        sign, mult, div = m.groups()
        value = (float(mult) if mult else 1.0) * math.pi / (float(div) if div else 1.0)
        return -value if sign == "-" else value
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def parse_complex(text: str) -> complex:
    """``a+bi`` / ``a-bi`` / ``bi`` / ``a`` with optional scientific notation."""
    s = str(text).strip().replace(" ", "")
    if s.endswith("i") and not s.lower().endswith(("inf", "nani")):
        s = s[:-1] + "j"
    try:
        value = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number (use a+bi): {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise argparse.ArgumentTypeError(f"complex value must be finite: {text!r}")
    return value


def parse_tail_tol(text: str) -> float:
    value = parse_real(text)
    if not 0 < value <= 1e-6:
        raise argparse.ArgumentTypeError(f"tail-tol must lie in (0, 1e-6], got {text!r}")
    return value


def parse_steps(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"steps must be an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"steps must be >= 1, got {value}")
    return value


# -- output -----------------------------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return "%.17g" % float(x)


def _json_value(x) -> str:
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    return fmt(x)


def render(columns, rows, fmt_name: str, as_array: bool = False) -> str:
    """CSV with a header row, or JSON: an object of columns (``as_array``
    False) or an array of row objects."""
    if fmt_name == "csv":
        lines = [",".join(columns)] + [",".join(fmt(v) for v in row) for row in rows]
        return "\n".join(lines) + "\n"
    if as_array:
        objs = ["{" + ", ".join(f"{json.dumps(c)}: {_json_value(v)}" for c, v in zip(columns, row))
                + "}" for row in rows]
        return "[" + ",\n ".join(objs) + "]\n"
    cols = list(zip(*rows)) if rows else [() for _ in columns]
    body = ", ".join(f"{json.dumps(c)}: {_json_value(list(v))}" for c, v in zip(columns, cols))
    return "{" + body + "}\n"


def render_record(record: dict, fmt_name: str) -> str:
    if fmt_name == "csv":
        return render(list(record), [list(record.values())], "csv")
    return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in record.items()) + "}\n"


def state_table(state):
    if isinstance(state, StateVector):
        p = state.probabilities()
        rows = [[n, a.real, a.imag, p[n]] for n, a in enumerate(state.amplitudes)]
        return ["n", "re", "im", "prob"], rows
    c = state.coeffs
    p = state.probabilities()
    rows = [[i, j, c[i, j].real, c[i, j].imag, p[i, j]]
            for i in range(c.shape[0]) for j in range(c.shape[1])]
    return ["n1", "n2", "re", "im", "prob"], rows


def emit(text: str, args) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- state builders ---------------------------------------------------------------

def _req(args, name):
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required for family {args.family!r}")
    return value


def _slot(args, base: str, slot: int | None):
    """Per-slot value: ``base1``/``base2`` if given, else ``base0``, else ``base``."""
    names = ([f"{base}{slot}"] if slot else []) + [f"{base}0", base]
    for name in names:
        value = getattr(args, name, None)
        if value is not None:
            return value
    flag = f"--{names[0] if slot else base}"
    raise UsageError(f"{flag} is required for family {args.family!r}")


def _phase_fn(args):
    a, b = args.phase_linear, args.phase_quadratic
    return lambda x: a * x + b * x * x


SINGLE_FAMILIES = {
    "su2": lambda a, s: st.su2_coherent(_req(a, "j"), _slot(a, "gamma", s)),
    "su2-parity": lambda a, s: st.su2_parity_coherent(_req(a, "j"), _slot(a, "gamma", s)),
    "nonlinear-su2": lambda a, s: st.nonlinear_su2(_req(a, "j"), _slot(a, "gamma", s), _phase_fn(a)),
    "perelomov": lambda a, s: st.perelomov(_req(a, "k"), _slot(a, "eta", s), a.tail_tol, a.n_max),
    "perelomov-parity": lambda a, s: st.perelomov_parity(_req(a, "k"), _slot(a, "eta", s),
                                                         a.tail_tol, a.n_max),
    "nonlinear-perelomov": lambda a, s: st.nonlinear_perelomov(
        _req(a, "k"), _slot(a, "eta", s), _phase_fn(a), a.tail_tol, a.n_max),
    "bg": lambda a, s: st.barut_girardello(_req(a, "k"), _slot(a, "eta", s), a.tail_tol, a.n_max),
    "bg-parity": lambda a, s: st.bg_parity(_req(a, "k"), _slot(a, "eta", s), a.tail_tol, a.n_max),
    "nonlinear-bg": lambda a, s: st.nonlinear_bg(_req(a, "k"), _slot(a, "eta", s), _phase_fn(a),
                                                 a.tail_tol, a.n_max),
    "binomial": lambda a, s: st.binomial_state(_req(a, "M"), _slot(a, "eta", s), a.tail_tol),
    "negative-binomial": lambda a, s: st.negative_binomial_state(_req(a, "M"), _slot(a, "eta", s),
                                                                 a.tail_tol, a.n_max),
    "squeezed-vacuum": lambda a, s: st.squeezed_vacuum(_slot(a, "eta", s), a.tail_tol, a.n_max),
    "squeezed-first": lambda a, s: st.squeezed_first(_slot(a, "eta", s), a.tail_tol, a.n_max),
    "ho-coherent": lambda a, s: st.ho_coherent(_slot(a, "alpha", s), a.tail_tol, a.n_max),
}


def _su11_family(args) -> str:
    return "BG" if args.su11_family.upper() == "BG" else "P"


ENTANGLED_FAMILIES = {
    "su2-parity": lambda a: ent.entangled_su2_parity(_req(a, "j"), _slot(a, "gamma", 1),
                                                     _slot(a, "gamma", 2)),
    "perelomov-parity": lambda a: ent.entangled_perelomov(_req(a, "k"), _slot(a, "eta", 1),
                                                          _slot(a, "eta", 2), a.tail_tol),
    "bg-parity": lambda a: ent.entangled_bg(_req(a, "k"), _slot(a, "eta", 1), _slot(a, "eta", 2),
                                            a.tail_tol),
    "binomial": lambda a: ent.entangled_binomial(_req(a, "M"), _slot(a, "eta", 1),
                                                 _slot(a, "eta", 2), a.tail_tol),
    "negative-binomial": lambda a: ent.entangled_negative_binomial(
        _req(a, "M"), _slot(a, "eta", 1), _slot(a, "eta", 2), a.tail_tol),
    "ho-coherent": lambda a: ent.entangled_ho_coherent(_slot(a, "alpha", 1), _slot(a, "alpha", 2),
                                                       a.tail_tol),
    "squeezed-vacuum": lambda a: ent.entangled_squeezed(_slot(a, "eta", 1), _slot(a, "eta", 2),
                                                        "vacuum", a.tail_tol),
    "squeezed-first": lambda a: ent.entangled_squeezed(_slot(a, "eta", 1), _slot(a, "eta", 2),
                                                       "first", a.tail_tol),
    "su2-cat": lambda a: dyn.cat_template_su2(_req(a, "j"), _slot(a, "gamma", 1),
                                              _slot(a, "gamma", 2)),
    "su11-cat": lambda a: dyn.cat_template_su11(_req(a, "k"), _slot(a, "eta", 1),
                                                _slot(a, "eta", 2), _su11_family(a), a.tail_tol),
}


def _unit(v: np.ndarray):
    n = np.linalg.norm(v)
    return (v / n, n) if n > 1e-300 else (v, 0.0)


def _two_term(args):
    """``(mu, a, b, nu, c, d)`` amplitude vectors of the named state written as
    ``mu |a>|b> + nu |c>|d>`` (unnormalized weights; unit vectors)."""
    fam = args.family

    def make(family, x, tol=args.tail_tol):
        ns = argparse.Namespace(**vars(args))
        ns.family = family
        for base in ("gamma", "eta", "alpha"):
            for suffix in ("", "0", "1", "2"):
                setattr(ns, base + suffix, None)
        setattr(ns, {"su2": "gamma", "ho-coherent": "alpha"}.get(family, "eta"), x)
        ns.tail_tol = tol
        return SINGLE_FAMILIES[family](ns, None)

    if fam in ("su2-parity", "perelomov-parity", "bg-parity", "squeezed-vacuum", "squeezed-first"):
        base = {"su2-parity": "su2", "perelomov-parity": "perelomov", "bg-parity": "bg"}.get(fam, fam)
        key = "gamma" if fam == "su2-parity" else "eta"
        x1, x2 = _slot(args, key, 1), _slot(args, key, 2)
        w_minus, w_plus = (ent._EM, ent._EP) if fam == "su2-parity" else (ent._EP, ent._EM)
        vecs = [make(base, -1j * x1), make(base, -1j * x2), make(base, 1j * x1), make(base, 1j * x2)]
        dim1 = max(vecs[0].dim, vecs[2].dim)
        dim2 = max(vecs[1].dim, vecs[3].dim)
        a, c = (_pad(v, dim1) for v in (vecs[0], vecs[2]))
        b, d = (_pad(v, dim2) for v in (vecs[1], vecs[3]))
        return w_minus, a, b, w_plus, c, d
    if fam in ("binomial", "negative-binomial", "ho-coherent"):
        key = "alpha" if fam == "ho-coherent" else "eta"
        x1, x2 = _slot(args, key, 1), _slot(args, key, 2)
        p1, m1, p2, m2 = make(fam, x1), make(fam, -x1), make(fam, x2), make(fam, -x2)
        d1 = max(p1.dim, m1.dim)
        d2 = max(p2.dim, m2.dim)
        even, mu = _unit(_pad(p1, d1) + _pad(m1, d1))
        odd, nu = _unit(_pad(p1, d1) - _pad(m1, d1))
        return mu, even, _pad(p2, d2), nu, odd, _pad(m2, d2)
    return None


def _pad(s: StateVector, dim: int) -> np.ndarray:
    out = np.zeros(dim, dtype=complex)
    out[:s.dim] = s.amplitudes
    return out


def closed_bell(args):
    """Bell value by the closed formula where one exists (symmetric SU(2) and
    Perelomov parity states), otherwise from the two-term overlap formula."""
    fam = args.family
    sym = lambda key: getattr(args, key + "1") is None and getattr(args, key + "2") is None
    if fam == "su2-parity" and sym("gamma"):
        return ms.bell_closed_su2(args.j, _slot(args, "gamma", 0))
    if fam == "perelomov-parity" and sym("eta"):
        return ms.bell_closed_su11(args.k, _slot(args, "eta", 0))
    terms = _two_term(args)
    if terms is None:
        return None
    mu, a, b, nu, c, d = terms
    lam = ms.two_term_lambdas(mu, nu, np.vdot(a, c), np.vdot(b, d))
    return ms.bell_from_lambdas(*lam)


def closed_lambdas(args):
    fam = args.family
    if fam == "su2-parity":
        return ms.lambda_closed_su2(args.j, _slot(args, "gamma", 0))
    return ms.lambda_closed_su11(args.k, _slot(args, "eta", 0))


# -- commands ---------------------------------------------------------------------

def cmd_state(args) -> int:
    state = SINGLE_FAMILIES[args.family](args, None)
    cols, rows = state_table(state)
    emit(render(cols, rows, args.format), args)
    return EXIT_OK


def cmd_entangle(args) -> int:
    state = ENTANGLED_FAMILIES[args.family](args)
    cols, rows = state_table(state)
    emit(render(cols, rows, args.format), args)
    return EXIT_OK


def _load_coeffs(path: str) -> BipartiteState:
    """Read an ``entangle`` CSV table back into a bipartite state."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    data = np.atleast_1d(data)
    try:
        n1, n2 = data["n1"].astype(int), data["n2"].astype(int)
        vals = data["re"] + 1j * data["im"]
    except ValueError as exc:
        raise UsageError(f"{path}: expected columns n1,n2,re,im") from exc
    c = np.zeros((n1.max() + 1, n2.max() + 1), dtype=complex)
    c[n1, n2] = vals
    label = st.IrrepLabel.fock()
    return BipartiteState(label, label, c, "input", {"path": path})


def measure_record(args) -> dict:
    if args.input:
        state = _load_coeffs(args.input)
        closed = None
    else:
        if args.family not in ENTANGLED_FAMILIES:
            raise UsageError(f"unknown family {args.family!r}")
        state = ENTANGLED_FAMILIES[args.family](args)
        closed = closed_bell(args)
    report = ms.measure(state)
    if report.bell_B is None:
        rank = int(np.sum(report.schmidt_coeffs > ms.RANK_TOL))
        raise SchmidtRankError(f"Schmidt rank {rank} > 2: Bell value undefined")
    rec = report.as_dict()
    if closed is None:
        # no closed form: fall back to the eigenvalue formula
        w = np.clip(np.linalg.eigvalsh(ms.reduced_density(state, 1)), 0, None)[::-1]
        w = np.concatenate([w, [0.0, 0.0]])
        closed = ms.bell_from_lambdas(w[0], w[1])
    rec["bell_closed"] = closed
    if abs(rec["bell_B"] - closed) >= SWEEP_TOL:
        raise GateError(f"bell_B={rec['bell_B']:.17g} disagrees with bell_closed={closed:.17g}")
    return {k: rec[k] for k in MEASURE_KEYS}


def cmd_measure(args) -> int:
    emit(render_record(measure_record(args), args.format), args)
    return EXIT_OK


def _grid(args):
    if args.steps == 1:
        return [args.start]
    # rounded to 12 significant digits so decimal grids hit their nominal points
    return [float(f"{v:.12g}") for v in np.linspace(args.start, args.stop, args.steps)]


def _sweep_point(args, value):
    ns = argparse.Namespace(**vars(args))
    if args.param in ("gamma0", "eta0"):
        setattr(ns, args.param, complex(value))
    else:
        setattr(ns, args.param, float(value))
    state = ENTANGLED_FAMILIES[ns.family](ns)
    report = ms.measure(state)
    closed = closed_bell(ns)
    lam = closed_lambdas(ns)
    numeric = report.bell_B
    if numeric is None or abs(numeric - closed) >= SWEEP_TOL or abs(report.lambda_plus - lam[0]) >= SWEEP_TOL:
        raise GateError(f"agreement gate failed at {args.param}={value:.17g}: "
                        f"bell_numeric={numeric}, bell_closed={closed:.17g}, "
                        f"lambda_plus={report.lambda_plus:.17g} vs {lam[0]:.17g}")
    return [float(value), lam[0], lam[1], closed, numeric, report.entropy_S1, report.index_Ic]


def cmd_sweep(args) -> int:
    if args.family not in ("su2-parity", "perelomov-parity"):
        raise UsageError("sweep supports families su2-parity and perelomov-parity")
    allowed = {"su2-parity": ("gamma0", "j"), "perelomov-parity": ("eta0", "k")}[args.family]
    if args.param not in allowed:
        raise UsageError(f"--param for {args.family} must be one of {', '.join(allowed)}")
    if args.stop is None:
        args.stop = args.start
    for name in ("gamma1", "gamma2", "eta1", "eta2"):
        setattr(args, name, None)
    grid = _grid(args)
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(lambda v: _sweep_point(args, v), grid))
    else:
        rows = [_sweep_point(args, v) for v in grid]
    emit(render(SWEEP_COLUMNS, rows, args.format, as_array=True), args)
    return EXIT_OK


def _stack(a: np.ndarray, b: np.ndarray):
    if a.shape == b.shape:
        return a, b
    shape = tuple(max(x, y) for x, y in zip(a.shape, b.shape))
    out = []
    for arr in (a, b):
        pad = np.zeros(shape, dtype=complex)
        pad[tuple(slice(0, s) for s in arr.shape)] = arr
        out.append(pad)
    return out


def _hamiltonian(args):
    h = args.hamiltonian
    if h == "rotator":
        return dyn.NumberHamiltonian.su2_rotator(args.omega, args.lam, _req(args, "j"))
    if h == "kerr":
        return dyn.NumberHamiltonian.kerr_oscillator(args.omega, args.lam, _req(args, "k"))
    if h == "bipartite":
        return dyn.NumberHamiltonian.bipartite(args.c1, args.c2, args.c3)
    return dyn.NumberHamiltonian.cross_kerr(args.chi)


def identity_target(args, initial):
    name = args.assert_identity
    fam = args.family
    if name == "parity":
        if args.hamiltonian == "rotator":
            return dyn.rotator_target(args.j, _slot(args, "gamma", None), args.omega, args.lam)
        if args.hamiltonian == "kerr":
            return dyn.kerr_oscillator_target(initial, args.omega, args.lam)
        raise UsageError("identity 'parity' needs the rotator or kerr Hamiltonian")
    if args.hamiltonian not in ("bipartite", "kerr-cross"):
        raise UsageError(f"identity {name!r} needs a two-particle Hamiltonian")
    if name == "entangled-su2":
        if fam != "su2":
            raise UsageError("identity 'entangled-su2' starts from su2 coherent states")
        if int(round(2 * args.j)) % 2:
            raise DomainError(f"identity 'entangled-su2' holds for integer j only, got {args.j:g}")
        return ent.entangled_su2_parity(args.j, 1j * _slot(args, "gamma", 1),
                                        1j * _slot(args, "gamma", 2))
    if name == "entangled-su11":
        builders = {"perelomov": ent.entangled_perelomov, "bg": ent.entangled_bg}
        if fam not in builders:
            raise UsageError("identity 'entangled-su11' starts from perelomov or bg states")
        return builders[fam](args.k, -1j * _slot(args, "eta", 1), -1j * _slot(args, "eta", 2),
                             args.tail_tol)
    if name in ("entangled-binomial", "entangled-negative-binomial"):
        want = name.removeprefix("entangled-")
        if fam != want:
            raise UsageError(f"identity {name!r} starts from {want} states")
        maker = ent.entangled_binomial if want == "binomial" else ent.entangled_negative_binomial
        return maker(args.M, _slot(args, "eta", 1), _slot(args, "eta", 2), args.tail_tol)
    if name == "cat":
        if fam == "su2":
            return dyn.cat_template_su2(args.j, _slot(args, "gamma", 1), _slot(args, "gamma", 2))
        if fam in ("perelomov", "bg"):
            return dyn.cat_template_su11(args.k, _slot(args, "eta", 1), _slot(args, "eta", 2),
                                         "P" if fam == "perelomov" else "BG", args.tail_tol)
        raise UsageError("identity 'cat' starts from su2, perelomov or bg states")
    raise UsageError(f"unknown identity {name!r}")


def cmd_evolve(args) -> int:
    if args.family not in SINGLE_FAMILIES:
        raise UsageError(f"unknown initial family {args.family!r}")
    ham = _hamiltonian(args)
    build = SINGLE_FAMILIES[args.family]
    if ham.kind in dyn.PAIR:
        initial = ent.product(build(args, 1), build(args, 2))
    else:
        initial = build(args, None)
    t = args.t if args.t is not None else (1.0 if ham.kind == "kerr_cross" else 0.0)
    out = dyn.evolve(initial, ham, t)
    cols, rows = state_table(out)
    emit(render(cols, rows, args.format), args)
    if args.assert_identity:
        target = identity_target(args, initial)
        a, b = _stack(np.asarray(getattr(out, "coeffs", getattr(out, "amplitudes", None))),
                      np.asarray(getattr(target, "coeffs", getattr(target, "amplitudes", None))))
        fid = float(abs(np.vdot(b, a)) ** 2)
        ok = 1 - fid < IDENTITY_TOL
        sys.stderr.write(f"identity {args.assert_identity}: fidelity={fid:.17g} "
                         f"{'PASS' if ok else 'FAIL'}\n")
        if not ok:
            raise GateError(f"identity {args.assert_identity} failed: 1 - fidelity = {1 - fid:.3e}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all()
    out = io.StringIO()
    failed = 0
    for suite in results:
        out.write(f"{suite.name}: {suite.passed}/{suite.total} passed\n")
        for msg in suite.failures:
            out.write(f"  FAIL {msg}\n")
        failed += suite.total - suite.passed
    out.write("selftest: " + ("all suites passed" if failed == 0 else f"{failed} checks failed") + "\n")
    emit(out.getvalue(), args)
    return EXIT_OK if failed == 0 else EXIT_GATE


# -- parser and config ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; flags override its entries")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="output path (default stdout)")


def _params(p: argparse.ArgumentParser, families) -> None:
    p.add_argument("--family", choices=sorted(families))
    p.add_argument("--j", type=parse_real, help="spin (half-integer)")
    p.add_argument("--k", type=parse_real, help="Bargmann index")
    p.add_argument("--M", type=int, help="binomial / negative-binomial order")
    for base in ("gamma", "eta", "alpha"):
        for suffix in ("", "0", "1", "2"):
            p.add_argument(f"--{base}{suffix}", type=parse_complex)
    p.add_argument("--tail-tol", type=parse_tail_tol)
    p.add_argument("--n-max", type=int, help="fixed truncation instead of the tail rule")
    p.add_argument("--phase-linear", type=parse_real, default=math.pi,
                   help="nonlinear families: phase function a x + b x^2, this is a")
    p.add_argument("--phase-quadratic", type=parse_real, default=0.0, help="... and this is b")
    p.add_argument("--su11-family", default="P", choices=("P", "BG", "p", "bg"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liealg", description="SU(2) / SU(1,1) coherent-state numerics")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("state", help="single-particle state amplitudes")
    _common(p)
    _params(p, SINGLE_FAMILIES)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("entangle", help="two-particle state coefficients")
    _common(p)
    _params(p, ENTANGLED_FAMILIES)
    p.set_defaults(func=cmd_entangle)

    p = sub.add_parser("evolve", help="evolve a state under a number-diagonal Hamiltonian")
    _common(p)
    _params(p, SINGLE_FAMILIES)
    p.add_argument("--hamiltonian", choices=("rotator", "kerr", "bipartite", "kerr-cross"))
    p.add_argument("--omega", type=parse_real, default=0.0)
    p.add_argument("--lam", type=parse_real, default=1.0)
    p.add_argument("--c1", type=parse_real, default=0.0)
    p.add_argument("--c2", type=parse_real, default=0.0)
    p.add_argument("--c3", type=parse_real, default=0.0)
    p.add_argument("--chi", type=parse_real, default=0.0)
    p.add_argument("--t", type=parse_real,
                   help="evolution time (default 0; 1 for kerr-cross, so the gate is exp(-i chi n1 n2))")
    p.add_argument("--assert-identity", choices=("parity", "entangled-su2", "entangled-su11",
                                                 "entangled-binomial", "entangled-negative-binomial",
                                                 "cat"))
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("measure", help="entanglement measures of a two-particle state")
    _common(p)
    _params(p, ENTANGLED_FAMILIES)
    p.add_argument("--input", help="CSV written by 'entangle' (overrides --family)")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="measures over a parameter grid")
    _common(p)
    _params(p, ("su2-parity", "perelomov-parity"))
    p.add_argument("--param", choices=("gamma0", "eta0", "j", "k"))
    p.add_argument("--start", type=parse_real)
    p.add_argument("--stop", type=parse_real)
    p.add_argument("--steps", type=parse_steps, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the built-in invariant and oracle suites")
    _common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def read_config(path: str) -> dict:
    entries = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key.replace("-", "_")] = value
    return entries


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError(parser.format_usage().strip())
    if args.config:
        entries = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config", "func")}
        unknown = sorted(set(entries) - set(actions))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        from_config = [args.command]
        for key, value in entries.items():
            flag = next(o for o in actions[key].option_strings if o.startswith("--"))
            from_config += [flag, value]
        # later occurrences win, so command-line flags override the file
        args = parser.parse_args(from_config + argv[argv.index(args.command) + 1:])
    return args


def _check_required(args) -> None:
    if args.command in ("state", "entangle", "evolve", "measure", "sweep"):
        if args.family is None and not getattr(args, "input", None):
            raise UsageError("--family is required")
    if args.command == "evolve" and args.hamiltonian is None:
        raise UsageError("--hamiltonian is required")
    if args.command == "sweep" and (args.param is None or args.start is None):
        raise UsageError("--param and --start are required")
    if args.command == "sweep" and args.jobs < 1:
        raise UsageError("--jobs must be >= 1")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        _check_required(args)
        if args.command != "selftest":
            try:
                st.default_tail_tol()
            except LieAlgError as exc:
                raise UsageError(str(exc)) from None
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (GateError, IdentityError) as exc:
        sys.stderr.write(f"gate failure: {exc}\n")
        return EXIT_GATE
    except SchmidtRankError as exc:
        sys.stderr.write(f"rank error: {exc}\n")
        return EXIT_RANK
    except LieAlgError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
