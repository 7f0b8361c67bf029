"""Command-line front end: values, coefficient tables and the verification suite."""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import asdict, dataclass

from .carlitz import a_table, delta_handle, delta_on_carlitz
from .errors import CarlitzError, DepthExceeded, ReduciblePolynomial
from .field_tower import FqConfig, is_prime
from .local_series import LocalSeries
from .place import embed_poly, make_place
from .polylog import PolylogSet, build_polylogs
from .zeta import Defect, ZetaEvaluator

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BAD_PI = 3
EXIT_BAD_BRANCH = 4
EXIT_DEPTH = 5


class UsageError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    p: int = 2
    upsilon: int = 1
    pi: tuple = (0, 1)
    prec: int = 64
    guard: int = 40
    imax: int = 14
    nmax: int = 4
    branch: tuple | None = None
    seed: int = 0
    fmt: str = "json"

    @property
    def q(self) -> int:
        return self.p**self.upsilon

    @property
    def working_prec(self) -> int:
        return self.prec + self.guard

    def validate(self) -> RunConfig:
        if not is_prime(self.p):
            raise UsageError(f"p = {self.p} is not prime")
        if self.upsilon < 1:
            raise UsageError("upsilon must be >= 1")
        if self.prec < 8 or self.guard < 0:
            raise UsageError("need prec >= 8 and guard >= 0")
        if self.nmax < 1:
            raise UsageError("nmax must be >= 1")
        if len(self.pi) < 2 or any(not 0 <= c < self.q for c in self.pi):
            raise UsageError(f"pi coefficients must be F_{self.q} encodings in [0, {self.q})", EXIT_BAD_PI)
        if self.imax <= len(self.pi) - 1:
            raise UsageError("imax must exceed deg(pi)")
        if self.branch is not None:
            if len(self.branch) != len(self.pi) - 1 or any(not 0 <= b < self.q for b in self.branch):
                raise UsageError(f"branch needs {len(self.pi) - 1} entries in [0, {self.q})", EXIT_BAD_BRANCH)
        return self

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("fmt")
        d["pi"] = list(self.pi)
        d["branch"] = list(self.branch) if self.branch is not None else [0] * (len(self.pi) - 1)
        d["q"] = self.q
        return d


class Session:
    """Lazily built place, polylogarithms and zeta evaluator for one RunConfig."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        try:
            base = make_place(FqConfig(cfg.p, cfg.upsilon), list(cfg.pi), cfg.working_prec)
        except ReduciblePolynomial as exc:
            raise UsageError(str(exc), EXIT_BAD_PI) from exc
        self.polylogs: PolylogSet = build_polylogs(base, cfg.nmax, cfg.imax, cfg.branch)
        self.place = self.polylogs.place
        self._zeta = None

    @property
    def zeta(self) -> ZetaEvaluator:
        if self._zeta is None:
            if not self.place.is_x:
                raise UsageError("zeta needs pi = x", EXIT_BAD_PI)
            self._zeta = ZetaEvaluator(self.polylogs, floor=self.cfg.prec)
        return self._zeta

    def out(self, s: LocalSeries) -> dict:
        """Report a value at the user precision N, over the smallest field holding its digits."""
        return s.cap(self.cfg.prec).minimal(self.place.field.levels).to_json()

    def header(self) -> dict:
        return {"config": self.cfg.to_json(), "tower": self.place.field.defining_polynomials()}


# -- argument parsing -----------------------------------------------------------------


def parse_coeff(text: str, p: int) -> int:
    """An F_q element: an integer encoding, or base-p coordinates joined by ':'."""
    if ":" in text:
        return sum(int(c) * p**k for k, c in enumerate(text.split(":")))
    return int(text)


def parse_int_list(text: str, p: int) -> tuple:
    return tuple(parse_coeff(c.strip(), p) for c in text.split(","))


_TERM = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(-?\d+))?)?$")


def parse_poly(text: str, q: int) -> dict[int, int]:
    """'1+x+2*x^3', 'x^-2+x', '0' -> {exponent: coefficient mod q}."""
    out: dict[int, int] = {}
    text = text.replace(" ", "")
    if not text:
        raise UsageError("empty expression")
    for term in text.split("+"):
        m = _TERM.match(term)
        if not term or not m or (m.group(1) is None and m.group(2) is None):
            raise UsageError(f"cannot parse term {term!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if c >= q:
            raise UsageError(f"coefficient {c} is not an F_{q} encoding")
        k = 0 if m.group(2) is None else int(m.group(3)) if m.group(3) is not None else 1
        if c:
            out[k] = c if k not in out else _fq_add(out[k], c, q)
    return {k: c for k, c in out.items() if c}


def _fq_add(a: int, b: int, q: int) -> int:
    # digitwise addition in base p of the encodings; p is recovered from q
    p = next(d for d in range(2, q + 1) if q % d == 0)
    r, k = 0, 1
    while a or b:
        r += ((a % p + b % p) % p) * k
        a, b, k = a // p, b // p, k * p
    return r


def series_from_poly(sess: Session, terms: dict[int, int], need_base: bool) -> LocalSeries:
    place = sess.place
    if not terms:
        return place.zero()
    if need_base or place.is_x:
        lo = min(terms)
        digits = [terms.get(k, 0) for k in range(lo, max(terms) + 1)]
        return LocalSeries.from_ints(place.field.fq_level, digits, lo, place.prec + max(lo, 0))
    if min(terms) < 0:
        raise UsageError("negative powers of x are outside O_pi")
    poly = [terms.get(k, 0) for k in range(max(terms) + 1)]
    return embed_poly(place, poly)


# -- the verification suite ---------------------------------------------------------------


def _rand_series(sess: Session, rng: random.Random, start: int, n: int, base: bool = False) -> LocalSeries:
    place = sess.place
    level = place.field.fq_level if base else place.residue_level
    digits = [level.random_element(rng) for _ in range(n)]
    return LocalSeries.from_elements(digits, start, place.prec, level, place.delta)


def check_valuations(sess: Session) -> dict:
    place = sess.place
    d = place.delta
    rows = []
    ok = True
    for n in range(1, 13):
        vb, vL = place.bracket(n).val, place.L_factorial(n).val
        eb, eL = (1 if n % d == 0 else 0), n // d
        rows.append({"n": n, "v_bracket": vb, "v_L": vL})
        ok &= vb == eb and vL == eL
    return {"ok": ok, "rows": rows}


def check_decay(sess: Session) -> dict:
    u = sess.polylogs.l(1)
    q, d = sess.place.q, sess.place.delta
    rows = []
    for n in range(d + 1, u.i_max + 1):
        c = u.coeffs[n]
        # a coefficient that vanishes to its precision cannot witness a larger bound
        rows.append({"n": n, "v": c.val, "bound": q ** (n - d), "ok": c.val >= min(q ** (n - d), c.prec)})
    return {"ok": all(r["ok"] for r in rows), "rows": rows}


def check_defining_identity(sess: Session, rng: random.Random, count: int = 4) -> dict:
    """(Delta l_1)(t) - (Delta l_1)(t)^q = t^q."""
    place = sess.place
    D = delta_handle(place, sess.polylogs.handle(1))
    out = []
    for _ in range(count):
        t = _rand_series(sess, rng, 0, 16)
        w = D(t)
        diff = w - w.q_power(1, cap=w.prec) - t.q_power(1, cap=place.prec)
        out.append(Defect.of(diff, sess.cfg.prec).to_json())
    return {"ok": all(r["ok"] for r in out), "defects": out}


def check_small_disk(sess: Session, rng: random.Random) -> dict:
    pl = sess.polylogs
    out = []
    for n in range(1, pl.n_max + 1):
        t = _rand_series(sess, rng, 1, 16)
        diff = pl.l(n)(t) - pl.series[n - 1](t)
        out.append({"n": n, **Defect.of(diff, sess.cfg.prec).to_json()})
    return {"ok": all(r["ok"] for r in out), "defects": out}


def check_chain(sess: Session) -> dict:
    pl = sess.polylogs
    out = []
    for n in range(2, pl.n_max + 1):
        b = delta_on_carlitz(pl.l(n)).coeffs
        a = pl.l(n - 1).coeffs
        v = min((b[i] - a[i]).val for i in range(len(b)))
        prec = min((b[i] - a[i]).prec for i in range(len(b)))
        out.append({"n": n, "valuation": v, "ok": v >= min(sess.cfg.prec, prec)})
    return {"ok": all(r["ok"] for r in out), "rows": out}


def _monotone(pair: list[Defect]) -> dict:
    lo, hi = pair
    ok = lo.ok and hi.ok and hi.valuation >= lo.valuation
    return {"ok": ok, "defects": [d.to_json() for d in pair]}


def check_expansion(sess: Session, rng: random.Random, n: int | None, i_cut: int) -> dict:
    ev = sess.zeta
    ns = [n] if n else list(range(1, sess.polylogs.n_max + 1))
    t = _rand_series(sess, rng, 0, 24, base=True)
    rows = []
    for m in ns:
        pair = [ev.verify_expansion(m, t, c) for c in (max(i_cut // 2, 1), i_cut)]
        rows.append({"n": m, "i_cut": [max(i_cut // 2, 1), i_cut], **_monotone(pair)})
    return {"ok": all(r["ok"] for r in rows), "t": sess.out(t), "rows": rows}


def check_c_identity(sess: Session, n: int | None, i_max: int = 4) -> dict:
    ev = sess.zeta
    ns = [n] if n else list(range(1, sess.polylogs.n_max + 1))
    rows = []
    for m in ns:
        for i in range(1, i_max + 1):
            r = ev.verify_c_identity(i, m)
            rows.append({"i": i, "n": m, **{k: v.to_json() for k, v in r.items()}})
    ok = all(r["expansion"]["ok"] and r["pointwise"]["ok"] for r in rows)
    return {"ok": ok, "rows": rows}


def check_functional(sess: Session, n: int | None, i_cut: int) -> dict:
    ev = sess.zeta
    ns = [n] if n else [1, 2]
    rows = []
    for m in ns:
        cuts = [max(i_cut // 2, 1), i_cut]
        pair = [ev.verify_functional_equation(m, c) for c in cuts]
        rows.append({"n": m, "i_cut": cuts, **_monotone(pair)})
    return {"ok": all(r["ok"] for r in rows), "rows": rows}


def check_euler(sess: Session) -> dict:
    ev = sess.zeta
    rows = []
    for i in (2, 3):
        r = ev.euler_report(i)
        rows.append({k: v.to_json() if isinstance(v, Defect) else v for k, v in r.items()})
    ok = all(r["product_vs_direct_sum"]["ok"] for r in rows)
    return {"ok": ok, "rows": rows}


def run_verify(sess: Session, eq: str, n: int | None, i_cut: int | None) -> dict:
    rng = random.Random(sess.cfg.seed)
    general = {
        "valuations": lambda: check_valuations(sess),
        "decay": lambda: check_decay(sess),
        "identity": lambda: check_defining_identity(sess, rng),
        "small_disk": lambda: check_small_disk(sess, rng),
        "chain": lambda: check_chain(sess),
    }
    at_x = {
        "expansion": lambda: check_expansion(sess, rng, n, i_cut or 10),
        "c_identity": lambda: check_c_identity(sess, n),
        "functional": lambda: check_functional(sess, n, i_cut or 6),
        "euler": lambda: check_euler(sess),
    }
    if eq == "all":
        chosen = dict(general)
        if sess.place.is_x:
            chosen.update(at_x)
    elif eq in general:
        chosen = {eq: general[eq]}
    else:
        chosen = {eq: at_x[eq]}
    # checks run in a fixed order so the report is reproducible
    results = {name: fn() for name, fn in chosen.items()}
    return {"ok": all(r["ok"] for r in results.values()), "checks": results}


# -- subcommands -------------------------------------------------------------------------


def cmd_polylog(sess: Session, args) -> tuple[dict, int]:
    n = args.n
    if not 1 <= n <= sess.polylogs.n_max:
        raise UsageError(f"n must lie in [1, {sess.polylogs.n_max}]", EXIT_DEPTH)
    t = series_from_poly(sess, parse_poly(args.t, sess.cfg.q), need_base=False)
    if not t.is_zero() and t.val < 0:
        raise UsageError("t must lie in O_pi")
    res = {"n": n, "t": sess.out(t), "value": sess.out(sess.polylogs.l(n)(t))}
    if t.is_zero() or t.val >= 1:
        res["series_value"] = sess.out(sess.polylogs.series[n - 1](t))
    return res, EXIT_OK


def cmd_zeta(sess: Session, args) -> tuple[dict, int]:
    t = series_from_poly(sess, parse_poly(args.t, sess.cfg.q), need_base=True)
    return {"t": sess.out(t), "value": sess.out(sess.zeta.zeta(t))}, EXIT_OK


def cmd_coeffs(sess: Session, args) -> tuple[dict, int]:
    place = sess.place
    res: dict = {}
    if args.A:
        tab = a_table(place, args.A)
        res["A"] = {str(n): {str(r): sess.out(v) for r, v in row.items()} for n, row in tab.items()}
    if args.D is not None:
        res["D"] = {str(i): sess.out(place.D_factorial(i)) for i in range(args.D + 1)}
    if args.L is not None:
        res["L"] = {str(i): sess.out(place.L_factorial(i)) for i in range(args.L + 1)}
    if args.c is not None:
        if not 1 <= args.c <= sess.polylogs.n_max:
            raise UsageError(f"c needs n in [1, {sess.polylogs.n_max}]", EXIT_DEPTH)
        res["c"] = {str(i): sess.out(c) for i, c in enumerate(sess.polylogs.l(args.c).coeffs)}
    if not res:
        raise UsageError("choose at least one of --A, --D, --L, --c")
    return res, EXIT_OK


def cmd_verify(sess: Session, args) -> tuple[dict, int]:
    if args.n is not None and not 1 <= args.n <= sess.polylogs.n_max:
        raise UsageError(f"n must lie in [1, {sess.polylogs.n_max}]", EXIT_DEPTH)
    res = run_verify(sess, args.eq, args.n, args.i_cut)
    return res, EXIT_OK if res["ok"] else EXIT_FAILED


def cmd_table(sess: Session, args) -> tuple[dict, int]:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", args.zeta_range)
    if not m:
        raise UsageError("--zeta-range expects a..b")
    a, b = int(m.group(1)), int(m.group(2))
    ev = sess.zeta
    rows = {str(k): sess.out(ev.zeta_x_power(k)) for k in range(a, b + 1)}
    return {"zeta_x_power": rows}, EXIT_OK


COMMANDS = {"polylog": cmd_polylog, "zeta": cmd_zeta, "coeffs": cmd_coeffs, "verify": cmd_verify, "table": cmd_table}

VERIFY_CHOICES = ["valuations", "decay", "identity", "small_disk", "chain", "expansion", "c_identity", "functional", "euler", "all"]


def _global_flags(ap: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    ap.add_argument("--p", type=int, default=d(2), help="characteristic")
    ap.add_argument("--upsilon", type=int, default=d(1), help="q = p^upsilon")
    ap.add_argument("--pi", default=d("0,1"), help="monic pi, constant first; entries are F_q encodings or ':'-joined coords")
    ap.add_argument("--prec", type=int, default=d(64), help="reported absolute precision N")
    ap.add_argument("--guard", type=int, default=d(40), help="extra working digits")
    ap.add_argument("--imax", type=int, default=d(14))
    ap.add_argument("--nmax", type=int, default=d(4))
    ap.add_argument("--branch", default=d(None), help="root indices for c_1..c_delta, comma separated")
    ap.add_argument("--seed", type=int, default=d(0), help="seed for the random test arguments of verify")
    ap.add_argument("--format", dest="fmt", choices=["json", "text"], default=d("json"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="carlitz-zeta", description=__doc__)
    _global_flags(ap, suppress=False)
    # global flags are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("polylog", parents=[common], help="l_n(t)")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--t", required=True)

    s = sub.add_parser("zeta", parents=[common], help="zeta(t) on K_x")
    s.add_argument("--t", required=True)

    s = sub.add_parser("coeffs", parents=[common], help="A_{n,r}, D_i, L_i and Carlitz coefficients")
    s.add_argument("--A", type=int, default=0, metavar="K")
    s.add_argument("--D", type=int, default=None, metavar="K")
    s.add_argument("--L", type=int, default=None, metavar="K")
    s.add_argument("--c", type=int, default=None, metavar="N", help="coefficients of l_N")

    s = sub.add_parser("verify", parents=[common], help="run identity checks")
    s.add_argument("--eq", choices=VERIFY_CHOICES, default="all")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--i-cut", dest="i_cut", type=int, default=None)

    s = sub.add_parser("table", parents=[common], help="zeta(x^m) for a range of m")
    s.add_argument("--zeta-range", dest="zeta_range", required=True)
    return ap


def config_from_args(args) -> RunConfig:
    try:
        pi = parse_int_list(args.pi, args.p)
        branch = parse_int_list(args.branch, args.p) if args.branch else None
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list: {exc}") from exc
    return RunConfig(args.p, args.upsilon, pi, args.prec, args.guard, args.imax, args.nmax, branch, args.seed, args.fmt).validate()


def render_text(obj, p: int, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if _is_series(obj):
        return [pad + format_series_json(obj, p)]
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_series(v):
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, p, indent + 1))
            else:
                lines.append(f"{pad}{k}: {format_series_json(v, p) if _is_series(v) else json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            sub = render_text(v, p, indent + 1)
            lines.append(pad + "-" + (" " + sub[0].strip() if sub else ""))
            lines.extend(sub[1:])
    else:
        lines.append(pad + json.dumps(obj))
    return lines


def _is_series(v) -> bool:
    return isinstance(v, dict) and {"valuation", "precision", "digits", "level"} <= v.keys()


def format_series_json(s: dict, p: int) -> str:
    """'1 + 2T^3 + O(T^64)' from the JSON form; digits print as integer encodings."""
    terms = []
    for k, row in enumerate(s["digits"]):
        if not any(row):
            continue
        e = s["valuation"] + k
        c = str(sum(int(a) * p**k for k, a in enumerate(row)))
        mono = "" if e == 0 else "T" if e == 1 else f"T^{e}"
        terms.append(c if not mono else mono if c == "1" else f"{c}*{mono}")
    terms.append(f"O(T^{s['precision']})")
    return " + ".join(terms)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
        sess = Session(cfg)
        payload, code = COMMANDS[args.command](sess, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DepthExceeded as exc:
        print(f"error: polylog depth exceeded; {exc}", file=sys.stderr)
        return EXIT_DEPTH
    except CarlitzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {**sess.header(), "command": args.command, "result": payload}
    if cfg.fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=1))
    else:
        print("\n".join(render_text(report, cfg.p)))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
