"""Command-line interface and polynomial-expression parsing.

Grammar (whitespace insignificant):

    expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := coeff | coeff '*'? var | var
    var   := 'X' ('^' nat)?
    coeff := nat ('/' nat)?

Repeated powers are summed.  Syntax errors carry the character position.

Subcommands write their data (JSON or CSV) to stdout and diagnostics to
stderr.  Exit codes: 0 success (and a strong verdict for `bogomolov`),
10 an inconclusive `bogomolov` verdict, 2 usage or parse errors,
3 precondition violations reported verbatim from the library.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .berkovich import (
    DiscPoint,
    filled_julia_membership,
    max_point,
    seminorm,
    verdict_to_json_dict,
)
from .bogomolov import check_criterion
from .bounds import bound_table, bounds_to_csv, find_crossover
from .heights import canonical_height, survey, survey_to_csv
from .newton import newton_polygon
from .polynomial import RationalPoly
from .valuation import INF, Place, PreconditionError, is_finite, val

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_INCONCLUSIVE = 10


class PolynomialSyntaxError(ValueError):
    """Raised on malformed polynomial expressions; carries the position."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch == "X":
            tokens.append(("var", ch, i))
            i += 1
            continue
        if ch in "+-*/^":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise PolynomialSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise PolynomialSyntaxError("unexpected end of input", len(self.text))
        self.pos += 1
        return tok

    def expect_int(self, what: str) -> int:
        tok = self.peek()
        if tok is None or tok[0] != "int":
            where = tok[2] if tok else len(self.text)
            raise PolynomialSyntaxError(f"expected {what}", where)
        self.take()
        return int(tok[1])

    def parse(self) -> dict[int, Fraction]:
        powers: dict[int, Fraction] = {}
        sign = 1
        tok = self.peek()
        if tok is not None and tok[0] in "+-":
            self.take()
            sign = -1 if tok[0] == "-" else 1
        self._term(powers, sign)
        while (tok := self.peek()) is not None:
            if tok[0] not in "+-":
                raise PolynomialSyntaxError("expected '+' or '-'", tok[2])
            self.take()
            self._term(powers, -1 if tok[0] == "-" else 1)
        return powers

    def _term(self, powers: dict[int, Fraction], sign: int) -> None:
        tok = self.peek()
        if tok is None:
            raise PolynomialSyntaxError("expected a term", len(self.text))
        coeff = Fraction(1)
        have_coeff = False
        if tok[0] == "int":
            self.take()
            num = int(tok[1])
            den = 1
            nxt = self.peek()
            if nxt is not None and nxt[0] == "/":
                self.take()
                den_tok_pos = self.peek()[2] if self.peek() else len(self.text)
                den = self.expect_int("a positive denominator")
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", den_tok_pos)
            coeff = Fraction(num, den)
            have_coeff = True
            nxt = self.peek()
            if nxt is not None and nxt[0] == "*":
                self.take()
                nxt2 = self.peek()
                if nxt2 is None or nxt2[0] != "var":
                    where = nxt2[2] if nxt2 else len(self.text)
                    raise PolynomialSyntaxError("expected 'X' after '*'", where)
        tok = self.peek()
        if tok is not None and tok[0] == "var":
            self.take()
            power = 1
            nxt = self.peek()
            if nxt is not None and nxt[0] == "^":
                self.take()
                power = self.expect_int("a nonnegative integer exponent")
            powers[power] = powers.get(power, Fraction(0)) + sign * coeff
        elif have_coeff:
            powers[0] = powers.get(0, Fraction(0)) + sign * coeff
        else:
            raise PolynomialSyntaxError("expected a coefficient or 'X'", tok[2])


def parse_polynomial(text: str) -> RationalPoly:
    """Parse an expression like 'X^5 + X^2 + X + 1/2' to an exact polynomial."""
    powers = _Parser(text).parse()
    degree = max(powers) if powers else 0
    return RationalPoly(powers.get(i, Fraction(0)) for i in range(degree + 1))


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PolynomialSyntaxError(f"not a rational number: {text!r}", 0) from exc


def _parse_rho(text: str):
    if text.strip().lower() == "inf":
        return INF
    return _parse_rational(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicdyn",
        description="Exact non-archimedean polynomial dynamics toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    np_p = sub.add_parser("np", help="Newton polygon of a polynomial's coefficients")
    np_p.add_argument("poly")
    np_p.add_argument("--prime", type=int, required=True)

    bog = sub.add_parser("bogomolov", help="height-gap slope test on phi(X) - X")
    bog.add_argument("poly")
    bog.add_argument("--prime", type=int, required=True)
    bog.add_argument("--ram", type=int, default=1, help="ramification index e")

    de = sub.add_parser("disc-eval", help="seminorm of a polynomial at a disc point")
    de.add_argument("poly")
    de.add_argument("--center", required=True)
    de.add_argument("--rho", required=True, help="rational, or 'inf' for a classical point")
    de.add_argument("--prime", type=int, required=True)

    mem = sub.add_parser("member", help="filled-Julia membership of a disc point")
    mem.add_argument("poly")
    mem.add_argument("--center", required=True)
    mem.add_argument("--rho", required=True)
    mem.add_argument("--prime", type=int, required=True)
    mem.add_argument("--max-iter", type=int, default=256)

    mp = sub.add_parser("mphi", help="largest bounded disc about a preperiodic point")
    mp.add_argument("poly")
    mp.add_argument("--fixed", required=True, help="preperiodic rational center")
    mp.add_argument("--prime", type=int, required=True)

    hgt = sub.add_parser("height", help="canonical height with local breakdown")
    hgt.add_argument("poly")
    hgt.add_argument("x")
    hgt.add_argument("--eps", type=float, default=1e-8)

    sur = sub.add_parser("survey", help="canonical heights over all small rationals")
    sur.add_argument("poly")
    sur.add_argument("--prime", type=int, required=True)
    sur.add_argument("--max-height", type=float, required=True)
    sur.add_argument("--eps", type=float, default=1e-7)

    bnd = sub.add_parser("bounds", help="height-gap bound comparison table")
    bnd.add_argument("--max-e", type=int, required=True)
    bnd.add_argument("--constant", type=float, default=1.0)

    return parser


def run(argv: list[str]) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return code

    try:
        return _dispatch(args)
    except PolynomialSyntaxError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "np":
        poly = parse_polynomial(args.poly)
        place = Place(args.prime)
        if poly.is_zero:
            raise PreconditionError("degenerate polygon")
        points = [(i, val(poly.coefficient(i), place.p)) for i in range(poly.degree + 1)]
        polygon = newton_polygon(points)
        print(json.dumps(polygon.to_json_dict()))
        return EXIT_OK

    if args.command == "bogomolov":
        poly = parse_polynomial(args.poly)
        cert = check_criterion(poly, Place(args.prime, args.ram))
        print(cert.to_json())
        return EXIT_OK if cert.is_strong else EXIT_INCONCLUSIVE

    if args.command == "disc-eval":
        poly = parse_polynomial(args.poly)
        zeta = DiscPoint(_parse_rational(args.center), _parse_rho(args.rho), args.prime)
        v = seminorm(zeta, poly)
        out = {
            "point": zeta.to_json_dict(),
            "valuation": "inf" if not is_finite(v) else str(v),
            "absolute_value": 0.0 if not is_finite(v) else float(args.prime) ** float(-v),
        }
        print(json.dumps(out))
        return EXIT_OK

    if args.command == "member":
        poly = parse_polynomial(args.poly)
        zeta = DiscPoint(_parse_rational(args.center), _parse_rho(args.rho), args.prime)
        verdict = filled_julia_membership(poly, zeta, args.max_iter)
        print(json.dumps(verdict_to_json_dict(verdict)))
        return EXIT_OK

    if args.command == "mphi":
        poly = parse_polynomial(args.poly)
        result = max_point(poly, _parse_rational(args.fixed), args.prime)
        print(json.dumps(result.to_json_dict()))
        return EXIT_OK

    if args.command == "height":
        poly = parse_polynomial(args.poly)
        res = canonical_height(poly, _parse_rational(args.x), args.eps)
        print(json.dumps(res.to_json_dict()))
        return EXIT_OK

    if args.command == "survey":
        poly = parse_polynomial(args.poly)
        report = survey(poly, args.prime, args.max_height, args.eps)
        sys.stdout.write(survey_to_csv(report))
        print(f"note: {report.disclaimer}", file=sys.stderr)
        if report.min_positive is not None:
            rec = report.min_positive
            print(
                f"smallest nonzero canonical height: {rec.height!r} "
                f"(± {rec.error_bound!r}) at x = {rec.x}",
                file=sys.stderr,
            )
        return EXIT_OK

    if args.command == "bounds":
        rows = bound_table(args.max_e, args.constant)
        sys.stdout.write(bounds_to_csv(rows))
        cross = find_crossover(args.max_e, args.constant)
        if cross is None:
            print(
                f"no crossover up to e = {args.max_e}: the lcm-based bound never "
                "overtakes the factorial-type bound in this range",
                file=sys.stderr,
            )
        else:
            print(
                f"crossover at e = {cross}: the lcm-based bound overtakes the "
                "factorial-type bound from there on",
                file=sys.stderr,
            )
        return EXIT_OK

    raise PreconditionError(f"unknown command {args.command!r}")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
