"""Mini-language: grammar, errors, deterministic rendering."""

import pytest

from qpskit import foldy_generators, parse_expr, render_expr
from qpskit.parser import ExprSyntaxError, UnknownSymbolError

P = parse_expr


def test_defining_relation():
    assert P("Q1*P1 - P1*Q1") == P("i*hbar")


def test_whitespace_insensitive():
    assert P(" Q1 * P1\t-P1*  Q1 ") == P("Q1*P1-P1*Q1")


def test_omega_relation():
    assert P("omega^2 - P1^2 - P2^2 - P3^2") == P("m^2")


def test_bracket_sugar_with_bindings(foldy):
    bindings = dict(foldy.items())
    out = P("[J1, K2]", bindings)
    assert out == P("i*hbar", bindings) * foldy["K3"]


def test_precedence_and_unary():
    assert P("-2*Q1 + 3*Q1") == P("Q1")
    assert P("2+3*4") == P("14")
    assert P("(2+3)*4") == P("20")
    assert P("2*Q1^2") == P("2*(Q1*Q1)")
    assert P("--Q1") == P("Q1")


def test_power_forms():
    assert P("omega^-1 * omega") == P("1")
    assert P("Q1**2") == P("Q1^2")


def test_division_by_scalars():
    assert P("S1/(omega+m)") == P("S1*(omega+m)^-1")
    assert P("1/2 * hbar") == P("hbar/2")


def test_unknown_symbol_error_position():
    with pytest.raises(UnknownSymbolError) as err:
        P("Q1 + foo*P2")
    assert err.value.pos == 5


def test_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as err:
        P("Q1 + * P2")
    assert err.value.pos == 5
    with pytest.raises(ExprSyntaxError):
        P("(Q1 + P2")
    with pytest.raises(ExprSyntaxError):
        P("[Q1; P2]")
    with pytest.raises(ExprSyntaxError):
        P("Q1 P2")          # implicit multiplication is not part of the grammar
    with pytest.raises(ExprSyntaxError):
        P("Q1^x")


def test_render_roundtrip_fixed_cases():
    cases = [
        "Q1*P1 - P1*Q1",
        "t*P1 - (Q1*Lam*omega + Lam*omega*Q1)/2",
        "Lam*S2*P3/(omega+m)",
        "(1+2*i)*Q2^2*S1*S3 - hbar^3*Lam",
        "omega^-1",
        "m^2 - omega^2 + P1^2 + P2^2 + P3^2",
        "0",
    ]
    for text in cases:
        e = P(text)
        assert P(render_expr(e)) == e


def test_render_deterministic(foldy):
    k = foldy["K2"]
    assert render_expr(k) == render_expr(foldy["K2"])
    # zero renders as 0
    assert render_expr(P("Q1 - Q1")) == "0"
