import sympy
from hypothesis import HealthCheck, settings

from tetra.exactalg import RationalFunction

settings.register_profile(
    "tetra", max_examples=60, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("tetra")


def to_sympy(expr) -> sympy.Expr:
    """Independent oracle: rebuild a RationalFunction in sympy from its rendering."""
    if isinstance(expr, RationalFunction):
        expr = expr.render()
    return sympy.sympify(str(expr).replace("^", "**").replace("'", "_q").replace("~", "_t"))


def sympy_equal(a, b) -> bool:
    return sympy.simplify(to_sympy(a) - to_sympy(b)) == 0
