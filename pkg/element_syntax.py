"""
Textual syntax for contact algebra elements.

Grammar (whitespace ignored)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := power (('*'|'/') power)*
    power   := atom ['^' INT]
    atom    := INT | 'i' | VAR | 'T' | 'E' | 'J'
             | 'mu^' INT '[' expr ']' | '[' expr ',' expr ']' | '(' expr ')'

``VAR`` is z1..zn / zb1..zbn (plain ``z`` / ``zb`` when n = 1). A product of
two polynomial elements is the symmetric product, ``T`` being its unit;
``[X, Y]`` is the Lie bracket. Printing is canonical, so parse(format(X)) == X.
"""

import logging
import re
from typing import List, Optional, Tuple, Union

from exactla import ONE, ContactEngineError, Scalar, as_scalar, format_scalar
from contact import ContactAlgebra, ContactElement, Key, get_contact_algebra

logger = logging.getLogger(__name__)

Value = Union[Scalar, ContactElement]


class ElementSyntaxError(ContactEngineError):
    """Malformed element text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]+\d*)|(?P<op>[-+*/^\[\](),]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_RE.match(text, position)
        if not match:
            offset = position + len(text[position:]) - len(text[position:].lstrip())
            raise _error_at(text, offset, f"unexpected character {text[offset]!r}")
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        position = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _error_at(text: str, offset: int, message: str) -> ElementSyntaxError:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return ElementSyntaxError(message, line, column)


class _Parser:
    def __init__(self, text: str, algebra: ContactAlgebra):
        self.text = text
        self.algebra = algebra
        self.tokens = _tokenize(text)
        self.position = 0
        names = algebra.space.variable_names()
        self.variables = {name: k for k, name in enumerate(names)}
        if algebra.n == 1:
            self.variables.update({"z": 0, "zb": 1})

    # -- token helpers -----------------------------------------------------

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.position]

    def fail(self, message: str, offset: Optional[int] = None) -> ElementSyntaxError:
        return _error_at(self.text, self.current[2] if offset is None else offset, message)

    def accept(self, value: str) -> bool:
        kind, text, _ = self.current
        if kind == "op" and text == value:
            self.position += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            raise self.fail(f"expected {value!r}")

    def expect_int(self) -> int:
        kind, text, _ = self.current
        if kind != "int":
            raise self.fail("expected an integer")
        self.position += 1
        return int(text)

    # -- value arithmetic --------------------------------------------------

    def add(self, a: Value, b: Value, offset: int) -> Value:
        a_elem, b_elem = isinstance(a, ContactElement), isinstance(b, ContactElement)
        if a_elem != b_elem:
            raise self.fail("cannot add a scalar to an element", offset)
        try:
            return a + b
        except ContactEngineError as e:
            raise self.fail(str(e), offset)

    def multiply(self, a: Value, b: Value, offset: int) -> Value:
        a_elem, b_elem = isinstance(a, ContactElement), isinstance(b, ContactElement)
        if not a_elem and not b_elem:
            return a * b
        if not b_elem:
            return a.scale(b)
        if not a_elem:
            return b.scale(a)
        try:
            return self.algebra.symmetric_product(a, b)
        except ContactEngineError as e:
            raise self.fail(str(e), offset)

    # -- grammar -----------------------------------------------------------

    def parse(self) -> Value:
        value = self.expr()
        if self.current[0] != "end":
            raise self.fail(f"unexpected token {self.current[1]!r}")
        return value

    def expr(self) -> Value:
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        offset = self.current[2]
        value = self.term()
        if negate:
            value = -value
        while True:
            offset = self.current[2]
            if self.accept("+"):
                value = self.add(value, self.term(), offset)
            elif self.accept("-"):
                value = self.add(value, -self.term(), offset)
            else:
                return value

    def term(self) -> Value:
        value = self.power()
        while True:
            offset = self.current[2]
            if self.accept("*"):
                value = self.multiply(value, self.power(), offset)
            elif self.accept("/"):
                divisor = self.power()
                if isinstance(divisor, ContactElement) or not divisor:
                    raise self.fail("can only divide by a nonzero scalar", offset)
                value = self.multiply(value, ONE / divisor, offset)
            else:
                return value

    def power(self) -> Value:
        base = self.atom()
        offset = self.current[2]
        if not self.accept("^"):
            return base
        exponent = self.expect_int()
        if isinstance(base, ContactElement):
            if exponent == 0:
                raise self.fail("zeroth power of an element", offset)
            value = base
            for _ in range(exponent - 1):
                value = self.multiply(value, base, offset)
            return value
        value = ONE
        for _ in range(exponent):
            value = value * base
        return value

    def atom(self) -> Value:
        kind, text, offset = self.current
        algebra = self.algebra
        if kind == "int":
            self.position += 1
            return as_scalar(int(text))
        if kind == "name":
            self.position += 1
            if text == "i":
                return as_scalar("i")
            if text == "T":
                return algebra.T
            if text == "E":
                return algebra.grading_element()
            if text == "J":
                return algebra.complex_structure_element()
            if text == "mu":
                self.expect("^")
                p = self.expect_int()
                self.expect("[")
                inner_offset = self.current[2]
                inner = self.expr()
                self.expect("]")
                if not isinstance(inner, ContactElement):
                    raise self.fail("mu needs an element argument", inner_offset)
                try:
                    return algebra.mu(p, inner)
                except ContactEngineError as e:
                    raise self.fail(str(e), inner_offset)
            if text in self.variables:
                return algebra.variable(self.variables[text])
            raise self.fail(f"unknown name {text!r}", offset)
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        if self.accept("["):
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect("]")
            if not isinstance(left, ContactElement) or not isinstance(right, ContactElement):
                raise self.fail("bracket arguments must be elements", offset)
            return algebra.bracket(left, right)
        raise self.fail("expected an element, scalar or '('")


def parse_value(text: str, algebra: ContactAlgebra) -> Value:
    """Parse text into a scalar or an element."""
    return _Parser(text, algebra).parse()


def parse_element(text: str, algebra: ContactAlgebra, degree: Optional[int] = None) -> ContactElement:
    """Parse text into a homogeneous element.

    Args:
        text: element expression
        algebra: contact algebra supplying the variables
        degree: expected degree; also lets "0" denote the zero element

    Returns:
        the parsed ContactElement
    """
    value = parse_value(text, algebra)
    if not isinstance(value, ContactElement):
        if degree is not None and not value:
            return algebra.zero(degree)
        raise ElementSyntaxError("expression is a scalar, not an element")
    if degree is not None and value.degree != degree:
        raise ElementSyntaxError(f"expected degree {degree}, got {value.degree}")
    return value


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _variable_names(algebra: ContactAlgebra) -> List[str]:
    if algebra.n == 1:
        return ["z", "zb"]
    return algebra.space.variable_names()


def _monomial(exps, names: List[str]) -> str:
    factors = []
    for name, power in zip(names, exps):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors) if factors else "T"


def format_key(algebra: ContactAlgebra, p: int, key: Key) -> str:
    layer, exps = key
    text = _monomial(exps, _variable_names(algebra))
    degree = p - 2 * (layer + 1)
    for _ in range(layer + 1):
        degree += 2
        text = f"mu^{degree}[{text}]"
    return text


def _coefficient(value: Scalar) -> str:
    if value == ONE:
        return ""
    if value == -ONE:
        return "-"
    text = format_scalar(value)
    if value.x and value.y:
        return f"({text})*"
    return f"{text}*"


def format_element(x: ContactElement) -> str:
    """Canonical text of an element, terms in basis order."""
    algebra = get_contact_algebra(x.space)
    if x.is_zero():
        return "0"
    index = algebra.index(x.degree)
    parts = []
    for key in sorted(x.terms, key=index.__getitem__):
        term = _coefficient(x.terms[key]) + format_key(algebra, x.degree, key)
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts)
