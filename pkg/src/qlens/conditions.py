"""Condition grammar: parsing and evaluation against intermediate answers.

Two condition kinds exist. Absolute conditions pin one slot to one
element (or to the correct answer's element for that slot). Relational
conditions relate the values or positions of placed elements:

    absolute   := slot(i) = elem(e) | slot(i) = correct
    relational := val(slot(i)) OP val(slot(j))
                | pos(elem(a)) OP pos(elem(b))
                | adjacent(elem(a), elem(b))
                | not_adjacent(elem(a), elem(b))
    OP         := < | <= | = | != | >= | >

Any null operand (empty slot, unplaced element) makes a condition false:
an incomplete placement never fulfills a criterion. Evaluation is pure
and stateless, safe for unrestricted parallel use.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from typing import Iterable, Union

from .answers import Answer
from .errors import ConditionSyntaxError, UnknownReference

OPS = {
    "<": operator.lt,
    "<=": operator.le,
    "=": operator.eq,
    "!=": operator.ne,
    ">=": operator.ge,
    ">": operator.gt,
}

ABSOLUTE = "absolute"
RELATIONAL = "relational"


@dataclass(frozen=True)
class SlotHolds:
    """slot(i) = elem(e)"""

    slot: int
    element: int


@dataclass(frozen=True)
class SlotCorrect:
    """slot(i) = correct"""

    slot: int


@dataclass(frozen=True)
class ValueCompare:
    """val(slot(i)) OP val(slot(j))"""

    left_slot: int
    op: str
    right_slot: int


@dataclass(frozen=True)
class PositionCompare:
    """pos(elem(a)) OP pos(elem(b))"""

    left_elem: int
    op: str
    right_elem: int


@dataclass(frozen=True)
class Adjacency:
    """adjacent(elem(a), elem(b)) or its negation; both must be placed"""

    left_elem: int
    right_elem: int
    negated: bool


CondExpr = Union[SlotHolds, SlotCorrect, ValueCompare, PositionCompare, Adjacency]


@dataclass(frozen=True)
class ConditionSpec:
    """One designer-specified criterion contributing to the score."""

    cond_id: int
    kind: str  # "absolute" | "relational"
    expr: str
    label: str
    parsed: CondExpr


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<op><=|>=|!=|<|>|=)|(?P<punct>[(),]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            if text[pos:].strip() == "":
                break
            raise ConditionSyntaxError(text, pos, "a token")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.idx] if self.idx < len(self.tokens) else None

    def take(self, kind: str, value: str | None = None) -> str:
        tok = self.peek()
        expected = value if value is not None else kind
        if tok is None:
            raise ConditionSyntaxError(self.text, len(self.text), expected)
        tok_kind, tok_value, tok_pos = tok
        if tok_kind != kind or (value is not None and tok_value != value):
            raise ConditionSyntaxError(self.text, tok_pos, expected)
        self.idx += 1
        return tok_value

    def ref(self, keyword: str) -> int:
        """Parse `slot(INT)` or `elem(INT)`."""
        self.take("name", keyword)
        self.take("punct", "(")
        value = int(self.take("int"))
        self.take("punct", ")")
        return value

    def op(self) -> str:
        return self.take("op")

    def parse(self) -> CondExpr:
        tok = self.peek()
        if tok is None:
            raise ConditionSyntaxError(self.text, 0, "a condition expression")
        kind, value, pos = tok
        if kind != "name":
            raise ConditionSyntaxError(self.text, pos, "slot/val/pos/adjacent/not_adjacent")
        if value == "slot":
            return self._absolute()
        if value == "val":
            return self._value_compare()
        if value == "pos":
            return self._position_compare()
        if value in ("adjacent", "not_adjacent"):
            return self._adjacency(negated=value == "not_adjacent")
        raise ConditionSyntaxError(self.text, pos, "slot/val/pos/adjacent/not_adjacent")

    def _absolute(self) -> CondExpr:
        slot = self.ref("slot")
        self.take("op", "=")
        tok = self.peek()
        if tok is not None and tok[0] == "name" and tok[1] == "correct":
            self.idx += 1
            return SlotCorrect(slot)
        return SlotHolds(slot, self.ref("elem"))

    def _value_compare(self) -> CondExpr:
        self.take("name", "val")
        self.take("punct", "(")
        left = self.ref("slot")
        self.take("punct", ")")
        op = self.op()
        self.take("name", "val")
        self.take("punct", "(")
        right = self.ref("slot")
        self.take("punct", ")")
        return ValueCompare(left, op, right)

    def _position_compare(self) -> CondExpr:
        self.take("name", "pos")
        self.take("punct", "(")
        left = self.ref("elem")
        self.take("punct", ")")
        op = self.op()
        self.take("name", "pos")
        self.take("punct", "(")
        right = self.ref("elem")
        self.take("punct", ")")
        return PositionCompare(left, op, right)

    def _adjacency(self, negated: bool) -> CondExpr:
        self.take("name")
        self.take("punct", "(")
        left = self.ref("elem")
        self.take("punct", ",")
        right = self.ref("elem")
        self.take("punct", ")")
        return Adjacency(left, right, negated)

    def finish(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ConditionSyntaxError(self.text, tok[2], "end of expression")


def kind_of(parsed: CondExpr) -> str:
    return ABSOLUTE if isinstance(parsed, (SlotHolds, SlotCorrect)) else RELATIONAL


def parse_condition(
    text: str,
    *,
    cond_id: int = 0,
    label: str = "",
    slot_count: int | None = None,
    element_ids: Iterable[int] | None = None,
) -> ConditionSpec:
    """Parse a condition expression into a validated spec.

    When ``slot_count`` / ``element_ids`` are given, slot and element
    references are checked against them and an undeclared reference
    raises :class:`UnknownReference`.
    """
    parser = _Parser(text)
    parsed = parser.parse()
    parser.finish()
    _validate_refs(text, parsed, slot_count, element_ids)
    return ConditionSpec(cond_id=cond_id, kind=kind_of(parsed), expr=text, label=label, parsed=parsed)


def _validate_refs(
    text: str,
    parsed: CondExpr,
    slot_count: int | None,
    element_ids: Iterable[int] | None,
) -> None:
    slots: list[int] = []
    elems: list[int] = []
    if isinstance(parsed, SlotHolds):
        slots, elems = [parsed.slot], [parsed.element]
    elif isinstance(parsed, SlotCorrect):
        slots = [parsed.slot]
    elif isinstance(parsed, ValueCompare):
        slots = [parsed.left_slot, parsed.right_slot]
    elif isinstance(parsed, PositionCompare):
        elems = [parsed.left_elem, parsed.right_elem]
    elif isinstance(parsed, Adjacency):
        elems = [parsed.left_elem, parsed.right_elem]
    if slot_count is not None:
        for s in slots:
            if not 1 <= s <= slot_count:
                raise UnknownReference(f"slot({s}) not declared (slot_count={slot_count}) in {text!r}")
    if element_ids is not None:
        declared = set(element_ids)
        for e in elems:
            if e not in declared:
                raise UnknownReference(f"elem({e}) not declared in {text!r}")


def _position_of(element: int, answer: Answer) -> int | None:
    """1-based slot index holding the element, or None if unplaced."""
    for i, v in enumerate(answer):
        if v == element:
            return i + 1
    return None


def eval_condition(spec: ConditionSpec, answer: Answer, manifest) -> bool:
    """Evaluate one condition against an answer. Null operands yield False."""
    parsed = spec.parsed
    if isinstance(parsed, SlotHolds):
        return answer[parsed.slot - 1] == parsed.element
    if isinstance(parsed, SlotCorrect):
        held = answer[parsed.slot - 1]
        return held is not None and held == manifest.correct_answer[parsed.slot - 1]
    if isinstance(parsed, ValueCompare):
        left = answer[parsed.left_slot - 1]
        right = answer[parsed.right_slot - 1]
        if left is None or right is None:
            return False
        lv = manifest.element_value(left)
        rv = manifest.element_value(right)
        if not _is_number(lv) or not _is_number(rv):
            return False
        return OPS[parsed.op](lv, rv)
    if isinstance(parsed, PositionCompare):
        lp = _position_of(parsed.left_elem, answer)
        rp = _position_of(parsed.right_elem, answer)
        if lp is None or rp is None:
            return False
        return OPS[parsed.op](lp, rp)
    if isinstance(parsed, Adjacency):
        lp = _position_of(parsed.left_elem, answer)
        rp = _position_of(parsed.right_elem, answer)
        if lp is None or rp is None:
            return False
        adjacent = abs(lp - rp) == 1
        return not adjacent if parsed.negated else adjacent
    raise TypeError(f"unknown condition node {parsed!r}")


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def eval_all(answer: Answer, manifest) -> tuple[str, int]:
    """Evaluate every manifest condition.

    Returns the condition array (a string of 0/1, bit i = condition i
    fulfilled, in manifest order) and the stage (its popcount).
    """
    bits = "".join(
        "1" if eval_condition(spec, answer, manifest) else "0" for spec in manifest.conditions
    )
    return bits, bits.count("1")
