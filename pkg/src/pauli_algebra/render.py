"""Symbolic rendering of operators in descriptor notation (q_{xA} ...)."""

from typing import Sequence

from pauli_algebra.pauli import PauliOperator

# z-components are written before x-components, as in the descriptor table
_LETTER_ORDER = {"Z": 0, "Y": 1, "X": 2}


def _factor(letter: str, site: str) -> str:
    return f"q_{{{letter.lower()}{site}}}"


def render(o: PauliOperator, site_names: Sequence[str]) -> str:
    """Render `o` as a sum of products of single-site descriptors."""
    if o.is_zero():
        return "0"
    rendered = []
    for letters, coefficient in o.terms:
        factors = sorted(
            ((letter, i) for i, letter in enumerate(letters) if letter != "I"),
            key=lambda item: (_LETTER_ORDER[item[0]], item[1]),
        )
        body = "".join(_factor(letter, site_names[i]) for letter, i in factors) or "id"
        if coefficient.im == 0 and abs(coefficient.re) == 1:
            prefix = "-" if coefficient.re < 0 else ""
        elif coefficient.re == 0 and abs(coefficient.im) == 1:
            prefix = "-i " if coefficient.im < 0 else "i "
        else:
            prefix = f"{coefficient} "
        rendered.append(prefix + body)
    return " + ".join(rendered)
