"""Exact arithmetic in the infinite dihedral group and no-solution
certificates.

Elements are written canonically as a^k * b^e with k an arbitrary integer
and e a flip bit; b*a*b = a^-1.  The certificate machinery turns the
closed-form collapse of the commutator-tower words over this group into a
finite table of integer non-divisibility facts, one per flip pattern, which
together prove that a witness equation has no dihedral solution.
"""

from dataclasses import dataclass
from itertools import product

from .involutions import Character, enumerate_characters
from .words import GroupOps, evaluate, y_var


class InvalidEquation(ValueError):
    """A certificate is impossible: some effective exponent is +-1."""


class DihedralElement:
    """a^translation * b^flip in <b>_2 |x <a>_inf."""

    __slots__ = ("translation", "flip")

    def __init__(self, translation=0, flip=0):
        self.translation = translation
        self.flip = flip & 1

    @classmethod
    def from_flip_first(cls, flip, translation):
        """Convert b^e * a^k to canonical form (b a^k = a^-k b)."""
        return cls(-translation if flip & 1 else translation, flip)

    def __mul__(self, other):
        if self.flip:
            return DihedralElement(self.translation - other.translation,
                                   self.flip ^ other.flip)
        return DihedralElement(self.translation + other.translation,
                               self.flip ^ other.flip)

    def inverse(self):
        if self.flip:
            return self
        return DihedralElement(-self.translation, 0)

    def __pow__(self, e):
        if self.flip:
            return DihedralElement(0, 0) if e % 2 == 0 else self
        return DihedralElement(self.translation * e, 0)

    def __eq__(self, other):
        return (isinstance(other, DihedralElement)
                and self.translation == other.translation
                and self.flip == other.flip)

    def __hash__(self):
        return hash((self.translation, self.flip))

    @property
    def order(self):
        if self.flip:
            return 2
        return 1 if self.translation == 0 else 0  # 0 marks infinite order

    def is_identity(self):
        return self.flip == 0 and self.translation == 0

    def __repr__(self):
        if self.is_identity():
            return "1"
        parts = []
        if self.translation:
            parts.append(f"a^{self.translation}" if self.translation != 1 else "a")
        if self.flip:
            parts.append("b")
        return "*".join(parts)


IDENTITY = DihedralElement(0, 0)
A = DihedralElement(1, 0)
B = DihedralElement(0, 1)

DIHEDRAL_OPS = GroupOps(
    mul=lambda x, y: x * y,
    inv=lambda x: x.inverse(),
    identity=IDENTITY,
)


def multiply(g, h):
    return g * h


def character_of_substitution(delta):
    """The character selected by substituting x_j = b^{delta_j} a^{k_j}:
    its value on the j-th generator is (-1)^{delta_j}."""
    return Character(tuple(-1 if d else 1 for d in delta))


def evaluate_v_closed_form(chi, delta, y_value_exponent):
    """Value of the commutator-tower word over the dihedral group, in closed
    form.

    With y = a^{y_value_exponent} (necessarily an even power of a) the word
    collapses to a^{y_value_exponent * 2^{|C|}} when chi matches the
    character determined by the flip bits, and to the identity otherwise.
    """
    m = len(delta)
    if chi != character_of_substitution(delta):
        return IDENTITY
    return DihedralElement(y_value_exponent << (1 << m), 0)


@dataclass
class CertificateRow:
    """One flip pattern: all equation values land in <a^subgroup_exponent>,
    which misses the target a^target_exponent."""

    delta: tuple
    matched_character: Character
    effective_exponent: int  # k of the matched character, or the filler
    subgroup_exponent: int  # target_exponent * effective_exponent
    target_exponent: int
    obstruction: str  # "nonunit-multiplier" or "identity-vs-nontrivial"


@dataclass
class NoSolutionCertificate:
    rows: list
    c_rank: int
    rhs_exponent: int

    def is_valid(self):
        """Re-verify every integer obstruction independently of how the
        rows were produced."""
        seen = set()
        for row in self.rows:
            seen.add(row.delta)
            k = row.effective_exponent
            if row.target_exponent != self.rhs_exponent:
                return False
            if k == 0:
                if row.obstruction != "identity-vs-nontrivial" or self.rhs_exponent == 0:
                    return False
            else:
                # target = subgroup * l  <=>  k * l = 1: impossible for |k| != 1
                if abs(k) == 1 or row.subgroup_exponent != self.rhs_exponent * k:
                    return False
        return len(seen) == 1 << self.c_rank

    def to_table(self):
        lines = []
        for row in self.rows:
            d = "(" + ",".join(map(str, row.delta)) + ")"
            if row.effective_exponent == 0:
                value = "{1}"
                why = f"identity != a^{row.target_exponent}"
            else:
                value = f"<a^{row.subgroup_exponent}>"
                why = (f"a^{row.target_exponent} not in <a^{row.subgroup_exponent}>"
                       f" since {row.effective_exponent}*l = 1 has no integer solution")
            lines.append(f"delta={d}  {row.matched_character.label()}  "
                         f"values in {value}  obstruction: {why}")
        return "\n".join(lines)


def certify_no_solution(eq, m=None):
    """Build the per-flip-pattern no-solution certificate for a witness
    equation.

    For each pattern of flip bits on the x-variables, exactly one character
    survives the closed-form collapse, so every dihedral value of the
    left-hand side lies in a proper subgroup <a^(target * k)> (or is the
    identity when k = 0); the right-hand side a^target escapes because
    |k| != 1.  The free translation parameters never need enumerating --
    this is a proof, not a search.
    """
    if m is None:
        m = eq.c_rank
    if m != eq.c_rank:
        raise ValueError("rank mismatch with the equation")
    for ci in range(len(eq.k_values)):
        if abs(eq.used_exponent(ci)) == 1:
            raise InvalidEquation(
                "effective exponent +-1: a simple component slipped through")
    characters = enumerate_characters(m)
    index = {chi: ci for ci, chi in enumerate(characters)}
    rows = []
    for delta in product((0, 1), repeat=m):
        chi = character_of_substitution(delta)
        k = eq.used_exponent(index[chi])
        rows.append(CertificateRow(
            delta=delta,
            matched_character=chi,
            effective_exponent=k,
            subgroup_exponent=eq.rhs_exponent * k,
            target_exponent=eq.rhs_exponent,
            obstruction=("identity-vs-nontrivial" if k == 0
                         else "nonunit-multiplier"),
        ))
    return NoSolutionCertificate(rows=rows, c_rank=m,
                                 rhs_exponent=eq.rhs_exponent)


def spot_check_no_solution(eq, bound, trials, seed=0):
    """Randomised corroboration of a certificate by direct DAG evaluation.

    Substitutes x_j = a^{k_j} b^{delta_j} (cycling through every delta
    pattern) and random dihedral values for the y-variables, and reports
    True when no substitution hits the right-hand side.  This is a
    heuristic, not a proof: absence of small solutions proves nothing for
    general equations.
    """
    import random

    rng = random.Random(seed)
    m = eq.c_rank
    deltas = list(product((0, 1), repeat=m))
    rhs = DihedralElement(eq.rhs_exponent, 0)
    n_chars = len(eq.k_values)
    for t in range(trials):
        delta = deltas[t % len(deltas)]
        assignment = {}
        for j in range(m):
            assignment[f"x{j + 1}"] = DihedralElement(
                rng.randint(-bound, bound), 0) * (B if delta[j] else IDENTITY)
        for ci in range(n_chars):
            for i in range(1, eq.n_squares + 1):
                assignment[y_var(ci, i)] = DihedralElement(
                    rng.randint(-bound, bound), rng.randint(0, 1))
        value = evaluate(eq.lhs, assignment, DIHEDRAL_OPS)
        if value == rhs:
            return False
    return True
