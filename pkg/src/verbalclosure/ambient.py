"""Concrete ambient groups and the retract-or-witness analyzer.

Supported ambient groups are finite direct products of infinite dihedral,
infinite cyclic and finite cyclic factors.  For such a group the subgroup
generated by all squares is abelian with one visible coordinate per factor,
the quotient by it is elementary abelian of exponent two, and the embedded
dihedral subgroup H = <b, a> can be analysed exactly: either a^2 is simple
in the square module and an explicit retraction G -> H is produced, or a
witness equation solvable in G but certified unsolvable in H is built.
"""

import re
from dataclasses import dataclass
from math import gcd

from .dihedral import DihedralElement
from .involutions import (
    Character,
    InvolutionModule,
    enumerate_characters,
    enumerate_group_elements,
)
from .lattice import AbelianPresentation
from .words import (
    Equation,
    GroupOps,
    build_witness_equation,
    evaluate,
    y_var,
)


class SpecError(ValueError):
    """Invalid group specification."""


class SpecParseError(SpecError):
    pass


class NotAnInvolution(SpecError):
    pass


class NotInfiniteOrder(SpecError):
    pass


class NotInverted(SpecError):
    pass


class NotInQ(ValueError):
    """Element is not in the subgroup generated by squares."""


class NoSquareRoot(ValueError):
    """Could not express an element with the configured number of squares."""


class NormalizationFailure(RuntimeError):
    """The translation functional failed to send the dihedral generator to 1."""


# ---------------------------------------------------------------------------
# factors and elements


@dataclass(frozen=True)
class DInf:
    def __str__(self):
        return "DInf"


@dataclass(frozen=True)
class Zed:
    def __str__(self):
        return "Zed"


@dataclass(frozen=True)
class ZedMod:
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise SpecError("ZedMod modulus must be >= 1")

    def __str__(self):
        return f"ZedMod({self.modulus})"


class AmbientGroup:
    """Direct product of the supported factors; elements are coordinate
    tuples (DihedralElement / int / residue)."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        self.generators = {}
        for j, f in enumerate(self.factors, start=1):
            if isinstance(f, DInf):
                self.generators[f"a{j}"] = j - 1
                self.generators[f"b{j}"] = j - 1
            elif isinstance(f, Zed):
                self.generators[f"t{j}"] = j - 1
            elif isinstance(f, ZedMod):
                self.generators[f"c{j}"] = j - 1
            else:
                raise SpecError(f"unsupported factor {f!r}")

    @property
    def identity(self):
        out = []
        for f in self.factors:
            out.append(DihedralElement(0, 0) if isinstance(f, DInf) else 0)
        return tuple(out)

    def mul(self, x, y):
        out = []
        for f, a, b in zip(self.factors, x, y):
            if isinstance(f, DInf):
                out.append(a * b)
            elif isinstance(f, ZedMod):
                out.append((a + b) % f.modulus)
            else:
                out.append(a + b)
        return tuple(out)

    def inv(self, x):
        out = []
        for f, a in zip(self.factors, x):
            if isinstance(f, DInf):
                out.append(a.inverse())
            elif isinstance(f, ZedMod):
                out.append(-a % f.modulus)
            else:
                out.append(-a)
        return tuple(out)

    def pow(self, x, e):
        out = []
        for f, a in zip(self.factors, x):
            if isinstance(f, DInf):
                out.append(a ** e)
            elif isinstance(f, ZedMod):
                out.append(a * e % f.modulus)
            else:
                out.append(a * e)
        return tuple(out)

    @property
    def ops(self):
        return GroupOps(mul=self.mul, inv=self.inv, identity=self.identity)

    def generator_element(self, name):
        if name not in self.generators:
            raise SpecParseError(f"unknown generator {name!r}")
        j = self.generators[name]
        f = self.factors[j]
        out = [DihedralElement(0, 0) if isinstance(g, DInf) else 0
               for g in self.factors]
        if isinstance(f, DInf):
            out[j] = DihedralElement(0, 1) if name.startswith("b") else DihedralElement(1, 0)
        else:
            out[j] = 1 % f.modulus if isinstance(f, ZedMod) else 1
        return tuple(out)

    def evaluate_word(self, word):
        val = self.identity
        for name, exp in word:
            val = self.mul(val, self.pow(self.generator_element(name), exp))
        return val

    def random_element(self, rng, bound):
        out = []
        for f in self.factors:
            if isinstance(f, DInf):
                out.append(DihedralElement(rng.randint(-bound, bound),
                                           rng.randint(0, 1)))
            elif isinstance(f, ZedMod):
                out.append(rng.randrange(f.modulus))
            else:
                out.append(rng.randint(-bound, bound))
        return tuple(out)

    def has_infinite_order(self, x):
        for f, a in zip(self.factors, x):
            if isinstance(f, DInf) and a.flip == 0 and a.translation != 0:
                return True
            if isinstance(f, Zed) and a != 0:
                return True
        return False


# ---------------------------------------------------------------------------
# spec files


_WORD_TERM = re.compile(r"([A-Za-z][A-Za-z0-9]*)(?:\^(-?\d+))?$")


def parse_word(text):
    """Parse products like a1^3*a2^5 into ((name, exp), ...); "1" is empty."""
    text = text.strip().strip('"').strip("'")
    if text in ("", "1"):
        return ()
    terms = []
    for chunk in text.split("*"):
        chunk = chunk.strip()
        m = _WORD_TERM.match(chunk)
        if not m:
            raise SpecParseError(f"malformed word term {chunk!r}")
        name, exp = m.group(1), m.group(2)
        terms.append((name, int(exp) if exp is not None else 1))
    return tuple(terms)


def word_to_text(word):
    if not word:
        return "1"
    return "*".join(name if exp == 1 else f"{name}^{exp}" for name, exp in word)


_FACTOR_RE = re.compile(r"(DInf|Zed|ZedMod\(\s*(\d+)\s*\))$")


def parse_factor(text):
    m = _FACTOR_RE.match(text.strip())
    if not m:
        raise SpecParseError(f"unknown factor {text.strip()!r}")
    if m.group(1) == "DInf":
        return DInf()
    if m.group(1) == "Zed":
        return Zed()
    return ZedMod(int(m.group(2)))


class GroupSpec:
    """An ambient group plus the two words defining the dihedral subgroup."""

    def __init__(self, factors, b_word, a_word):
        self.factors = tuple(factors)
        self.b_word = parse_word(b_word) if isinstance(b_word, str) else tuple(b_word)
        self.a_word = parse_word(a_word) if isinstance(a_word, str) else tuple(a_word)
        self.group = AmbientGroup(self.factors)
        self.h_b = self.group.evaluate_word(self.b_word)
        self.h_a = self.group.evaluate_word(self.a_word)

    @classmethod
    def from_text(cls, text):
        entries = {}
        lines = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.extend(p.strip() for p in line.split(";") if p.strip())
        if not lines or not lines[0].startswith("groupspec"):
            raise SpecParseError("missing 'groupspec v1' header line")
        if lines[0].split() != ["groupspec", "v1"]:
            raise SpecParseError(f"unsupported spec version {lines[0]!r}")
        for line in lines[1:]:
            if "=" not in line:
                raise SpecParseError(f"expected key = value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            entries[key] = value
        for key in ("factors", "b", "a"):
            if key not in entries:
                raise SpecParseError(f"missing key {key!r}")
        flist = entries["factors"].strip()
        if flist.startswith("[") and flist.endswith("]"):
            flist = flist[1:-1]
        # split on commas not inside ZedMod(...)
        parts = re.split(r",(?![^()]*\))", flist)
        factors = [parse_factor(p) for p in parts if p.strip()]
        return cls(factors, entries["b"], entries["a"])

    def to_text(self):
        flist = ", ".join(str(f) for f in self.factors)
        return (f"groupspec v1\nfactors = [{flist}]\n"
                f"b = {word_to_text(self.b_word)}\n"
                f"a = {word_to_text(self.a_word)}\n")

    def __repr__(self):
        return (f"GroupSpec([{', '.join(map(str, self.factors))}], "
                f"b={word_to_text(self.b_word)!r}, a={word_to_text(self.a_word)!r})")


def validate_spec(spec):
    """Check that the two words really generate an infinite dihedral
    subgroup; raises a SpecError subclass naming the violated relation."""
    group = spec.group
    if spec.group.mul(spec.h_b, spec.h_b) != group.identity or \
            spec.h_b == group.identity:
        raise NotAnInvolution("b must have order exactly 2")
    if not group.has_infinite_order(spec.h_a):
        raise NotInfiniteOrder("a must have infinite order")
    conj = group.mul(group.mul(spec.h_b, spec.h_a), group.inv(spec.h_b))
    if conj != group.inv(spec.h_a):
        raise NotInverted("conjugation by b must invert a")
    return spec


# ---------------------------------------------------------------------------
# the square subgroup and its module structure


@dataclass
class SquareData:
    """The subgroup Q generated by all squares, as a presented abelian group
    with one coordinate per factor, together with the quotient 2-group data
    and its conjugation action."""

    spec: GroupSpec
    presentation: AbelianPresentation
    module: InvolutionModule
    q_roots: list  # per Q-coordinate, an ambient element whose square generates it
    q_root_names: list
    c_names: list  # independent generators of G/Q, in factor order, a before b
    d_elements: list  # coset representatives for c_names
    coset_words: list  # per element of G/Q (lex bits), indices into c_names

    @property
    def c_rank(self):
        return len(self.c_names)

    def q_coordinates(self, element):
        """Coordinates of an ambient element of Q, factor by factor.

        Raises NotInQ when some coordinate is not a square-subgroup member
        (odd translation, a flip, or an odd residue in an even cyclic
        factor)."""
        return _q_coordinates_raw(self.spec, element)

    def coset_bits(self, element):
        """Image of an element in G/Q, as exponent bits on the independent
        generators."""
        bits = []
        for name in self.c_names:
            j = self.spec.group.generators[name]
            f = self.spec.factors[j]
            a = element[j]
            if isinstance(f, DInf):
                bits.append(a.flip if name.startswith("b")
                            else a.translation & 1)
            else:
                bits.append(a & 1)
        return tuple(bits)

    def sign_of(self, chi, element):
        return chi.on_element(self.coset_bits(element))


def square_data(spec):
    """Extract Q, C = G/Q and the conjugation action from a validated spec.

    Q gets one coordinate per factor (the square of a distinguished
    generator); odd cyclic factors are entirely inside Q and contribute a
    torsion relation but no quotient generator.  Action matrices are
    computed by direct conjugation of the coordinate generators.
    """
    group = spec.group
    n = len(spec.factors)
    q_roots = []
    q_root_names = []
    relations = []
    c_names = []
    for j, f in enumerate(spec.factors, start=1):
        if isinstance(f, DInf):
            q_roots.append(group.generator_element(f"a{j}"))
            q_root_names.append(f"a{j}^2")
            c_names.extend([f"a{j}", f"b{j}"])
        elif isinstance(f, Zed):
            q_roots.append(group.generator_element(f"t{j}"))
            q_root_names.append(f"t{j}^2")
            c_names.append(f"t{j}")
        else:
            q_roots.append(group.generator_element(f"c{j}"))
            q_root_names.append(f"c{j}^2")
            order = f.modulus // gcd(2, f.modulus)
            row = [0] * n
            row[j - 1] = order
            relations.append(tuple(row))
            if f.modulus % 2 == 0:
                c_names.append(f"c{j}")
    presentation = AbelianPresentation(n, relations)

    d_elements = [group.generator_element(name) for name in c_names]
    actions = []
    for d in d_elements:
        dinv = group.inv(d)
        matrix = [[0] * n for _ in range(n)]
        for l, root in enumerate(q_roots):
            s = group.mul(root, root)
            conj = group.mul(group.mul(d, s), dinv)
            col = _q_coordinates_raw(spec, conj)
            for i in range(n):
                matrix[i][l] = col[i]
        actions.append(matrix)
    module = InvolutionModule(presentation, actions)
    m = len(c_names)
    coset_words = [tuple(j for j, b in enumerate(bits) if b)
                   for bits in enumerate_group_elements(m)]
    return SquareData(
        spec=spec,
        presentation=presentation,
        module=module,
        q_roots=q_roots,
        q_root_names=q_root_names,
        c_names=c_names,
        d_elements=d_elements,
        coset_words=coset_words,
    )


def _q_coordinates_raw(spec, element):
    coords = []
    for f, a in zip(spec.factors, element):
        if isinstance(f, DInf):
            if a.flip or a.translation % 2:
                raise NotInQ(f"{a!r} is outside the square subgroup")
            coords.append(a.translation // 2)
        elif isinstance(f, Zed):
            if a % 2:
                raise NotInQ(f"{a} is odd")
            coords.append(a // 2)
        else:
            k = f.modulus
            if k % 2 == 0:
                if a % 2:
                    raise NotInQ(f"{a} is odd mod {k}")
                coords.append(a // 2)
            else:
                coords.append(a * ((k + 1) // 2) % k)
    return tuple(coords)


def image_of_a_squared(spec, data):
    """Coordinates of a^2 in the square-subgroup basis."""
    sq = spec.group.mul(spec.h_a, spec.h_a)
    return data.q_coordinates(sq)


# ---------------------------------------------------------------------------
# the G-side solution of a witness equation


def g_solution(eq, data, report):
    """An explicit ambient solution of the witness equation.

    Each x-variable gets its coset representative; for every character with
    a nonzero component the first y-slot gets the product of coordinate
    square roots realising the reported lift, so its square is exactly that
    element of Q.  Remaining slots are identity.
    """
    if report.simple:
        raise ValueError("no witness equation exists for a simple element")
    if eq.n_squares < 1:
        raise NoSquareRoot("need at least one square slot")
    group = data.spec.group
    assignment = {}
    for j, d in enumerate(data.d_elements):
        assignment[f"x{j + 1}"] = d
    characters = enumerate_characters(data.c_rank)
    by_char = {w.character: w for w in report.components}
    for ci, chi in enumerate(characters):
        w = by_char[chi]
        root = group.identity
        if w.content != 0:
            for coeff, g in zip(w.lift, data.q_roots):
                if coeff:
                    root = group.mul(root, group.pow(g, coeff))
        assignment[y_var(ci, 1)] = root
        for i in range(2, eq.n_squares + 1):
            assignment[y_var(ci, i)] = group.identity
    return assignment


def verify_solution_in_G(eq, assignment, spec):
    """Evaluate the equation's left-hand side in G and compare with the
    right-hand side power of a."""
    group = spec.group
    value = evaluate(eq.lhs, assignment, group.ops)
    rhs = group.pow(spec.h_a, eq.rhs_exponent)
    return value == rhs


# ---------------------------------------------------------------------------
# retraction construction


@dataclass
class RetractionData:
    """A retraction G -> H assembled from an invariant complement.

    The functional reads off the coefficient of a^2 in the quotient of the
    square subgroup by the complement; the sign character records how
    conjugation acts on that coefficient.  torsion_invariants describe the
    finite normal subgroup quotiented away in the final step.
    """

    spec: GroupSpec
    data: SquareData
    sign_character: Character
    functional: tuple
    complement_basis: list
    torsion_invariants: list

    def translation_of(self, g):
        """Value of the translation functional on any ambient element,
        computed through its square (always in Q)."""
        group = self.spec.group
        coords = self.data.q_coordinates(group.mul(g, g))
        return sum(l * x for l, x in zip(self.functional, coords))

    def apply(self, g):
        group = self.spec.group
        sign = self.data.sign_of(self.sign_character, g)
        if sign == 1:
            return group.pow(self.spec.h_a, self.translation_of(g))
        shifted = group.mul(g, self.spec.h_b)
        return group.mul(group.pow(self.spec.h_a, self.translation_of(shifted)),
                         self.spec.h_b)

    def __call__(self, g):
        return self.apply(g)


def build_retraction(spec, data, q_vec, chi):
    """Build the retraction determined by a simple a^2 with witness chi.

    Steps: take the invariant complement M of <a^2> in Q and the integer
    functional with kernel M; check that the kernel-of-sign subgroup is
    abelian modulo M (it must be: its commutator subgroup is finite and
    torsion-free); record the torsion of that subgroup as the finite normal
    subgroup being quotiented away.  The resulting map fixes a and b and is
    idempotent by construction; verify_retraction samples the rest.
    """
    module = data.module
    basis, lam = module._complement_data(q_vec, chi)
    tau_a = sum(l * x for l, x in zip(lam, q_vec))
    if tau_a != 1:
        raise NormalizationFailure(
            f"translation functional sends a to {tau_a}, expected 1")
    group = spec.group
    if data.sign_of(chi, spec.h_a) != 1:
        raise NormalizationFailure("sign character does not fix a")
    if data.sign_of(chi, spec.h_b) != -1:
        raise NormalizationFailure("sign character must negate along b")

    # kernel of the sign character inside G/Q, as bit vectors
    m = data.c_rank
    neg = [1 if s == -1 else 0 for s in chi.signs]
    pivot = next((j for j, r in enumerate(neg) if r), None)
    kernel_bits = []
    for j in range(m):
        if j == pivot:
            continue
        bits = [0] * m
        bits[j] = 1
        if neg[j]:
            bits[pivot] ^= 1
        kernel_bits.append(tuple(bits))

    lifts = []
    for bits in kernel_bits:
        g = group.identity
        for j, b in enumerate(bits):
            if b:
                g = group.mul(g, data.d_elements[j])
        lifts.append(g)
    # the index-two subgroup must be abelian modulo the complement
    for i in range(len(lifts)):
        for j in range(i + 1, len(lifts)):
            li, lj = lifts[i], lifts[j]
            comm = group.mul(group.mul(li, lj),
                             group.inv(group.mul(lj, li)))
            coords = data.q_coordinates(comm)
            if sum(l * x for l, x in zip(lam, coords)) != 0:
                raise AssertionError(
                    "kernel subgroup is not abelian modulo the complement")

    # presentation of the kernel subgroup modulo the complement:
    # generator 0 is the image of a^2, the others are the coset lifts
    rows = []
    for i, g in enumerate(lifts):
        sq = data.q_coordinates(group.mul(g, g))
        t = sum(l * x for l, x in zip(lam, sq))
        row = [0] * (1 + len(lifts))
        row[0] = -t
        row[1 + i] = 2
        rows.append(tuple(row))
    kpres = AbelianPresentation(1 + len(lifts), rows)
    if kpres.free_rank != 1:
        raise NormalizationFailure("kernel subgroup is not virtually cyclic of rank 1")

    return RetractionData(
        spec=spec,
        data=data,
        sign_character=chi,
        functional=tuple(lam),
        complement_basis=[tuple(b) for b in basis],
        torsion_invariants=list(kpres.invariant_factors),
    )


def verify_retraction(rho, spec, samples=10000, bound=100, seed=0):
    """Sampled check that rho is an idempotent homomorphism fixing H."""
    import random

    rng = random.Random(seed)
    group = spec.group
    if rho.apply(spec.h_a) != spec.h_a or rho.apply(spec.h_b) != spec.h_b:
        return False
    for _ in range(samples):
        g = group.random_element(rng, bound)
        h = group.random_element(rng, bound)
        rg = rho.apply(g)
        if rho.apply(group.mul(g, h)) != group.mul(rg, rho.apply(h)):
            return False
        if rho.apply(rg) != rg:
            return False
    return True


# ---------------------------------------------------------------------------
# the analyzer


@dataclass
class Verdict:
    """Outcome of the analysis: either a verified retraction or a witness
    equation with ambient solution and no-solution certificate."""

    kind: str  # "retract" or "not-verbally-closed"
    spec: GroupSpec
    data: SquareData
    report: object
    a_squared: tuple
    retraction: RetractionData = None
    equation: Equation = None
    solution: dict = None
    certificate: object = None

    @property
    def is_retract(self):
        return self.kind == "retract"


def analyze(spec, filler=0, n_squares=None):
    """Run the full decision pipeline on a validated spec."""
    from .dihedral import certify_no_solution

    validate_spec(spec)
    data = square_data(spec)
    a_sq = image_of_a_squared(spec, data)
    report = data.module.is_simple(a_sq)
    if report.simple:
        retraction = build_retraction(spec, data, a_sq,
                                      report.witness_character)
        return Verdict(kind="retract", spec=spec, data=data, report=report,
                       a_squared=a_sq, retraction=retraction)
    n = n_squares if n_squares is not None else 1
    eq = build_witness_equation(report, n, data.presentation.torsion_order,
                                data.c_rank, data.coset_words, filler=filler)
    solution = g_solution(eq, data, report)
    certificate = certify_no_solution(eq)
    return Verdict(kind="not-verbally-closed", spec=spec, data=data,
                   report=report, a_squared=a_sq, equation=eq,
                   solution=solution, certificate=certificate)
