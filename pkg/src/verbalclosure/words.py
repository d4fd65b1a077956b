"""Free-group words as shared DAGs (straight-line programs).

Words built here can have flattened length exponential in their node count
(the nested skew-commutator words do), so they are evaluated node by node
with memoisation and are never flattened except for small-word tests.
"""

from dataclasses import dataclass

from .involutions import enumerate_characters, enumerate_group_elements


class TooLarge(ValueError):
    """Flattened length exceeds the configured cap; evaluate instead."""


class UnboundGenerator(KeyError):
    """A generator appearing in the word has no assigned value."""


class NotAWitness(ValueError):
    """Witness equations require a non-simple element report."""


REDUCE_CAP = 10 ** 6


class SLWord:
    """Base node of a word DAG.  Subterms are shared, never copied."""

    __slots__ = ()

    def __mul__(self, other):
        return Concat((self, other))

    def __pow__(self, e):
        return Pow(self, e)

    def inverse(self):
        return Inv(self)


class Gen(SLWord):
    __slots__ = ("name", "length")

    def __init__(self, name):
        self.name = name
        self.length = 1

    def __repr__(self):
        return f"Gen({self.name!r})"


class Inv(SLWord):
    __slots__ = ("child", "length")

    def __init__(self, child):
        self.child = child
        self.length = child.length

    def __repr__(self):
        return f"Inv({self.child!r})"


class Concat(SLWord):
    __slots__ = ("parts", "length")

    def __init__(self, parts):
        self.parts = tuple(parts)
        self.length = sum(p.length for p in self.parts)

    def __repr__(self):
        return f"Concat({self.parts!r})"


class Pow(SLWord):
    __slots__ = ("base", "exp", "length")

    def __init__(self, base, exp):
        self.base = base
        self.exp = exp
        self.length = abs(exp) * base.length

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exp})"


EMPTY = Concat(())


@dataclass
class GroupOps:
    """Multiplication/inverse/identity contract used by evaluate."""

    mul: callable
    inv: callable
    identity: object


class CountingOps:
    """Wraps a GroupOps and counts invocations; test instrumentation."""

    def __init__(self, ops):
        self._ops = ops
        self.count = 0
        self.identity = ops.identity

    def mul(self, x, y):
        self.count += 1
        return self._ops.mul(x, y)

    def inv(self, x):
        self.count += 1
        return self._ops.inv(x)


def evaluate(word, assignment, ops):
    """Image of the word under the homomorphism sending generators to their
    assigned values.

    Each distinct DAG node is evaluated once; Pow nodes use square-and-
    multiply, so the cost is O(nodes * log max-exponent) group operations no
    matter how long the flattened word is.
    """
    memo = {}

    def go(w):
        key = id(w)
        if key in memo:
            return memo[key]
        if isinstance(w, Gen):
            try:
                val = assignment[w.name]
            except KeyError:
                raise UnboundGenerator(w.name) from None
        elif isinstance(w, Inv):
            val = ops.inv(go(w.child))
        elif isinstance(w, Concat):
            val = ops.identity
            for p in w.parts:
                val = ops.mul(val, go(p))
        elif isinstance(w, Pow):
            base = go(w.base)
            e = w.exp
            if e < 0:
                base = ops.inv(base)
                e = -e
            val = ops.identity
            sq = base
            while e:
                if e & 1:
                    val = ops.mul(val, sq)
                e >>= 1
                if e:
                    sq = ops.mul(sq, sq)
        else:
            raise TypeError(f"not a word node: {w!r}")
        memo[key] = val
        return val

    return go(word)


def flatten(word, cap=REDUCE_CAP):
    """Letter sequence [(name, +-1), ...] of the word, unreduced."""
    if word.length > cap:
        raise TooLarge(f"flattened length {word.length} exceeds cap {cap}")
    out = []

    def go(w, sign):
        if isinstance(w, Gen):
            out.append((w.name, sign))
        elif isinstance(w, Inv):
            go(w.child, -sign)
        elif isinstance(w, Concat):
            parts = w.parts if sign == 1 else reversed(w.parts)
            for p in parts:
                go(p, sign)
        elif isinstance(w, Pow):
            e = w.exp * sign
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                go(w.base, s)
        else:
            raise TypeError(f"not a word node: {w!r}")

    go(word, 1)
    return out


def free_reduce(letters):
    stack = []
    for name, sign in letters:
        if stack and stack[-1][0] == name and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((name, sign))
    return stack


def reduce(word, cap=REDUCE_CAP):
    """Freely reduced letter sequence of a small word.

    Raises TooLarge beyond the cap: long words must be evaluated through a
    group, never flattened.
    """
    return free_reduce(flatten(word, cap))


# ---------------------------------------------------------------------------
# the skew-commutator word tower


def skew_commutator(c_expr, sign, body):
    """body * c * body^sign * c^-1, with the body subterm shared."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    second = body if sign == 1 else Inv(body)
    return Concat((body, c_expr, second, Inv(c_expr)))


def build_w_chi(chi, c_exprs):
    """Nest one skew commutator per element of the acting 2-group around y.

    `c_exprs` lists one word per group element, in the lexicographic
    bit-tuple order used everywhere; the innermost commutator uses the last
    entry.  The result is a DAG of depth |C| in the single variable y.
    """
    m = chi.rank
    elements = enumerate_group_elements(m)
    if len(c_exprs) != len(elements):
        raise ValueError(f"need {len(elements)} element words, got {len(c_exprs)}")
    body = Gen("y")
    for bits, ce in zip(reversed(elements), reversed(list(c_exprs))):
        body = skew_commutator(ce, chi.on_element(bits), body)
    return body


def coset_expr(subset, var_prefix="x"):
    """Product of variables x_{j+1} over the 1-bits of a subset tuple."""
    parts = tuple(Gen(f"{var_prefix}{j + 1}") for j, b in enumerate(subset) if b)
    return Concat(parts)


def build_v_chi(chi, coset_words, y_word=None):
    """The word in x_1..x_m and y obtained by spelling each group element as
    a product of the chosen generators.

    `coset_words` lists, per element of C in enumeration order, the indices
    of the generators whose product represents it.  Substituting the actual
    cosets for the x-variables recovers the nested commutator word exactly.
    """
    m = chi.rank
    elements = enumerate_group_elements(m)
    if len(coset_words) != len(elements):
        raise ValueError("coset word count must match group order")
    c_exprs = []
    for indices in coset_words:
        c_exprs.append(Concat(tuple(Gen(f"x{j + 1}") for j in indices)))
    body = y_word if y_word is not None else Gen("y")
    for bits, ce in zip(reversed(elements), reversed(c_exprs)):
        body = skew_commutator(ce, chi.on_element(bits), body)
    return body


# ---------------------------------------------------------------------------
# witness equations


def y_var(char_index, i):
    return f"y_{char_index}_{i}"


@dataclass
class Equation:
    """One-sided equation: lhs(word in x's and y's) = a^rhs_exponent.

    Coefficients appear only on the right-hand side, as a power of the
    distinguished infinite-order generator of the dihedral subgroup.
    """

    lhs: SLWord
    rhs_generator: str
    rhs_exponent: int
    c_rank: int
    torsion_order: int
    n_squares: int
    filler: int
    k_values: tuple  # raw per-character contents, enumeration order

    @property
    def c_size(self):
        return 1 << self.c_rank

    def used_exponent(self, char_index):
        k = self.k_values[char_index]
        return k if k != 0 else self.filler

    def variables(self):
        names = [f"x{j + 1}" for j in range(self.c_rank)]
        for ci in range(len(self.k_values)):
            for i in range(1, self.n_squares + 1):
                names.append(y_var(ci, i))
        return names


def build_witness_equation(report, n, torsion_order, c_rank, coset_words,
                           filler=0):
    """Assemble the witness equation from a non-simplicity report.

    The y-block substituted for each character is (prod_i y_{chi,i}^2)
    raised to the torsion order; characters with vanishing components get
    the filler exponent (any integer except +-1, 0 by default).
    """
    if report.simple:
        raise NotAWitness("simple elements admit a retraction, not a witness")
    if filler in (1, -1):
        raise ValueError("filler exponent must not be +-1")
    if n < 1:
        raise ValueError("need at least one square per character")
    characters = enumerate_characters(c_rank)
    by_char = {w.character: w for w in report.components}
    k_values = []
    terms = []
    for ci, chi in enumerate(characters):
        k = by_char[chi].content
        k_values.append(k)
        exponent = k if k != 0 else filler
        squares = Concat(tuple(Pow(Gen(y_var(ci, i)), 2)
                               for i in range(1, n + 1)))
        block = Pow(squares, torsion_order)
        v = build_v_chi(chi, coset_words, y_word=block)
        terms.append(Pow(v, exponent))
    lhs = Concat(tuple(terms))
    c_size = 1 << c_rank
    # right-hand side a^(2 * 2^|C| * |T|): each of the |C| commutator
    # nestings doubles the exponent once
    return Equation(
        lhs=lhs,
        rhs_generator="a",
        rhs_exponent=2 * (1 << c_size) * torsion_order,
        c_rank=c_rank,
        torsion_order=torsion_order,
        n_squares=n,
        filler=filler,
        k_values=tuple(k_values),
    )


# ---------------------------------------------------------------------------
# serialization: deterministic, sharing-preserving S-expressions


def serialize_equation(eq):
    """Textual form of an equation, one definition per DAG node.

    Node labels are assigned in post-order of first visit, so the output is
    deterministic and the parse rebuilds the exact sharing structure.
    """
    labels = {}
    lines = []

    def visit(w):
        key = id(w)
        if key in labels:
            return labels[key]
        if isinstance(w, Gen):
            body = f"(gen {w.name})"
        elif isinstance(w, Inv):
            body = f"(inv {visit(w.child)})"
        elif isinstance(w, Concat):
            body = "(cat" + "".join(" " + visit(p) for p in w.parts) + ")"
        elif isinstance(w, Pow):
            body = f"(pow {visit(w.base)} {w.exp})"
        else:
            raise TypeError(f"not a word node: {w!r}")
        label = f"n{len(labels)}"
        labels[key] = label
        lines.append(f"  ({label} {body})")
        return label

    root = visit(eq.lhs)
    header = (f"(equation (c-rank {eq.c_rank}) (torsion {eq.torsion_order}) "
              f"(n {eq.n_squares}) (filler {eq.filler})\n"
              f"  (k{''.join(' ' + str(k) for k in eq.k_values)})\n"
              " (nodes\n")
    footer = (f" )\n (lhs {root})\n"
              f" (rhs {eq.rhs_generator} {eq.rhs_exponent}))\n")
    return header + "\n".join(lines) + "\n" + footer


def _tokenize(text):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_sexpr(tokens, pos=0):
    if tokens[pos] != "(":
        return tokens[pos], pos + 1
    pos += 1
    items = []
    while tokens[pos] != ")":
        item, pos = _parse_sexpr(tokens, pos)
        items.append(item)
    return items, pos + 1


def parse_equation(text):
    """Inverse of serialize_equation."""
    tree, _ = _parse_sexpr(_tokenize(text))
    if not tree or tree[0] != "equation":
        raise ValueError("not an equation form")
    fields = {}
    nodes_forms = None
    lhs_label = None
    rhs = None
    k_values = None
    for item in tree[1:]:
        head = item[0]
        if head == "nodes":
            nodes_forms = item[1:]
        elif head == "lhs":
            lhs_label = item[1]
        elif head == "rhs":
            rhs = (item[1], int(item[2]))
        elif head == "k":
            k_values = tuple(int(x) for x in item[1:])
        else:
            fields[head] = int(item[1])
    built = {}
    for form in nodes_forms:
        label, body = form[0], form[1]
        kind = body[0]
        if kind == "gen":
            node = Gen(body[1])
        elif kind == "inv":
            node = Inv(built[body[1]])
        elif kind == "cat":
            node = Concat(tuple(built[l] for l in body[1:]))
        elif kind == "pow":
            node = Pow(built[body[1]], int(body[2]))
        else:
            raise ValueError(f"unknown node kind {kind!r}")
        built[label] = node
    return Equation(
        lhs=built[lhs_label],
        rhs_generator=rhs[0],
        rhs_exponent=rhs[1],
        c_rank=fields["c-rank"],
        torsion_order=fields["torsion"],
        n_squares=fields["n"],
        filler=fields["filler"],
        k_values=k_values,
    )
