"""Shared test helpers: random module generators and a semidirect product
group for evaluating words against direct module arithmetic."""

from verbalclosure.involutions import InvolutionModule
from verbalclosure.lattice import AbelianPresentation, eye, mat_inv, mat_mul, mat_vec


def random_unimodular(rng, n, steps=8):
    """A random determinant +-1 integer matrix built from row operations."""
    U = eye(n)
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if kind == 0 and i != j:
            c = rng.randint(-2, 2)
            U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        elif kind == 1:
            U[i], U[j] = U[j], U[i]
        else:
            U[i] = [-a for a in U[i]]
    return U


def _conjugated_actions(rng, free_rank, torsion, m, allow_swap):
    """Commuting involutions: a common unimodular conjugate of a commuting
    family of signed (block-)permutation matrices on the free part, plus
    +-1 on each torsion coordinate."""
    n = free_rank + len(torsion)
    U = random_unimodular(rng, free_rank) if free_rank else []
    Uinv = mat_inv(U) if free_rank else []
    # choose a swap pair shared by all actions so the family commutes
    pair = None
    if allow_swap and free_rank >= 2 and rng.random() < 0.7:
        pair = (0, 1)
    actions = []
    for _ in range(m):
        S = [[0] * free_rank for _ in range(free_rank)]
        for i in range(free_rank):
            S[i][i] = rng.choice((1, -1))
        if pair is not None:
            i, j = pair
            s = rng.choice((1, -1))
            if rng.random() < 0.5:
                S[i][i] = S[j][j] = 0
                S[i][j] = S[j][i] = s
            else:
                # scalar on the pair, so it commutes with the swap
                S[i][i] = S[j][j] = s
        core = mat_mul(mat_mul(Uinv, S), U) if free_rank else []
        A = [[0] * n for _ in range(n)]
        for i in range(free_rank):
            for j in range(free_rank):
                A[i][j] = core[i][j]
        for t in range(len(torsion)):
            A[free_rank + t][free_rank + t] = rng.choice((1, -1))
        actions.append(A)
    return actions


def random_module(rng, m=None, free_rank=None, torsion=None, allow_swap=True):
    """A random valid InvolutionModule with m <= 2, rank <= 3 by default."""
    if m is None:
        m = rng.randint(1, 2)
    if free_rank is None:
        free_rank = rng.randint(1, 3)
    if torsion is None:
        torsion = [k for k in [rng.choice((1, 2, 3, 4))] if k > 1]
    n = free_rank + len(torsion)
    relations = []
    for t, k in enumerate(torsion):
        row = [0] * n
        row[free_rank + t] = k
        relations.append(row)
    pres = AbelianPresentation(n, relations)
    actions = _conjugated_actions(rng, free_rank, torsion, m, allow_swap)
    return InvolutionModule(pres, actions)


def random_decomposable_module(rng, m, free_rank, torsion=()):
    """Conjugated sign-diagonal actions: always decomposable."""
    n = free_rank + len(torsion)
    relations = []
    for t, k in enumerate(torsion):
        row = [0] * n
        row[free_rank + t] = k
        relations.append(row)
    pres = AbelianPresentation(n, relations)
    actions = _conjugated_actions(rng, free_rank, list(torsion), m,
                                  allow_swap=False)
    return InvolutionModule(pres, actions)


class SemidirectGroup:
    """The group Q x| C realised from an InvolutionModule: elements are
    (canonical Q-vector, bit tuple), with the bits acting through the
    module's matrices.  Used to evaluate word identities by honest group
    arithmetic."""

    def __init__(self, module):
        self.module = module
        self.pres = module.group
        self.m = module.c_rank

    @property
    def identity(self):
        return (tuple(self.pres.canonical([0] * self.pres.rank)),
                (0,) * self.m)

    def act(self, bits, qvec):
        v = list(qvec)
        for j, b in enumerate(bits):
            if b:
                v = list(mat_vec(self.module.actions[j], v))
        return self.pres.canonical(v)

    def q_element(self, qvec):
        return (tuple(self.pres.canonical(qvec)), (0,) * self.m)

    def c_element(self, bits):
        return (tuple(self.pres.canonical([0] * self.pres.rank)), tuple(bits))

    def mul(self, x, y):
        q1, b1 = x
        q2, b2 = y
        moved = self.act(b1, q2)
        q = self.pres.canonical([a + b for a, b in zip(q1, moved)])
        return (tuple(q), tuple(a ^ b for a, b in zip(b1, b2)))

    def inv(self, x):
        q, b = x
        moved = self.act(b, [-a for a in q])
        return (tuple(self.pres.canonical(moved)), b)

    @property
    def ops(self):
        from verbalclosure.words import GroupOps

        return GroupOps(mul=self.mul, inv=self.inv, identity=self.identity)
