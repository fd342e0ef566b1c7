"""Code loops (small Frattini Moufang 2-loops) from symplectic cubic spaces.

A symplectic cubic space over F_2 is given by structure constants
``sigma_i``, ``kappa_ij`` and ``alpha_ijk`` on a basis.  From these we
present a 2-group ``G`` on generators ``g_i, f_i, h_i, u, v`` together with
two automorphisms ``tau`` and ``rho`` generating ``S_3``.  In the
extension of ``G`` by this ``S_3``, the ``G``-conjugates of ``tau`` under
``(s, t) -> s^rho t^(rho^2) s^rho`` form a quasigroup whose normalized
table is a Moufang loop of order ``2^(n+1)``.

Group elements are kept in the normal form
``g^a f^b h^c u^p v^q`` (each a product of generators in index order with
0/1 exponents) and multiplied by collection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Loop, normalize_table
from .errors import (
    ClassNotClosed,
    DimensionMismatch,
    InvalidSpace,
    NotCentral,
    NotPowerOfTwo,
    NotSmallFrattini,
)
from .structure import center, factor_loop_with_map, frattini_subloop


# ---------------------------------------------------------------------------
# symplectic cubic spaces


@dataclass(frozen=True, eq=False)
class SymplecticCubicSpace:
    """Structure constants of a symplectic cubic space.

    ``sigma`` has shape ``(n,)``, ``kappa`` is a symmetric ``n x n`` 0/1
    matrix with zero diagonal and ``alpha`` an ``n x n x n`` 0/1 array,
    symmetric in all arguments and zero whenever two indices agree.
    """

    n: int
    sigma: np.ndarray
    kappa: np.ndarray
    alpha: np.ndarray

    @classmethod
    def from_constants(cls, n: int, sigma=(), kappa=(), alpha=()) -> SymplecticCubicSpace:
        """Build from the 0-based indices of the nonzero constants."""
        s = np.zeros(n, dtype=np.uint8)
        k = np.zeros((n, n), dtype=np.uint8)
        a = np.zeros((n, n, n), dtype=np.uint8)
        for i in sigma:
            s[i] = 1
        for i, j in kappa:
            if i == j:
                raise InvalidSpace("kappa is alternating: kappa_ii must vanish")
            k[i, j] = k[j, i] = 1
        for ijk in alpha:
            if len(set(ijk)) != 3:
                raise InvalidSpace("alpha is alternating: indices must be distinct")
            for p in itertools.permutations(ijk):
                a[p] = 1
        return cls(n, s, k, a)

    @classmethod
    def zero(cls, n: int) -> SymplecticCubicSpace:
        return cls.from_constants(n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> SymplecticCubicSpace:
        sigma = [i for i in range(n) if rng.integers(2)]
        kappa = [p for p in itertools.combinations(range(n), 2) if rng.integers(2)]
        alpha = [p for p in itertools.combinations(range(n), 3) if rng.integers(2)]
        return cls.from_constants(n, sigma, kappa, alpha)

    def constants(self) -> tuple[list[int], list[tuple[int, int]], list[tuple[int, int, int]]]:
        """0-based indices of nonzero ``sigma_i``, ``kappa_ij`` (i<j), ``alpha_ijk`` (i<j<k)."""
        n = self.n
        s = [i for i in range(n) if self.sigma[i]]
        k = [p for p in itertools.combinations(range(n), 2) if self.kappa[p]]
        a = [p for p in itertools.combinations(range(n), 3) if self.alpha[p]]
        return s, k, a

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymplecticCubicSpace):
            return NotImplemented
        return self.n == other.n and self.constants() == other.constants()

    def __hash__(self) -> int:
        return hash((self.n, repr(self.constants())))

    def __repr__(self) -> str:
        s, k, a = self.constants()
        return f"SymplecticCubicSpace(n={self.n}, sigma={s}, kappa={k}, alpha={a})"

    def to_text(self) -> str:
        s, k, a = self.constants()
        lines = [f"n {self.n}"]
        lines += [f"sigma {i + 1}" for i in s]
        lines += [f"kappa {i + 1} {j + 1}" for i, j in k]
        lines += [f"alpha {i + 1} {j + 1} {l + 1}" for i, j, l in a]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> SymplecticCubicSpace:
        """Read the text format: ``n <dim>`` then 1-based nonzero constants."""
        n = None
        sigma, kappa, alpha = [], [], []
        arity = {"sigma": 1, "kappa": 2, "alpha": 3}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            word, *rest = line.split()
            if word == "n" and len(rest) == 1 and n is None:
                n = int(rest[0])
                continue
            if word not in arity or len(rest) != arity[word] or n is None:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
            idx = tuple(int(x) - 1 for x in rest)
            if not all(0 <= i < n for i in idx):
                raise ValueError(f"line {lineno}: index out of range")
            {"sigma": sigma, "kappa": kappa, "alpha": alpha}[word].append(idx[0] if word == "sigma" else idx)
        if n is None:
            raise ValueError("missing 'n <dim>' line")
        return cls.from_constants(n, sigma, kappa, alpha)


def read_space(path) -> SymplecticCubicSpace:
    with open(path, encoding="utf-8") as fh:
        return SymplecticCubicSpace.parse(fh.read())


def _bits(S: SymplecticCubicSpace, u) -> np.ndarray:
    a = np.asarray(u, dtype=np.uint8).ravel()
    if a.shape != (S.n,):
        raise DimensionMismatch(f"vector of length {a.size} in a space of dimension {S.n}")
    return a & 1


def _alpha(S, u, v, w) -> int:
    return int(np.einsum("i,j,k,ijk->", u, v, w, S.alpha.astype(np.int64)) & 1)


def _kappa(S, u, v) -> int:
    # expand u and then v over the basis, collecting alpha corrections
    nz = np.flatnonzero(u)
    if nz.size == 0:
        return 0
    i = nz[0]
    e = np.zeros(S.n, dtype=np.uint8)
    e[i] = 1
    rest = u ^ e
    return (_kappa_basis(S, i, v) + _kappa(S, rest, v) + _alpha(S, e, rest, v)) & 1


def _kappa_basis(S, i, v) -> int:
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return 0
    j = nz[0]
    e = np.zeros(S.n, dtype=np.uint8)
    e[j] = 1
    rest = v ^ e
    ei = np.zeros(S.n, dtype=np.uint8)
    ei[i] = 1
    return (int(S.kappa[j, i]) + _kappa_basis(S, i, rest) + _alpha(S, e, rest, ei)) & 1


def _sigma(S, u) -> int:
    nz = np.flatnonzero(u)
    if nz.size == 0:
        return 0
    e = np.zeros(S.n, dtype=np.uint8)
    e[nz[0]] = 1
    rest = u ^ e
    return (int(S.sigma[nz[0]]) + _sigma(S, rest) + _kappa(S, e, rest)) & 1


def eval_forms(S: SymplecticCubicSpace, *vectors) -> int:
    """``sigma(u)``, ``kappa(u, v)`` or ``alpha(u, v, w)`` by number of arguments."""
    vs = [_bits(S, v) for v in vectors]
    if len(vs) == 1:
        return _sigma(S, vs[0])
    if len(vs) == 2:
        return _kappa(S, *vs)
    if len(vs) == 3:
        return _alpha(S, *vs)
    raise DimensionMismatch("eval_forms takes one, two or three vectors")


# ---------------------------------------------------------------------------
# the group G by collection


class TrialityGroup:
    """Arithmetic in ``G`` and in ``G`` extended by the automorphisms ``tau``, ``rho``.

    Elements of ``G`` are tuples of ``3n + 2`` bits: the exponents of
    ``g_1..g_n, f_1..f_n, h_1..h_n, u, v`` in normal form.  Elements of the
    extended group are pairs ``(m, s)`` with ``s`` an index into
    :attr:`automorphisms`, multiplied as ``(m, s)(m', s') = (m s(m'), s s')``.
    """

    def __init__(self, S: SymplecticCubicSpace, check: bool = True):
        self.space = S
        n = self.n = S.n
        N = self.N = 3 * n + 2
        self.U, self.V = 3 * n, 3 * n + 1
        g = list(range(n))
        f = [n + i for i in range(n)]
        h = [2 * n + i for i in range(n)]
        self.g, self.f, self.h = g, f, h
        U, V = self.U, self.V
        power: list[list[int]] = [[] for _ in range(N)]
        comm = [[[] for _ in range(N)] for _ in range(N)]
        for i in range(n):
            if S.sigma[i]:
                power[g[i]] = [U]
                power[f[i]] = [V]
        for i in range(n):
            for j in range(n):
                if i != j and S.kappa[i, j]:
                    comm[g[i]][g[j]] = [U]
                    comm[f[i]][f[j]] = [V]
                word = [h[k] for k in range(n) if S.alpha[i, j, k]]
                if S.kappa[i, j]:
                    word += [U, V]
                comm[g[i]][f[j]] = comm[f[j]][g[i]] = word
            comm[g[i]][h[i]] = comm[h[i]][g[i]] = [U]
            comm[f[i]][h[i]] = comm[h[i]][f[i]] = [V]
        self._power = power
        self._comm = comm
        self.identity = (0,) * N
        self._gens = [self._gen(k) for k in range(N)]

        gi = self._gens
        tau = {}
        rho = {}
        for i in range(n):
            tau[g[i]], tau[f[i]], tau[h[i]] = gi[f[i]], gi[g[i]], gi[h[i]]
            rho[g[i]], rho[h[i]] = gi[f[i]], gi[h[i]]
            rho[f[i]] = self.inverse(self.mul(gi[g[i]], gi[f[i]]))
        tau[U], tau[V] = gi[V], gi[U]
        rho[U], rho[V] = gi[V], self.mul(gi[U], gi[V])
        self._tau_images = tuple(tau[k] for k in range(N))
        self._rho_images = tuple(rho[k] for k in range(N))
        if check:
            self.check_relations()
        self._build_s3()

    def _gen(self, k: int) -> tuple:
        e = [0] * self.N
        e[k] = 1
        return tuple(e)

    # -- collection --------------------------------------------------------

    def _mul_gen(self, e: list[int], k: int) -> None:
        suffix = [j for j in range(k + 1, self.N) if e[j]]
        for j in suffix:
            e[j] = 0
        if e[k]:
            e[k] = 0
            for w in self._power[k]:
                self._mul_gen(e, w)
        else:
            e[k] = 1
        # x_j x_k = x_k x_j [x_j, x_k] for each suffix generator x_j
        for j in suffix:
            self._mul_gen(e, j)
            for w in self._comm[j][k]:
                self._mul_gen(e, w)

    def mul(self, x: tuple, y: tuple) -> tuple:
        e = list(x)
        for k in range(self.N):
            if y[k]:
                self._mul_gen(e, k)
        return tuple(e)

    def inverse(self, x: tuple) -> tuple:
        # x_k^-1 = x_k * (x_k^2)^-1 and every power word is a central involution
        e = list(self.identity)
        for k in reversed(range(self.N)):
            if x[k]:
                self._mul_gen(e, k)
                for w in self._power[k]:
                    self._mul_gen(e, w)
        return tuple(e)

    def word(self, gens: list[int]) -> tuple:
        e = list(self.identity)
        for k in gens:
            self._mul_gen(e, k)
        return tuple(e)

    def commutator(self, x: tuple, y: tuple) -> tuple:
        return self.mul(self.mul(self.inverse(x), self.inverse(y)), self.mul(x, y))

    def elements(self):
        for bits in itertools.product((0, 1), repeat=self.N):
            yield bits

    def apply(self, images: tuple, x: tuple) -> tuple:
        """Image of ``x`` under the endomorphism with the given generator images."""
        out = self.identity
        for k in range(self.N):
            if x[k]:
                out = self.mul(out, images[k])
        return out

    # -- the S3 of automorphisms --------------------------------------------

    def _build_s3(self) -> None:
        ident = tuple(self._gens)
        autos = [ident]
        index = {ident: 0}
        todo = [ident]
        while todo:
            a = todo.pop(0)
            for b in (self._tau_images, self._rho_images):
                c = tuple(self.apply(a, b[k]) for k in range(self.N))  # a after b
                if c not in index:
                    index[c] = len(autos)
                    autos.append(c)
                    todo.append(c)
        if len(autos) != 6:
            raise InvalidSpace(f"tau and rho generate {len(autos)} automorphisms, expected 6")
        self.automorphisms = autos
        self._auto_index = index
        self.tau_index = index[self._tau_images]
        self.rho_index = index[self._rho_images]
        comp = np.empty((6, 6), dtype=np.intp)
        for i, a in enumerate(autos):
            for j, b in enumerate(autos):
                comp[i, j] = index[tuple(self.apply(a, b[k]) for k in range(self.N))]
        self._compose = comp
        self._auto_inverse = [int(np.flatnonzero(comp[i] == 0)[0]) for i in range(6)]

    def xmul(self, x: tuple, y: tuple) -> tuple:
        (m, s), (m2, s2) = x, y
        return (self.mul(m, self.apply(self.automorphisms[s], m2)), int(self._compose[s, s2]))

    def xinverse(self, x: tuple) -> tuple:
        m, s = x
        si = self._auto_inverse[s]
        return (self.apply(self.automorphisms[si], self.inverse(m)), si)

    def conj(self, x: tuple, y: tuple) -> tuple:
        """``x^y = y^-1 x y``."""
        return self.xmul(self.xinverse(y), self.xmul(x, y))

    @property
    def tau(self) -> tuple:
        return (self.identity, self.tau_index)

    @property
    def rho(self) -> tuple:
        return (self.identity, self.rho_index)

    # -- consistency ---------------------------------------------------------

    def check_relations(self, samples: int = 0, rng: np.random.Generator | None = None) -> None:
        """Raise :class:`InvalidSpace` unless the collector and automorphisms are consistent."""
        S, n = self.space, self.n
        gi = self._gens
        one = self.identity
        g, f, h, U, V = self.g, self.f, self.h, self.U, self.V

        def expect(lhs, rhs, what):
            if lhs != rhs:
                raise InvalidSpace(f"relation {what} fails")

        def upow(k, e):
            return gi[k] if e else one

        for i in range(n):
            expect(self.mul(gi[g[i]], gi[g[i]]), upow(U, S.sigma[i]), f"g{i + 1}^2")
            expect(self.mul(gi[f[i]], gi[f[i]]), upow(V, S.sigma[i]), f"f{i + 1}^2")
            expect(self.mul(gi[h[i]], gi[h[i]]), one, f"h{i + 1}^2")
            for j in range(n):
                expect(self.commutator(gi[g[i]], gi[g[j]]), upow(U, S.kappa[i, j]), "[g,g]")
                expect(self.commutator(gi[f[i]], gi[f[j]]), upow(V, S.kappa[i, j]), "[f,f]")
                w = self.word([h[k] for k in range(n) if S.alpha[i, j, k]])
                if S.kappa[i, j]:
                    w = self.mul(w, self.word([U, V]))
                expect(self.commutator(gi[g[i]], gi[f[j]]), w, "[g,f]")
                expect(self.commutator(gi[g[i]], gi[h[j]]), upow(U, i == j), "[g,h]")
                expect(self.commutator(gi[f[i]], gi[h[j]]), upow(V, i == j), "[f,h]")
                expect(self.commutator(gi[h[i]], gi[h[j]]), one, "[h,h]")
        for k in range(self.N):
            for z in (U, V):
                expect(self.commutator(gi[k], gi[z]), one, "central u, v")
        expect(self.mul(gi[U], gi[U]), one, "u^2")
        expect(self.mul(gi[V], gi[V]), one, "v^2")
        # the generator images of tau and rho must satisfy the relations too
        for images in (self._tau_images, self._rho_images):
            for a in range(self.N):
                for b in range(self.N):
                    x, y = gi[a], gi[b]
                    expect(self.apply(images, self.mul(x, y)), self.mul(images[a], images[b]), "automorphism")
        tau = self._tau_images
        rho = self._rho_images

        def compose(a, b):
            return tuple(self.apply(a, b[k]) for k in range(self.N))

        ident = tuple(gi)
        rho3 = compose(rho, compose(rho, rho))
        rt = compose(rho, tau)
        expect(rho3, ident, "rho^3")
        expect(compose(tau, tau), ident, "tau^2")
        expect(compose(rt, rt), ident, "(rho tau)^2")
        if samples:
            rng = rng or np.random.default_rng(0)
            for _ in range(samples):
                x, y, z = (tuple(int(b) for b in rng.integers(0, 2, self.N)) for _ in range(3))
                expect(self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z)), "associativity")


def build_triality_group(S: SymplecticCubicSpace, check: bool = True) -> TrialityGroup:
    return TrialityGroup(S, check=check)


def _sort_key(x: tuple) -> tuple:
    m, s = x
    return (m, s)


def tau_class(G: TrialityGroup) -> list[tuple]:
    """Conjugacy class of ``tau`` under ``G``, sorted by normal form."""
    gens = [(G._gens[k], 0) for k in range(G.N)]
    start = G.tau
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in gens:
            z = G.conj(x, y)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return sorted(seen, key=_sort_key)


def triality_loop_table(G: TrialityGroup) -> tuple[np.ndarray, list[tuple]]:
    """The table ``ct[i][j] = index of s_i^rho s_j^(rho^2) s_i^rho`` over the class of ``tau``."""
    cls = tau_class(G)
    index = {x: i for i, x in enumerate(cls)}
    rho = G.rho
    rho2 = G.xmul(rho, rho)
    a = [G.conj(x, rho) for x in cls]
    b = [G.conj(x, rho2) for x in cls]
    k = len(cls)
    ct = np.empty((k, k), dtype=np.intp)
    for i in range(k):
        for j in range(k):
            z = G.xmul(G.xmul(a[i], b[j]), a[i])
            pos = index.get(z)
            if pos is None:
                raise ClassNotClosed(f"product of class elements {i} and {j} leaves the class")
            ct[i, j] = pos
    return ct, cls


def triality_loop_from_class(G: TrialityGroup) -> Loop:
    ct, _ = triality_loop_table(G)
    return Loop(normalize_table(ct), check=False)


@dataclass
class CodeLoop:
    loop: Loop
    space: SymplecticCubicSpace
    # positions of tau^(g_i), the images of the basis vectors
    basis: list[int]
    group: TrialityGroup


def build_code_loop(S: SymplecticCubicSpace) -> CodeLoop:
    G = TrialityGroup(S)
    ct, cls = triality_loop_table(G)
    # the class product need not have tau as a two-sided neutral element;
    # normalizing keeps class indices as labels
    t = normalize_table(ct)
    index = {x: i for i, x in enumerate(cls)}
    basis = [index[G.conj(G.tau, (G._gens[G.g[i]], 0))] for i in range(S.n)]
    L = Loop(t, check=False)
    L.attrs.set("codeLoopBasis", tuple(basis))
    return CodeLoop(L, S, basis, G)


def code_loop_from_space(S: SymplecticCubicSpace) -> Loop:
    """The Moufang loop of order ``2^(n+1)`` attached to ``S``."""
    return build_code_loop(S).loop


def _span_closure(F: Loop, gens: list[int]) -> set[int]:
    span = {0}
    for x in gens:
        span |= {int(F.table[y, x]) for y in span}
    return span


def space_from_code_loop(L: Loop, basis: list[int] | None = None) -> tuple[SymplecticCubicSpace, list[int]]:
    """Structure constants read off squares, commutators and associators.

    ``basis`` lists positions in ``L`` whose images form a basis of
    ``L / Phi(L)``; by default the first positions extending the span are
    used.  Returns the space together with the basis.
    """
    n1 = L.order.bit_length() - 1
    if L.order != 1 << n1:
        raise NotPowerOfTwo(f"order {L.order} is not a power of two")
    Phi = frattini_subloop(L)
    if Phi.order != 2:
        raise NotSmallFrattini(f"Frattini subloop has order {Phi.order}")
    z = Phi.pos_in_parent[1]
    if z not in center(L).pos_in_parent:
        raise NotCentral("the Frattini subloop is not central")
    n = n1 - 1
    F, cmap = factor_loop_with_map(L, Phi)
    if basis is None:
        basis, images, span = [], [], {0}
        for x in range(L.order):
            if int(cmap[x]) not in span:
                basis.append(x)
                images.append(int(cmap[x]))
                span = _span_closure(F, images)
    else:
        basis = [L.index(x) for x in basis]
        span = _span_closure(F, [int(cmap[x]) for x in basis])
    if len(basis) != n or len(span) != F.order:
        raise DimensionMismatch(f"expected a basis of {n} vectors for L/Phi(L)")
    sq = np.diagonal(L.table)
    comm = L.commutator_array()
    assoc = L.associator_array()
    sigma = [i for i in range(n) if sq[basis[i]] == z]
    kappa = [(i, j) for i, j in itertools.combinations(range(n), 2) if comm[basis[i], basis[j]] == z]
    alpha = [(i, j, k) for i, j, k in itertools.combinations(range(n), 3) if assoc[basis[i], basis[j], basis[k]] == z]
    return SymplecticCubicSpace.from_constants(n, sigma, kappa, alpha), basis

