"""Exact multiplicative linear algebra in finite graded-commutative algebras over GF(2).

Everything here is bit-exact: elements are 0/1 coefficient vectors over a fixed
basis, subspaces are canonical row-reduced bit matrices, and cup-lengths are
computed by an exhaustive subspace ladder that returns a witness certificate
(an explicit ordered product that is nonzero at the claimed length).

The two derived subspaces of a tensor square that drive the complexity bounds
are the kernel of the multiplication map (the zero-divisor ideal) and the span
of the swap-symmetrized pairs x(x)y + y(x)x (the norm subspace).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

TENSOR_LABEL_SEP = "⊗"  # printed between factor labels in tensor bases


def _as_key(i: int, j: int) -> tuple[int, int]:
    return (int(i), int(j))


class GradedF2Algebra:
    """Finite-dimensional graded-commutative algebra over the two-element field.

    basis: list of (label, degree) pairs; mult maps an ordered basis pair
    (i, j) to the tuple of basis indices appearing in the product e_i * e_j.
    Pairs with zero product may be omitted. Products whose total degree
    exceeds top_degree must be empty (truncation encodes top-dimension
    vanishing).
    """

    def __init__(self, top_degree, basis, mult, unit_index=0):
        self.top_degree = int(top_degree)
        self.basis = [(str(lbl), int(deg)) for (lbl, deg) in basis]
        self.n = len(self.basis)
        self.labels = [b[0] for b in self.basis]
        self.degrees = np.array([b[1] for b in self.basis], dtype=np.int64)
        self.unit_index = int(unit_index)
        if self.top_degree < 0:
            raise ValueError("top_degree must be >= 0")
        if not (0 <= self.unit_index < self.n):
            raise ValueError("unit_index out of range")
        if self.degrees[self.unit_index] != 0:
            raise ValueError("unit must have degree 0")
        # symmetrize the table; store sorted index tuples, drop empty entries
        table: dict[tuple[int, int], tuple[int, ...]] = {}
        for (i, j), ks in mult.items():
            ks = tuple(sorted(int(k) for k in ks))
            if not ks:
                continue
            key = _as_key(i, j)
            prev = table.get(key)
            if prev is not None and prev != ks:
                raise ValueError(f"conflicting products for pair {key}")
            table[key] = ks
            rkey = _as_key(j, i)
            rprev = table.get(rkey)
            if rprev is None:
                table[rkey] = ks
            elif rprev != ks:
                raise ValueError(f"product table is not commutative at {key}")
        self._mult = table
        self._by_degree: dict[int, np.ndarray] = {}
        for d in sorted(set(self.degrees.tolist())):
            self._by_degree[int(d)] = np.flatnonzero(self.degrees == d)
        self._pair_tensors: dict[tuple[int, int], np.ndarray | None] = {}
        self._monomial: np.ndarray | None | bool = False  # False = not built yet
        # tensor-square bookkeeping (set by tensor_square / tensor_product)
        self._tensor_factor: GradedF2Algebra | None = None

    # ------------------------------------------------------------------ basics

    def degree(self, i: int) -> int:
        return int(self.degrees[i])

    def degrees_present(self):
        return sorted(self._by_degree)

    def indices_of_degree(self, d: int) -> np.ndarray:
        return self._by_degree.get(int(d), np.empty(0, dtype=np.int64))

    def product_indices(self, i: int, j: int) -> tuple[int, ...]:
        return self._mult.get(_as_key(i, j), ())

    def zero(self) -> "F2Element":
        return F2Element(np.zeros(self.n, dtype=np.uint8))

    def unit(self) -> "F2Element":
        return self.basis_element(self.unit_index)

    def basis_element(self, i: int) -> "F2Element":
        v = np.zeros(self.n, dtype=np.uint8)
        v[i] = 1
        return F2Element(v)

    def element(self, indices) -> "F2Element":
        v = np.zeros(self.n, dtype=np.uint8)
        for i in indices:
            v[int(i)] ^= 1
        return F2Element(v)

    def element_from_labels(self, labels) -> "F2Element":
        index = {lbl: i for i, lbl in enumerate(self.labels)}
        return self.element(index[l] for l in labels)

    def format_element(self, x) -> str:
        v = _coeffs(x, self.n)
        terms = [self.labels[i] for i in np.flatnonzero(v)]
        return " + ".join(terms) if terms else "0"

    # ------------------------------------------------------------------ product

    def mul(self, x, y) -> "F2Element":
        """Bilinear extension of the basis product table."""
        xv = _coeffs(x, self.n)
        yv = _coeffs(y, self.n)
        out = np.zeros(self.n, dtype=np.uint8)
        ys = np.flatnonzero(yv)
        for i in np.flatnonzero(xv):
            for j in ys:
                for k in self._mult.get((int(i), int(j)), ()):
                    out[k] ^= 1
        return F2Element(out)

    def element_degrees(self, x) -> list[int]:
        v = _coeffs(x, self.n)
        return sorted({int(self.degrees[i]) for i in np.flatnonzero(v)})

    def is_homogeneous(self, x) -> bool:
        return len(self.element_degrees(x)) <= 1

    # ---------------------------------------------------------- tensor products

    def tensor_square(self) -> "GradedF2Algebra":
        """The algebra on ordered basis pairs with (x(x)y)(x'(x)y') = xx'(x)yy'."""
        T = tensor_product(self, self)
        T._tensor_factor = self
        return T

    def is_tensor_square(self) -> bool:
        return self._tensor_factor is not None

    @property
    def tensor_factor(self) -> "GradedF2Algebra":
        if self._tensor_factor is None:
            raise ValueError("algebra is not a recognized tensor square")
        return self._tensor_factor

    def pair_index(self, i: int, j: int) -> int:
        """Basis index of e_i (x) e_j inside a tensor square."""
        nA = self.tensor_factor.n
        return int(i) * nA + int(j)

    # ------------------------------------------------------------- degree cache

    def pair_tensor(self, d1: int, d2: int):
        """Structure tensor (a, b, m) for degree-(d1) x degree-(d2) products.

        Returns None when every such product vanishes (including truncation).
        """
        key = (int(d1), int(d2))
        if key in self._pair_tensors:
            return self._pair_tensors[key]
        dout = d1 + d2
        rows = self.indices_of_degree(d1)
        cols = self.indices_of_degree(d2)
        outs = self.indices_of_degree(dout)
        tensor = None
        if len(rows) and len(cols) and len(outs) and dout <= self.top_degree:
            pos = {int(g): p for p, g in enumerate(outs)}
            C = np.zeros((len(rows), len(cols), len(outs)), dtype=np.uint8)
            touched = False
            for a, i in enumerate(rows):
                for b, j in enumerate(cols):
                    for k in self._mult.get((int(i), int(j)), ()):
                        C[a, b, pos[k]] ^= 1
                        touched = True
            tensor = C if touched else None
        self._pair_tensors[key] = tensor
        return tensor

    def monomial_table(self):
        """(n, n) index table when every basis product has at most one term, else None."""
        if self._monomial is False:
            PI = np.full((self.n, self.n), -1, dtype=np.int32)
            ok = True
            for (i, j), ks in self._mult.items():
                if len(ks) > 1:
                    ok = False
                    break
                PI[i, j] = ks[0]
            self._monomial = PI if ok else None
        return self._monomial

    # ---------------------------------------------------------------- validation

    def validate(self) -> None:
        """Exhaustive unit / commutativity / associativity / grading checks."""
        for (i, j), ks in self._mult.items():
            dd = self.degree(i) + self.degree(j)
            if dd > self.top_degree:
                raise ValueError(f"nonzero product above top degree at {(i, j)}")
            if any(self.degree(k) != dd for k in ks):
                raise ValueError(f"product of pair {(i, j)} mixes degrees")
            if self._mult.get((j, i), ()) != ks:
                raise ValueError(f"multiplication not commutative at {(i, j)}")
        u = self.unit_index
        for i in range(self.n):
            if self.product_indices(u, i) != (i,) or self.product_indices(i, u) != (i,):
                raise ValueError(f"unit law fails on basis element {i}")
        PI = self.monomial_table()
        if PI is not None:
            self._validate_assoc_monomial(PI)
        else:
            self._validate_assoc_generic()

    def _validate_assoc_monomial(self, PI) -> None:
        n = self.n
        PIrow = np.vstack([PI, np.full((1, n), -1, dtype=PI.dtype)])  # row -1 absorbs
        PIcol = np.hstack([PI, np.full((n, 1), -1, dtype=PI.dtype)])  # col -1 absorbs
        step = max(1, (1 << 22) // max(1, n * n))
        for i0 in range(0, n, step):
            block = PI[i0 : i0 + step]  # (c, n)
            left = PIrow[block]  # (e_i e_j) e_k
            right = PIcol[i0 : i0 + step][:, PI]  # e_i (e_j e_k)
            if not np.array_equal(left, right):
                raise ValueError("multiplication is not associative")

    def _validate_assoc_generic(self) -> None:
        for i in range(self.n):
            ei = self.basis_element(i)
            for j in range(self.n):
                eij = self.mul(ei, self.basis_element(j))
                for k in range(self.n):
                    lhs = self.mul(eij, self.basis_element(k))
                    rhs = self.mul(ei, self.mul(self.basis_element(j), self.basis_element(k)))
                    if lhs != rhs:
                        raise ValueError(f"associativity fails on triple {(i, j, k)}")

    # ---------------------------------------------------------------- interchange

    def to_json_dict(self) -> dict:
        entries = []
        for (i, j), ks in sorted(self._mult.items()):
            if i <= j:
                entries.append([i, j, list(ks)])
        return {
            "top_degree": self.top_degree,
            "basis": [{"label": lbl, "degree": deg} for lbl, deg in self.basis],
            "mult": entries,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=False)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GradedF2Algebra":
        basis = [(b["label"], int(b["degree"])) for b in doc["basis"]]
        mult = {(int(i), int(j)): tuple(ks) for i, j, ks in doc["mult"]}
        unit = _infer_unit(basis, mult)
        return cls(int(doc["top_degree"]), basis, mult, unit_index=unit)

    @classmethod
    def from_json(cls, text: str) -> "GradedF2Algebra":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self):
        return f"GradedF2Algebra(dim={self.n}, top_degree={self.top_degree})"


def _infer_unit(basis, mult) -> int:
    n = len(basis)
    table = {}
    for (i, j), ks in mult.items():
        table[(i, j)] = tuple(sorted(ks))
        table.setdefault((j, i), tuple(sorted(ks)))
    candidates = []
    for u in range(n):
        if basis[u][1] != 0:
            continue
        if all(table.get((u, i), ()) == (i,) for i in range(n)):
            candidates.append(u)
    if len(candidates) != 1:
        raise ValueError("cannot infer a unique unit element from the document")
    return candidates[0]


def _coeffs(x, n: int) -> np.ndarray:
    v = x.coeffs if isinstance(x, F2Element) else np.asarray(x, dtype=np.uint8)
    v = np.asarray(v, dtype=np.uint8) & 1
    if v.shape != (n,):
        raise ValueError(f"element has {v.shape} coefficients, basis has {n}")
    return v


class F2Element:
    """Coefficient bit-vector over an algebra basis (possibly inhomogeneous)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        v = np.asarray(coeffs, dtype=np.uint8) & 1
        if v.ndim != 1:
            raise ValueError("coefficients must be a flat bit-vector")
        self.coeffs = v

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __add__(self, other: "F2Element") -> "F2Element":
        return F2Element(self.coeffs ^ other.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, F2Element) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self):
        return f"F2Element({np.flatnonzero(self.coeffs).tolist()})"


# ---------------------------------------------------------------------- rref


def rref(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form over GF(2); returns (reduced rows, pivot columns).

    The result is the canonical basis of the row span: two spanning sets of the
    same subspace reduce to identical matrices.
    """
    M = (np.asarray(rows, dtype=np.uint8) & 1).copy()
    if M.ndim != 2:
        raise ValueError("expected a 2-d bit matrix")
    nrows, ncols = M.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        hits = np.flatnonzero(M[r:, c])
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if others.size:
            M[others] ^= M[r]
        pivots.append(c)
        r += 1
    return M[:r], np.array(pivots, dtype=np.int64)


class F2Subspace:
    """Homogeneous-friendly subspace given by a canonical row-reduced bit matrix.

    Rows are stored in reduced echelon form and ordered by (degree of the
    pivot's basis element, pivot column), so equal subspaces compare equal as
    matrices.
    """

    def __init__(self, ambient: GradedF2Algebra, rows):
        M = np.asarray(rows, dtype=np.uint8).reshape(-1, ambient.n) & 1
        R, piv = rref(M)
        if len(piv):
            order = np.lexsort((piv, ambient.degrees[piv]))
            R = R[order]
            piv = piv[order]
        self.ambient = ambient
        self.rows = R
        self.pivots = piv

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def is_zero(self) -> bool:
        return self.dim == 0

    def basis_elements(self) -> list[F2Element]:
        return [F2Element(r) for r in self.rows]

    def reduce_vector(self, v) -> np.ndarray:
        """Remainder of v after elimination against the subspace basis."""
        w = _coeffs(v, self.ambient.n).copy()
        for row, p in zip(self.rows, self.pivots):
            if w[p]:
                w ^= row
        return w

    def contains(self, v) -> bool:
        return not self.reduce_vector(v).any()

    def contains_rows(self, M) -> bool:
        return all(self.contains(r) for r in np.asarray(M, dtype=np.uint8))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Subspace)
            and self.ambient is other.ambient
            and np.array_equal(self.rows, other.rows)
        )

    def __repr__(self):
        return f"F2Subspace(dim={self.dim} of {self.ambient!r})"


# -------------------------------------------------------------- constructions


def tensor_product(A: GradedF2Algebra, B: GradedF2Algebra) -> GradedF2Algebra:
    """Graded tensor product over GF(2) (no signs mod 2); basis (i, j) -> i*nB + j."""
    nB = B.n
    basis = []
    for la, da in A.basis:
        for lb, db in B.basis:
            basis.append((f"{la}{TENSOR_LABEL_SEP}{lb}", da + db))
    top = A.top_degree + B.top_degree
    mult: dict[tuple[int, int], tuple[int, ...]] = {}
    a_items = list(A._mult.items())
    b_items = list(B._mult.items())
    for (i1, i2), ka in a_items:
        for (j1, j2), kb in b_items:
            key = (i1 * nB + j1, i2 * nB + j2)
            acc = mult.get(key)
            terms = set(acc) if acc else set()
            for p in ka:
                for q in kb:
                    t = p * nB + q
                    if t in terms:
                        terms.remove(t)
                    else:
                        terms.add(t)
            if terms:
                mult[key] = tuple(sorted(terms))
            elif acc is not None:
                del mult[key]
    unit = A.unit_index * nB + B.unit_index
    return GradedF2Algebra(top, basis, mult, unit_index=unit)


def tensor_square(A: GradedF2Algebra) -> GradedF2Algebra:
    return A.tensor_square()


def positive_part(A: GradedF2Algebra) -> F2Subspace:
    """Span of all positive-degree basis elements."""
    idx = np.flatnonzero(A.degrees > 0)
    rows = np.zeros((len(idx), A.n), dtype=np.uint8)
    rows[np.arange(len(idx)), idx] = 1
    return F2Subspace(A, rows)


def diagonal_kernel(T: GradedF2Algebra) -> F2Subspace:
    """Kernel of the multiplication map x(x)y -> xy on a tensor square (the
    zero-divisor ideal), computed degreewise by row reduction."""
    A = T.tensor_factor
    out_rows = []
    for d in T.degrees_present():
        idx = T.indices_of_degree(d)
        if not len(idx):
            continue
        tgt = A.indices_of_degree(d)
        img = np.zeros((len(idx), max(1, len(tgt))), dtype=np.uint8)
        if len(tgt) and d <= A.top_degree:
            pos = {int(g): p for p, g in enumerate(tgt)}
            for r, t in enumerate(idx):
                i, j = divmod(int(t), A.n)
                for k in A.product_indices(i, j):
                    img[r, pos[k]] ^= 1
        # left-nullspace of img via reduction of [img | I]
        aug = np.hstack([img, np.eye(len(idx), dtype=np.uint8)])
        R, piv = rref(aug)
        w = img.shape[1]
        for row, p in zip(R, piv):
            if p >= w:  # zero image part: row encodes a kernel combination
                vec = np.zeros(T.n, dtype=np.uint8)
                vec[idx] = row[w:]
                out_rows.append(vec)
    if not out_rows:
        return F2Subspace(T, np.zeros((0, T.n), dtype=np.uint8))
    return F2Subspace(T, np.array(out_rows, dtype=np.uint8))


def norm_subspace(T: GradedF2Algebra) -> F2Subspace:
    """Span of e_i(x)e_j + e_j(x)e_i over distinct basis pairs of the factor.

    Basis-pair generators span the same space as all x(x)y + y(x)x with x != y:
    bilinear expansion mod 2 cancels the diagonal terms.
    """
    A = T.tensor_factor
    rows = []
    for i in range(A.n):
        for j in range(i + 1, A.n):
            vec = np.zeros(T.n, dtype=np.uint8)
            vec[T.pair_index(i, j)] ^= 1
            vec[T.pair_index(j, i)] ^= 1
            rows.append(vec)
    if not rows:
        return F2Subspace(T, np.zeros((0, T.n), dtype=np.uint8))
    return F2Subspace(T, np.array(rows, dtype=np.uint8))


# ----------------------------------------------------------------- cup length


@dataclass
class CupLengthCertificate:
    """Longest nonzero product found, with the factors that realize it."""

    length: int
    witnesses: list[F2Element] = field(default_factory=list)
    product: F2Element | None = None

    def to_json_dict(self, algebra: GradedF2Algebra) -> dict:
        return {
            "length": self.length,
            "witnesses": [algebra.format_element(w) for w in self.witnesses],
            "product": algebra.format_element(self.product) if self.product else "0",
        }


def split_positive_homogeneous(A: GradedF2Algebra, S: F2Subspace) -> F2Subspace:
    """Positive-degree homogeneous components of the spanning rows of S."""
    comps = []
    for row in S.rows:
        for d in A.degrees_present():
            if d <= 0:
                continue
            mask = A.degrees == d
            comp = row & mask
            if comp.any():
                comps.append(comp)
    if not comps:
        return F2Subspace(A, np.zeros((0, A.n), dtype=np.uint8))
    return F2Subspace(A, np.array(comps, dtype=np.uint8))


def _blocks_of(A: GradedF2Algebra, rows: np.ndarray) -> dict[int, np.ndarray]:
    """Split homogeneous rows into per-degree local-coordinate matrices."""
    blocks: dict[int, list[np.ndarray]] = {}
    for row in rows:
        nz = np.flatnonzero(row)
        d = int(A.degrees[nz[0]])
        idx = A.indices_of_degree(d)
        local = row[idx]
        blocks.setdefault(d, []).append(local)
    return {d: np.array(v, dtype=np.uint8) for d, v in blocks.items()}


def _reduce_block(M: np.ndarray) -> np.ndarray:
    M = np.unique(M, axis=0)
    M = M[M.any(axis=1)]
    if not len(M):
        return M
    R, _ = rref(M)
    return R


def _ladder_step(A: GradedF2Algebra, V: dict[int, np.ndarray], S: dict[int, np.ndarray]):
    """span{ v*s } for v in the row basis of V and s in the row basis of S."""
    produced: dict[int, list[np.ndarray]] = {}
    for d1, rows in V.items():
        for d2, gens in S.items():
            dout = d1 + d2
            if dout > A.top_degree:
                continue
            C = A.pair_tensor(d1, d2)
            if C is None:
                continue
            T1 = np.tensordot(rows.astype(np.int64), C.astype(np.int64), axes=([1], [0])) & 1
            P = np.einsum("gb,rbm->rgm", gens.astype(np.int64), T1) & 1
            P = P.reshape(-1, P.shape[2]).astype(np.uint8)
            if P.any():
                produced.setdefault(dout, []).append(P)
    out: dict[int, np.ndarray] = {}
    for d, parts in produced.items():
        R = _reduce_block(np.vstack(parts))
        if len(R):
            out[d] = R
    return out


def _embed_block_row(A: GradedF2Algebra, d: int, local: np.ndarray) -> np.ndarray:
    vec = np.zeros(A.n, dtype=np.uint8)
    vec[A.indices_of_degree(d)] = local
    return vec


def cup_length(A: GradedF2Algebra, S: F2Subspace | None = None) -> CupLengthCertificate:
    """Largest k such that some product of k positive-degree elements of S is
    nonzero, with witnesses extracted by greedy pivot-order back-tracking.

    S defaults to the full positive part of A. Inhomogeneous spanning rows are
    split into homogeneous components before the ladder.
    """
    if S is None:
        S = positive_part(A)
    if S.ambient is not A:
        raise ValueError("subspace does not live in the given algebra")
    Sp = split_positive_homogeneous(A, S)
    if Sp.is_zero():
        return CupLengthCertificate(length=0, witnesses=[], product=A.unit())
    gen_blocks = _blocks_of(A, Sp.rows)
    levels: list[dict[int, np.ndarray]] = [gen_blocks]
    while True:
        nxt = _ladder_step(A, levels[-1], gen_blocks)
        if not nxt:
            break
        levels.append(nxt)
    k = len(levels)

    # Greedy witness extraction: extend a nonzero prefix product one generator
    # at a time, in pivot order, keeping the invariant prefix * V_rem != 0.
    gen_elems = Sp.basis_elements()
    level_rows: list[list[np.ndarray]] = []
    for lev in levels:
        rows = []
        for d in sorted(lev):
            for local in lev[d]:
                rows.append(_embed_block_row(A, d, local))
        level_rows.append(rows)

    def extendable(prefix: F2Element, rem: int) -> bool:
        if rem == 0:
            return not prefix.is_zero()
        if prefix.is_zero():
            return False
        return any(not A.mul(prefix, F2Element(r)).is_zero() for r in level_rows[rem - 1])

    witnesses: list[F2Element] = []
    prefix = A.unit()
    for step in range(k):
        rem = k - step - 1
        for g in gen_elems:
            q = A.mul(prefix, g)
            if extendable(q, rem):
                witnesses.append(g)
                prefix = q
                break
        else:  # pragma: no cover - the ladder guarantees an extension exists
            raise RuntimeError("witness extraction failed to extend a nonzero product")
    return CupLengthCertificate(length=k, witnesses=witnesses, product=prefix)


def verify_certificate(A: GradedF2Algebra, cert: CupLengthCertificate, S: F2Subspace) -> bool:
    """Recompute the witness product and membership; True iff internally valid."""
    try:
        Sp = split_positive_homogeneous(A, S)
        if cert.length != len(cert.witnesses):
            return False
        if cert.length == 0:
            return not cert.witnesses and (cert.product is None or cert.product == A.unit())
        prod = A.unit()
        for w in cert.witnesses:
            if w.is_zero() or not Sp.contains(w.coeffs):
                return False
            degs = A.element_degrees(w)
            if len(degs) != 1 or degs[0] <= 0:
                return False
            prod = A.mul(prod, w)
        if prod.is_zero():
            return False
        return cert.product is not None and prod == cert.product
    except (ValueError, IndexError):
        return False
