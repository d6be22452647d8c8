"""Weighted cohomology tables and the monodromy spectral sequence on Z_1.

Cohomology is modelled as free modules over a coefficient ring in which 2 is
invertible, with a named basis in every degree and a Frobenius eigenvalue
``sign * p^exponent`` attached to each basis class. Maps between such modules
are integer matrices in the named bases.

Strata after blowing up the singular point:

* Z_1 = P^(n-1), basis h^k in degree 2k;
* Q, a smooth quadric in Z_1, basis i1*h^k (restrictions of h^k) in degree
  2k for 0 <= k <= n-2, plus the primitive class ``prim`` in degree n-2
  when n is even, with eigenvalue eps * p^((n-2)/2);
* Z_2, a P^1-bundle over Q, so H(Z_2) = H(Q) + t H(Q)(-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import qlinalg
from .errors import EpsilonMismatch, InvalidInput, PageMismatch


@dataclass(frozen=True, order=True)
class FrobWeight:
    sign: int
    exponent: int
    twist: int = dc_field(default=0, compare=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")

    def twisted(self, k: int = 1) -> FrobWeight:
        """Tate twist by (-k): multiply the eigenvalue by p^k."""
        return FrobWeight(self.sign, self.exponent + k, self.twist + k)

    def eigenvalue(self, p: int) -> int:
        return self.sign * p**self.exponent

    @property
    def key(self) -> tuple[int, int]:
        return (self.sign, self.exponent)

    def __str__(self):
        s = "+" if self.sign > 0 else "-"
        return f"{s}p^{self.exponent}"


@dataclass(frozen=True)
class BasisClass:
    symbol: str
    weight: FrobWeight

    def twisted(self, k: int = 1) -> BasisClass:
        return BasisClass(f"{self.symbol}({-k})", self.weight.twisted(k))


@dataclass
class WeightedModule:
    """Graded free module: degree -> basis classes with Frobenius weights."""

    p: int
    classes: dict[int, tuple[BasisClass, ...]]

    def rank(self, degree: int) -> int:
        return len(self.classes.get(degree, ()))

    def weights(self, degree: int) -> list[FrobWeight]:
        return [c.weight for c in self.classes.get(degree, ())]

    def degrees(self) -> list[int]:
        return sorted(d for d, cs in self.classes.items() if cs)

    def total_rank(self) -> int:
        return sum(len(cs) for cs in self.classes.values())

    def basis(self, degree: int) -> tuple[BasisClass, ...]:
        return self.classes.get(degree, ())

    def twisted(self, k: int = 1) -> WeightedModule:
        return WeightedModule(self.p, {d: tuple(c.twisted(k) for c in cs) for d, cs in self.classes.items()})

    def as_table(self) -> dict[int, list[int]]:
        return {d: [w.eigenvalue(self.p) for w in self.weights(d)] for d in self.degrees()}


def _check_epsilon(n, epsilon):
    if n % 2:
        if epsilon is not None:
            raise EpsilonMismatch("odd n carries no epsilon")
    elif epsilon not in (1, -1):
        raise EpsilonMismatch("even n needs epsilon = +1 or -1")


def cohomology_projective_space(dim: int, p: int) -> WeightedModule:
    if dim < 1:
        raise InvalidInput("projective dimension must be >= 1")
    return WeightedModule(p, {2 * k: (BasisClass(f"h^{k}", FrobWeight(1, k)),) for k in range(dim + 1)})


def cohomology_quadric(n: int, epsilon, p: int) -> WeightedModule:
    """Smooth quadric of dimension n-2 in P^(n-1)."""
    if n < 3:
        raise InvalidInput("the quadric needs n >= 3")
    _check_epsilon(n, epsilon)
    classes: dict[int, list[BasisClass]] = {}
    for k in range(n - 1):
        classes.setdefault(2 * k, []).append(BasisClass(f"i1*h^{k}", FrobWeight(1, k)))
    if n % 2 == 0:
        classes[n - 2].append(BasisClass("prim", FrobWeight(epsilon, (n - 2) // 2)))
    return WeightedModule(p, {d: tuple(cs) for d, cs in classes.items()})


def cohomology_p1_bundle(base: WeightedModule) -> WeightedModule:
    """Projective bundle formula: H(Z) = H(base) + t * H(base)(-1)[-2]."""
    degrees = set(base.classes) | {d + 2 for d in base.classes}
    classes = {}
    for d in sorted(degrees):
        lower = base.basis(d)
        upper = tuple(
            BasisClass(f"t*{c.symbol}", c.weight.twisted()) for c in base.basis(d - 2)
        )
        if lower or upper:
            classes[d] = lower + upper
    return WeightedModule(base.p, classes)


def point_module(p: int) -> WeightedModule:
    return WeightedModule(p, {0: (BasisClass("1", FrobWeight(1, 0)),)})


def predicted_point_count(table: WeightedModule, k: int = 1) -> int:
    """Lefschetz trace of Frob^k: alternating sum of eigenvalue powers."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p = table.p
    total = 0
    for d in table.degrees():
        tr = sum(w.sign**k * p ** (k * w.exponent) for w in table.weights(d))
        total += (-1) ** d * tr
    return total


# --- spectral pages -----------------------------------------------------------

@dataclass
class SpectralPage:
    """Entries (a, b) of a page; ``differentials[(a, b)]`` is the integer
    matrix of d: E^{a,b} -> E^{a+1,b} acting on coefficient columns."""

    name: str
    n: int
    epsilon: int | None
    p: int
    entries: dict[tuple[int, int], tuple[BasisClass, ...]]
    labels: dict[tuple[int, int], str]
    differentials: dict[tuple[int, int], list[list[int]]] = dc_field(default_factory=dict)

    def rank(self, a: int, b: int) -> int:
        return len(self.entries.get((a, b), ()))

    def weights(self, a: int, b: int) -> list[FrobWeight]:
        return [c.weight for c in self.entries.get((a, b), ())]

    def nonzero(self) -> dict[tuple[int, int], list[FrobWeight]]:
        return {ab: [c.weight for c in cs] for ab, cs in sorted(self.entries.items()) if cs}

    def to_json(self) -> list[dict]:
        out = []
        for (a, b) in sorted(set(self.entries) | set(self.labels), key=lambda ab: (ab[1], ab[0])):
            cs = self.entries.get((a, b), ())
            out.append({
                "a": a,
                "b": b,
                "label": self.labels.get((a, b), ""),
                "rank": len(cs),
                "basis": [c.symbol for c in cs],
                "weights": [c.weight.eigenvalue(self.p) for c in cs],
            })
        return out

    def render_text(self) -> str:
        cells = sorted(set(self.entries) | set(self.labels))
        if not cells:
            return f"{self.name}: empty\n"
        cols = sorted({a for a, _ in cells})
        rows = sorted({b for _, b in cells}, reverse=True)

        def cell(a, b):
            if (a, b) not in self.labels and (a, b) not in self.entries:
                return ""
            lab = self.labels.get((a, b), "")
            r = self.rank(a, b)
            ws = ",".join(str(w) for w in self.weights(a, b))
            return f"{lab} [{r}{': ' + ws if ws else ''}]"

        table = [[f"b={b}"] + [cell(a, b) for a in cols] for b in rows]
        header = [""] + [f"a={a}" for a in cols]
        widths = [max(len(r[i]) for r in table + [header]) for i in range(len(header))]
        lines = [f"{self.name} (n={self.n}, eps={self.epsilon}, p={self.p})"]
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for r in table:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        return "\n".join(lines) + "\n"


def _twisted_classes(classes):
    return tuple(c.twisted() for c in classes)


def build_E1_K(n: int, epsilon, p: int) -> SpectralPage:
    """First page for the whole blown-up special fiber (terms only).

    Row b reads H^{b-2}(Q)(-1) -> H^b(Z_1) + H^b(Z_2) -> H^b(Q).
    """
    if n < 3:
        raise InvalidInput("the blow-up page needs n >= 3")
    _check_epsilon(n, epsilon)
    HZ1 = cohomology_projective_space(n - 1, p)
    HQ = cohomology_quadric(n, epsilon, p)
    HZ2 = cohomology_p1_bundle(HQ)
    entries, labels = {}, {}
    for b in range(0, 2 * (n - 1) + 1):
        if 0 <= b - 2 <= 2 * (n - 2):
            entries[(-1, b)] = _twisted_classes(HQ.basis(b - 2))
            labels[(-1, b)] = f"H^{b - 2}(Q)(-1)"
        entries[(0, b)] = tuple(BasisClass(f"Z1:{c.symbol}", c.weight) for c in HZ1.basis(b)) + tuple(
            BasisClass(f"Z2:{c.symbol}", c.weight) for c in HZ2.basis(b)
        )
        labels[(0, b)] = f"H^{b}(Z1)+H^{b}(Z2)"
        if b <= 2 * (n - 2):
            entries[(1, b)] = HQ.basis(b)
            labels[(1, b)] = f"H^{b}(Q)"
    return SpectralPage("E1_K", n, epsilon, p, entries, labels)


# elementary maps in the named bases; each returns {symbol: coefficient}

def _restrict(n, k):
    """iota_1^*: H^{2k}(Z_1) -> H^{2k}(Q)."""
    return {f"i1*h^{k}": 1} if k <= n - 2 else {}


def _gysin(n, symbol):
    """iota_1_*: H^{2k}(Q) -> H^{2k+2}(Z_1)(1).

    Projection formula: iota_1_*(iota_1^* x) = x . cl(Q) = 2 h x, since Q is
    a quadric; primitive classes are the kernel.
    """
    if symbol == "prim":
        return {}
    k = int(symbol.split("^")[1])
    return {f"h^{k + 1}": 2} if k + 1 <= n - 1 else {}


def _restrict_gysin_2(n, symbol):
    """iota_2^* iota_2_* = -iota_1^* iota_1_*, forced by psi o phi = 0."""
    out = {}
    for h, c in _gysin(n, symbol).items():
        for r, c2 in _restrict(n, int(h.split("^")[1])).items():
            out[r] = out.get(r, 0) - c * c2
    return out


def build_E1_Z1(n: int, epsilon, p: int) -> SpectralPage:
    """First page restricted to Z_1, with the differentials

    phi(x) = (-iota_1_* x, iota_2^* iota_2_* x),   psi(x, y) = -iota_1^* x + y.
    """
    if n < 3:
        raise InvalidInput("the blow-up page needs n >= 3")
    _check_epsilon(n, epsilon)
    HZ1 = cohomology_projective_space(n - 1, p)
    HQ = cohomology_quadric(n, epsilon, p)
    entries, labels, diffs = {}, {}, {}
    for b in range(0, 2 * (n - 1) + 1):
        left = HQ.basis(b - 2) if b >= 2 else ()
        mid_z1 = HZ1.basis(b)
        mid_q = HQ.basis(b)
        right = HQ.basis(b) if b <= 2 * (n - 2) else ()
        if 0 <= b - 2 <= 2 * (n - 2):
            entries[(-1, b)] = _twisted_classes(left)
            labels[(-1, b)] = f"H^{b - 2}(Q)(-1)"
        entries[(0, b)] = tuple(BasisClass(f"Z1:{c.symbol}", c.weight) for c in mid_z1) + tuple(
            BasisClass(f"Q:{c.symbol}", c.weight) for c in mid_q
        )
        labels[(0, b)] = f"H^{b}(Z1)+H^{b}(Q)" if b <= 2 * (n - 2) else f"H^{b}(Z1)"
        if b <= 2 * (n - 2):
            entries[(1, b)] = right
            labels[(1, b)] = f"H^{b}(Q)"

        mid_index = {f"Z1:{c.symbol}": i for i, c in enumerate(mid_z1)}
        mid_index.update({f"Q:{c.symbol}": len(mid_z1) + i for i, c in enumerate(mid_q)})
        n_mid = len(mid_z1) + len(mid_q)
        if (-1, b) in entries:
            phi = [[0] * len(left) for _ in range(n_mid)]
            for j, c in enumerate(left):
                for h, coeff in _gysin(n, c.symbol).items():
                    phi[mid_index[f"Z1:{h}"]][j] -= coeff
                for r, coeff in _restrict_gysin_2(n, c.symbol).items():
                    phi[mid_index[f"Q:{r}"]][j] += coeff
            diffs[(-1, b)] = phi
        right_index = {c.symbol: i for i, c in enumerate(right)}
        psi = [[0] * n_mid for _ in range(len(right))]
        for j, c in enumerate(mid_z1):
            k = int(c.symbol.split("^")[1])
            for r, coeff in _restrict(n, k).items():
                if r in right_index:
                    psi[right_index[r]][j] -= coeff
        for j, c in enumerate(mid_q):
            if c.symbol in right_index:
                psi[right_index[c.symbol]][len(mid_z1) + j] += 1
        diffs[(0, b)] = psi

    page = SpectralPage("E1_Z1", n, epsilon, p, entries, labels, diffs)
    _check_equivariance(page)
    return page


def _check_equivariance(page: SpectralPage):
    for (a, b), M in page.differentials.items():
        src = page.entries.get((a, b), ())
        dst = page.entries.get((a + 1, b), ())
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                if x and src[j].weight.key != dst[i].weight.key:
                    raise PageMismatch(f"differential at {(a, b)} mixes Frobenius weights")


def _block(M, rows, cols):
    return [[M[i][j] for j in cols] for i in rows]


def _matmul(A, B):
    return [[sum(A[i][l] * B[l][j] for l in range(len(B))) for j in range(len(B[0]) if B else 0)] for i in range(len(A))]


@dataclass
class E2Result:
    page: SpectralPage
    phi_injective: dict[int, bool]
    psi_surjective: dict[int, bool]
    exact_middle: dict[int, bool]
    unit_divisors: bool


def _homology(page: SpectralPage, a: int, b: int):
    """Surviving classes at (a, b), computed weight block by weight block."""
    src = page.entries.get((a, b), ())
    incoming = page.differentials.get((a - 1, b))
    outgoing = page.differentials.get((a, b))
    prev = page.entries.get((a - 1, b), ())
    survivors = []
    for key in sorted({c.weight.key for c in src}):
        idx = [i for i, c in enumerate(src) if c.weight.key == key]
        if outgoing is not None and outgoing:
            tgt = page.entries.get((a + 1, b), ())
            tidx = [i for i, c in enumerate(tgt) if c.weight.key == key]
            out_block = _block(outgoing, tidx, idx)
        else:
            out_block = []
        kernel = qlinalg.nullspace(out_block, len(idx)) if out_block else qlinalg.nullspace([], len(idx))
        image = []
        if incoming is not None and prev:
            pidx = [i for i, c in enumerate(prev) if c.weight.key == key]
            if pidx:
                in_block = _block(incoming, idx, pidx)
                image = [[Fraction(in_block[i][j]) for i in range(len(idx))] for j in range(len(pidx))]
        image_rank = qlinalg.rank(image) if image else 0
        # quotient representatives: kernel vectors independent of the image
        span = [v for v in image if any(v)]
        reps = []
        for v in kernel:
            trial = span + [v]
            if qlinalg.rank(trial) > qlinalg.rank(span) if span else any(v):
                span = trial
                reps.append(v)
        if len(reps) != len(kernel) - image_rank:
            raise PageMismatch(f"image not contained in kernel at {(a, b)}")
        for v in reps:
            terms = [f"{_fmt_coeff(x)}{src[i].symbol}" for i, x in zip(idx, v) if x]
            survivors.append(BasisClass(" + ".join(terms).replace("+ -", "- "), src[idx[0]].weight))
    return tuple(survivors)


def _fmt_coeff(x: Fraction) -> str:
    if x == 1:
        return ""
    if x == -1:
        return "-"
    return f"{x}*"


def compute_E2_Z1(page: SpectralPage, check_closed_form: bool = True) -> E2Result:
    """Homology of every row of the E_1 page restricted to Z_1."""
    if page.name != "E1_Z1":
        raise ValueError("expected the page produced by build_E1_Z1")
    n, eps, p = page.n, page.epsilon, page.p
    entries, labels = {}, {}
    phi_inj, psi_surj, exact, units = {}, {}, {}, True
    for b in range(0, 2 * (n - 1) + 1):
        phi = page.differentials.get((-1, b))
        psi = page.differentials.get((0, b))
        n_left = page.rank(-1, b)
        n_right = page.rank(1, b)
        for M in (phi, psi):
            if M and M[0]:
                units &= all(qlinalg.is_power_of_two(d) for d in qlinalg.elementary_divisors(M))
        if phi and psi and psi[0] and phi[0]:
            if any(any(row) for row in _matmul(psi, phi)):
                raise PageMismatch(f"psi o phi != 0 in row {b}")
        phi_rank = qlinalg.rank(phi) if phi and phi[0] else 0
        psi_rank = qlinalg.rank(psi) if psi and psi[0] else 0
        phi_inj[b] = phi_rank == n_left
        psi_surj[b] = psi_rank == n_right
        ker_psi = page.rank(0, b) - psi_rank
        exact[b] = ker_psi == phi_rank
        for a in (-1, 0, 1):
            if (a, b) in page.entries or (a, b) in page.labels:
                entries[(a, b)] = _homology(page, a, b)
                labels[(a, b)] = page.labels.get((a, b), "")
    e2 = SpectralPage("E2_Z1", n, eps, p, entries, labels)
    result = E2Result(e2, phi_inj, psi_surj, exact, units)
    if check_closed_form:
        assert_closed_form(result)
    return result


def closed_form_E2(n: int, epsilon) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """Surviving entries as (sign, exponent) lists."""
    out = {(0, 0): [(1, 0)]}
    if n % 2 == 0:
        out[(-1, n)] = [(epsilon, n // 2)]
    return out


def assert_closed_form(result: E2Result):
    page = result.page
    n = page.n
    got = {ab: [w.key for w in ws] for ab, ws in page.nonzero().items()}
    want = closed_form_E2(n, page.epsilon)
    if got != want:
        raise PageMismatch(f"E_2 page {got} differs from the closed form {want}")
    for b, ok in result.phi_injective.items():
        if b % 2 == 0 and b != n and not ok:
            raise PageMismatch(f"phi is not injective in even degree {b}")
    for b, ok in result.psi_surjective.items():
        if 0 <= b <= 2 * (n - 2) and not ok:
            raise PageMismatch(f"psi is not surjective in degree {b}")
    if not result.unit_divisors:
        raise PageMismatch("a differential has an elementary divisor that is not a power of 2")


def nearby_cycles_stalks(n: int, epsilon, p: int, check_closed_form: bool = True) -> dict[int, list[FrobWeight]]:
    """Stalks of the nearby cycles at the singular point, degree -> weights.

    For n >= 3 they are read off the E_2 page, which is also E_infinity:
    entry (a, b) contributes to degree a + b.
    """
    if n < 2:
        raise InvalidInput("n must be >= 2")
    if n == 2:
        # semistable already: H^0 = 1 and H^1 = Lambda(-1) at the double point
        eps = 1 if epsilon is None else epsilon
        return {0: [FrobWeight(1, 0)], 1: [FrobWeight(eps, 1, twist=1)]}
    _check_epsilon(n, epsilon)
    e2 = compute_E2_Z1(build_E1_Z1(n, epsilon, p), check_closed_form).page
    stalks: dict[int, list[FrobWeight]] = {}
    for (a, b), ws in e2.nonzero().items():
        stalks.setdefault(a + b, []).extend(ws)
    return {d: sorted(ws) for d, ws in sorted(stalks.items())}


def stalk_trace(stalks: dict[int, list[FrobWeight]], p: int, k: int = 1) -> int:
    """Alternating trace of Frob^k on a stalk table."""
    return sum((-1) ** d * sum(w.eigenvalue(p) ** k for w in ws) for d, ws in stalks.items())


def kramer_ss_trace(n: int, epsilon, p: int) -> int:
    return stalk_trace(nearby_cycles_stalks(n, epsilon, p), p)


@dataclass
class LefschetzReport:
    n: int
    p: int
    k: int
    epsilon: int | None
    classification: str
    n_points: int
    singular_trace: int
    stalk_sum: int
    expected: int
    consistent: bool
    note: str = ""


def lefschetz_consistency(datum, k: int = 1, backend=None) -> LefschetzReport:
    """Sum of stalk traces of Frob^k over the special fiber's F_{p^k}-points
    against the count 1 + p^k + ... + p^(k(n-1)) of P^(n-1)."""
    from .ffield import make_field
    from .hermitian import classify_hermitian, epsilon_of
    from .localmodel import build_ambient, enumerate_special_fiber, find_singular_locus

    p, n = datum.p, datum.n
    eps = epsilon_of(datum)
    amb = build_ambient(datum, make_field(p, k))
    points = enumerate_special_fiber(amb, backend)
    singular = find_singular_locus(points, amb)
    sing_trace = stalk_trace(nearby_cycles_stalks(n, eps, p), p, k)
    total = (len(points) - len(singular)) + len(singular) * sing_trace
    expected = sum(p ** (i * k) for i in range(n))
    note = ""
    cls = classify_hermitian(datum)
    if total != expected:
        note = "stalk-trace sum differs from the P^(n-1) count"
        if n == 2 and cls == "nonsplit":
            note += "; rank-2 non-split datum (eps fixed to +1 for n = 2)"
    return LefschetzReport(n, p, k, eps, cls, len(points), sing_trace, total, expected, total == expected, note)
