"""The dual line arrangement on the sphere and its projective audits.

Each configuration point p dualizes to the great circle p* = {x : p.x = 0};
arrangement vertices are the duals of the configuration's lines.  The mesh
is built as an orientable half-edge structure on the sphere (two antipodal
copies of everything) and quotiented to projective counts at the end, so
Euler's formula reads V - E + F = 1 and Melchior's identity

    N_2 = 3 + sum_{k>=4} (k-3) N_k + sum_{s>=4} (s-3) M_s

must have residual exactly zero on every non-pencil input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .certsort import direction_groups
from .errors import DegeneratePencil
from .incidence import Configuration, IncidenceSpectrum, LineTable, enumerate_lines
from .intervals import DEFAULT_PRECISION_CAP, DEFAULT_START_PRECISION
from .scalars import s_add, s_mul, s_neg, s_sub

VERTEX_GUARD = 10**6


def _cross3(u, v, rational: bool):
    if rational:
        return (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )
    return (
        s_sub(s_mul(u[1], v[2]), s_mul(u[2], v[1])),
        s_sub(s_mul(u[2], v[0]), s_mul(u[0], v[2])),
        s_sub(s_mul(u[0], v[1]), s_mul(u[1], v[0])),
    )


def _dot3(u, v, rational: bool):
    if rational:
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    acc = None
    for a, b in zip(u, v):
        t = s_mul(a, b)
        acc = t if acc is None else s_add(acc, t)
    return acc


def _neg3(u, rational: bool):
    if rational:
        return (-u[0], -u[1], -u[2])
    return tuple(s_neg(x) for x in u)


_ONE, _ZERO = Fraction(1), Fraction(0)
_AXES = (
    (_ONE, _ZERO, _ZERO),
    (_ZERO, _ONE, _ZERO),
    (_ZERO, _ZERO, _ONE),
)


class SphericalDcel:
    """Half-edge mesh of the dual great-circle arrangement.

    Vertices come in antipodal pairs (2*line_index + sign); half-edges store
    twin/next links; faces are next-orbits.  The antipodal involution is a
    fixed-point-free automorphism, so every projective count is exactly half
    the spherical one.
    """

    def __init__(
        self,
        config: Configuration,
        table: LineTable | None = None,
        start_prec: int = DEFAULT_START_PRECISION,
        cap: int = DEFAULT_PRECISION_CAP,
        force: bool = False,
    ):
        if len(config) < 3:
            raise ValueError("need at least three points")
        self.config = config
        self.table = table if table is not None else enumerate_lines(config)
        if len(self.table.records) == 1:
            raise DegeneratePencil("all points collinear: dual is a pencil")
        if 2 * len(self.table.records) > VERTEX_GUARD and not force:
            raise ValueError("arrangement would exceed the vertex guard")
        self._start_prec = start_prec
        self._cap = cap
        self._build()

    # vertex id: 2*line_idx + sign  (sign 1 = negated representative vector)

    def _build(self):
        config, table = self.config, self.table
        pts = config.points
        rational = config.is_rational

        nl = len(table.records)
        self.line_vectors = []
        for rec in table.records:
            ln = table.line_for(pts, rec)
            self.line_vectors.append(ln.ikey if rational else ln.coords)
        self.point_vectors = [
            p.ikey if rational else p.coords for p in pts
        ]

        lines_through: list[list[int]] = [[] for _ in pts]
        for li, rec in enumerate(table.records):
            for i in rec.members:
                lines_through[i].append(li)
        self.lines_through = lines_through

        self.nv = 2 * nl
        self.vertex_degree = [0] * self.nv

        # half-edges: build per-circle arc cycles
        he_from: list[int] = []
        he_to: list[int] = []
        he_circle: list[int] = []
        he_twin: list[int] = []
        self.circle_cycles: list[list[int]] = []  # ordered spherical vertices
        self.circle_arcs: list[list[int]] = []  # forward half-edge per position
        out_at_vertex: list[list] = [[] for _ in range(self.nv)]

        for i in range(len(pts)):
            p = self.point_vectors[i]
            axis = _AXES[self._chart_axis(i, rational)]
            u = _cross3(p, axis, rational)
            v = _cross3(p, u, rational)
            items = []
            for li in lines_through[i]:
                w = self.line_vectors[li]
                a = _dot3(w, u, rational)
                b = _dot3(w, v, rational)
                items.append((2 * li, a, b))
                items.append((2 * li + 1, _neg_s(a, rational), _neg_s(b, rational)))
            groups = direction_groups(
                [(a, b) for (_, a, b) in items],
                mod_pi=False,
                start_prec=self._start_prec,
                cap=self._cap,
            )
            if any(len(g) != 1 for g in groups):
                raise AssertionError("coincident vertices on a dual circle")
            cycle = [items[g[0]][0] for g in groups]
            k = len(cycle)
            # antipodal symmetry of the sorted cycle
            half = k // 2
            for idx in range(half):
                if cycle[(idx + half) % k] != cycle[idx] ^ 1:
                    raise AssertionError("cycle lacks antipodal symmetry")
            arcs = []
            base = len(he_from)
            for idx in range(k):
                a_v, b_v = cycle[idx], cycle[(idx + 1) % k]
                fwd = base + 2 * idx
                bwd = fwd + 1
                he_from.extend((a_v, b_v))
                he_to.extend((b_v, a_v))
                he_circle.extend((i, i))
                he_twin.extend((bwd, fwd))
                arcs.append(fwd)
            self.circle_cycles.append(cycle)
            self.circle_arcs.append(arcs)
            # outgoing directions: tangent of travel at the FROM vertex
            for idx in range(k):
                fwd = arcs[idx]
                bwd = fwd + 1
                w_a, w_b = cycle[idx], cycle[(idx + 1) % k]
                for he, w in ((fwd, w_a), (bwd, w_b)):
                    wv = self._vertex_vector(w, rational)
                    d = _cross3(p, wv, rational)
                    if he == bwd:
                        d = _neg3(d, rational)
                    out_at_vertex[he_from[he]].append((he, d))
                self.vertex_degree[w_a] += 1
                self.vertex_degree[w_b] += 1

        self.he_from = he_from
        self.he_to = he_to
        self.he_circle = he_circle
        self.he_twin = he_twin
        nh = len(he_from)

        # circular order of outgoing half-edges at each vertex -> next links
        he_next = [-1] * nh
        self._out_order = [None] * self.nv
        for w in range(self.nv):
            entries = out_at_vertex[w]
            if not entries:
                raise AssertionError("isolated vertex in arrangement")
            wv = self._vertex_vector(w, rational)
            axis = _AXES[self._vertex_chart_axis(w, rational)]
            u = _cross3(wv, axis, rational)
            v = _cross3(wv, u, rational)
            pairs = []
            for he, d in entries:
                pairs.append((_dot3(d, u, rational), _dot3(d, v, rational)))
            groups = direction_groups(
                pairs, mod_pi=False, start_prec=self._start_prec, cap=self._cap
            )
            if any(len(g) != 1 for g in groups):
                raise AssertionError("coincident tangent directions at a vertex")
            order = [entries[g[0]][0] for g in groups]
            self._out_order[w] = order
            pos = {he: t for t, he in enumerate(order)}
            deg = len(order)
            # assign next for INCOMING half-edges: next(h) = cw neighbor of twin(h)
            for he in order:
                incoming = self.he_twin[he]
                he_next[incoming] = order[(pos[he] - 1) % deg]
        self.he_next = he_next

        # faces
        face_of = [-1] * nh
        face_sizes = []
        for h in range(nh):
            if face_of[h] != -1:
                continue
            fid = len(face_sizes)
            size = 0
            cur = h
            while face_of[cur] == -1:
                face_of[cur] = fid
                size += 1
                cur = he_next[cur]
            if cur != h:
                raise AssertionError("face walk did not close")
            face_sizes.append(size)
        self.face_of = face_of
        self.face_sizes = face_sizes

        self._validate()

    def _chart_axis(self, i: int, rational: bool) -> int:
        p = self.point_vectors[i]
        if rational:
            # e_0 fails only when p is a multiple of e_0
            return 0 if (p[1] != 0 or p[2] != 0) else 1
        from .projective import nonzero_coord_index

        t = nonzero_coord_index(self.config.points[i])
        return (t + 1) % 3

    def _vertex_chart_axis(self, w: int, rational: bool) -> int:
        wv = self._vertex_vector(w, rational)
        if rational:
            return 0 if (wv[1] != 0 or wv[2] != 0) else 1
        from .projective import ProjLine, nonzero_coord_index

        t = nonzero_coord_index(ProjLine(wv, check=False))
        return (t + 1) % 3

    def _vertex_vector(self, w: int, rational: bool):
        base = self.line_vectors[w // 2]
        return _neg3(base, rational) if w % 2 else base

    # -- structural checks ----------------------------------------------------

    def _validate(self):
        nh = len(self.he_from)
        for h in range(nh):
            if self.he_twin[self.he_twin[h]] != h:
                raise AssertionError("twin involution broken")
            if self.he_from[self.he_twin[h]] != self.he_to[h]:
                raise AssertionError("twin endpoints broken")
            f1, f2 = self.face_of[h], self.face_of[self.he_twin[h]]
            if f1 == f2:
                raise AssertionError("edge borders a single face")
        V, E, F = self.nv, nh // 2, len(self.face_sizes)
        if V - E + F != 2:
            raise AssertionError(f"spherical Euler fails: {V}-{E}+{F} != 2")
        for li, rec in enumerate(self.table.records):
            d = self.vertex_degree[2 * li]
            if d != 2 * rec.size or self.vertex_degree[2 * li + 1] != d:
                raise AssertionError("vertex degree != 2|P on line|")
        if min(self.face_sizes) < 3:
            raise AssertionError("face with fewer than three edges")

    # -- antipodal bookkeeping -------------------------------------------------

    def antipodal_he(self, h: int) -> int:
        """The image of half-edge h under the antipodal map."""
        i = self.he_circle[h]
        arcs = self.circle_arcs[i]
        k = len(arcs)
        idx, is_bwd = divmod(h - arcs[0], 2)
        return arcs[(idx + k // 2) % k] + is_bwd

    # -- derived counts ---------------------------------------------------------

    def spherical_counts(self) -> tuple[int, int, int]:
        return self.nv, len(self.he_from) // 2, len(self.face_sizes)

    def projective_counts(self) -> tuple[int, int, int]:
        V, E, F = self.spherical_counts()
        if V % 2 or E % 2 or F % 2:
            raise AssertionError("spherical counts not antipodally even")
        return V // 2, E // 2, F // 2

    def face_size_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for s in self.face_sizes:
            hist[s] = hist.get(s, 0) + 1
        out = {}
        for s, c in sorted(hist.items()):
            if c % 2:
                raise AssertionError("face sizes not antipodally paired")
            out[s] = c // 2
        return out

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for li in range(len(self.table.records)):
            d = self.vertex_degree[2 * li]
            hist[d] = hist.get(d, 0) + 1
        return dict(sorted(hist.items()))

    # -- edge classification -----------------------------------------------------

    def good_edge_flags(self) -> list[bool]:
        """Per half-edge: both endpoints degree 6 and both faces triangles."""
        nh = len(self.he_from)
        flags = [False] * nh
        for h in range(0, nh):
            tw = self.he_twin[h]
            if (
                self.vertex_degree[self.he_from[h]] == 6
                and self.vertex_degree[self.he_to[h]] == 6
                and self.face_sizes[self.face_of[h]] == 3
                and self.face_sizes[self.face_of[tw]] == 3
            ):
                flags[h] = True
        return flags

    def edge_class_count(self) -> int:
        return len(self.he_from) // 4  # projective edges

    def classify_edges(self) -> tuple[int, int]:
        """Projective (good, bad) edge counts."""
        flags = self.good_edge_flags()
        nh = len(self.he_from)
        good_sph = 0
        for h in range(nh):
            if h < self.he_twin[h] and flags[h]:
                ah = self.antipodal_he(h)
                if not flags[ah]:
                    raise AssertionError("goodness not antipodally symmetric")
                good_sph += 1
        E = nh // 4
        good = good_sph // 2
        return good, E - good

    def really_good_flags(self, walk_length: int = 2) -> list[bool]:
        """Edges all of whose walks of length <= walk_length from both
        endpoints consist of good edges (arc-level, per half-edge pair).
        Walk length 0 degenerates to plain goodness."""
        flags = self.good_edge_flags()
        if walk_length == 0:
            return flags
        nh = len(self.he_from)
        arc_good = [flags[h] for h in range(nh)]

        incident: list[list[int]] = [[] for _ in range(self.nv)]
        for h in range(nh):
            if h < self.he_twin[h]:
                incident[self.he_from[h]].append(h)
                incident[self.he_to[h]].append(h)

        def walks_good(v: int, depth: int) -> bool:
            stack = [(v, depth)]
            while stack:
                vv, d = stack.pop()
                if d == 0:
                    continue
                for arc in incident[vv]:
                    if not arc_good[arc]:
                        return False
                    other = (
                        self.he_to[arc]
                        if self.he_from[arc] == vv
                        else self.he_from[arc]
                    )
                    stack.append((other, d - 1))
            return True

        out = [False] * nh
        memo: dict[tuple[int, int], bool] = {}
        for h in range(nh):
            if h > self.he_twin[h]:
                out[h] = out[self.he_twin[h]]
                continue
            va, vb = self.he_from[h], self.he_to[h]
            ok = True
            for v in (va, vb):
                key = (v, walk_length)
                if key not in memo:
                    memo[key] = walks_good(v, walk_length)
                ok = ok and memo[key]
            out[h] = ok
        return out


def _neg_s(x, rational: bool):
    return -x if rational else s_neg(x)


# -- summaries ------------------------------------------------------------------


@dataclass(frozen=True)
class ArrangementSummary:
    n: int
    V: int
    E: int
    F: int
    degree_hist: Mapping[int, int]
    M: Mapping[int, int]
    spectrum: IncidenceSpectrum
    good_edges: int
    bad_edges: int

    @property
    def euler_residual(self) -> int:
        return self.V - self.E + self.F - 1

    @property
    def melchior_residual(self) -> int:
        s = self.spectrum
        rich = sum((k - 3) * v for k, v in s.counts.items() if k >= 4)
        big_faces = sum((s_ - 3) * c for s_, c in self.M.items() if s_ >= 4)
        return s.ordinary - 3 - rich - big_faces

    @property
    def K_ratio(self) -> Fraction:
        return Fraction(self.spectrum.ordinary, self.n)

    @property
    def bad_edge_bound(self) -> int:
        return 16 * self.spectrum.ordinary  # 16 * K * n with K = N_2 / n

    @property
    def bad_edge_bound_ok(self) -> bool:
        return self.bad_edges <= self.bad_edge_bound

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "V": self.V,
            "E": self.E,
            "F": self.F,
            "euler_residual": self.euler_residual,
            "melchior_residual": self.melchior_residual,
            "degree_hist": {str(k): v for k, v in sorted(self.degree_hist.items())},
            "face_sizes": {str(k): v for k, v in sorted(self.M.items())},
            "spectrum": self.spectrum.to_json_dict(),
            "good_edges": self.good_edges,
            "bad_edges": self.bad_edges,
            "bad_edge_bound": self.bad_edge_bound,
            "bad_edge_bound_ok": self.bad_edge_bound_ok,
            "K_ratio": str(self.K_ratio),
        }


def build_dual_arrangement(
    config: Configuration,
    table: LineTable | None = None,
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
    force: bool = False,
) -> SphericalDcel:
    return SphericalDcel(config, table, start_prec, cap, force)


def melchior_audit(
    config: Configuration,
    method: str = "auto",
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
    force: bool = False,
    strict: bool = True,
) -> ArrangementSummary:
    """Build the dual arrangement and audit Euler + Melchior exactly.

    With strict=True any nonzero residual raises; strict=False returns the
    summary for the caller to report (the CLI maps residuals to exit 2).
    """
    table = enumerate_lines(config, method, start_prec, cap)
    dcel = SphericalDcel(config, table, start_prec, cap, force)
    V, E, F = dcel.projective_counts()
    spec = IncidenceSpectrum(len(config), table.counts())
    good, bad = dcel.classify_edges()
    summary = ArrangementSummary(
        n=len(config),
        V=V,
        E=E,
        F=F,
        degree_hist=dcel.degree_histogram(),
        M=dcel.face_size_histogram(),
        spectrum=spec,
        good_edges=good,
        bad_edges=bad,
    )
    if strict:
        if summary.euler_residual != 0:
            raise AssertionError("Euler residual nonzero")
        if summary.melchior_residual != 0:
            raise AssertionError("Melchior residual nonzero")
        if spec.ordinary < 3:
            raise AssertionError("fewer than three ordinary lines on non-pencil input")
    return summary
