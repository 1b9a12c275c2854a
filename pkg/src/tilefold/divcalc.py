"""Rank-12 divisor class lattice and the trilinear intersection form.

Divisor expressions live in the free abelian group on 21 symbols: the
hyperplane pullback qH and the 20 boundary labels.  Eight plane rows and one
quadric row identify qH (resp. 2 qH) with boundary sums; the quotient is the
free rank-12 class lattice with basis (qH, A0, A1, B2, B3, C01, D01, D02,
D03, D12, D13, D23), mirroring the blowup construction so exceptional
classes are basis vectors.

The label-level intersection rules are local to one divisor per type: a
table each for the slots C23 and D01, plus the ten-node incidence graph on
the slot A0; everything else is transported along the group action.  The
adjacency of the graph is solved from consistency constraints rather than
transcribed, and the solved tensor is checked to be symmetric, equivariant
and zero on the relation lattice.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from .exactlat import (
    rational_rank,
    smith_invariants,
)
from .tilegroup import (
    GroupElement,
    LABELS,
    TABLE1,
    act_on_label,
    full_group,
    inverse,
)

N_LABELS = len(LABELS)
LABEL_INDEX = {lab: i for i, lab in enumerate(LABELS)}

SYMBOLS = ("qH",) + LABELS  # coordinates of divisor expressions
SYMBOL_INDEX = {s: i for i, s in enumerate(SYMBOLS)}

BASIS = ("qH", "A0", "A1", "B2", "B3", "C01", "D01", "D02", "D03", "D12", "D13", "D23")
RANK = len(BASIS)

# qH as the total transform of each of the eight planes of the image table
PLANE_ROWS = {
    "A2": ("A2", "B2", "C01", "D02", "D12", "D23"),
    "A3": ("A3", "B3", "C01", "D03", "D13", "D23"),
    "B0": ("A0", "B0", "C01", "D01", "D02", "D03"),
    "B1": ("A1", "B1", "C01", "D01", "D12", "D13"),
    "C02": ("A1", "B2", "C02", "D02", "D12", "D13"),
    "C12": ("A0", "B2", "C12", "D02", "D03", "D12"),
    "C13": ("A0", "B3", "C13", "D02", "D03", "D13"),
    "C03": ("A1", "B3", "C03", "D03", "D12", "D13"),
}

# 2 qH as the total transform of the quadric
QUADRIC_ROW = (
    "A0", "A1", "B2", "B3", "C01", "C23",
    "D01", "D02", "D03", "D12", "D13", "D23",
)

# fixed substitution used to push qH into label coordinates
QH_SUBSTITUTION_ROW = "C02"


def expr(**coeffs) -> tuple[int, ...]:
    """Divisor expression from symbol=coefficient keywords (qH for qH)."""
    v = [0] * len(SYMBOLS)
    for sym, c in coeffs.items():
        v[SYMBOL_INDEX[sym]] = int(c)
    return tuple(v)


def expr_from_labels(labels, qh: int = 0) -> tuple[int, ...]:
    v = [0] * len(SYMBOLS)
    v[0] = qh
    for lab in labels:
        v[SYMBOL_INDEX[lab]] += 1
    return tuple(v)


def relation_vectors() -> list[tuple[int, ...]]:
    """The nine relations in Z^21: qH minus each plane row, 2 qH minus the quadric."""
    rels = []
    for row in PLANE_ROWS.values():
        v = [0] * len(SYMBOLS)
        v[0] = 1
        for lab in row:
            v[SYMBOL_INDEX[lab]] -= 1
        rels.append(tuple(v))
    v = [0] * len(SYMBOLS)
    v[0] = 2
    for lab in QUADRIC_ROW:
        v[SYMBOL_INDEX[lab]] -= 1
    rels.append(tuple(v))
    return rels


@lru_cache(maxsize=1)
def picard_lattice() -> dict:
    """Construct the class lattice and the basis expression of every label."""
    rels = relation_vectors()
    invariants = smith_invariants([list(r) for r in rels])
    if invariants != [1] * 9:
        raise RuntimeError("relation lattice is not unimodular of rank 9")
    rank = len(SYMBOLS) - len(invariants)
    if rank != RANK:
        raise RuntimeError("class lattice does not have rank 12")

    # Each non-basis label appears in exactly one relation with coefficient 1;
    # that relation is its basis expression.
    basis_index = {s: i for i, s in enumerate(BASIS)}
    label_class: dict[str, tuple[int, ...]] = {}
    for sym in BASIS:
        v = [0] * RANK
        v[basis_index[sym]] = 1
        label_class[sym] = tuple(v)
    for key, row in PLANE_ROWS.items():
        assert row.count(key) == 1 and key not in BASIS
        v = [0] * RANK
        v[0] = 1
        for lab in row:
            if lab == key:
                continue
            assert lab in basis_index, (key, lab)
            v[basis_index[lab]] -= 1
        label_class[key] = tuple(v)
    v = [0] * RANK
    v[0] = 2
    for lab in QUADRIC_ROW:
        if lab == "C23":
            continue
        v[basis_index[lab]] -= 1
    label_class["C23"] = tuple(v)

    relation_rank = rational_rank([list(r) for r in rels])
    return {
        "rank": rank,
        "invariant_factors": invariants,
        "relation_rank": relation_rank,
        "label_class": label_class,
        "relations": rels,
    }


def class_of(expression) -> tuple[int, ...]:
    """Reduce a 21-coordinate divisor expression to the canonical basis."""
    if len(expression) != len(SYMBOLS):
        raise ValueError("expression must have one coordinate per symbol")
    lc = picard_lattice()["label_class"]
    out = [0] * RANK
    for sym, c in zip(SYMBOLS, expression):
        if not c:
            continue
        for k, x in enumerate(lc[sym]):
            out[k] += c * x
    return tuple(out)


def class_of_labels(labels, qh: int = 0) -> tuple[int, ...]:
    return class_of(expr_from_labels(labels, qh))


def label_relations_in_label_space() -> list[tuple[int, ...]]:
    """A spanning set of the rank-8 relation lattice inside Z^20."""
    rows = list(PLANE_ROWS.values())
    base = rows[0]
    out = []
    for row in rows[1:]:
        v = [0] * N_LABELS
        for lab in base:
            v[LABEL_INDEX[lab]] += 1
        for lab in row:
            v[LABEL_INDEX[lab]] -= 1
        out.append(tuple(v))
    v = [0] * N_LABELS
    for lab in base:
        v[LABEL_INDEX[lab]] += 2
    for lab in QUADRIC_ROW:
        v[LABEL_INDEX[lab]] -= 1
    out.append(tuple(v))
    return out


# ---------------------------------------------------------------------------
# intersection rules

RULE_TOP_SELF = {"A": 0, "B": 0, "C": 1, "D": 2}

# nonzero values of E.F.C23 for (E,F) != (C23,C23)
RULE_C_BASE = {
    ("A0", "B2"): 1,
    ("A0", "B3"): 1,
    ("A1", "B2"): 1,
    ("A1", "B3"): 1,
    ("A0", "D01"): 1,
    ("A1", "D01"): 1,
    ("B2", "D23"): 1,
    ("B3", "D23"): 1,
    ("C01", "D01"): 1,
    ("C01", "D23"): 1,
    ("C01", "C01"): -1,
    ("D01", "D01"): -1,
    ("D23", "D23"): -1,
}

# nonzero values of E.F.D01 for (E,F) != (D01,D01)
RULE_D_BASE = {
    ("A0", "B0"): 1,
    ("A0", "B1"): 1,
    ("A1", "B0"): 1,
    ("A1", "B1"): 1,
    ("A0", "C23"): 1,
    ("A1", "C23"): 1,
    ("B0", "C01"): 1,
    ("B1", "C01"): 1,
    ("C01", "C23"): 1,
}

# the ten curves of self-intersection -1 on the surface A0
SURFACE_NODES_A0 = (
    "B0", "B1", "B2", "B3", "C12", "C13", "C23", "D01", "D02", "D03",
)

_BASE_OF_KIND = {"A": "A0", "B": "A0", "C": "C23", "D": "D01"}


def _pair_key(e: str, f: str):
    return (e, f) if e <= f else (f, e)


@lru_cache(maxsize=1)
def _transport_elements() -> dict[str, GroupElement]:
    """One group element per label carrying that label's base label to it."""
    group = full_group()
    out: dict[str, GroupElement] = {}
    for lab in LABELS:
        base = _BASE_OF_KIND[lab[0]]
        out[lab] = next(g for g in group if act_on_label(g, base) == lab)
    return out


@lru_cache(maxsize=1)
def _check_rule_tables_well_defined() -> bool:
    """Base tables must be invariant under the stabilizer of their base label."""
    group = full_group()
    for base, table in (("C23", RULE_C_BASE), ("D01", RULE_D_BASE)):
        stab = [g for g in group if act_on_label(g, base) == base]
        for g in stab:
            moved = {
                _pair_key(act_on_label(g, e), act_on_label(g, f)): v
                for (e, f), v in table.items()
            }
            if moved != {_pair_key(e, f): v for (e, f), v in table.items()}:
                return False
    return True


@lru_cache(maxsize=8)
def _transported_tables(which: str) -> dict[str, dict]:
    """Rule tables for every C (resp. D) label, transported from the base."""
    assert _check_rule_tables_well_defined()
    base_table = RULE_C_BASE if which == "C" else RULE_D_BASE
    base = "C23" if which == "C" else "D01"
    out = {}
    for lab in LABELS:
        if lab[0] != which:
            continue
        g = _transport_elements()[lab]
        assert act_on_label(g, base) == lab
        out[lab] = {
            _pair_key(act_on_label(g, e), act_on_label(g, f)): v
            for (e, f), v in base_table.items()
        }
    return out


def surface_graph(lab: str, edges_a0: frozenset) -> tuple[frozenset, frozenset]:
    """Nodes and edges of the incidence graph on an A or B surface label."""
    g = _transport_elements()[lab]
    nodes = frozenset(act_on_label(g, n) for n in SURFACE_NODES_A0)
    edges = frozenset(
        frozenset(act_on_label(g, x) for x in e) for e in edges_a0
    )
    return nodes, edges


class RuleConsistencyError(RuntimeError):
    pass


def _make_rule_engine(edges_a0: frozenset):
    """Label-level rule evaluator parametrized by the solved adjacency."""
    c_tables = _transported_tables("C")
    d_tables = _transported_tables("D")
    graphs = {
        lab: surface_graph(lab, edges_a0) for lab in LABELS if lab[0] in "AB"
    }

    def rule_value(slot: str, e: str, f: str) -> int:
        # value of e.f.slot by the rule attached to slot; requires slot not in (e, f)
        kind = slot[0]
        if kind in "AB":
            nodes, edges = graphs[slot]
            if e == f:
                return -1 if e in nodes else 0
            if e in nodes and f in nodes and frozenset((e, f)) in edges:
                return 1
            return 0
        table = c_tables[slot] if kind == "C" else d_tables[slot]
        return table.get(_pair_key(e, f), 0)

    def triple_value(a: str, b: str, c: str) -> int:
        if a == b == c:
            return RULE_TOP_SELF[a[0]]
        if a == b:
            return rule_value(c, a, b)
        if a == c:
            return rule_value(b, a, c)
        if b == c:
            return rule_value(a, b, c)
        vals = {rule_value(a, b, c), rule_value(b, a, c), rule_value(c, a, b)}
        if len(vals) != 1:
            raise RuleConsistencyError(f"rules disagree on {a}.{b}.{c}: {vals}")
        return vals.pop()

    return rule_value, triple_value


# ---------------------------------------------------------------------------
# solving the surface adjacency

def _stabilizer_a0() -> list[GroupElement]:
    return [g for g in full_group() if not g.flip and g.perm[0] == 0]


def _forced_adjacency() -> tuple[dict, list]:
    """Edge values forced by the C- and D-rule tables via triple consistency.

    For nodes u, v of the A0 graph the value u.v.A0 must also equal every
    transported table value read off at a C- or D-type slot among {u, v}.
    """
    c_tables = _transported_tables("C")
    d_tables = _transported_tables("D")
    forced: dict[frozenset, int] = {}
    unknown: list[frozenset] = []
    for u, v in combinations(SURFACE_NODES_A0, 2):
        votes = {}
        for slot, other in ((u, v), (v, u)):
            if slot[0] == "C":
                votes[slot] = c_tables[slot].get(_pair_key(other, "A0"), 0)
            elif slot[0] == "D":
                votes[slot] = d_tables[slot].get(_pair_key(other, "A0"), 0)
        pair = frozenset((u, v))
        if votes:
            if len(set(votes.values())) != 1:
                raise RuleConsistencyError(f"forced votes disagree on {u},{v}: {votes}")
            forced[pair] = next(iter(votes.values()))
        else:
            unknown.append(pair)
    return forced, unknown


def _graph_is_petersen(edges: frozenset) -> bool:
    """3-regular, 15 edges, girth 5, connected on 10 vertices: the Petersen graph."""
    nodes = SURFACE_NODES_A0
    adj = {n: set() for n in nodes}
    for e in edges:
        u, v = tuple(e)
        adj[u].add(v)
        adj[v].add(u)
    if len(edges) != 15 or any(len(adj[n]) != 3 for n in nodes):
        return False
    # no cycles shorter than 5: no common neighbors for adjacent pairs
    # (girth > 3) and exactly one common neighbor for non-adjacent pairs
    # (girth > 4 together with 3-regularity on 10 vertices)
    for u, v in combinations(nodes, 2):
        common = len(adj[u] & adj[v])
        if v in adj[u]:
            if common != 0:
                return False
        elif common != 1:
            return False
    # connectivity
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)


def _descent_slice_holds(triple_value) -> bool:
    """The form vanishes against relation vectors in the slots (., A0, .)."""
    rels = label_relations_in_label_space()
    for r in rels:
        support = [(LABELS[i], c) for i, c in enumerate(r) if c]
        for e in LABELS:
            total = 0
            for lab, c in support:
                total += c * triple_value(lab, "A0", e)
            if total != 0:
                return False
    return True


@lru_cache(maxsize=1)
def solve_petersen() -> dict:
    """Determine the A0 incidence graph by exact constraint solving.

    Unknown booleans on the 45 node pairs are pinned by (i) the forced
    values above, (ii) vanishing of the form against the relation lattice
    with one slot at A0, (iii) equivariance under the order-6 stabilizer of
    A0 and (iv) 3-regularity.  The solution must be unique and isomorphic
    to the Petersen graph.
    """
    forced, unknown = _forced_adjacency()
    stab = _stabilizer_a0()
    solutions = []
    failures = {"regularity": 0, "stabilizer": 0, "descent": 0, "consistency": 0}
    for bits in product((0, 1), repeat=len(unknown)):
        assignment = dict(forced)
        assignment.update({pair: b for pair, b in zip(unknown, bits)})
        edges = frozenset(pair for pair, v in assignment.items() if v == 1)
        if any(v not in (0, 1) for v in assignment.values()):
            failures["consistency"] += 1
            continue
        degree = {n: 0 for n in SURFACE_NODES_A0}
        for e in edges:
            for n in e:
                degree[n] += 1
        if any(d != 3 for d in degree.values()):
            failures["regularity"] += 1
            continue
        stable = all(
            frozenset(act_on_label(g, x) for x in e) in edges
            for e in edges
            for g in stab
        )
        if not stable:
            failures["stabilizer"] += 1
            continue
        try:
            _, triple_value = _make_rule_engine(edges)
            if not _descent_slice_holds(triple_value):
                failures["descent"] += 1
                continue
        except RuleConsistencyError:
            failures["consistency"] += 1
            continue
        solutions.append(edges)
    if len(solutions) != 1:
        raise RuleConsistencyError(
            f"adjacency solution not unique: {len(solutions)} found, "
            f"constraint failures {failures}"
        )
    edges = solutions[0]
    if not _graph_is_petersen(edges):
        raise RuleConsistencyError("solved adjacency is not the Petersen graph")
    forced_edges = {pair for pair, v in forced.items() if v == 1}
    return {
        "nodes": SURFACE_NODES_A0,
        "edges": edges,
        "forced_edges": forced_edges,
        "forced_pair_count": len(forced),
        "unknown_pair_count": len(unknown),
        "failures": failures,
    }


# ---------------------------------------------------------------------------
# the trilinear form


@lru_cache(maxsize=1)
def label_tensor() -> dict:
    """The full 20x20x20 label-level intersection table, with hard checks."""
    edges = solve_petersen()["edges"]
    _, triple_value = _make_rule_engine(edges)
    t = [
        [[0] * N_LABELS for _ in range(N_LABELS)] for _ in range(N_LABELS)
    ]
    for i, a in enumerate(LABELS):
        for j in range(i, N_LABELS):
            for k in range(j, N_LABELS):
                v = triple_value(a, LABELS[j], LABELS[k])
                for p, q, r in (
                    (i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i),
                ):
                    t[p][q][r] = v
    return {"tensor": t, "edges": edges}


def _qh_label_expansion() -> list[tuple[int, int]]:
    """qH in label coordinates via the fixed substitution row."""
    row = PLANE_ROWS[QH_SUBSTITUTION_ROW]
    return [(LABEL_INDEX[lab], 1) for lab in row]


def _basis_label_expansions(substitution_row: str | None = None) -> list[list[tuple[int, int]]]:
    row = PLANE_ROWS[substitution_row or QH_SUBSTITUTION_ROW]
    out = []
    for sym in BASIS:
        if sym == "qH":
            out.append([(LABEL_INDEX[lab], 1) for lab in row])
        else:
            out.append([(LABEL_INDEX[sym], 1)])
    return out


@lru_cache(maxsize=4)
def basis_tensor(substitution_row: str | None = None) -> tuple:
    """Symmetric 12x12x12 intersection tensor on the canonical basis."""
    t20 = label_tensor()["tensor"]
    expansions = _basis_label_expansions(substitution_row)
    t = [[[0] * RANK for _ in range(RANK)] for _ in range(RANK)]
    for i in range(RANK):
        for j in range(RANK):
            for k in range(RANK):
                total = 0
                for a, ca in expansions[i]:
                    for b, cb in expansions[j]:
                        row = t20[a][b]
                        for c, cc in expansions[k]:
                            total += ca * cb * cc * row[c]
                t[i][j][k] = total
    return tuple(tuple(tuple(row) for row in plane) for plane in t)


def triple(e, f, g) -> int:
    """Trilinear intersection number of three classes in basis coordinates."""
    t = basis_tensor()
    total = 0
    for i, ci in enumerate(e):
        if not ci:
            continue
        for j, cj in enumerate(f):
            if not cj:
                continue
            row = t[i][j]
            for k, ck in enumerate(g):
                if ck:
                    total += ci * cj * ck * row[k]
    return total


def triple_labels(a: str, b: str, c: str) -> int:
    t = label_tensor()["tensor"]
    return t[LABEL_INDEX[a]][LABEL_INDEX[b]][LABEL_INDEX[c]]


# ---------------------------------------------------------------------------
# induced group action on the class lattice


@lru_cache(maxsize=1)
def picard_action() -> dict[GroupElement, tuple]:
    """Integer 12x12 matrix of each group element on the class lattice.

    The action permutes the 20 boundary classes; qH is sent to the class of
    the permuted substitution row.  Every matrix is verified to map label
    classes to the classes of the permuted labels.
    """
    lc = picard_lattice()["label_class"]
    row = PLANE_ROWS[QH_SUBSTITUTION_ROW]
    out = {}
    for g in full_group():
        cols = []
        for sym in BASIS:
            if sym == "qH":
                image = [0] * RANK
                for lab in row:
                    cls = lc[act_on_label(g, lab)]
                    image = [x + y for x, y in zip(image, cls)]
            else:
                image = list(lc[act_on_label(g, sym)])
            cols.append(image)
        mat = tuple(
            tuple(cols[j][i] for j in range(RANK)) for i in range(RANK)
        )
        out[g] = mat
    for g, mat in out.items():
        for lab in LABELS:
            img = _apply_matrix(mat, lc[lab])
            if img != lc[act_on_label(g, lab)]:
                raise RuntimeError("class action does not permute boundary classes")
    return out


def _apply_matrix(mat, v) -> tuple[int, ...]:
    return tuple(sum(mat[i][j] * v[j] for j in range(len(v))) for i in range(len(v)))


def act_on_class(g: GroupElement, v) -> tuple[int, ...]:
    return _apply_matrix(picard_action()[g], v)


@lru_cache(maxsize=1)
def curve_action() -> dict[GroupElement, tuple]:
    """Dual action on curve classes: transpose of the inverse class matrix."""
    pic = picard_action()
    out = {}
    for g in pic:
        inv_mat = pic[inverse(g)]
        out[g] = tuple(
            tuple(inv_mat[j][i] for j in range(RANK)) for i in range(RANK)
        )
    return out


def act_on_curve(g: GroupElement, v) -> tuple[int, ...]:
    return _apply_matrix(curve_action()[g], v)


# ---------------------------------------------------------------------------
# anticanonical class and curve classes

ANTICANONICAL_EXPR = expr(
    qH=4, A0=-1, A1=-1, B2=-1, B3=-1, D01=-1, D23=-1,
    D02=-2, D03=-2, D12=-2, D13=-2, C01=-2,
)

MULTICAN_LABEL_SETS = (
    # six expressions with a doubled C label
    ("A2", "A3", "B0", "B1", "C01", "C01", "D01", "D23"),
    ("A1", "A3", "B0", "B2", "C02", "C02", "D02", "D13"),
    ("A0", "A1", "B2", "B3", "C23", "C23", "D01", "D23"),
    ("A1", "A2", "B0", "B3", "C03", "C03", "D03", "D12"),
    ("A0", "A3", "B1", "B2", "C12", "C12", "D03", "D12"),
    ("A0", "A2", "B1", "B3", "C13", "C13", "D02", "D13"),
    # six expressions with a doubled D label
    ("A2", "A3", "B2", "B3", "C01", "C23", "D23", "D23"),
    ("A1", "A3", "B1", "B3", "C02", "C13", "D13", "D13"),
    ("A0", "A2", "B0", "B2", "C02", "C13", "D02", "D02"),
    ("A0", "A3", "B0", "B3", "C03", "C12", "D03", "D03"),
    ("A0", "A1", "B0", "B1", "C01", "C23", "D01", "D01"),
    ("A1", "A2", "B1", "B2", "C03", "C12", "D12", "D12"),
)


@lru_cache(maxsize=1)
def anticanonical() -> dict:
    """The anticanonical class with its twelve boundary expressions checked."""
    k = class_of(ANTICANONICAL_EXPR)
    expressions_agree = all(
        class_of_labels(labels) == k for labels in MULTICAN_LABEL_SETS
    )
    invariant = all(act_on_class(g, k) == k for g in full_group())
    return {
        "class": k,
        "expressions_agree": expressions_agree,
        "group_invariant": invariant,
        "top_self_intersection": triple(k, k, k),
    }


def curve_class(e: str, f: str) -> tuple[int, ...]:
    """The functional g -> e.f.g in dual coordinates against the basis."""
    lc = picard_lattice()["label_class"]
    ce, cf = lc[e], lc[f]
    t = basis_tensor()
    return tuple(
        sum(
            ce[i] * cf[j] * t[i][j][k]
            for i in range(RANK)
            for j in range(RANK)
            if ce[i] and cf[j]
        )
        for k in range(RANK)
    )


def pair_class_curve(divisor_class, curve) -> int:
    return sum(d * c for d, c in zip(divisor_class, curve))


# ---------------------------------------------------------------------------
# the quartic linear system

QUARTIC_LINES = ("A0", "A1", "B2", "B3", "D01", "D23")


def _quartic_monomials() -> list[tuple[int, int, int, int]]:
    out = []
    for e0 in range(5):
        for e1 in range(5 - e0):
            for e2 in range(5 - e0 - e1):
                out.append((e0, e1, e2, 4 - e0 - e1 - e2))
    return sorted(out)


def _line_basis(lab: str) -> list[tuple[int, ...]]:
    from .exactlat import integer_kernel

    sub = TABLE1[lab]
    assert sub.kind == "line"
    basis = integer_kernel([list(r) for r in sub.data])
    assert len(basis) == 2
    return basis


def _binary_restriction_rows(lab: str, monomials) -> list[list[int]]:
    """Five condition rows: coefficients of the restriction to the line."""
    p, q = _line_basis(lab)
    rows = [[0] * len(monomials) for _ in range(5)]
    for col, exps in enumerate(monomials):
        # expand prod_i (s p_i + t q_i)^{e_i} as a binary quartic in (s, t)
        poly = {0: 1}  # degree in s -> coefficient, total degree 4 implied
        deg = 0
        for pi, qi, e in zip(p, q, exps):
            for _ in range(e):
                nxt: dict[int, int] = {}
                for ds, c in poly.items():
                    if c:
                        nxt[ds + 1] = nxt.get(ds + 1, 0) + c * pi
                        nxt[ds] = nxt.get(ds, 0) + c * qi
                poly = nxt
                deg += 1
        assert deg == 4
        for ds, c in poly.items():
            rows[ds][col] = c
    return rows


@lru_cache(maxsize=1)
def quartic_system() -> dict:
    """Exact dimension of the quartics through the six boundary lines.

    Reports the projective dimension of the solution space together with
    the reference value 14; a mismatch is flagged, never hidden.  The
    reference count matches the linear (vector-space) dimension.
    """
    monomials = _quartic_monomials()
    rows = []
    per_line_rank = {}
    for lab in QUARTIC_LINES:
        line_rows = _binary_restriction_rows(lab, monomials)
        per_line_rank[lab] = rational_rank(line_rows)
        rows.extend(line_rows)
    rank = rational_rank(rows)
    linear_dim = len(monomials) - rank
    projective_dim = linear_dim - 1

    # membership of the square of the quadric
    quad_sq = {}
    # (x0 x3 - x1 x2)^2 = x0^2 x3^2 - 2 x0 x1 x2 x3 + x1^2 x2^2
    quad_sq[(2, 0, 0, 2)] = 1
    quad_sq[(1, 1, 1, 1)] = -2
    quad_sq[(0, 2, 2, 0)] = 1
    vec = [quad_sq.get(m, 0) for m in monomials]
    contained = all(
        sum(r * x for r, x in zip(row, vec)) == 0 for row in rows
    )

    reference = 14
    report = {
        "monomial_count": len(monomials),
        "condition_rows": len(rows),
        "condition_rank": rank,
        "linear_dimension": linear_dim,
        "projective_dimension": projective_dim,
        "reference_dimension": reference,
        "matches_reference": projective_dim == reference,
        "discrepancy_flag": projective_dim != reference,
        "discrepancy_note": (
            "projective dimension differs from the reference count; the "
            "reference count equals the linear dimension of the system"
            if projective_dim != reference
            else ""
        ),
        "quadric_square_contained": contained,
        "single_line_projective_dimension": len(monomials)
        - per_line_rank[QUARTIC_LINES[0]]
        - 1,
    }
    return report


def quartic_system_dimension() -> int:
    """Projective dimension of the quartic system through the six lines."""
    return quartic_system()["projective_dimension"]
