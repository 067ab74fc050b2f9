"""Diagram layer: parsing, Cartan matrices, involution, tree paths."""

from collections import deque

import pytest

from parhom import (DiagramError, Marking, cartan_matrix,
                    diagram_involution_table, parse_diagram_spec,
                    relabel_to_standard, tree_path)

FAMILIES_SAMPLE = ["A1", "A4", "B2", "B4", "C3", "C5", "D4", "D5", "E6", "E7",
                   "E8", "F4", "G2", "A2xG2", "A1xB2", "A2xA2", "B3xC3"]


def bfs_distance(d, a, b):
    """Independent oracle: plain BFS distance on the adjacency lists."""
    if a == b:
        return 0
    seen = {a}
    dq = deque([(a, 0)])
    while dq:
        v, dist = dq.popleft()
        for w in d.adjacency[v]:
            if w == b:
                return dist + 1
            if w not in seen:
                seen.add(w)
                dq.append((w, dist + 1))
    return None


class TestParse:
    def test_a3(self):
        d = parse_diagram_spec("A3")
        assert d.n == 3
        assert {(e.a, e.b) for e in d.edges} == {(1, 2), (2, 3)}
        assert all(e.mult == 1 for e in d.edges)

    def test_b2_double_bond_arrow(self):
        d = parse_diagram_spec("B2")
        assert d.n == 2
        (e,) = d.edges
        assert (e.a, e.b, e.mult, e.short) == (1, 2, 2, 2)

    def test_product(self):
        d = parse_diagram_spec("A2xG2")
        assert d.n == 4
        assert d.factor_spans == ((1, 2), (3, 4))
        mults = sorted(e.mult for e in d.edges)
        assert mults == [1, 3]
        assert d.type_string == "A2xG2"

    def test_unknown_family(self):
        with pytest.raises(DiagramError, match="unknown family"):
            parse_diagram_spec("H3")

    @pytest.mark.parametrize("bad", ["C2", "B1", "D3", "E5", "E9", "F3", "G3"])
    def test_rank_bounds(self, bad):
        with pytest.raises(DiagramError, match="rank out of bounds"):
            parse_diagram_spec(bad)

    def test_case_insensitive_canonical_upper(self):
        assert parse_diagram_spec("a2Xg2").type_string == "A2xG2"

    @pytest.mark.parametrize("bad", ["", "A", "3A", "A2x", "xA2", "A2xxB2", "A-2"])
    def test_syntax_errors(self, bad):
        with pytest.raises(DiagramError):
            parse_diagram_spec(bad)


class TestCartan:
    def test_a2(self):
        assert cartan_matrix(parse_diagram_spec("A2")) == [[2, -1], [-1, 2]]

    def test_g2_bourbaki_orientation(self):
        assert cartan_matrix(parse_diagram_spec("G2")) == [[2, -1], [-3, 2]]

    def test_a1xa1(self):
        assert cartan_matrix(parse_diagram_spec("A1xA1")) == [[2, 0], [0, 2]]

    @pytest.mark.parametrize("spec", FAMILIES_SAMPLE)
    def test_generalized_cartan_invariants(self, spec):
        d = parse_diagram_spec(spec)
        mat = cartan_matrix(d)
        n = d.n
        for i in range(n):
            assert mat[i][i] == 2
            for j in range(n):
                if i == j:
                    continue
                assert mat[i][j] in (0, -1, -2, -3)
                assert mat[i][j] * mat[j][i] in (0, 1, 2, 3)
                assert (mat[i][j] == 0) == (mat[j][i] == 0)
                # block diagonal across factors
                if d.node_factor[i + 1] != d.node_factor[j + 1]:
                    assert mat[i][j] == 0

    @pytest.mark.parametrize("spec", FAMILIES_SAMPLE)
    def test_finite_type_determinant_positive(self, spec):
        d = parse_diagram_spec(spec)
        mat = cartan_matrix(d)
        for lo, hi in d.factor_spans:
            block = [[mat[i][j] for j in range(lo - 1, hi)] for i in range(lo - 1, hi)]
            assert _int_det(block) > 0


def _int_det(mat):
    """Fraction-free Gaussian elimination (Bareiss) determinant oracle."""
    m = [row[:] for row in mat]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


class TestInvolution:
    def test_a3(self):
        assert diagram_involution_table(parse_diagram_spec("A3")) == {1: 3, 2: 2, 3: 1}

    def test_f4_identity(self):
        d = parse_diagram_spec("F4")
        assert diagram_involution_table(d) == {v: v for v in range(1, 5)}

    def test_d5_fork_swap(self):
        assert diagram_involution_table(parse_diagram_spec("D5")) == {
            1: 1, 2: 2, 3: 3, 4: 5, 5: 4}

    def test_d4_identity(self):
        d = parse_diagram_spec("D4")
        assert diagram_involution_table(d) == {v: v for v in range(1, 5)}

    def test_e6(self):
        assert diagram_involution_table(parse_diagram_spec("E6")) == {
            1: 6, 2: 2, 3: 5, 4: 4, 5: 3, 6: 1}

    @pytest.mark.parametrize("spec", FAMILIES_SAMPLE)
    def test_involution_is_involutive_graph_automorphism(self, spec):
        d = parse_diagram_spec(spec)
        iota = diagram_involution_table(d)
        assert sorted(iota) == list(range(1, d.n + 1))
        for v, w in iota.items():
            assert iota[w] == v
        edge_data = {}
        for e in d.edges:
            a, b = sorted((e.a, e.b))
            edge_data[(a, b)] = (e.mult, e.short)
        for (a, b), (mult, short) in edge_data.items():
            ia, ib = sorted((iota[a], iota[b]))
            assert (ia, ib) in edge_data
            imult, ishort = edge_data[(ia, ib)]
            assert imult == mult
            assert ishort == (iota[short] if short is not None else None)


class TestTreePath:
    def test_line(self):
        assert tree_path(parse_diagram_spec("A4"), 1, 4) == [1, 2, 3, 4]

    def test_cross_factor_absent(self):
        assert tree_path(parse_diagram_spec("A2xA2"), 1, 3) is None

    def test_d4_fork(self):
        assert tree_path(parse_diagram_spec("D4"), 3, 4) == [3, 2, 4]

    def test_single_node(self):
        assert tree_path(parse_diagram_spec("B3"), 2, 2) == [2]

    def test_bad_node(self):
        with pytest.raises(DiagramError, match="out of range"):
            tree_path(parse_diagram_spec("A3"), 1, 9)

    @pytest.mark.parametrize("spec", FAMILIES_SAMPLE)
    def test_reversal_and_bfs_length_oracle(self, spec):
        d = parse_diagram_spec(spec)
        for a in range(1, d.n + 1):
            for b in range(1, d.n + 1):
                path = tree_path(d, a, b)
                rev = tree_path(d, b, a)
                if d.node_factor[a] != d.node_factor[b]:
                    assert path is None and rev is None
                    continue
                assert rev == path[::-1]
                assert len(path) == bfs_distance(d, a, b) + 1
                assert path[0] == a and path[-1] == b
                # consecutive path nodes really are edges
                adj_pairs = {(e.a, e.b) for e in d.edges} | {(e.b, e.a) for e in d.edges}
                assert all((path[i], path[i + 1]) in adj_pairs for i in range(len(path) - 1))


class TestStructure:
    @pytest.mark.parametrize("spec", FAMILIES_SAMPLE)
    def test_nodes_partition_into_factors(self, spec):
        d = parse_diagram_spec(spec)
        seen = []
        for lo, hi in d.factor_spans:
            seen.extend(range(lo, hi + 1))
        assert seen == list(range(1, d.n + 1))
        for e in d.edges:
            assert d.node_factor[e.a] == d.node_factor[e.b]
        for f, (lo, hi) in zip(d.factors, d.factor_spans):
            assert hi - lo + 1 == f.rank


class TestMarking:
    def test_parse_and_render(self):
        m = Marking.parse("2,4")
        assert m.nodes == (2, 4)
        assert m.render() == "2,4"
        assert Marking.parse("-").nodes == ()
        assert Marking.parse("").render() == "-"

    def test_sorted_dedup(self):
        assert Marking.of([3, 1, 3]).nodes == (1, 3)

    def test_ascending_required(self):
        with pytest.raises(DiagramError, match="ascending"):
            Marking.parse("4,2")

    def test_bad_token(self):
        with pytest.raises(DiagramError, match="bad marking token"):
            Marking.parse("1,x")

    def test_validate_on(self):
        d = parse_diagram_spec("A3")
        with pytest.raises(DiagramError, match="node 9 out of range"):
            Marking.parse("9").validate_on(d)

    def test_set_ops(self):
        a, b = Marking.of([1, 2]), Marking.of([2, 3])
        assert a.union(b).nodes == (1, 2, 3)
        assert a.minus(b).nodes == (1,)
        assert a.intersect(b).nodes == (2,)
        assert Marking.of([2]).issubset(a)


class TestRelabel:
    def test_empty(self):
        assert relabel_to_standard(parse_diagram_spec("A3"), ()) == (None, {})

    def test_a_reversal_prefers_low_marking(self):
        d = parse_diagram_spec("A3")
        sub, mapping = relabel_to_standard(d, [1, 2, 3], marking=[3])
        assert sub.type_string == "A3"
        assert mapping[3] == 1

    def test_c_tail_of_f4(self):
        d = parse_diagram_spec("F4")
        sub, mapping = relabel_to_standard(d, [2, 3, 4])
        assert sub.type_string == "C3"
        assert mapping == {4: 1, 3: 2, 2: 3}

    def test_b_tail_of_f4(self):
        d = parse_diagram_spec("F4")
        sub, mapping = relabel_to_standard(d, [1, 2, 3])
        assert sub.type_string == "B3"
        assert mapping == {1: 1, 2: 2, 3: 3}

    def test_b2_from_c_tail(self):
        d = parse_diagram_spec("C4")
        sub, mapping = relabel_to_standard(d, [3, 4])
        assert sub.type_string == "B2"
        # long root gets position 1
        assert mapping == {4: 1, 3: 2}

    def test_d5_inside_e6(self):
        d = parse_diagram_spec("E6")
        sub, _ = relabel_to_standard(d, [1, 2, 3, 4, 5])
        assert sub.type_string == "D5"

    def test_product_pieces(self):
        d = parse_diagram_spec("B4")
        sub, mapping = relabel_to_standard(d, [1, 3, 4], marking=[4])
        assert sub.type_string == "A1xB2"
        assert mapping[1] == 1 and mapping[3] == 2 and mapping[4] == 3
