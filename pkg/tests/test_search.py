import numpy as np
import pytest

from simine import (AttributeColumn, AttributedGraph, Beam, BeamEntry,
                    Description, EqualsSelector, ScoreConstants, SearchConfig,
                    baseline_search, beam_search_single, extension,
                    fit_degree_prior, fit_density_prior, generate_selectors,
                    iterate, nested_beam_search, rescore, score_single,
                    update_with_pattern)

from conftest import (exhaustive_best_bi, exhaustive_best_single, random_graph)


def entry(si, ident, group=None):
    return BeamEntry((-si, 1, ident), ident, group or ident, payload=ident)


class TestBeamDiscipline:
    def test_insert_into_empty(self):
        b = Beam(3)
        assert b.try_add(entry(1.0, "a"))
        assert len(b) == 1

    def test_full_beam_rejects_weaker(self):
        b = Beam(2)
        b.try_add(entry(5.0, "a"))
        b.try_add(entry(4.0, "b"))
        assert not b.try_add(entry(3.0, "c"))
        assert [e.ident for e in b] == ["a", "b"]

    def test_full_beam_replaces_minimum(self):
        b = Beam(2)
        b.try_add(entry(5.0, "a"))
        b.try_add(entry(4.0, "b"))
        assert b.try_add(entry(6.0, "c"))
        assert [e.ident for e in b] == ["c", "a"]

    def test_duplicate_skipped(self):
        b = Beam(3)
        b.try_add(entry(5.0, "a"))
        assert not b.try_add(entry(5.0, "a"))

    def test_min_never_decreases_without_floor(self):
        rng = np.random.default_rng(0)
        b = Beam(4)
        prev_min = None
        for i, si in enumerate(rng.random(100)):
            b.try_add(entry(float(si), f"c{i}"))
            if len(b) == 4:
                cur = b.entries[-1].key
                if prev_min is not None:
                    assert cur <= prev_min  # key ascending = SI not decreasing
                prev_min = cur

    def test_diversity_trace(self):
        # capacity 3, floor 2: eviction may not collapse to one group
        b = Beam(3, diversity_floor=2)
        b.try_add(entry(5.0, "g1:p1", group="g1"))
        b.try_add(entry(4.0, "g1:p2", group="g1"))
        b.try_add(entry(3.0, "g2:p1", group="g2"))
        # candidate from g1 beats the g2 minimum, but replacing it would drop
        # the distinct count below the floor; the target is g1's own minimum
        assert b.try_add(entry(4.5, "g1:p3", group="g1"))
        idents = [e.ident for e in b]
        assert idents == ["g1:p1", "g1:p3", "g2:p1"]

    def test_shared_group_replacement_keeps_count(self):
        b = Beam(3, diversity_floor=3)
        b.try_add(entry(5.0, "g1:p1", group="g1"))
        b.try_add(entry(4.0, "g2:p1", group="g2"))
        b.try_add(entry(3.0, "g3:p1", group="g3"))
        # same group as the current minimum: replacement allowed
        assert b.try_add(entry(3.5, "g3:p2", group="g3"))
        assert b.distinct_groups() == 3
        assert "g3:p2" in [e.ident for e in b]

    def test_new_group_forced_in_under_floor(self):
        b = Beam(3, diversity_floor=2)
        b.try_add(entry(5.0, "g1:p1", group="g1"))
        b.try_add(entry(4.0, "g1:p2", group="g1"))
        b.try_add(entry(3.0, "g1:p3", group="g1"))
        # weaker than everything, but brings a second group while under floor
        assert b.try_add(entry(0.5, "g2:p1", group="g2"))
        assert b.distinct_groups() == 2


def attr_graph(n, edges, **cols):
    columns = [AttributeColumn(name, "nominal", [str(v) for v in vals])
               for name, vals in cols.items()]
    return AttributedGraph(n, edges, columns=columns)


class TestSingleSearch:
    def test_planted_clique_found(self):
        rng = np.random.default_rng(1)
        n, k = 200, 20
        edges = {(u, v) for u in range(k) for v in range(u + 1, k)}
        edges |= {(u, v) for u in range(n) for v in range(u + 1, n)
                  if rng.random() < 0.02}
        core = ["yes"] * k + ["no"] * (n - k)
        noise = [f"v{x}" for x in rng.integers(0, 3, size=n)]
        g = attr_graph(n, sorted(edges), core=core, noise=noise)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        pats = beam_search_single(g, model, sels, SearchConfig(beam_width=10, depth=1))
        assert str(pats[0].w1) == "core=yes"
        assert pats[0].direction == 0

    def test_width_covers_all_length1(self):
        g = random_graph(13, n=30)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        pats = beam_search_single(g, model, sels,
                                  SearchConfig(beam_width=len(sels) + 5, depth=1))
        # equals exhaustive scoring of all admissible length-1 descriptions
        c = ScoreConstants()
        expect = []
        for s in sels:
            d = Description((s,))
            m = extension(d, g)
            if 2 <= m.sum() < g.n:
                expect.append(score_single(g, model, d, m, c))
        expect.sort(key=lambda p: p.sort_key())
        assert [str(p.w1) for p in pats] == [str(p.w1) for p in expect]
        assert [p.si for p in pats] == pytest.approx([p.si for p in expect])

    def test_deterministic(self):
        g = random_graph(19, n=40)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        cfg = SearchConfig(beam_width=8, depth=2)
        a = [(p.render(), p.si) for p in beam_search_single(g, model, sels, cfg)]
        b = [(p.render(), p.si) for p in beam_search_single(g, model, sels, cfg)]
        assert a == b

    def test_empty_when_extensions_tiny(self):
        g = attr_graph(4, [(0, 1), (2, 3)], b=["0", "1", "2", "3"])
        model = fit_density_prior(g, 0.5)
        sels = generate_selectors(g)
        pats = beam_search_single(g, model, sels, SearchConfig(beam_width=4, depth=2))
        assert pats == []

    def test_threads_match_serial(self):
        g = random_graph(23, n=40)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        serial = beam_search_single(g, model, sels, SearchConfig(beam_width=6, depth=2))
        threaded = beam_search_single(g, model, sels,
                                      SearchConfig(beam_width=6, depth=2, threads=4))
        assert [(p.render(), p.si) for p in serial] == [(p.render(), p.si)
                                                        for p in threaded]


class TestNestedSearch:
    def test_matches_exhaustive_on_tiny_instance(self):
        g = random_graph(101, n=25)
        model = fit_degree_prior(g, tol=1e-6)
        sels = generate_selectors(g)
        best = exhaustive_best_bi(g, model, sels, depth=2)
        got = nested_beam_search(g, model, sels,
                                 SearchConfig(x1=len(sels), x2=80, depth=2))
        assert got[0].sort_key() == best.sort_key()

    def test_result_capped_at_x1_x2(self):
        g = random_graph(3, n=30)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        pats = nested_beam_search(g, model, sels, SearchConfig(x1=3, x2=2, depth=2))
        assert len(pats) <= 6

    def test_diversity_floor_met(self):
        g = random_graph(7, n=35)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        pats = nested_beam_search(g, model, sels, SearchConfig(x1=4, x2=2, depth=2))
        distinct = len({str(p.w1) for p in pats})
        assert distinct >= min(4, len(pats))

    def test_shared_attribute_constraint(self):
        g = random_graph(43, n=30)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        cfg = SearchConfig(x1=4, x2=3, depth=2, require_shared_attribute=True)
        pats = nested_beam_search(g, model, sels, cfg)
        for p in pats:
            shared = p.w1.attributes & p.w2.attributes
            assert shared
            s1 = {s.attribute: s for s in p.w1.selectors}
            s2 = {s.attribute: s for s in p.w2.selectors}
            assert any(s1[a] != s2[a] for a in shared)

    def test_disjoint_constraint(self):
        g = random_graph(47, n=30)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        cfg = SearchConfig(x1=4, x2=3, depth=2, require_disjoint_extensions=True)
        pats = nested_beam_search(g, model, sels, cfg)
        assert pats
        for p in pats:
            assert p.overlap == 0

    def test_planted_bipartite_block(self):
        rng = np.random.default_rng(8)
        n = 150
        edges = {(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < 0.02}
        edges |= {(u, v) for u in range(30) for v in range(30, 60)
                  if rng.random() < 0.3}
        grp = ["p"] * 30 + ["q"] * 30 + ["none"] * (n - 60)
        g = attr_graph(n, sorted((min(u, v), max(u, v)) for u, v in edges), grp=grp)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        pats = nested_beam_search(g, model, sels, SearchConfig(x1=4, x2=3, depth=2))
        top = pats[0]
        assert {str(top.w1), str(top.w2)} == {"grp=p", "grp=q"}
        assert top.direction == 0

    def test_deterministic(self):
        g = random_graph(53, n=30)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        cfg = SearchConfig(x1=3, x2=2, depth=2)
        a = [(p.render(), p.si) for p in nested_beam_search(g, model, sels, cfg)]
        b = [(p.render(), p.si) for p in nested_beam_search(g, model, sels, cfg)]
        assert a == b


class TestSingleOracle:
    def test_matches_exhaustive(self):
        for seed in (201, 202, 203):
            g = random_graph(seed, n=30)
            model = fit_degree_prior(g, tol=1e-6)
            sels = generate_selectors(g)
            best = exhaustive_best_single(g, model, sels, depth=2)
            got = beam_search_single(g, model, sels,
                                     SearchConfig(beam_width=200, depth=2))
            assert got[0].sort_key() == best.sort_key()


class TestIterate:
    def test_absorbed_pattern_scores_near_zero(self):
        g = random_graph(61, n=40)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        cfg = SearchConfig(x1=3, x2=2, depth=2)
        result = iterate(g, model, sels, cfg, rounds=2, absorb=1)
        top = result.rounds[0][0]
        re = rescore(g, result.models[1], top.w1, top.w2, cfg.constants)
        assert re.si < 1e-6

    def test_round_count_and_models(self):
        g = random_graph(67, n=30)
        model = fit_degree_prior(g)
        sels = generate_selectors(g)
        cfg = SearchConfig(x1=2, x2=2, depth=1)
        result = iterate(g, model, sels, cfg, rounds=3, absorb=2)
        assert len(result.rounds) == 3
        assert len(result.models) == 4
        assert len(result.models[-1].updates) == 6

    def test_rounds_validated(self):
        g = random_graph(71, n=20)
        model = fit_degree_prior(g)
        with pytest.raises(ValueError):
            iterate(g, model, generate_selectors(g), SearchConfig(), rounds=0)


class TestBaselineSearch:
    def test_density_prefers_pairs(self):
        g = attr_graph(6, [(0, 1), (2, 3), (2, 4), (3, 4), (4, 5)],
                       t=["a", "a", "b", "b", "c", "c"],
                       u=["x", "y", "x", "y", "x", "y"])
        pats = baseline_search(g, generate_selectors(g),
                               SearchConfig(beam_width=10, depth=1), "edge_density")
        assert pats[0].value == pytest.approx(1.0)
        assert pats[0].size == 2 and pats[0].edges == 1

    def test_inverse_conductance_whole_component(self):
        # two components, one describable: its inverse conductance is +inf
        g = attr_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)],
                       blk=["1", "1", "1", "0", "0", "0"])
        pats = baseline_search(g, generate_selectors(g),
                               SearchConfig(beam_width=5, depth=1), "inv_conductance")
        assert pats[0].inter_edges == 0
        assert pats[0].value == float("inf")
