"""Frozen timestep traces of two hand-checked scenarios on the d=3 repetition window.

Both were derived by stepping the automaton rules by hand and must be
reproduced event for event by every backend.
"""

from snowflake_qec.graph import DIR_INDEX
from snowflake_qec.snowflake import SnowflakeDecoder


def merge_scenario(backend=None):
    """One new top defect next to two half-grown clusters (8 and 7 hold defects)."""
    dec = SnowflakeDecoder("repetition", 3, backend=backend)
    g, st = dec.graph, dec.state
    for a, b in [(8, 2), (8, 9), (8, 6), (8, 10)]:
        st.growth[g.edge_between(a, b)] = 1
    st.defect[[7, 8]] = True
    st.active[[7, 8]] = True
    return dec, [True, False]


def unroot_scenario(backend=None):
    """A five-node cluster rooted at the bottom-west boundary, one pointer leading down."""
    dec = SnowflakeDecoder("repetition", 3, backend=backend)
    g, st = dec.graph, dec.state
    for a, b in [(4, 10), (10, 11), (11, 9), (9, 8)]:
        st.growth[g.edge_between(a, b)] = 2
    for v, name in [(8, "E"), (9, "D"), (11, "W"), (10, "W")]:
        st.pointer[v] = DIR_INDEX[name]
    st.cid[[4, 10, 11, 9, 8]] = 4
    return dec, None


def run_traced(scenario, backend=None):
    dec, top = scenario(backend)
    dec.enable_trace()
    steps = dec.run_cycle(top)
    return dec, steps, [e.format() for e in dec.trace]


MERGE_TRACE = [
    '1 drop (2, 0, 2) active True->False',
    '1 drop (1, 0, 1) active True->False',
    '1 drop (2, 0, 1) active False->True',
    '1 drop (1, 0, 0) active False->True',
    '1 drop (1, 0, 2) defect False->True',
    '1 drop (2, 0, 2) defect True->False',
    '1 drop (1, 0, 1) defect True->False',
    '1 drop (2, 0, 1) defect False->True',
    '1 drop (1, 0, 0) defect False->True',
    '1 drop ((0, 0, 0), (1, 0, 0)) growth 0.0->0.5',
    '1 drop ((1, 0, 0), (2, 0, 0)) growth 0.0->0.5',
    '1 drop ((0, 0, 1), (1, 0, 1)) growth 0.5->0.0',
    '1 drop ((1, 0, 1), (2, 0, 1)) growth 0.5->0.0',
    '1 drop ((1, 0, 2), (1, 0, 1)) growth 0.5->0.0',
    '2 grow ((0, 0, 0), (1, 0, 0)) growth 0.5->1.0',
    '2 grow ((1, 0, 0), (2, 0, 0)) growth 0.5->1.0',
    '2 grow ((1, 0, 1), (1, 0, 0)) growth 0.5->1.0',
    '2 grow ((2, 0, 1), (2, 0, 0)) growth 0.0->0.5',
    '2 grow ((3, 0, 1), (2, 0, 1)) growth 0.0->0.5',
    '2 grow ((1, 0, 1), (2, 0, 1)) growth 0.0->0.5',
    '2 grow ((2, 0, 2), (2, 0, 1)) growth 0.0->0.5',
    '3 merging (1, 0, 2) active False->True',
    '3 merging (1, 0, 0) cid 10->4',
    '3 merging (2, 0, 0) cid 11->10',
    '3 merging (1, 0, 0) pointer C->W',
    '3 merging (2, 0, 0) pointer C->W',
    '3 merging (1, 0, 2) busy False->True',
    '3 merging (1, 0, 0) busy False->True',
    '3 merging (2, 0, 0) busy False->True',
    '4 merging (1, 0, 0) active True->False',
    '4 merging (2, 0, 0) active False->True',
    '4 merging (1, 0, 1) cid 8->4',
    '4 merging (2, 0, 0) cid 10->4',
    '4 merging (1, 0, 0) defect True->False',
    '4 merging (1, 0, 1) pointer C->D',
    '4 merging (1, 0, 2) busy True->False',
    '4 merging (1, 0, 1) busy False->True',
    '4 merging ((0, 0, 0), (1, 0, 0)) corr False->True',
    '5 merging (2, 0, 0) active True->False',
    '5 merging (1, 0, 1) busy True->False',
    '5 merging (1, 0, 0) busy True->False',
    '6 merging (2, 0, 0) busy True->False',
]

UNROOT_TRACE = [
    '1 drop (1, 0, 1) cid 4->8',
    '1 drop (2, 0, 1) cid 4->9',
    '1 drop (1, 0, 0) cid 4->out',
    '1 drop (2, 0, 0) cid 4->out',
    '1 drop (1, 0, 1) pointer E->C',
    '1 drop (2, 0, 1) pointer D->C',
    '1 drop (1, 0, 0) pointer W->E',
    '1 drop (2, 0, 0) pointer W->D',
    '1 drop ((0, 0, 0), (1, 0, 0)) growth 1.0->0.0',
    '1 drop ((2, 0, 1), (2, 0, 0)) growth 1.0->0.0',
    '1 drop ((1, 0, 1), (2, 0, 1)) growth 1.0->0.0',
    '2 grow (2, 0, 0) cid out->reset',
    '2 grow (2, 0, 0) pointer D->C',
    '3 merging (1, 0, 0) cid out->reset',
    '3 merging (2, 0, 0) cid reset->11',
    '3 merging (1, 0, 0) pointer E->C',
    '3 merging (2, 0, 0) unrooted False->True',
    '3 merging (1, 0, 0) busy False->True',
    '3 merging (2, 0, 0) busy False->True',
    '4 merging (1, 0, 0) cid reset->10',
    '4 merging (1, 0, 0) unrooted False->True',
    '4 merging (2, 0, 0) busy True->False',
    '5 merging (2, 0, 0) cid 11->10',
    '5 merging (2, 0, 0) pointer C->W',
    '5 merging (1, 0, 0) busy True->False',
    '5 merging (2, 0, 0) busy False->True',
    '6 merging (2, 0, 0) busy True->False',
]
