from __future__ import annotations

import pytest

from gadgetbots.boxes import (
    Certificate, CertificateMismatch, build_directed_tunnel_sim, build_l2t_sim, identity_box,
    l2t_certificate, verify_box, without_connection,
)
from gadgetbots.library import locking_2_toggle, standard_library


def test_identity_boxes_pass():
    for g in standard_library().values():
        for s in g.states:
            rep = verify_box(identity_box(g, s))
            assert rep.ok, (g.name, s, rep.violations)
            assert rep.crossing_lengths() <= {1}


def test_directed_sim_two_traversals():
    rep = verify_box(build_directed_tunnel_sim(locking_2_toggle(), l2t_certificate()), expected_length=2)
    assert rep.ok and rep.crossing_lengths() == {2}


def test_l2t_sim_nine_traversals():
    rep = verify_box(build_l2t_sim(locking_2_toggle(), l2t_certificate()), expected_length=9)
    assert rep.ok, rep.violations
    assert rep.crossing_lengths() == {9}
    assert all(k % 2 == 0 for k in rep.stall_lengths())
    assert rep.box_states == 3


def test_every_deleted_wire_fails():
    box = build_l2t_sim(locking_2_toggle(), l2t_certificate())
    for k in range(len(box.system.connections)):
        assert not verify_box(without_connection(box, k), expected_length=9).ok


def test_closed_closed_certificate_rejected():
    with pytest.raises(CertificateMismatch):
        build_l2t_sim(locking_2_toggle(), Certificate(1, 2, 3, ("C", "D"), ("A", "B")))
    with pytest.raises(CertificateMismatch):
        build_directed_tunnel_sim(locking_2_toggle(), Certificate(1, 2, 1, ("B", "A"), ("C", "D")))
