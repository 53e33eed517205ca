import pytest

from cremona_dec.errors import DegenerateFrame
from cremona_dec.projgeom import (ProjLine, ProjPoint, ProjTransform, collinear, cross, general_position,
                                  line_through, meet, transform_from_frames)


def P(*c, F):
    return ProjPoint(c, F)


def test_line_through(Q):
    assert line_through(P(1, 0, 0, F=Q), P(0, 1, 0, F=Q)) == ProjLine((0, 0, 1), Q)
    assert line_through(P(1, 0, 0, F=Q), P(0, 0, 1, F=Q)) == ProjLine((0, 1, 0), Q)
    # oracle: cross product by hand, (1,1,1) x (1,-1,1) = (2, 0, -2)
    assert cross((1, 1, 1), (1, -1, 1)) == (2, 0, -2)
    assert line_through(P(1, 1, 1, F=Q), P(1, -1, 1, F=Q)) == ProjLine((1, 0, -1), Q)


def test_meet(Q):
    assert meet(ProjLine((1, 0, 0), Q), ProjLine((0, 1, 0), Q)) == P(0, 0, 1, F=Q)
    assert meet(ProjLine((0, 0, 1), Q), ProjLine((0, 1, 0), Q)) == P(1, 0, 0, F=Q)
    assert meet(ProjLine((1, 0, -1), Q), ProjLine((0, 1, -1), Q)) == P(1, 1, 1, F=Q)


def test_collinear(Q):
    assert collinear(P(1, 0, 0, F=Q), P(0, 1, 0, F=Q), P(1, 1, 0, F=Q))
    assert not collinear(P(1, 0, 0, F=Q), P(0, 1, 0, F=Q), P(0, 0, 1, F=Q))
    six = [P(1, 0, 0, F=Q), P(0, 1, 0, F=Q), P(0, 0, 1, F=Q), P(1, 1, 1, F=Q), P(1, 2, 3, F=Q), P(2, -1, 5, F=Q)]
    assert general_position(six)
    assert not general_position(six + [P(1, 1, 0, F=Q)])


def test_frames(Q):
    std = [P(1, 0, 0, F=Q), P(0, 1, 0, F=Q), P(0, 0, 1, F=Q), P(1, 1, 1, F=Q)]
    assert transform_from_frames(std, std).is_identity()
    swapped = [std[1], std[0], std[2], std[3]]
    T = transform_from_frames(std, swapped)
    assert T == ProjTransform([[0, 1, 0], [1, 0, 0], [0, 0, 1]], Q)
    T = transform_from_frames(std, [P(1, 0, 0, F=Q), P(0, 0, 1, F=Q), P(0, 1, 0, F=Q), P(1, 1, 1, F=Q)])
    assert T.apply(P(2, 3, 5, F=Q)) == P(2, 5, 3, F=Q)


def test_transforms(Q):
    assert ProjTransform.identity(Q).apply(P(1, 2, 3, F=Q)) == P(1, 2, 3, F=Q)
    mu2 = ProjTransform.diagonal(Q, 4, 2, 1)
    assert mu2.apply(P(1, 1, 1, F=Q)) == P(4, 2, 1, F=Q)
    assert mu2.inverse().compose(mu2).is_identity()
    with pytest.raises(DegenerateFrame):
        ProjTransform([[1, 0, 0], [0, 1, 0], [1, 1, 0]], Q)


def test_line_transform_incidence(Q):
    T = ProjTransform([[1, 2, 0], [0, 1, 3], [1, 0, 1]], Q)
    A, B = P(1, 2, 3, F=Q), P(-1, 0, 4, F=Q)
    L = line_through(A, B)
    assert T.apply_line(L) == line_through(T.apply(A), T.apply(B))
