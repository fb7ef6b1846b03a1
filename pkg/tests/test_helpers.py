import math

import pytest

from src.errors import DomainError, InputError
from spectral_utils.helpers import (format_arcs, format_compact, format_multiplicities, format_scalar,
                                    group_multiplicities, parse_alpha_list, validate_alpha)


@pytest.mark.parametrize("alpha", [0, 0.0, "0.5", 0.999])
def test_validate_alpha_accepts(alpha):
    assert validate_alpha(alpha) == float(alpha)


@pytest.mark.parametrize("alpha", [-0.1, 1, 1.5, "abc", None, float("nan")])
def test_validate_alpha_rejects(alpha):
    with pytest.raises(DomainError):
        validate_alpha(alpha)


def test_parse_alpha_list_sorts_and_dedupes():
    assert parse_alpha_list("0.5, 0, 0.25,0.5") == [0.0, 0.25, 0.5]


def test_parse_alpha_list_empty():
    with pytest.raises(InputError):
        parse_alpha_list(" , ")


def test_format_scalar():
    assert format_scalar(4.0) == "4.00000000000"
    assert format_scalar(3.9999999999999996) == "4.00000000000"
    assert format_scalar(0.0) == "0"
    assert format_scalar(math.sqrt(2)) == "1.41421356237"


def test_format_compact():
    assert format_compact(math.sqrt(0.5)) == "0.707106781187"
    assert format_compact(1.0) == "1"


def test_group_multiplicities():
    groups = group_multiplicities([1.0, 1.0 - 1e-12, 0.5, 1e-15, 0.0])
    assert [count for _, count in groups] == [2, 1, 2]


def test_format_multiplicities_shows_tiny_values_as_zero():
    assert format_multiplicities([(math.sqrt(0.5), 1), (3e-9, 1)]) == "0.707106781187[1], 0[1]"


def test_format_arcs():
    assert format_arcs([(0, 1), (1, 2)]) == "0-1;1-2"
    assert format_arcs([]) == ""
