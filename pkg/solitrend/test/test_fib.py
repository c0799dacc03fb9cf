"""Fibonacci sequences, ratio sets and the comparison tables.

Copyright 2026 The solitrend developers

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
or implied. See the License for the specific language governing
permissions and limitations under the License."""


import numpy as np
import pytest

from solitrend import fib_numbers, fib_limit_ratios, miner_ratios, retracement_ratios
from solitrend import percent_difference, nearest_ratio, table1, table2
from solitrend import table_to_csv, table_from_csv, format_table
from solitrend import ValidationError


TABULATED_DIFF1 = [0., None, 12.7, 5.7, 12.4, 9.8, 10.8]
TABULATED_DIFF2 = [0., None, None, 20., 11., 19., 16., 5.]


def test_fib_numbers():

    assert fib_numbers(9) == [0, 1, 1, 2, 3, 5, 8, 13, 21]
    assert fib_numbers(1) == [0]

    F = fib_numbers(22)
    for n in range(1, 21):
        assert F[n - 1] * F[n + 1] - F[n]**2 == (-1)**n

    with pytest.raises(ValidationError):
        fib_numbers(0)


def test_limit_ratios():

    phi = (1 + np.sqrt(5)) / 2
    r1, r2, r3 = fib_limit_ratios([1, 2, 3], 20)
    np.testing.assert_allclose(r1, 1.618034, atol=1e-5)
    np.testing.assert_allclose(r2, 2.618034, atol=1e-5)
    np.testing.assert_allclose(r3, 4.236068, atol=1e-5)

    assert fib_limit_ratios([0], 20) == [1.0]
    mirror = fib_limit_ratios([-2, -1, 0], 20)
    np.testing.assert_allclose(mirror, [0.382, 0.618, 1.0], atol=1e-3)

    for k in [1, 2, 3]:
        a, = fib_limit_ratios([k], 25)
        b, = fib_limit_ratios([k], 26)
        assert abs(a - b) < 1e-6
        np.testing.assert_allclose(a, phi**k, rtol=1e-9)

    with pytest.raises(ValidationError):
        fib_limit_ratios([-5], 3)


def test_ratio_sets():

    miner = miner_ratios()
    assert 1.62 in miner and 4.24 in miner
    assert miner == sorted(miner)
    assert retracement_ratios() == [0.382, 0.500, 0.618, 1.000]


def test_percent_difference():

    assert percent_difference(34, 36) == pytest.approx(100 * 2 / 36)
    assert percent_difference(36, 34) == percent_difference(34, 36)
    assert nearest_ratio(6., [1., 4., 9., 16.]) == (4., 100 * 2 / 6)
    with pytest.raises(ValidationError):
        percent_difference(0., 0.)


def test_table1():

    t = table1()
    assert len(t.rows) == 7
    assert t.note
    for row, expected in zip(t.rows, TABULATED_DIFF1):
        if expected is None:
            assert row.model is None and row.difference is None
        else:
            assert abs(row.difference - expected) <= 0.1 + 1e-9

    assert t.rows[3].reference == 4.24 and t.rows[3].model == 4.
    assert t.rows[3].difference == 5.7


def test_table2():

    t = table2()
    assert len(t.rows) == 8
    for row, expected in zip(t.rows, TABULATED_DIFF2):
        if expected is None:
            assert row.model is None and row.difference is None
        else:
            assert abs(row.difference - expected) <= 1.

    assert t.rows[6].difference == 16.0
    assert t.rows[7].difference == 5.6
    assert [r.model for r in t.rows if r.model is not None] == [1, 4, 9, 16, 25, 36]


def test_table_serialization():

    for t in [table1(), table2()]:
        text = table_to_csv(t)
        assert table_from_csv(text) == t

    text = format_table(table1())
    lines = text.splitlines()
    assert lines[0] == table1().title
    assert '5.7' in lines[5]
    assert ' - ' in lines[3]


if __name__ == '__main__':
    print(format_table(table1()))
    print(format_table(table2()))
