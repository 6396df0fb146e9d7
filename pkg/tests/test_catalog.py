"""The worked-example catalog: every entry verifies against its recorded facts."""

import pytest

from pdce.catalog import (
    DEFAULT_N,
    catalog_names,
    example_instance,
    verify_example,
)
from pdce.errors import UnknownExample

ALL_NAMES = [
    "affine",
    "shkredov",
    "square-diag",
    "almost-lin-ind-3",
    "floor3",
    "product-extra",
    "conze-lesigne",
    "zero-sum-li",
]


class TestNames:
    def test_catalog_lists_every_example(self):
        names = catalog_names()
        for name in ALL_NAMES:
            assert name in names
        assert "not-shkredov" in names  # alias

    def test_unknown_example_raises(self):
        with pytest.raises(UnknownExample) as exc:
            verify_example("no-such-thing")
        assert exc.value.field == "example"

    def test_bad_parameter_raises(self):
        with pytest.raises(UnknownExample) as exc:
            verify_example("affine", 0)
        assert exc.value.field == "N"


class TestInstances:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_instances_build_at_defaults(self, name):
        inst = example_instance(name)
        assert inst.group.order >= 2
        assert len(inst.subgroups) >= 1

    def test_instances_are_fresh_objects(self):
        a = example_instance("square-diag")
        b = example_instance("square-diag")
        assert a is not b
        assert a.group.orders == b.group.orders


class TestVerification:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_default_parameters_pass(self, name):
        report = verify_example(name)
        assert report.passed, report.describe()
        assert report.n == DEFAULT_N[name]
        assert report.checks, "a verification must record at least one check"

    def test_alias_matches_primary_name(self):
        a = verify_example("square-diag", 3)
        b = verify_example("not-shkredov", 3)
        assert b.passed
        assert b.example == "square-diag"
        assert [c.label for c in a.checks] == [c.label for c in b.checks]

    @pytest.mark.parametrize(
        "name,n",
        [
            ("shkredov", 4),
            ("square-diag", 3),
            ("conze-lesigne", 3),
            ("zero-sum-li", 3),
            ("affine", 6),
        ],
    )
    def test_larger_parameters_pass(self, name, n):
        report = verify_example(name, n)
        assert report.passed, report.describe()
        assert report.n == n

    def test_report_serialization(self):
        report = verify_example("square-diag")
        data = report.to_json()
        assert data["example"] == "square-diag"
        assert data["passed"] is True
        assert isinstance(data["checks"], list) and data["checks"]
        for row in data["checks"]:
            assert set(row) >= {"label", "expected", "computed", "ok"}

    def test_describe_mentions_every_check(self):
        report = verify_example("floor3")
        text = report.describe()
        assert text.startswith("PASS")
        for check in report.checks:
            assert check.label in text
