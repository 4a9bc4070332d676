"""Shared pytest fixtures for library, CLI and module-entry tests."""

from __future__ import annotations

import functools
import re
from collections.abc import Callable, Iterator
from fractions import Fraction

import numpy as np
import pytest
from click.testing import CliRunner

from solspec import config as config_mod
from solspec.algebra import FiniteSupportElement
from solspec.core import GroupElement, ThetaSequence
from solspec.geometry import LengthKind, LengthSpec, enumerate_ball

ANSI_ESCAPE_PATTERN = re.compile(r"\x1B\[[0-?]*[ -/]*[@-~]")


def _remove_ansi_codes(text: str) -> str:
    """Return text stripped of ANSI escape sequences.

    Parameters
    ----------
    text:
        Raw string captured from CLI output.

    Returns
    -------
    str
        The string without ANSI escape sequences.
    """
    return ANSI_ESCAPE_PATTERN.sub("", text)


@pytest.fixture
def cli_runner() -> CliRunner:
    """Provide a fresh CliRunner per test."""
    return CliRunner()


@pytest.fixture
def strip_ansi() -> Callable[[str], str]:
    """Return a helper that strips ANSI escape sequences from a string."""

    def _strip(value: str) -> str:
        return _remove_ansi_codes(value)

    return _strip


@pytest.fixture
def isolated_config(tmp_path, monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Run from an empty directory with a fresh configuration cache."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(config_mod.MAX_ELEMENTS_ENV, raising=False)
    config_mod.clear_cache()
    yield
    config_mod.clear_cache()


@pytest.fixture
def trivial_theta() -> ThetaSequence:
    return ThetaSequence.trivial(2)


@pytest.fixture
def two_thirds_theta() -> ThetaSequence:
    """θ = (2/3, 1/3, 2/3, ...) over p = 2."""
    return ThetaSequence(Fraction(2, 3), (), (0, 1), 2)


@pytest.fixture
def base_spec() -> LengthSpec:
    return LengthSpec(LengthKind.BASE, 2)


@pytest.fixture
def sum_spec() -> LengthSpec:
    return LengthSpec(LengthKind.SUM, 2)


@functools.cache
def _sum_ball(radius: int) -> tuple[GroupElement, ...]:
    return enumerate_ball(LengthSpec(LengthKind.SUM, 2), radius).elements


@pytest.fixture
def ball_draws() -> Callable[[int, int, int], list[GroupElement]]:
    """Return ``draw(radius, count, seed)``: seeded draws from the sum ball ``B(R)`` over p = 2."""

    def _draw(radius: int, count: int, seed: int) -> list[GroupElement]:
        elements = _sum_ball(radius)
        rng = np.random.default_rng(seed)
        return [elements[i] for i in rng.integers(len(elements), size=count)]

    return _draw


@pytest.fixture
def random_element(
    ball_draws: Callable[[int, int, int], list[GroupElement]], two_thirds_theta: ThetaSequence
) -> Callable[..., FiniteSupportElement]:
    """Return ``build(radius, terms, seed, norm=1.0)``: a random element supported in ``B(R)`` with the given ℓ¹ norm."""

    def _build(radius: int, terms: int, seed: int, norm: float = 1.0) -> FiniteSupportElement:
        rng = np.random.default_rng(seed + 1)
        points = ball_draws(radius, terms, seed)
        values = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
        element = FiniteSupportElement({gamma: complex(v) for gamma, v in zip(points, values, strict=True)}, two_thirds_theta)
        return element.scale(norm / element.l1_norm())

    return _build
