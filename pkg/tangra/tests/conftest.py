import logging

import numpy as np
import pytest

from tangra.graeffe import init_jet, iterate_jet
from tangra.poly import Polynomial, write_polynomial


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def jet_at_level():
    """Jet of p after N renormalized steps, without any conformal transform."""
    def _jet_at_level(p, N):
        return iterate_jet(init_jet(p), N)
    return _jet_at_level


@pytest.fixture
def poly_from_roots():
    def _poly_from_roots(roots, leading=1.0):
        return Polynomial.from_roots(roots, leading)
    return _poly_from_roots


@pytest.fixture
def poly_file(tmp_path):
    """
    A factory writing polynomials (or raw text) into files.

    Fixtures:
       tmp_path(pytest): Directory the files are created in.
    """
    logger = logging.getLogger("poly_file")
    counter = iter(range(1_000_000))

    def _poly_file(content):
        path = tmp_path / f"poly_{next(counter)}.txt"
        with open(path, "w", encoding="utf-8") as stream:
            if isinstance(content, str):
                stream.write(content)
            else:
                write_polynomial(content, stream)
        logger.debug(f"wrote {path}")
        return str(path)
    return _poly_file
