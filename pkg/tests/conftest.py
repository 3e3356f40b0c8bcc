from __future__ import annotations

import numpy as np
import pytest

import synth
from scimap.correlate import citing_correlation
from scimap.eigen import sym_eig


@pytest.fixture(scope="session")
def three_blocks() -> synth.PlantedCorpus:
    return synth.three_block_corpus()


@pytest.fixture(scope="session")
def single_block() -> synth.PlantedCorpus:
    return synth.single_block_corpus()


@pytest.fixture(scope="session")
def warm_kernels() -> None:
    """Trigger JIT compilation of the numba kernels once, outside any timed block."""
    corpus = synth.three_block_corpus()
    corr = citing_correlation(corpus.matrix)
    sym_eig(corr.r[:4, :4])
    sym_eig(np.eye(3))
