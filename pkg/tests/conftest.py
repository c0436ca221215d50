import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
ALPHA_FACTS = CORPUS / "facts" / "alphas.json"


@pytest.fixture
def corpus():
    return CORPUS
