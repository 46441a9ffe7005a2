import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cmokb import bundled_path, load_case_study
from cmokb.model import Iri
from cmokb.namespaces import CMO


@pytest.fixture(scope="session")
def case_study():
    return load_case_study()


@pytest.fixture(scope="session")
def case_study_text():
    return bundled_path("case_study.cmo.ttl").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def profile_query_text():
    return bundled_path("queries/profile_competences.rq").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def gap_query_text():
    return bundled_path("queries/missing_competences.rq").read_text(encoding="utf-8")


def c(local: str) -> Iri:
    return Iri(CMO + local)


@pytest.fixture(scope="session")
def cmo_iri():
    return c
