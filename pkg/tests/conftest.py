from __future__ import annotations

import pytest

from crate2bib import ClientConfig, DiskCache
from crate2bib.repo import Host
import crate2bib.repo

from helpers import TEST_USER_AGENT, StubServer


@pytest.fixture(autouse=True)
def isolated_default_cache(tmp_path, monkeypatch):
    """Keep tests that fall back to the default cache dir out of $HOME."""
    monkeypatch.setenv("CRATE2BIB_CACHE_DIR", str(tmp_path / "default-cache"))


@pytest.fixture
def stub():
    server = StubServer()
    yield server
    server.close()


@pytest.fixture
def stub_config(stub):
    """Client config pointed at the stub, throttling off for speed."""
    return ClientConfig(
        base_url=stub.base_url,
        user_agent=TEST_USER_AGENT,
        min_request_interval_ms=0,
        timeout_ms=5000,
    )


@pytest.fixture
def disk_cache(tmp_path):
    return DiskCache(tmp_path / "cache")


@pytest.fixture
def raw_urls_on_stub(stub, monkeypatch):
    """Point the raw-file URL templates at the stub; returns path builders."""
    monkeypatch.setitem(
        crate2bib.repo.RAW_URL_TEMPLATES,
        Host.GITHUB,
        stub.base_url + "/raw/github/{owner}/{repo}/{branch}/CITATION.cff",
    )
    monkeypatch.setitem(
        crate2bib.repo.RAW_URL_TEMPLATES,
        Host.CODEBERG,
        stub.base_url + "/raw/codeberg/{owner}/{repo}/{branch}/CITATION.cff",
    )

    class Paths:
        @staticmethod
        def github(owner: str, repo: str, branch: str) -> str:
            return f"/raw/github/{owner}/{repo}/{branch}/CITATION.cff"

        @staticmethod
        def codeberg(owner: str, repo: str, branch: str) -> str:
            return f"/raw/codeberg/{owner}/{repo}/{branch}/CITATION.cff"

    return Paths
