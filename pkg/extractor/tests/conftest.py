import pytest

from irispad_extract.fixtures import write_fixture_set

FIXTURE_SEED = 1234


@pytest.fixture(scope="session")
def fixture_set(tmp_path_factory):
    """10 synthetic images of mixed sizes/modes plus their manifest."""
    out_dir = tmp_path_factory.mktemp("images")
    manifest = write_fixture_set(out_dir, count=10, seed=FIXTURE_SEED)
    return out_dir, manifest
