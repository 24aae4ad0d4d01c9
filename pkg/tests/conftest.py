import pytest

from cgtopo.fixtures import write_demo_corpus


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """Demo corpus generated once per session; several suites share it."""
    dest = tmp_path_factory.mktemp("democorpus")
    write_demo_corpus(dest, seed=7)
    return dest
