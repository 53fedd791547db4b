import os
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("EDGEPOST_CLI") or shutil.which("edgepost")
    if not path:
        pytest.skip("edgepost executable not available")
    return path
